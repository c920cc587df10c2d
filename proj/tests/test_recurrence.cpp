#include <doctest.h>

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "opinion/dynamics.hpp"
#include "opinion/recurrence.hpp"

using namespace opinion;

namespace {

const ModelSpec& low8() {
  static ModelSpec s(8, 3, 3, 1, Rational(2));
  return s;
}

SpinConfiguration random_config(const ModelSpec& spec, std::mt19937_64& rng) {
  SpinConfiguration c(spec, -1);
  for (int i = 0; i < c.size(); ++i)
    if (rng() & 1) c.flip(i);
  return c;
}

bool in_core(const ModelSpec& spec, const SpinConfiguration& c) {
  for (const SpinConfiguration& s : recurrent_core(spec))
    if (s == c) return true;
  return false;
}

// True if every column is constant, i.e. the state is a union of full
// vertical bands (the shape of every band-family trap).
bool full_columns(const ModelSpec& spec, const SpinConfiguration& c) {
  for (int col = 0; col < spec.N; ++col)
    for (int r = 1; r < spec.N; ++r)
      if (c.spin(r * spec.N + col) != c.spin(col)) return false;
  return true;
}

// Every path elevation must match the recomputed energy of its state, and
// consecutive states must differ in exactly one site.
void check_certificate(const ModelSpec& spec, const ReductionCertificate& cert) {
  const PathRecord& p = cert.path;
  REQUIRE(p.states.size() == p.elevations.size());
  Rational peak = p.elevations.front();
  for (std::size_t i = 0; i < p.states.size(); ++i) {
    CHECK(p.states[i].hamiltonian() == p.elevations[i]);
    peak = std::max(peak, p.elevations[i]);
    if (i == 0) continue;
    int diff = 0;
    for (int j = 0; j < p.states[i].size(); ++j)
      diff += p.states[i].spin(j) != p.states[i - 1].spin(j);
    CHECK(diff == 1);
  }
  CHECK(p.max_elevation == peak);
  CHECK(cert.max_climb == peak - p.elevations.front());
  CHECK(cert.max_climb <= Rational(2) * (spec.alpha - Rational(1)));
}

}  // namespace

TEST_CASE("classification follows the case order") {
  const ModelSpec& spec = low8();

  CHECK(classify(spec, SpinConfiguration(spec, -1)) ==
        ReductionClass::StableOrMeta);
  CHECK(classify(spec, SpinConfiguration(spec, +1)) ==
        ReductionClass::StableOrMeta);
  CHECK(classify(spec, sigma_A(spec, 0, 0)) == ReductionClass::StableOrMeta);
  CHECK(classify(spec, sigma_A(spec, 1, 1)) == ReductionClass::StableOrMeta);

  // An L-shaped plus cluster in A has a concave corner.
  SpinConfiguration ell(spec, -1);
  ell.set_spin(0 * spec.N + 0, +1);
  ell.set_spin(1 * spec.N + 0, +1);
  ell.set_spin(1 * spec.N + 1, +1);
  CHECK(classify(spec, ell) == ReductionClass::X1);

  // A 2x2 plus block in A is convex.
  SpinConfiguration block(spec, -1);
  for (int r = 0; r < 2; ++r)
    for (int col = 0; col < 2; ++col) block.set_spin(r * spec.N + col, +1);
  CHECK(classify(spec, block) == ReductionClass::X2);

  // A clear: the same shapes made of minus spins inside B.
  SpinConfiguration bell(spec, +1);
  for (int i = 0; i < spec.N * spec.N; ++i)
    if (spec.region_of_col(i % spec.N) != RegionLabel::B) bell.set_spin(i, -1);
  SpinConfiguration brect = bell;
  bell.set_spin(0 * spec.N + (spec.n + spec.k), -1);
  bell.set_spin(1 * spec.N + (spec.n + spec.k), -1);
  bell.set_spin(1 * spec.N + (spec.n + spec.k + 1), -1);
  CHECK(classify(spec, bell) == ReductionClass::X3);
  brect.set_spin(0 * spec.N + (spec.n + spec.k), -1);
  brect.set_spin(0 * spec.N + (spec.n + spec.k + 1), -1);
  CHECK(classify(spec, brect) == ReductionClass::X4);

  // A = -1, B = +1, S = -1 has no cluster meeting A or breaking B.
  SpinConfiguration striped(spec, -1);
  for (int i = 0; i < spec.N * spec.N; ++i)
    if (spec.region_of_col(i % spec.N) == RegionLabel::B) striped.set_spin(i, +1);
  CHECK(classify(spec, striped) == ReductionClass::X7);

  // A and B clear: plus clusters confined to a strip need width >= 2 to
  // show a concave corner.
  ModelSpec wide(10, 3, 3, 2, Rational(2));
  SpinConfiguration sell(wide, -1);
  for (int i = 0; i < wide.N * wide.N; ++i)
    if (wide.region_of_col(i % wide.N) == RegionLabel::B) sell.set_spin(i, +1);
  SpinConfiguration srect = sell;
  sell.set_spin(0 * wide.N + wide.n, +1);
  sell.set_spin(1 * wide.N + wide.n, +1);
  sell.set_spin(1 * wide.N + wide.n + 1, +1);
  CHECK(classify(wide, sell) == ReductionClass::X5);

  srect.set_spin(0 * wide.N + wide.n, +1);
  srect.set_spin(1 * wide.N + wide.n, +1);
  CHECK(classify(wide, srect) == ReductionClass::X6);

  ModelSpec unsupported(8, 3, 3, 1, Rational(1), false);
  CHECK_THROWS_AS(classify(unsupported, SpinConfiguration(unsupported, -1)),
                  std::domain_error);
  CHECK_THROWS_AS(reduce(unsupported, SpinConfiguration(unsupported, -1)),
                  std::domain_error);
}

TEST_CASE("reduce lowers the energy within the climb bound") {
  std::vector<ModelSpec> specs = {
      ModelSpec(8, 3, 3, 1, Rational(2)),   ModelSpec(8, 3, 3, 1, Rational(3)),
      ModelSpec(10, 3, 5, 1, Rational(3)),  ModelSpec(8, 3, 3, 1, Rational(4)),
      ModelSpec(10, 3, 5, 1, Rational(6)),  ModelSpec(8, 3, 3, 1, Rational(6)),
      ModelSpec(8, 3, 3, 1, Rational(10))};
  for (const ModelSpec& spec : specs) {
    std::mt19937_64 rng(2026);
    for (int t = 0; t < 10000; ++t) {
      SpinConfiguration c = random_config(spec, rng);
      bool downhill = false;
      for (int i = 0; i < c.size() && !downhill; ++i)
        downhill = c.delta_h(i) < Rational(0);
      ReductionCertificate cert = reduce(spec, c);
      check_certificate(spec, cert);
      if (cert.class_tag == ReductionClass::StableOrMeta) {
        CHECK(in_core(spec, c));
      } else {
        CHECK(cert.path.elevations.back() < cert.path.elevations.front());
        CHECK(cert.path.states.front() == c);
        // When a strictly downhill flip exists the round must be free.
        if (downhill) CHECK(cert.max_climb == Rational(0));
      }
    }
  }
}

TEST_CASE("reduce is deterministic") {
  const ModelSpec& spec = low8();
  std::mt19937_64 rng(7);
  SpinConfiguration c = random_config(spec, rng);
  ReductionCertificate a = reduce(spec, c);
  ReductionCertificate b = reduce(spec, c);
  REQUIRE(a.path.states.size() == b.path.states.size());
  for (std::size_t i = 0; i < a.path.states.size(); ++i)
    CHECK(a.path.states[i] == b.path.states[i]);
}

TEST_CASE("iterated reduction reaches the recurrent core below the crossover") {
  for (const ModelSpec& spec :
       {ModelSpec(8, 3, 3, 1, Rational(2)), ModelSpec(8, 3, 3, 1, Rational(3))}) {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 200; ++t) {
      SpinConfiguration c = random_config(spec, rng);
      ReductionRun run = reduce_to_core(spec, c);
      CHECK(in_core(spec, run.final_config));
      CHECK((long long)run.rounds.size() <= (long long)spec.N * spec.N);
    }
  }
}

TEST_CASE("the all-plus state is the lone trap in the strict critical regime") {
  ModelSpec spec(10, 3, 5, 1, Rational(3));
  // +1 is not metastable when n < m at alpha = n, and no single-flip path
  // leaves it within a 2(alpha - 1) climb.
  CHECK_THROWS_AS(reduce(spec, SpinConfiguration(spec, +1)),
                  ReductionBoundViolation);
  std::mt19937_64 rng(2026);
  for (int t = 0; t < 200; ++t) {
    SpinConfiguration c = random_config(spec, rng);
    try {
      ReductionRun run = reduce_to_core(spec, c);
      CHECK(in_core(spec, run.final_config));
    } catch (const ReductionBoundViolation& e) {
      CHECK(e.certificate.path.states.front() ==
            SpinConfiguration(spec, +1));
    }
  }
}

TEST_CASE("band-family states trap the reduction above the crossover") {
  for (const ModelSpec& spec :
       {ModelSpec(8, 3, 3, 1, Rational(4)), ModelSpec(8, 3, 3, 1, Rational(6)),
        ModelSpec(8, 3, 3, 1, Rational(10))}) {
    // The first flip out of a full-band state already costs 2 alpha, which
    // exceeds the 2(alpha - 1) allowance, so sigma_A-style states are
    // genuine dead ends once alpha > n.
    CHECK_THROWS_AS(reduce(spec, sigma_A(spec, 0, 0)), ReductionBoundViolation);
    std::mt19937_64 rng(2026);
    int trapped = 0, settled = 0;
    for (int t = 0; t < 200; ++t) {
      SpinConfiguration c = random_config(spec, rng);
      try {
        ReductionRun run = reduce_to_core(spec, c);
        ++settled;
        CHECK(in_core(spec, run.final_config));
      } catch (const ReductionBoundViolation& e) {
        ++trapped;
        const SpinConfiguration& at = e.certificate.path.states.front();
        CHECK(full_columns(spec, at));
        // The stuck state always carries the full plus A band.
        for (int col = 0; col < spec.n; ++col) CHECK(at.spin(col) > 0);
      }
    }
    CHECK(settled > 0);
    CHECK(trapped > 0);
  }
}

TEST_CASE("reduction reports serialize with their class and climb") {
  const ModelSpec& spec = low8();
  std::mt19937_64 rng(5);
  SpinConfiguration c = random_config(spec, rng);
  ReductionCertificate cert = reduce(spec, c);
  nlohmann::json j = nlohmann::json::parse(cert.to_json());
  CHECK(j["class"] == to_string(cert.class_tag));
  CHECK(j["steps"] == cert.path.states.size() - 1);

  ReductionRun run = reduce_to_core(spec, c);
  nlohmann::json r = nlohmann::json::parse(run.to_json());
  CHECK(r["rounds"] == run.rounds.size());
  CHECK(r["classes"].size() == run.rounds.size());
}
