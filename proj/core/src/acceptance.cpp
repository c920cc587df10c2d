#include "opinion/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <sstream>
#include <unordered_set>

#include "opinion/dynamics.hpp"
#include "opinion/landscape.hpp"
#include "opinion/paths.hpp"
#include "opinion/polyomino.hpp"
#include "opinion/recurrence.hpp"

namespace opinion {
namespace {

struct Inst {
  int N, n, m, k;
  long long a;
};

// Four instances per coupling regime; all six regimes covered.
const std::vector<Inst> kGrid = {
    // low
    {8, 3, 3, 1, 2},
    {12, 3, 5, 2, 2},
    {14, 5, 5, 2, 3},
    {16, 5, 7, 2, 4},
    // critical, equal widths
    {8, 3, 3, 1, 3},
    {12, 4, 4, 2, 4},
    {14, 5, 5, 2, 5},
    {12, 3, 3, 3, 3},
    // critical, strict
    {12, 3, 5, 2, 3},
    {14, 3, 5, 3, 3},
    {16, 5, 7, 2, 5},
    {14, 3, 7, 2, 3},
    // mid
    {12, 3, 5, 2, 6},
    {14, 3, 5, 3, 6},
    {14, 4, 4, 3, 5},
    {16, 3, 7, 3, 8},
    // high
    {12, 3, 5, 2, 9},
    {14, 3, 5, 3, 11},
    {12, 4, 4, 2, 8},
    {14, 4, 4, 3, 10},
    // very high
    {12, 3, 5, 2, 19},
    {14, 3, 5, 3, 18},
    {12, 4, 4, 2, 17},
    {16, 6, 6, 2, 20},
};

ModelSpec make(const Inst& in) {
  return ModelSpec(in.N, in.n, in.m, in.k, Rational(in.a));
}

SpinConfiguration random_config(const ModelSpec& spec, CounterRng& rng) {
  SpinConfiguration c(spec, -1);
  for (int i = 0; i < c.size(); ++i)
    if (rng.next_below(2)) c.flip(i);
  return c;
}

const ModelSpec& desk_spec() {
  static ModelSpec s(8, 3, 3, 1, Rational(2));
  return s;
}

// The small square used for full-space enumeration; no regime assumption
// holds at this size, so families and reductions are out of scope here.
ModelSpec toy_spec(const Rational& alpha) {
  return ModelSpec(4, 1, 1, 1, alpha, false);
}

AcceptanceCheck check_a1(std::uint64_t seed) {
  AcceptanceCheck c{"A1", "exact energy identities"};
  long long mismatches = 0, configs = 0, formula_bad = 0;
  for (std::size_t si = 0; si < kGrid.size(); ++si) {
    ModelSpec s = make(kGrid[si]);
    CounterRng rng = CounterRng::keyed(seed, si);
    for (int t = 0; t < 10000; ++t) {
      SpinConfiguration x = random_config(s, rng);
      ++configs;
      if (x.hamiltonian() != x.hamiltonian_direct()) ++mismatches;
    }
    // Interface-shift family: one energy for every (l, p).
    Rational shared = Rational(-s.N * (s.n + s.m)) +
                      s.alpha * Rational(2 * s.N) -
                      s.alpha * Rational(s.N * s.N);
    for (int l = 0; l <= s.k; ++l)
      for (int p = 0; p <= s.k; ++p)
        if (sigma_A(s, l, p).hamiltonian() != shared) ++formula_bad;
    // Column-droplet energies relative to the adjacent full-column state.
    Rational hA = sigma_A(s, 0, 0).hamiltonian();
    Rational hAkk = sigma_A(s, s.k, s.k).hamiltonian();
    for (int t = 1; t <= s.N; ++t) {
      Rational ind = t != s.N ? Rational(1) : Rational(0);
      for (int col = 1; col < s.n; ++col) {
        Rational want = Rational(2 * (s.N * (s.n - col) - t)) +
                        Rational(2) * s.alpha * ind;
        if (column_config(s, DropletRegion::A, col, t).hamiltonian() - hA !=
            want)
          ++formula_bad;
      }
      for (int col = 1; col < s.m; ++col) {
        Rational want = Rational(2 * (s.N * (s.m - col) - t)) +
                        Rational(2) * s.alpha * ind;
        if (column_config(s, DropletRegion::B, col, t).hamiltonian() - hAkk !=
            want)
          ++formula_bad;
      }
    }
  }
  c.passed = mismatches == 0 && formula_bad == 0;
  std::ostringstream os;
  os << configs << " random configs over " << kGrid.size()
     << " specs, field/contour mismatches " << mismatches
     << ", closed-form misses " << formula_bad;
  c.detail = os.str();
  return c;
}

AcceptanceCheck check_a2(std::uint64_t) {
  AcceptanceCheck c{"A2", "path maxima vs printed closed forms"};
  long long exact_bad = 0, checked = 0;
  bool side_shift_seen = false;
  Rational side_shift_value{0};
  for (const Inst& in : kGrid) {
    ModelSpec s = make(in);
    long long a = in.a;
    // Forms that are exact as printed.
    std::vector<PathName> exact = {PathName::WPrime};
    if (a <= s.m) exact.push_back(PathName::TildeW1);
    if (a > s.m) exact.push_back(PathName::TildeW2);
    if (Rational(2) <= s.alpha && s.alpha <= Rational(s.n)) {
      exact.push_back(PathName::BarStar1);
      if (s.m == s.n) exact.push_back(PathName::BarStar3);
    }
    if (a >= s.m + 1) exact.push_back(PathName::Star1);
    for (PathName nm : exact) {
      ++checked;
      if (path_formula_discrepancy(s, nm) != Rational(0)) ++exact_bad;
    }
    // The minus-side forms reuse the B-side printed value; with n < m the
    // computed maximum undershoots it by exactly 2N(m - n).
    if (s.n < s.m) {
      Rational d = path_formula_discrepancy(s, PathName::TildeW6);
      if (d == Rational(-2 * s.N * (s.m - s.n))) {
        side_shift_seen = true;
        side_shift_value = d;
      } else {
        ++exact_bad;
      }
    }
  }
  c.passed = exact_bad == 0 && side_shift_seen;
  std::ostringstream os;
  os << checked << " exact forms, misses " << exact_bad
     << "; n<m side shift detected: " << (side_shift_seen ? "yes" : "no")
     << " (value " << to_string(side_shift_value) << ")";
  c.detail = os.str();
  return c;
}

AcceptanceCheck check_a3(std::uint64_t) {
  AcceptanceCheck c{"A3", "isoperimetric minimizers by enumeration"};
  long long shapes = 0, off_class = 0;
  for (int N : {4, 6, 8}) {
    for (int area = 1; area <= 12 && area <= N * N; ++area) {
      for (bool winding : {false, true}) {
        if (winding && area < N) continue;
        // Past (N-1)^2 cells every quasi-square-plus-protuberance wraps the
        // torus (N = 4, areas 10-12), so the non-winding classification has
        // no representative there; the minimizers are irregular blobs.
        if (!winding && area > (N - 1) * (N - 1)) continue;
        MinimalPerimeterResult res = minimal_perimeter_shapes(area, N, winding);
        for (const ShapeClass& cls : res.classes) {
          ++shapes;
          ShapeClass::Kind want =
              winding ? ShapeClass::StripProt : ShapeClass::QuasiSquareProt;
          if (cls.kind != want) ++off_class;
        }
      }
    }
  }
  c.passed = shapes > 0 && off_class == 0;
  std::ostringstream os;
  os << shapes << " minimizers over N in {4,6,8}, areas <= 12; off-class "
     << off_class;
  c.detail = os.str();
  return c;
}

AcceptanceCheck check_a4(std::uint64_t seed) {
  AcceptanceCheck c{"A4", "brute-force oracle equivalence + spectral gap"};
  // Union-find sweep against the threshold-search oracle on random pairs.
  ModelSpec flat = toy_spec(Rational(1));
  SublevelGraph g = SublevelGraph::full_space(flat);
  CounterRng rng = CounterRng::keyed(seed, 41);
  int pair_bad = 0;
  for (int t = 0; t < 100; ++t) {
    std::size_t i = rng.next_below(static_cast<int>(g.size()));
    std::size_t j = rng.next_below(static_cast<int>(g.size()));
    if (g.communication_height(i, j) != g.communication_height_oracle(i, j))
      ++pair_bad;
  }
  // Low-temperature gap decay against the deepest non-reference barrier.
  ModelSpec tilted = toy_spec(Rational(6, 5));
  Rational gamma = landscape_report(tilted).gamma_m;
  double beta = 6.0;
  SpectralReport sp = spectral_gap(tilted, beta);
  double slope = -std::log(sp.gap) / beta;
  double target = static_cast<double>(gamma.numerator()) /
                  static_cast<double>(gamma.denominator());
  double rel = std::fabs(slope / target - 1.0);
  c.passed = pair_bad == 0 && rel <= 0.10;
  std::ostringstream os;
  os << "100 pairs, sweep/oracle mismatches " << pair_bad
     << "; -log(gap)/beta = " << slope << " vs " << target << " (rel " << rel
     << ", residual " << sp.method_residual << ")";
  c.detail = os.str();
  return c;
}

AcceptanceCheck check_a5(std::uint64_t seed) {
  AcceptanceCheck c{"A5", "Arrhenius slope of the escape time"};
  const ModelSpec& s = desk_spec();
  ArrheniusFit fit = arrhenius_slope(s, homogeneous(s, -1), stable_states(s),
                                     {0.7, 0.85, 1.0}, 200, seed);
  c.passed = fit.slope >= 8.5 && fit.slope <= 11.5;
  std::ostringstream os;
  os << "slope " << fit.slope << " (se " << fit.std_error << ", capped-score "
     << fit.slope_lower << "), target [8.5, 11.5]; censored";
  for (const BetaPoint& p : fit.points)
    os << " " << p.censored << "/" << p.replicas << "@" << p.beta;
  c.detail = os.str();
  return c;
}

AcceptanceCheck check_a6(std::uint64_t seed) {
  AcceptanceCheck c{"A6", "exponential law of the scaled escape time"};
  const ModelSpec& s = desk_spec();
  SpinConfiguration start = homogeneous(s, -1);
  std::vector<SpinConfiguration> targets = stable_states(s);
  RunOptions opt;
  opt.seed = seed;
  // The default cap censors the tail (~25% at this beta) and a truncated
  // sample is visibly sub-exponential; the law is about the full time.
  opt.step_cap = 1000 * default_step_cap(s, start, 1.0);
  std::vector<long long> samples;
  std::uint64_t stream = 0;
  while (samples.size() < 200 && stream < 2000) {
    opt.stream = stream++;
    HittingTimeSample smp = run_until_hit(s, start, targets, 1.0, opt);
    if (!smp.censored) samples.push_back(smp.steps);
  }
  KsResult ks = exponential_law_test(samples, 0.10);
  c.passed = samples.size() == 200 && ks.pass;
  std::ostringstream os;
  os << samples.size() << " uncensored samples from " << stream
     << " replicas; KS distance " << ks.statistic << " < " << ks.threshold
     << ": " << (ks.pass ? "yes" : "no");
  c.detail = os.str();
  return c;
}

AcceptanceCheck check_a7(std::uint64_t seed) {
  AcceptanceCheck c{"A7", "gate attribution of successful transitions"};
  const ModelSpec& s = desk_spec();
  std::vector<SpinConfiguration> targets = stable_states(s);
  std::ostringstream os;
  bool ok = true;
  struct Side {
    const char* label;
    int sign;
  };
  for (Side side : {Side{"GA", -1}, Side{"GB", +1}}) {
    GateStatistics st = gate_crossing_statistics(
        s, homogeneous(s, side.sign), targets, 1.2, 200, seed);
    int tagged = 0;
    auto it = st.counts.find(side.label);
    if (it != st.counts.end()) tagged = it->second;
    double frac =
        st.transitions > 0 ? static_cast<double>(tagged) / st.transitions : 0;
    ok = ok && st.transitions >= 100 && frac >= 0.90;
    os << side.label << ": " << tagged << "/" << st.transitions << " ("
       << frac << ", censored " << st.censored << ")  ";
  }
  c.passed = ok;
  c.detail = os.str();
  return c;
}

AcceptanceCheck check_a8(std::uint64_t seed) {
  AcceptanceCheck c{"A8", "recurrence to the stable/metastable families"};
  const ModelSpec& s = desk_spec();
  RecurrenceProbeResult probe = recurrence_probe(s, 1.0, 100, 0.5, seed);
  // The same starts must also reduce deterministically within the climb
  // allowance 2(alpha - 1).
  Rational allowance = Rational(2) * (s.alpha - Rational(1));
  Rational worst{0};
  int reduce_bad = 0;
  CounterRng rng = CounterRng::keyed(seed, 8);
  for (int t = 0; t < 100; ++t) {
    SpinConfiguration x = random_config(s, rng);
    try {
      ReductionRun run = reduce_to_core(s, x);
      for (const ReductionCertificate& cert : run.rounds) {
        worst = std::max(worst, cert.max_climb);
        if (cert.max_climb > allowance) ++reduce_bad;
      }
    } catch (const ReductionBoundViolation&) {
      ++reduce_bad;
    }
  }
  c.passed = probe.fraction >= 0.99 && reduce_bad == 0;
  std::ostringstream os;
  os << probe.hits << "/" << probe.samples << " within budget "
     << probe.budget << " (CI " << probe.ci_low << "-" << probe.ci_high
     << "); certificate climbs <= " << to_string(allowance) << ": "
     << (reduce_bad == 0 ? "yes" : "no") << " (max "
     << to_string(worst) << ")";
  c.detail = os.str();
  return c;
}

AcceptanceCheck check_a9(std::uint64_t) {
  AcceptanceCheck c{"A9", "gate removal disconnects the saddle sublevel set"};
  const ModelSpec& s = desk_spec();
  // Connectivity with the gate present is witnessed by the reference path:
  // it joins -1 to the stable family without ever exceeding the saddle.
  PathRecord ref = build_reference_path(s, PathName::BarStar2);
  long long level = energy_key_of_mask(s, ref.states.back().to_mask());
  for (const SpinConfiguration& x : ref.states)
    level = std::max(level, energy_key_of_mask(s, x.to_mask()));
  bool witness = ref.max_elevation == gamma_star_height(s);
  // Disconnection: breadth-first search of the component of -1 inside
  // {H <= saddle} with the saddle-level gate states deleted must exhaust
  // without touching any stable state. States above the saddle cannot help a
  // crossing, so this is the full claim; enumerating a 2 alpha window above
  // the saddle instead is intractable at this size (>> 10^7 states).
  std::unordered_set<std::uint64_t> gate;
  for (const SpinConfiguration& x : gate_GA(s)) gate.insert(x.to_mask());
  std::unordered_set<std::uint64_t> stable;
  for (const SpinConfiguration& x : stable_states(s)) stable.insert(x.to_mask());
  std::unordered_set<std::uint64_t> seen;
  std::deque<std::uint64_t> queue;
  std::uint64_t start = homogeneous(s, -1).to_mask();
  seen.insert(start);
  queue.push_back(start);
  bool hit_stable = false;
  const std::size_t cap = std::size_t{1} << 24;
  while (!queue.empty() && seen.size() < cap) {
    std::uint64_t m = queue.front();
    queue.pop_front();
    SpinConfiguration x = SpinConfiguration::from_mask(s, m);
    for (int i = 0; i < x.size(); ++i) {
      long long nk = x.energy_key_after_flip(i);
      if (nk > level) continue;
      std::uint64_t nm = m ^ (std::uint64_t{1} << i);
      if (nk == level && gate.count(nm)) continue;
      if (seen.insert(nm).second) {
        if (stable.count(nm)) hit_stable = true;
        queue.push_back(nm);
      }
    }
  }
  bool exhausted = queue.empty();
  c.passed = witness && exhausted && !hit_stable;
  std::ostringstream os;
  os << "path saddle equals the closed-form height: "
     << (witness ? "yes" : "no") << "; gate-removed component of -1 has "
     << seen.size() << " states, stable family reached: "
     << (hit_stable ? "yes" : "no");
  c.detail = os.str();
  return c;
}

}  // namespace

std::vector<AcceptanceCheck> run_acceptance_suite(const AcceptanceOptions& opt) {
  using Runner = AcceptanceCheck (*)(std::uint64_t);
  const std::vector<std::pair<const char*, Runner>> runners = {
      {"A1", check_a1}, {"A2", check_a2}, {"A3", check_a3},
      {"A4", check_a4}, {"A5", check_a5}, {"A6", check_a6},
      {"A7", check_a7}, {"A8", check_a8}, {"A9", check_a9}};
  std::vector<AcceptanceCheck> out;
  for (const auto& [id, r] : runners) {
    if (!opt.only.empty() &&
        std::find(opt.only.begin(), opt.only.end(), id) == opt.only.end())
      continue;
    auto t0 = std::chrono::steady_clock::now();
    AcceptanceCheck c = r(opt.seed);
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              t0)
                    .count();
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace opinion
