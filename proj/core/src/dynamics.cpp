#include "opinion/dynamics.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace opinion {

namespace {

// splitmix64 finalizer; bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

CounterRng CounterRng::keyed(std::uint64_t seed, std::uint64_t stream) {
  CounterRng rng;
  rng.key_ = mix64(mix64(seed) ^ (0x6a09e667f3bcc909ULL + stream));
  return rng;
}

std::uint64_t CounterRng::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
}

double CounterRng::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

int CounterRng::next_below(int bound) {
  // Multiply-shift range reduction; bias is < bound / 2^64.
  return static_cast<int>(
      (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
}

ChainState make_chain(const SpinConfiguration& start, std::uint64_t seed,
                      std::uint64_t stream) {
  return ChainState{start, 0, CounterRng::keyed(seed, stream)};
}

void metropolis_step(ChainState& state, double beta) {
  int site = state.rng.next_below(state.config.size());
  Rational dh = state.config.delta_h(site);
  bool accept = true;
  if (dh > Rational(0))
    accept = state.rng.next_unit() < std::exp(-beta * to_double(dh));
  if (accept) state.config.flip(site);
  ++state.step_count;
}

HittingTimeSample run_until_hit(const ModelSpec& spec,
                                const SpinConfiguration& start,
                                const std::vector<SpinConfiguration>& targets,
                                double beta, const RunOptions& opt) {
  if (targets.empty()) throw std::invalid_argument("empty target set");
  // Index targets and gate members by exact energy key so the per-step test
  // is an integer hash probe; the O(N^2) serialization runs only on key hits.
  std::unordered_map<long long, std::unordered_set<std::string>> target_at;
  for (const auto& t : targets) target_at[t.energy_key()].insert(t.to_rle());
  std::unordered_map<long long, std::unordered_map<std::string, std::string>>
      gate_at;
  if (opt.gates)
    for (const auto& gs : *opt.gates)
      for (const auto& g : gs.members)
        gate_at[g.energy_key()][g.to_rle()] = gs.label;

  HittingTimeSample out;
  auto st = make_chain(start, opt.seed, opt.stream);
  const long long start_key = st.config.energy_key();
  long long key = start_key;
  long long global_max = key;

  auto hit = [&]() -> bool {
    auto it = target_at.find(key);
    if (it == target_at.end()) return false;
    std::string r = st.config.to_rle();
    if (!it->second.count(r)) return false;
    out.target_hit = std::move(r);
    return true;
  };
  // Gate members sit exactly at the saddle level, so any visit to one during
  // the final excursion is a saddle-level visit; the trajectory's own energy
  // maximum overshoots the saddle at finite beta and is not used.
  auto note_gate = [&]() {
    auto it = gate_at.find(key);
    if (it == gate_at.end()) return;
    auto jt = it->second.find(st.config.to_rle());
    if (jt == it->second.end()) return;
    if (std::find(out.gates_seen.begin(), out.gates_seen.end(), jt->second) ==
        out.gates_seen.end())
      out.gates_seen.push_back(jt->second);
  };

  if (!hit()) {
    while (st.step_count < opt.step_cap) {
      metropolis_step(st, beta);
      key = st.config.energy_key();
      if (key > global_max) global_max = key;
      if (key == start_key && st.config == start) {
        // Back at the basin bottom: a fresh excursion starts here.
        out.gates_seen.clear();
      } else if (opt.gates) {
        note_gate();
      }
      if (hit()) break;
    }
    if (out.target_hit.empty()) out.censored = true;
  }
  out.steps = st.step_count;
  out.saddle_max_seen = energy_from_key(spec, global_max);
  if (opt.gates)
    out.gate_crossed = out.gates_seen.empty() ? "none" : out.gates_seen.front();
  return out;
}

long long default_step_cap(const ModelSpec& spec,
                           const SpinConfiguration& start, double beta) {
  double b = to_double(barrier_from(spec, start));
  double cap = std::ceil(std::exp(beta * (b + 1.0)));
  return static_cast<long long>(std::min(cap, 4.0e18));
}

namespace {

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

ArrheniusFit arrhenius_slope(const ModelSpec& spec,
                             const SpinConfiguration& start,
                             const std::vector<SpinConfiguration>& targets,
                             const std::vector<double>& beta_grid, int replicas,
                             std::uint64_t seed) {
  if (beta_grid.size() < 3)
    throw std::invalid_argument("need at least 3 beta values");
  if (replicas < 50) throw std::invalid_argument("need at least 50 replicas");

  ArrheniusFit fit;
  std::vector<double> betas, logs, logs_capped;
  for (std::size_t bi = 0; bi < beta_grid.size(); ++bi) {
    BetaPoint pt;
    pt.beta = beta_grid[bi];
    long long cap = default_step_cap(spec, start, pt.beta);
    double capped_sum = 0;
    for (int r = 0; r < replicas; ++r) {
      RunOptions opt;
      opt.step_cap = cap;
      opt.seed = seed;
      opt.stream = bi * 1000003ULL + static_cast<std::uint64_t>(r);
      auto smp = run_until_hit(spec, start, targets, pt.beta, opt);
      if (smp.censored) {
        ++pt.censored;
        capped_sum += static_cast<double>(cap);
      } else {
        pt.samples.push_back(smp.steps);
        capped_sum += static_cast<double>(smp.steps);
      }
    }
    pt.replicas = replicas;
    if (pt.samples.empty()) {
      std::ostringstream os;
      os << "all replicas censored at beta=" << pt.beta;
      throw std::runtime_error(os.str());
    }
    double sum = 0;
    for (long long s : pt.samples) sum += static_cast<double>(s);
    pt.mean_steps = sum / static_cast<double>(pt.samples.size());
    pt.log_mean = std::log(pt.mean_steps);
    betas.push_back(pt.beta);
    logs.push_back(pt.log_mean);
    // Censored samples scored at the cap lower-bound the true mean.
    logs_capped.push_back(std::log(capped_sum / replicas));
    fit.points.push_back(std::move(pt));
  }
  fit.slope = ls_slope(betas, logs);
  fit.slope_lower = std::min(fit.slope, ls_slope(betas, logs_capped));

  // Bootstrap over the uncensored samples of each grid point.
  const int B = 200;
  auto rng = CounterRng::keyed(seed, 0xb00f);
  double acc = 0, acc2 = 0;
  for (int b = 0; b < B; ++b) {
    std::vector<double> ys;
    for (const auto& pt : fit.points) {
      double sum = 0;
      int n = static_cast<int>(pt.samples.size());
      for (int i = 0; i < n; ++i)
        sum += static_cast<double>(pt.samples[rng.next_below(n)]);
      ys.push_back(std::log(sum / n));
    }
    double s = ls_slope(betas, ys);
    acc += s;
    acc2 += s * s;
  }
  fit.std_error = std::sqrt(std::max(0.0, acc2 / B - (acc / B) * (acc / B)));
  return fit;
}

KsResult exponential_law_test(const std::vector<long long>& samples,
                              double threshold) {
  if (samples.size() < 100)
    throw std::invalid_argument("need at least 100 uncensored samples");
  double mean = 0;
  for (long long s : samples) mean += static_cast<double>(s);
  mean /= static_cast<double>(samples.size());
  std::vector<double> xs;
  xs.reserve(samples.size());
  for (long long s : samples) xs.push_back(static_cast<double>(s) / mean);
  std::sort(xs.begin(), xs.end());
  double n = static_cast<double>(xs.size()), d = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double f = 1.0 - std::exp(-xs[i]);
    d = std::max(d, std::max(f - i / n, (i + 1) / n - f));
  }
  return {d, threshold, d < threshold};
}

// ---------------------------------------------------------------------------
// Spectral gap
// ---------------------------------------------------------------------------

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// The sqrt(mu)-symmetrized Metropolis operator of a bit-flip chain:
// S(x, x^b) = (1/bits) e^{-beta |E(x)-E(x^b)| / 2},
// S(x, x)   = 1 - (1/bits) sum_b min(1, e^{-beta (E(x^b)-E(x))}).
struct SymOp {
  const FlipChain* chain;
  double beta;
  std::vector<double> diag;

  explicit SymOp(const FlipChain& c, double b) : chain(&c), beta(b) {
    std::size_t n = c.energy.size();
    double q = 1.0 / c.bits;
    diag.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      double out = 0;
      for (int b2 = 0; b2 < c.bits; ++b2) {
        double de = c.energy[i ^ (std::size_t{1} << b2)] - c.energy[i];
        out += de <= 0 ? 1.0 : std::exp(-beta * de);
      }
      diag[i] = 1.0 - q * out;
    }
  }

  double edge(std::size_t i, int b) const {
    double de = chain->energy[i ^ (std::size_t{1} << b)] - chain->energy[i];
    return std::exp(-beta * std::abs(de) / 2) / chain->bits;
  }

  void apply(const VectorXd& x, VectorXd& y) const {
    std::size_t n = chain->energy.size();
    for (std::size_t i = 0; i < n; ++i) {
      double acc = diag[i] * x[static_cast<long>(i)];
      for (int b = 0; b < chain->bits; ++b)
        acc += edge(i, b) * x[static_cast<long>(i ^ (std::size_t{1} << b))];
      y[static_cast<long>(i)] = acc;
    }
  }
};

VectorXd sqrt_mu(const FlipChain& chain, double beta) {
  double emin = *std::min_element(chain.energy.begin(), chain.energy.end());
  VectorXd u(static_cast<long>(chain.energy.size()));
  for (std::size_t i = 0; i < chain.energy.size(); ++i)
    u[static_cast<long>(i)] = std::exp(-beta * (chain.energy[i] - emin) / 2);
  u.normalize();
  return u;
}

SpectralReport dense_gap(const FlipChain& chain, double beta) {
  std::size_t n = chain.energy.size();
  if (n > 4096)
    throw ResourceGuardError("dense spectral oracle limited to 4096 states");
  SymOp op(chain, beta);
  MatrixXd S = MatrixXd::Zero(static_cast<long>(n), static_cast<long>(n));
  for (std::size_t i = 0; i < n; ++i) {
    S(static_cast<long>(i), static_cast<long>(i)) = op.diag[i];
    for (int b = 0; b < chain.bits; ++b)
      S(static_cast<long>(i), static_cast<long>(i ^ (std::size_t{1} << b))) =
          op.edge(i, b);
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(S);
  double a2 = es.eigenvalues()[static_cast<long>(n) - 2];
  VectorXd v = es.eigenvectors().col(static_cast<long>(n) - 2);
  double residual = (S * v - a2 * v).norm();
  SpectralReport rep;
  rep.second_eigenvalue = a2;
  rep.gap = 1.0 - a2;
  rep.beta = beta;
  rep.method_residual = residual;
  rep.state_count = n;
  return rep;
}

}  // namespace

SpectralReport spectral_gap_chain(const FlipChain& chain, double beta,
                                  bool dense_oracle) {
  std::size_t n = std::size_t{1} << chain.bits;
  if (chain.energy.size() != n)
    throw std::invalid_argument("energy table size must be 2^bits");
  if (dense_oracle) return dense_gap(chain, beta);

  SymOp op(chain, beta);
  VectorXd u1 = sqrt_mu(chain, beta);
  const long nn = static_cast<long>(n);

  // Lanczos on the deflated operator P S P, P = I - u1 u1^T, with full
  // reorthogonalization; the top Ritz value is a^(2).
  int m_max = static_cast<int>(std::min<std::size_t>(n - 1, 400));
  std::vector<VectorXd> basis;
  std::vector<double> al, be;
  auto rng = CounterRng::keyed(0x5eed, 0);
  VectorXd v(nn);
  for (long i = 0; i < nn; ++i) v[i] = rng.next_unit() - 0.5;
  v -= u1.dot(v) * u1;
  v.normalize();
  basis.push_back(v);

  double a2 = 0, residual = 1;
  VectorXd w(nn), ritz(nn);
  int m = 0;
  for (int j = 0; j < m_max; ++j) {
    op.apply(basis[static_cast<std::size_t>(j)], w);
    w -= u1.dot(w) * u1;
    if (j > 0) w -= be[static_cast<std::size_t>(j - 1)] * basis[static_cast<std::size_t>(j - 1)];
    double a = basis[static_cast<std::size_t>(j)].dot(w);
    al.push_back(a);
    w -= a * basis[static_cast<std::size_t>(j)];
    for (const auto& b : basis) w -= b.dot(w) * b;
    w -= u1.dot(w) * u1;
    double nb = w.norm();
    m = j + 1;
    bool breakdown = nb < 1e-13;
    if (!breakdown) {
      be.push_back(nb);
      basis.push_back(w / nb);
    }
    if (breakdown || (m >= 10 && m % 10 == 0) || m == m_max) {
      MatrixXd T = MatrixXd::Zero(m, m);
      for (int i = 0; i < m; ++i) {
        T(i, i) = al[static_cast<std::size_t>(i)];
        if (i + 1 < m)
          T(i, i + 1) = T(i + 1, i) = be[static_cast<std::size_t>(i)];
      }
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(T);
      a2 = es.eigenvalues()[m - 1];
      VectorXd y = es.eigenvectors().col(m - 1);
      double est = breakdown ? 0 : nb * std::abs(y[m - 1]);
      if (breakdown || est < 1e-13 || m == m_max) {
        ritz.setZero();
        for (int i = 0; i < m; ++i)
          ritz += y[i] * basis[static_cast<std::size_t>(i)];
        op.apply(ritz, w);
        w -= u1.dot(w) * u1;
        residual = (w - a2 * ritz).norm();
        if (breakdown || residual < 1e-11 || m == m_max) break;
      }
    }
  }

  SpectralReport rep;
  rep.second_eigenvalue = a2;
  rep.gap = 1.0 - a2;
  rep.beta = beta;
  rep.method_residual = residual;
  rep.state_count = n;
  return rep;
}

SpectralReport spectral_gap(const ModelSpec& spec, double beta,
                            LandscapeGuard guard) {
  int bits = spec.N * spec.N;
  if (bits >= 64 || (std::size_t{1} << bits) > guard.max_states)
    throw ResourceGuardError("spectral gap needs an enumerable state space");
  FlipChain chain;
  chain.bits = bits;
  chain.energy.resize(std::size_t{1} << bits);
  for (std::size_t mask = 0; mask < chain.energy.size(); ++mask)
    chain.energy[mask] = to_double(energy_of_mask(spec, mask));
  return spectral_gap_chain(chain, beta,
                            chain.energy.size() <= 4096);
}

std::string SpectralReport::to_json() const {
  nlohmann::json j;
  j["gap"] = gap;
  j["second_eigenvalue"] = second_eigenvalue;
  j["beta"] = beta;
  j["method_residual"] = method_residual;
  j["state_count"] = state_count;
  return j.dump();
}

// ---------------------------------------------------------------------------
// Stable / metastable families and recurrence
// ---------------------------------------------------------------------------

std::vector<SpinConfiguration> stable_states(const ModelSpec& spec) {
  auto strips = [&]() {
    std::vector<SpinConfiguration> out;
    for (int l = 0; l <= spec.k; ++l)
      for (int p = 0; p <= spec.k; ++p) out.push_back(sigma_A(spec, l, p));
    return out;
  };
  switch (spec.regime()) {
    case Regime::LowAlpha:
      return strips();
    case Regime::CriticalEqual: {
      auto out = strips();
      out.push_back(homogeneous(spec, -1));
      out.push_back(homogeneous(spec, +1));
      return out;
    }
    case Regime::CriticalStrict: {
      auto out = strips();
      out.push_back(homogeneous(spec, -1));
      return out;
    }
    case Regime::MidAlpha:
    case Regime::HighAlpha:
    case Regime::VeryHighAlpha: {
      std::vector<SpinConfiguration> out{homogeneous(spec, -1)};
      if (spec.n == spec.m) out.push_back(homogeneous(spec, +1));
      return out;
    }
    case Regime::Unsupported:
      break;
  }
  throw std::domain_error("no stable family outside the supported regimes");
}

std::vector<SpinConfiguration> metastable_states(const ModelSpec& spec) {
  switch (spec.regime()) {
    case Regime::LowAlpha:
      return {homogeneous(spec, -1), homogeneous(spec, +1)};
    case Regime::MidAlpha:
    case Regime::HighAlpha:
    case Regime::VeryHighAlpha:
      if (spec.n < spec.m) return {homogeneous(spec, +1)};
      return {};
    case Regime::CriticalEqual:
    case Regime::CriticalStrict:
      return {};
    case Regime::Unsupported:
      break;
  }
  throw std::domain_error("no metastable family outside the supported regimes");
}

std::vector<SpinConfiguration> recurrent_core(const ModelSpec& spec) {
  auto out = stable_states(spec);
  for (auto& c : metastable_states(spec)) out.push_back(std::move(c));
  return out;
}

RecurrenceProbeResult recurrence_probe(const ModelSpec& spec, double beta,
                                       int sample_count, double eps,
                                       std::uint64_t seed) {
  auto core = recurrent_core(spec);
  double lstar = 2.0 * (to_double(spec.alpha) - 1.0);
  double scale = std::exp(beta * (lstar + eps));
  double sites = static_cast<double>(spec.N) * spec.N;
  RecurrenceProbeResult res;
  res.budget =
      static_cast<long long>(std::min(std::ceil(sites * sites * scale), 4.0e18));
  res.samples = sample_count;
  for (int i = 0; i < sample_count; ++i) {
    auto rng = CounterRng::keyed(seed, 0xabc0000ULL + static_cast<std::uint64_t>(i));
    SpinConfiguration start(spec, -1);
    for (int idx = 0; idx < start.size(); ++idx)
      start.set_spin(idx, (rng.next_u64() & 1) ? +1 : -1);
    RunOptions opt;
    opt.step_cap = res.budget;
    opt.seed = seed;
    opt.stream = 0xdef0000ULL + static_cast<std::uint64_t>(i);
    auto smp = run_until_hit(spec, start, core, beta, opt);
    if (!smp.censored) ++res.hits;
  }
  res.fraction = static_cast<double>(res.hits) / sample_count;
  // Wilson 95% interval.
  double z = 1.96, nn = sample_count, p = res.fraction;
  double den = 1 + z * z / nn;
  double mid = (p + z * z / (2 * nn)) / den;
  double half = z * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn)) / den;
  res.ci_low = mid - half;
  res.ci_high = mid + half;
  return res;
}

GateStatistics gate_crossing_statistics(
    const ModelSpec& spec, const SpinConfiguration& start,
    const std::vector<SpinConfiguration>& targets, double beta, int replicas,
    std::uint64_t seed) {
  auto gates = gate_family(spec);
  GateStatistics stats;
  for (int r = 0; r < replicas; ++r) {
    RunOptions opt;
    opt.step_cap = default_step_cap(spec, start, beta);
    opt.gates = &gates;
    opt.seed = seed;
    opt.stream = static_cast<std::uint64_t>(r);
    auto smp = run_until_hit(spec, start, targets, beta, opt);
    if (smp.censored) {
      ++stats.censored;
      continue;
    }
    ++stats.transitions;
    if (smp.gate_crossed == "none")
      ++stats.none;
    else
      ++stats.counts[smp.gate_crossed];
  }
  return stats;
}

GateStatistics gate_crossing_statistics(const ModelSpec& spec, double beta,
                                        int replicas, std::uint64_t seed) {
  auto starts = regime_start_states(spec);
  auto stable = stable_states(spec);
  auto gates = gate_family(spec);
  GateStatistics stats;
  for (int r = 0; r < replicas; ++r) {
    const auto& start = starts[static_cast<std::size_t>(r) % starts.size()];
    std::vector<SpinConfiguration> targets;
    for (const auto& s : stable)
      if (!(s == start)) targets.push_back(s);
    RunOptions opt;
    opt.step_cap = default_step_cap(spec, start, beta);
    opt.gates = &gates;
    opt.seed = seed;
    opt.stream = static_cast<std::uint64_t>(r);
    auto smp = run_until_hit(spec, start, targets, beta, opt);
    if (smp.censored) {
      ++stats.censored;
      continue;
    }
    ++stats.transitions;
    if (smp.gate_crossed == "none")
      ++stats.none;
    else
      ++stats.counts[smp.gate_crossed];
  }
  return stats;
}

std::string hitting_csv_header() {
  return "replica,beta,steps,censored,gate_tag,saddle_max";
}

std::string hitting_csv_row(int replica, double beta,
                            const HittingTimeSample& sample) {
  std::ostringstream os;
  os << replica << ',' << beta << ',' << sample.steps << ','
     << (sample.censored ? 1 : 0) << ',' << sample.gate_crossed << ','
     << to_string(sample.saddle_max_seen);
  return os.str();
}

}  // namespace opinion
