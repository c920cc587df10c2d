#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "opinion/landscape.hpp"
#include "opinion/paths.hpp"

namespace opinion {

// Counter-based generator: output k of a stream is a fixed bijective mix of
// (key, k), so streams keyed by (seed, replica) are reproducible and can run
// in any order or in parallel.
class CounterRng {
 public:
  static CounterRng keyed(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t next_u64();
  double next_unit();         // [0, 1)
  int next_below(int bound);  // uniform over {0, ..., bound-1}
  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

struct ChainState {
  SpinConfiguration config;
  long long step_count = 0;
  CounterRng rng;
};

ChainState make_chain(const SpinConfiguration& start, std::uint64_t seed,
                      std::uint64_t stream = 0);

// One step = one proposal: a uniformly random site, flipped with probability
// exp(-beta [dH]_+); the self-loop absorbs the rest. One site draw per step
// and a uniform variate only when dH > 0.
void metropolis_step(ChainState& state, double beta);

struct HittingTimeSample {
  long long steps = 0;
  bool censored = false;
  std::string target_hit;               // RLE of the state reached
  std::string gate_crossed = "none";    // first family tag seen on the final
                                        // excursion; "none" if absent
  std::vector<std::string> gates_seen;  // all tags seen at that level
  Rational saddle_max_seen{0};          // trajectory-wide energy maximum
};

struct RunOptions {
  long long step_cap = 0;  // censor after this many proposals
  const std::vector<GateSet>* gates = nullptr;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
};

// Simulate from start until the first visit to the target set. The final
// uphill excursion used for gate attribution is the segment since the last
// visit to the start state itself (the bottom of its basin); the tags of
// gate-family states visited during that segment are recorded. Gate members
// sit exactly at the saddle level, so these are saddle-level visits.
HittingTimeSample run_until_hit(const ModelSpec& spec,
                                const SpinConfiguration& start,
                                const std::vector<SpinConfiguration>& targets,
                                double beta, const RunOptions& opt);

// Default censoring cap: ceil(e^{beta (barrier_from(start) + 1)}).
long long default_step_cap(const ModelSpec& spec,
                           const SpinConfiguration& start, double beta);

struct BetaPoint {
  double beta = 0;
  int replicas = 0;
  int censored = 0;
  double mean_steps = 0;
  double log_mean = 0;
  std::vector<long long> samples;  // uncensored hitting times
};

struct ArrheniusFit {
  double slope = 0;        // least-squares slope of log(mean steps) vs beta
  double std_error = 0;    // bootstrap standard error of the slope
  double slope_lower = 0;  // slope with censored samples scored at the cap
  std::vector<BetaPoint> points;
};

ArrheniusFit arrhenius_slope(const ModelSpec& spec,
                             const SpinConfiguration& start,
                             const std::vector<SpinConfiguration>& targets,
                             const std::vector<double>& beta_grid, int replicas,
                             std::uint64_t seed = 1);

struct KsResult {
  double statistic = 0;
  double threshold = 0;
  bool pass = false;
};

// Kolmogorov-Smirnov distance of samples/mean against Exp(1).
KsResult exponential_law_test(const std::vector<long long>& samples,
                              double threshold = 0.10);

struct SpectralReport {
  double gap = 0;
  double second_eigenvalue = 0;
  double beta = 0;
  double method_residual = 0;
  std::size_t state_count = 0;
  std::string to_json() const;
};

// Chain whose states are the 2^bits bitmasks and whose moves are single bit
// flips with proposal probability 1/bits each; energy[mask] drives the
// Metropolis weights. Covers the lattice chain and the test toys alike.
struct FlipChain {
  int bits = 0;
  std::vector<double> energy;  // size 2^bits
};

// Two leading eigenvalues of the sqrt(mu)-symmetrized transition operator:
// Lanczos with full reorthogonalization, deflated against the known top
// eigenvector sqrt(mu); dense_oracle switches to a full eigensolve
// (state count <= 4096).
SpectralReport spectral_gap_chain(const FlipChain& chain, double beta,
                                  bool dense_oracle = false);

SpectralReport spectral_gap(const ModelSpec& spec, double beta,
                            LandscapeGuard guard = {});

// Global minima and maximal-stability states per regime.
std::vector<SpinConfiguration> stable_states(const ModelSpec& spec);
std::vector<SpinConfiguration> metastable_states(const ModelSpec& spec);
std::vector<SpinConfiguration> recurrent_core(const ModelSpec& spec);

struct RecurrenceProbeResult {
  int samples = 0;
  int hits = 0;
  double fraction = 0;
  double ci_low = 0;   // Wilson 95% interval
  double ci_high = 0;
  long long budget = 0;
};

// Fraction of uniform-random starts that reach stable U metastable within
// the recurrence budget. The asymptotic e^{beta(L* + eps)} bound absorbs the
// polynomial prefactor of the reduction argument as beta grows; at fixed
// beta that prefactor is restored explicitly: the reduction path makes O(N^2)
// moves, each waiting O(N^2) proposals, so the cap in proposals is
// N^4 e^{beta(L* + eps)} with L* = 2(alpha - 1).
RecurrenceProbeResult recurrence_probe(const ModelSpec& spec, double beta,
                                       int sample_count, double eps = 0.5,
                                       std::uint64_t seed = 1);

struct GateStatistics {
  std::map<std::string, int> counts;  // gate label -> successful crossings
  int none = 0;                       // successes with no family tag
  int censored = 0;
  int transitions = 0;                // successful transitions observed
};

GateStatistics gate_crossing_statistics(const ModelSpec& spec,
                                        const SpinConfiguration& start,
                                        const std::vector<SpinConfiguration>& targets,
                                        double beta, int replicas,
                                        std::uint64_t seed = 1);

// Starts cycle over the regime's metastable/start states; targets are the
// stable states other than the start.
GateStatistics gate_crossing_statistics(const ModelSpec& spec, double beta,
                                        int replicas, std::uint64_t seed = 1);

// CSV plumbing for sample logs.
std::string hitting_csv_header();
std::string hitting_csv_row(int replica, double beta,
                            const HittingTimeSample& sample);

}  // namespace opinion
