#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "opinion/config.hpp"
#include "opinion/polyomino.hpp"  // ResourceGuardError

namespace opinion {

struct LandscapeGuard {
  std::size_t max_states = std::size_t{1} << 16;  // full enumeration: N = 4
};

struct RestrictedOptions {
  Rational window{2};              // energy allowance above the seed maximum
  std::size_t max_states = 2'000'000;
};

struct LandscapeReport {
  std::size_t state_count = 0;
  std::vector<std::uint64_t> states;   // index -> site mask
  std::vector<Rational> energy_table;  // index -> H
  std::vector<std::size_t> stable_set;
  // States attaining gamma_m: the deepest barrier outside one reference
  // minimum, i.e. the larger of the maximal finite stability level and (for
  // degenerate minima) the maximal tunneling level from the other minima to
  // the reference one. This constant governs the low-temperature decay of
  // the spectral gap.
  std::vector<std::size_t> metastable_set;
  Rational gamma_m{0};
  // nullopt encodes an infinite stability level (global minima).
  std::vector<std::optional<Rational>> stability_levels;
  // Restricted-subspace reports are bounds, not exact full-space values.
  bool restricted = false;
};

// State space (full or energy-window-restricted) with exact integer energy
// keys; all communication-height machinery lives here.
class SublevelGraph {
 public:
  static SublevelGraph full_space(const ModelSpec& spec,
                                  LandscapeGuard guard = {});
  // States reachable from the seeds through states of energy at most
  // max(H(seed)) + window.
  static SublevelGraph restricted(const ModelSpec& spec,
                                  const std::vector<std::uint64_t>& seed_masks,
                                  RestrictedOptions opt = {});

  std::size_t size() const { return states_.size(); }
  const std::vector<std::uint64_t>& states() const { return states_; }
  std::optional<std::size_t> index_of(std::uint64_t mask) const;
  Rational energy(std::size_t i) const;
  bool is_restricted() const { return restricted_; }

  // Lowest level at which i and j join in the sublevel flip graph
  // (union-find sweep with per-level batch insertion).
  Rational communication_height(std::size_t i, std::size_t j) const;
  // Independent oracle: binary search on the threshold + BFS reachability.
  Rational communication_height_oracle(std::size_t i, std::size_t j) const;

  LandscapeReport report() const;

  // True iff removing gate∩{H == Phi(i,j)} from the {H <= Phi(i,j)} flip
  // graph disconnects i from j.
  bool gate_check(std::size_t i, std::size_t j,
                  const std::vector<std::uint64_t>& gate_masks) const;

 private:
  SublevelGraph(const ModelSpec& spec) : spec_(spec) {}
  template <typename Fn>
  void for_each_neighbor(std::size_t i, Fn&& fn) const;
  long long phi_key(std::size_t i, std::size_t j) const;
  bool reachable_below(std::size_t i, std::size_t j, long long level_key,
                       const std::vector<char>& banned) const;

  ModelSpec spec_;
  bool restricted_ = false;
  std::vector<std::uint64_t> states_;
  std::vector<long long> keys_;       // exact scaled energies
  std::vector<std::size_t> order_;    // indices sorted by key
  std::unordered_map<std::uint64_t, std::size_t> index_;  // mask -> index
};

// Exact scaled-integer energy of the configuration given as a site mask
// (bit v set = spin +1 at site v); energy = Rational(key, alpha denominator).
long long energy_key_of_mask(const ModelSpec& spec, std::uint64_t mask);
Rational energy_of_mask(const ModelSpec& spec, std::uint64_t mask);

// Convenience wrappers on the full space.
Rational communication_height(const ModelSpec& spec,
                              const SpinConfiguration& x,
                              const SpinConfiguration& y,
                              LandscapeGuard guard = {});
std::optional<Rational> stability_level(const ModelSpec& spec,
                                        const SpinConfiguration& z,
                                        LandscapeGuard guard = {});
LandscapeReport landscape_report(const ModelSpec& spec,
                                 LandscapeGuard guard = {});
bool gate_check(const ModelSpec& spec, const SpinConfiguration& x,
                const SpinConfiguration& y,
                const std::vector<SpinConfiguration>& gate,
                LandscapeGuard guard = {});
LandscapeReport restricted_subspace_analysis(
    const ModelSpec& spec, const std::vector<SpinConfiguration>& seeds,
    RestrictedOptions opt = {});

}  // namespace opinion
