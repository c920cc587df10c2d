#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "opinion/lattice.hpp"

namespace opinion {

enum class Winding { None, Vertical, Horizontal, Both };

struct Cluster {
  std::vector<int> cells;  // flat indices, sorted
  int sign = 0;            // +1 or -1
  Winding winding = Winding::None;
};

struct ClusterDecomposition {
  std::vector<Cluster> clusters;
};

// Spin assignment on the torus with write-through caches for the two
// magnetization counts and the contour length, so the energy is O(1).
class SpinConfiguration {
 public:
  SpinConfiguration(const ModelSpec& spec, int fill_sign);
  SpinConfiguration(const ModelSpec& spec, const std::string& plus_minus);

  const ModelSpec& spec() const { return *spec_; }
  int size() const { return static_cast<int>(spins_.size()); }
  int spin(int idx) const { return spins_[idx]; }
  int spin(Site s) const { return spins_[spec_->index_of(s)]; }
  void set_all(int sign);

  void flip(int idx);
  void flip(Site s) { flip(spec_->index_of(s)); }
  void set_spin(int idx, int sign) {
    if (spins_[idx] != sign) flip(idx);
  }

  int m_a() const { return m_a_; }
  int m_b() const { return m_b_; }
  int contour_length() const { return contour_; }

  // Energy via the cached aggregates: N(n-m) - alpha N^2 + 2(M_B - M_A) + alpha|gamma|.
  Rational hamiltonian() const;
  // Energy by brute summation over sites and edges (independent route).
  Rational hamiltonian_direct() const;

  // H scaled by the denominator q of alpha = p/q, as a single exact integer.
  // Total order identical to the rational energy for a fixed spec.
  long long energy_key() const;
  long long energy_key_after_flip(int idx) const;

  // Delta H of flipping idx, decomposed as field + alpha * edge with integer
  // parts; delta_h() assembles the exact rational.
  void delta_parts(int idx, int& field, int& edge) const;
  Rational delta_h(int idx) const;

  ClusterDecomposition decompose_clusters() const;

  // Row-major '+'/'-' string, N^2 characters.
  std::string to_string() const;
  // Run-length variant, e.g. "64-" or "3+61-".
  std::string to_rle() const;
  static SpinConfiguration from_rle(const ModelSpec& spec, const std::string& rle);

  // Recompute caches from scratch and compare (debug aid); true if consistent.
  bool validate_caches() const;

  // 64-bit state mask for N <= 8 (bit i set iff spin +1); used by the
  // exhaustive landscape sweeps.
  std::uint64_t to_mask() const;
  static SpinConfiguration from_mask(const ModelSpec& spec, std::uint64_t mask);

  friend bool operator==(const SpinConfiguration& a, const SpinConfiguration& b) {
    return a.spins_ == b.spins_;
  }

 private:
  void rebuild_caches();

  const ModelSpec* spec_;
  std::vector<std::int8_t> spins_;
  int m_a_ = 0;
  int m_b_ = 0;
  int contour_ = 0;
};

// Energy of a state given (M_B - M_A) and contour length, as scaled int key.
long long energy_key_from_parts(const ModelSpec& spec, int mb_minus_ma, int contour);
Rational energy_from_parts(const ModelSpec& spec, int mb_minus_ma, int contour);
Rational energy_from_key(const ModelSpec& spec, long long key);

}  // namespace opinion
