#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "opinion/rational.hpp"

namespace opinion {

struct Site {
  int row = 0;
  int col = 0;
  friend bool operator==(const Site&, const Site&) = default;
};

enum class RegionLabel { A, S1, B, S2 };

// Parameter regimes for integer alpha under the strip assumptions.
enum class Regime {
  LowAlpha,       // 2 <= alpha < n
  CriticalEqual,  // alpha = n, n = m
  CriticalStrict, // alpha = n, n < m
  MidAlpha,       // m+1 <= alpha < 2k+m
  HighAlpha,      // 2k+m <= alpha < alpha_star
  VeryHighAlpha,  // alpha >= alpha_star
  Unsupported,    // assumptions violated (incl. n < alpha <= m)
};

const char* to_string(RegionLabel r);
const char* to_string(Regime r);

// Model parameters: N x N torus split into vertical strips A | S1 | B | S2
// (widths n, k, m, k left to right), interaction strength alpha.
struct ModelSpec {
  int N = 0;
  int n = 0;
  int m = 0;
  int k = 0;
  Rational alpha;
  bool strict_assumptions = true;

  ModelSpec() = default;
  ModelSpec(int N_, int n_, int m_, int k_, Rational alpha_, bool strict = true);

  int sites() const { return N * N; }
  int edges() const { return 2 * N * N; }

  int index_of(Site s) const { return s.row * N + s.col; }
  Site site_of(int idx) const { return {idx / N, idx % N}; }

  RegionLabel region_of_col(int col) const;
  RegionLabel region_of(Site s) const { return region_of_col(s.col); }

  // Hidden preference s_i: +1 on A, -1 on B, 0 on S1 and S2.
  int hidden_preference(Site s) const;
  int hidden_preference_col(int col) const;

  std::array<Site, 4> neighbors(Site s) const;
  // Neighbor indices in flat row-major order, same wraparound.
  std::array<int, 4> neighbor_indices(int idx) const;

  // (N(m-1) - 2m) / (m-2); requires m > 2.
  Rational alpha_star() const;

  Regime regime() const;

  // Distance from a column to strip A measured in columns across the torus,
  // 0 inside A. Used by the interface-shift family constructors.
  int col_distance_to_A(int col) const;

  // Throws std::invalid_argument if the widths do not partition N or
  // (in strict mode) the strip/interaction assumptions fail.
  void validate() const;

  std::string to_json() const;
  static ModelSpec from_json(const std::string& text);

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

}  // namespace opinion
