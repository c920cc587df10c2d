#pragma once

#include <string>
#include <vector>

#include "opinion/config.hpp"

namespace opinion {

struct PathRecord {
  std::vector<SpinConfiguration> states;
  std::vector<Rational> elevations;  // elevations[i] == H(states[i])
  Rational max_elevation{0};
  std::vector<std::size_t> saddle_indices;  // positions attaining the max
};

// Which strip hosts the droplet; Wide = the full complement of A (S1+B+S2).
enum class DropletRegion { A, B, Wide };

// ---------------------------------------------------------------------------
// Named configuration families
// ---------------------------------------------------------------------------

SpinConfiguration homogeneous(const ModelSpec& spec, int sign);

// + on A, on the l columns of S1 adjacent to A and the p columns of S2
// adjacent to A (through the wrap); - elsewhere. 0 <= l,p <= k.
SpinConfiguration sigma_A(const ModelSpec& spec, int l, int p);

// Configuration whose droplet is an a x b rectangle (a columns across the
// region, b rows) plus a k-cell run in the adjacent line, in the canonical
// placement (region-leftmost columns, rows from 0, run attached below,
// leftmost offset). A-side droplets are positive in a negative sea; B/Wide
// droplets are negative in a positive sea.
SpinConfiguration rect_prot_config(const ModelSpec& spec, DropletRegion region,
                                   int a, int b, int k);

// All placements of the a x b + k-run droplet inside the region: both
// orientations, all anchors (rows wrap), run on either a-side at any offset.
std::vector<SpinConfiguration> rect_prot_family(const ModelSpec& spec,
                                                DropletRegion region, int a,
                                                int b, int k);

// Column configuration: s full columns nearest the region boundary plus an
// incomplete column of t cells on the next one (rows from 0). s = 0 gives a
// bare incomplete column on the boundary column itself.
SpinConfiguration column_config(const ModelSpec& spec, DropletRegion region,
                                int s, int t);

// Gate families per the regime table.
std::vector<SpinConfiguration> gate_GA(const ModelSpec& spec);
std::vector<SpinConfiguration> gate_GB(const ModelSpec& spec);
std::vector<SpinConfiguration> gate_RA(const ModelSpec& spec);
std::vector<SpinConfiguration> gate_RB(const ModelSpec& spec);
std::vector<SpinConfiguration> gate_CA(const ModelSpec& spec);
std::vector<SpinConfiguration> gate_CB(const ModelSpec& spec);

struct GateSet {
  std::string label;       // e.g. "GA", "RB", "GA|RA|CA"
  std::string transition;  // human-readable endpoints
  std::vector<SpinConfiguration> members;
};

// The gate(s) prescribed for the spec's regime.
std::vector<GateSet> gate_family(const ModelSpec& spec);

// ---------------------------------------------------------------------------
// Reference paths
// ---------------------------------------------------------------------------

enum class PathName {
  BarW1,    // -1 -> quasi-square n x (n+1) in A
  TildeW1,  // +1 -> quasi-square m x (m+1) in B (negative droplet)
  BarW2,    // continue BarW1 by rows up to sigma_A(0,0)
  TildeW2,  // continue TildeW1 by rows up to sigma_A(k,k)
  TildeW3,  // continue TildeW1 into S1/S2 up to (2k+m) x (2k+m+1)
  TildeW4,  // continue TildeW3 by rows up to sigma_A(0,0)
  TildeW5,  // continue TildeW3 by quasi-squares up to -1
  TildeW6,  // sigma_A(0,0) -> -1 by column removal in A
  TildeW7,  // sigma_A(k,k) -> -1 (dismantle S1, S2, then TildeW6)
  WPrime,   // +1 -> sigma_A(k,k) by column removal in B
  BarStar1,  // +1 -> sigma_A(k,k): TildeW1 + TildeW2     (2 <= alpha <= n)
  BarStar2,  // -1 -> sigma_A(0,0): BarW1 + BarW2         (2 <= alpha <= n)
  BarStar3,  // -1 -> +1: BarStar2 + bridge + reverse BarStar1
  Star1,     // +1 -> -1: WPrime + TildeW7                (alpha >= m+1)
  Star2,     // +1 -> -1: TildeW1 + TildeW2 + TildeW7
  Star3,     // +1 -> -1: TildeW1 + TildeW3 + TildeW4 + TildeW6
  Star4,     // +1 -> -1: TildeW1 + TildeW3 + TildeW5
};

const char* to_string(PathName name);

PathRecord build_reference_path(const ModelSpec& spec, PathName name);

// The printed closed form for the path maximum (absolute energy).
Rational closed_form_phi(const ModelSpec& spec, PathName name);

// computed max_elevation minus closed_form_phi; zero when the printed form
// is exact. The A-side paths reuse the B-side closed form, which overshoots
// by 2N(m-n) when n < m; that documented discrepancy is reported here.
Rational path_formula_discrepancy(const ModelSpec& spec, PathName name);

// ---------------------------------------------------------------------------
// Barrier heights
// ---------------------------------------------------------------------------

// The regime case split for the maximal stability level (absolute energy).
Rational gamma_star_height(const ModelSpec& spec);

// Energy barrier seen from a start state: height - H(start).
Rational barrier_from(const ModelSpec& spec, const SpinConfiguration& start);

// Metastable/stable start states whose escape barrier the regime describes.
std::vector<SpinConfiguration> regime_start_states(const ModelSpec& spec);

}  // namespace opinion
