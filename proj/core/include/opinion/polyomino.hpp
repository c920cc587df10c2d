#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "opinion/lattice.hpp"

namespace opinion {

// Thrown when an enumeration would exceed the configured resource caps.
struct ResourceGuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ShapeClass {
  enum Kind { QuasiSquareProt, StripProt, RectangleProt, Other };
  Kind kind = Other;
  int l1 = 0;       // base width (strip width for StripProt)
  int l2 = 0;       // base height (N for StripProt)
  int q = 0;        // protuberance length (cell count)
  bool prot_on_longest = false;
  // True when the shape only matched via the loose reading of a protuberance
  // (an edge-connected blob attached to a quasi-square core) rather than a
  // straight run in the line adjacent to one side.
  bool irregular_prot = false;
};

struct Concavity {
  int cardinality = 0;  // exterior-boundary squares inside the notch
  int width = 0;        // lines meeting the polyomino in >= 2 components
};

struct PolyominoPredicates {
  bool winds_vertical = false;
  bool winds_horizontal = false;
  bool has_hole = false;
  bool is_convex = false;
  std::vector<Concavity> concavities;
};

// Edge-connected set of unit cells on the N x N torus, stored in the
// lexicographically minimal translate so equality is translation-invariant
// (rotations/reflections are NOT identified).
class Polyomino {
 public:
  Polyomino(int N, std::vector<Site> cells);          // canonicalizes
  static Polyomino from_mask(int N, std::uint64_t mask);  // N <= 8

  int torus_side() const { return N_; }
  int area() const { return static_cast<int>(cells_.size()); }
  const std::vector<Site>& cells() const { return cells_; }
  std::uint64_t mask() const;  // N <= 8

  int edge_perimeter() const;
  int site_perimeter() const;
  bool is_winding() const;
  PolyominoPredicates predicates() const;
  ShapeClass classify() const;

  friend bool operator==(const Polyomino& a, const Polyomino& b) {
    return a.N_ == b.N_ && a.cells_ == b.cells_;
  }

 private:
  bool contains(int r, int c) const;
  int N_;
  std::vector<Site> cells_;  // sorted (row, col), canonical translate
};

struct EnumerationCaps {
  int max_area = 12;
  int max_side = 8;
};

// All edge-connected cell sets of the given area up to torus translation,
// each exactly once. Guarded by the caps.
std::vector<Polyomino> enumerate_polyominoes(int area, int N,
                                             EnumerationCaps caps = {});

// Canonical 64-bit masks for all areas 1..max_area at once (N <= 8); index 0
// of the result is unused so result[a] holds the shapes of area a.
std::vector<std::vector<std::uint64_t>> enumerate_masks_up_to(
    int N, int max_area, EnumerationCaps caps = {});

struct MinimalPerimeterResult {
  int min_perimeter = 0;
  std::vector<Polyomino> minimizers;
  std::vector<ShapeClass> classes;  // parallel to minimizers
};

MinimalPerimeterResult minimal_perimeter_shapes(int area, int N,
                                                bool winding_required,
                                                EnumerationCaps caps = {});

}  // namespace opinion
