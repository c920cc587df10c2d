#include <doctest.h>

#include "opinion/lattice.hpp"

using namespace opinion;

namespace {
const ModelSpec E1(12, 3, 5, 2, Rational(2));
}

TEST_CASE("layout maps columns to strips in A,S1,B,S2 order") {
  CHECK(E1.region_of({0, 0}) == RegionLabel::A);
  CHECK(E1.region_of({0, 4}) == RegionLabel::S1);
  CHECK(E1.region_of({0, 7}) == RegionLabel::B);
  CHECK(E1.region_of({0, 11}) == RegionLabel::S2);

  ModelSpec s(8, 3, 3, 1, Rational(2));
  int a = 0, b = 0, c = 0;
  for (int i = 0; i < s.sites(); ++i) {
    switch (s.region_of(s.site_of(i))) {
      case RegionLabel::A: ++a; break;
      case RegionLabel::B: ++b; break;
      default: ++c; break;
    }
  }
  CHECK(a == 24);
  CHECK(b == 24);
  CHECK(c == 16);
}

TEST_CASE("widths must partition N") {
  CHECK_THROWS_AS(ModelSpec(8, 3, 4, 1, Rational(2)), std::invalid_argument);
}

TEST_CASE("hidden preferences") {
  CHECK(E1.hidden_preference({0, 1}) == 1);
  CHECK(E1.hidden_preference({5, 8}) == -1);
  CHECK(E1.hidden_preference({3, 10}) == 0);
}

TEST_CASE("torus neighbors and edge count") {
  ModelSpec s(8, 3, 3, 1, Rational(2));
  auto nb = s.neighbors({0, 0});
  std::array<Site, 4> expect{Site{7, 0}, Site{1, 0}, Site{0, 7}, Site{0, 1}};
  for (auto e : expect) CHECK(std::count(nb.begin(), nb.end(), e) == 1);
  auto nb2 = s.neighbors({3, 3});
  std::array<Site, 4> expect2{Site{2, 3}, Site{4, 3}, Site{3, 2}, Site{3, 4}};
  for (auto e : expect2) CHECK(std::count(nb2.begin(), nb2.end(), e) == 1);
  CHECK(s.edges() == 128);

  // Symmetry: i in neighbors(j) iff j in neighbors(i).
  for (int i = 0; i < s.sites(); ++i)
    for (int j : s.neighbor_indices(i)) {
      auto back = s.neighbor_indices(j);
      CHECK(std::count(back.begin(), back.end(), i) == 1);
    }
}

TEST_CASE("regime classification") {
  CHECK(E1.regime() == Regime::LowAlpha);
  CHECK(ModelSpec(12, 3, 5, 2, Rational(6)).regime() == Regime::MidAlpha);
  // alpha_star = (12*4 - 10)/3 = 38/3 ~ 12.67, so 13 is in the top regime.
  CHECK(ModelSpec(12, 3, 5, 2, Rational(13)).regime() == Regime::VeryHighAlpha);
  CHECK(ModelSpec(12, 3, 5, 2, Rational(13)).alpha_star() == Rational(38, 3));
  CHECK(ModelSpec(8, 3, 3, 1, Rational(3)).regime() == Regime::CriticalEqual);
  CHECK(ModelSpec(12, 3, 5, 2, Rational(3)).regime() == Regime::CriticalStrict);
  CHECK(ModelSpec(12, 3, 5, 2, Rational(10)).regime() == Regime::HighAlpha);
  CHECK(ModelSpec(12, 3, 5, 2, Rational(4), false).regime() == Regime::Unsupported);
  CHECK(ModelSpec(4, 1, 1, 1, Rational(1), false).regime() == Regime::Unsupported);
}

TEST_CASE("alpha is exact rational") {
  ModelSpec s(12, 3, 5, 2, Rational(38, 3), false);
  CHECK(s.regime() == Regime::Unsupported);  // non-integer alpha
  CHECK(parse_rational("38/3") == Rational(38, 3));
  CHECK(parse_rational("7") == Rational(7));
  CHECK_THROWS_AS(parse_rational("x/3"), std::invalid_argument);
  CHECK(to_string(Rational(38, 3)) == "38/3");
}

TEST_CASE("json round trip") {
  auto j = E1.to_json();
  auto back = ModelSpec::from_json(j);
  CHECK(back == E1);
  auto frac = ModelSpec(12, 3, 5, 2, Rational(7, 2), false);
  CHECK(ModelSpec::from_json(frac.to_json()) == frac);
}

TEST_CASE("column distance to A") {
  CHECK(E1.col_distance_to_A(0) == 0);
  CHECK(E1.col_distance_to_A(2) == 0);
  CHECK(E1.col_distance_to_A(3) == 1);   // first S1 column
  CHECK(E1.col_distance_to_A(4) == 2);
  CHECK(E1.col_distance_to_A(11) == 1);  // last S2 column
  CHECK(E1.col_distance_to_A(10) == 2);
}
