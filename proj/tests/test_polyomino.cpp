#include <doctest.h>

#include "opinion/polyomino.hpp"

using namespace opinion;

namespace {
Polyomino make(int N, std::initializer_list<std::pair<int, int>> cells) {
  std::vector<Site> v;
  for (auto [r, c] : cells) v.push_back({r, c});
  return Polyomino(N, v);
}
}  // namespace

TEST_CASE("perimeters of simple shapes") {
  auto cell = make(8, {{0, 0}});
  CHECK(cell.edge_perimeter() == 4);
  CHECK(cell.site_perimeter() == 4);

  auto domino = make(8, {{0, 0}, {0, 1}});
  CHECK(domino.edge_perimeter() == 6);
  CHECK(domino.site_perimeter() == 6);

  auto square3 = make(8, {{0, 0}, {0, 1}, {0, 2},
                          {1, 0}, {1, 1}, {1, 2},
                          {2, 0}, {2, 1}, {2, 2}});
  CHECK(square3.edge_perimeter() == 12);

  // Strip of width 2 on the torus: two full vertical contour cycles.
  std::vector<Site> strip;
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 2; ++c) strip.push_back({r, c});
  Polyomino p(8, strip);
  CHECK(p.edge_perimeter() == 16);
  CHECK(p.site_perimeter() == 16);
  CHECK(p.is_winding());

  std::vector<Site> strip1;
  for (int r = 0; r < 6; ++r) strip1.push_back({r, 3});
  Polyomino s1(6, strip1);
  CHECK(s1.site_perimeter() == 12);
}

TEST_CASE("translation-canonical equality") {
  auto a = make(8, {{0, 0}, {0, 1}, {1, 0}});
  auto b = make(8, {{5, 6}, {5, 7}, {6, 6}});
  CHECK(a == b);
  auto c = make(8, {{0, 0}, {0, 1}, {1, 1}});  // different orientation
  CHECK_FALSE(a == c);
  // Wrapping translate of the same shape.
  auto d = make(8, {{7, 7}, {7, 0}, {0, 7}});
  CHECK(a == d);
}

TEST_CASE("predicates: hole, convexity, concavity") {
  auto holed = make(8, {{0, 0}, {0, 1}, {0, 2},
                        {1, 0},         {1, 2},
                        {2, 0}, {2, 1}, {2, 2}});
  CHECK(holed.predicates().has_hole);
  CHECK_FALSE(holed.predicates().is_convex);

  auto ltromino = make(8, {{0, 0}, {1, 0}, {1, 1}});
  auto lp = ltromino.predicates();
  CHECK(lp.is_convex);
  CHECK_FALSE(lp.has_hole);
  CHECK(lp.concavities.empty());

  auto upent = make(8, {{0, 0}, {1, 0}, {1, 1}, {1, 2}, {0, 2}});
  auto up = upent.predicates();
  CHECK_FALSE(up.is_convex);
  REQUIRE(up.concavities.size() == 1);
  CHECK(up.concavities[0].cardinality == 1);
  CHECK(up.concavities[0].width == 1);
}

TEST_CASE("classification") {
  CHECK(make(8, {{0, 0}}).classify().kind == ShapeClass::QuasiSquareProt);
  auto sq = make(8, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  auto sc = sq.classify();
  CHECK(sc.kind == ShapeClass::QuasiSquareProt);
  CHECK(sc.q == 0);

  auto lt = make(8, {{0, 0}, {1, 0}, {1, 1}}).classify();
  CHECK(lt.kind == ShapeClass::QuasiSquareProt);  // 1x2 base + 1-protuberance
  CHECK(lt.q == 1);

  // 2x3 rectangle with a single protuberance on the long side.
  auto rp = make(8, {{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {1, 2}, {2, 1}});
  auto rc = rp.classify();
  CHECK(rc.kind == ShapeClass::QuasiSquareProt);
  CHECK(rc.l1 == 3);
  CHECK(rc.l2 == 2);
  CHECK(rc.q == 1);

  // 1x3 line = 1x2 quasi-square plus a full-length run on a side.
  auto line3 = make(8, {{0, 0}, {0, 1}, {0, 2}}).classify();
  CHECK(line3.kind == ShapeClass::QuasiSquareProt);
  CHECK(line3.q == 1);
  CHECK_FALSE(line3.irregular_prot);

  // 2x4 rectangle = 2x3 quasi-square plus a full-length 2-run.
  std::vector<Site> r24;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 4; ++c) r24.push_back({r, c});
  auto c24 = Polyomino(8, r24).classify();
  CHECK(c24.kind == ShapeClass::QuasiSquareProt);
  CHECK(c24.q == 2);
  CHECK_FALSE(c24.irregular_prot);

  // 2x5 rectangle: no straight-run decomposition with a quasi-square base,
  // but a 2x2 core with edge-connected remainder matches the loose reading.
  std::vector<Site> r25;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 5; ++c) r25.push_back({r, c});
  auto c25 = Polyomino(8, r25).classify();
  CHECK(c25.kind == ShapeClass::QuasiSquareProt);
  CHECK(c25.irregular_prot);

  // 1x5 line: no quasi-square core at all.
  auto line5 =
      make(8, {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {0, 4}}).classify();
  CHECK(line5.kind == ShapeClass::RectangleProt);

  // Torus minus a 2x2 block: a 2-strip plus one edge-connected 4-cell
  // protuberance under the loose reading.
  std::vector<Site> nearfull;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      if (!(r < 2 && c < 2)) nearfull.push_back({r, c});
  auto cnf = Polyomino(4, nearfull).classify();
  CHECK(cnf.kind == ShapeClass::StripProt);
  CHECK(cnf.l1 == 2);
  CHECK(cnf.q == 4);
  CHECK(cnf.irregular_prot);

  // Vertical strip with a 3-cell protuberance.
  std::vector<Site> sp;
  for (int r = 0; r < 8; ++r) sp.push_back({r, 2});
  for (int r = 3; r < 6; ++r) sp.push_back({r, 3});
  auto spc = Polyomino(8, sp).classify();
  CHECK(spc.kind == ShapeClass::StripProt);
  CHECK(spc.l1 == 1);
  CHECK(spc.q == 3);

  // Plus-pentomino has no quasi-square core.
  auto plus = make(8, {{0, 1}, {1, 0}, {1, 1}, {1, 2}, {2, 1}});
  CHECK(plus.classify().kind == ShapeClass::Other);
}

TEST_CASE("enumeration counts") {
  EnumerationCaps caps;
  auto shapes1 = enumerate_polyominoes(1, 6, caps);
  CHECK(shapes1.size() == 1);
  auto shapes2 = enumerate_polyominoes(2, 6, caps);
  CHECK(shapes2.size() == 2);
  auto shapes3 = enumerate_polyominoes(3, 6, caps);
  CHECK(shapes3.size() == 6);  // fixed trominoes
  auto shapes4 = enumerate_polyominoes(4, 6, caps);
  CHECK(shapes4.size() == 19);  // fixed tetrominoes
  auto shapes5 = enumerate_polyominoes(5, 8, caps);
  CHECK(shapes5.size() == 63);  // fixed pentominoes

  CHECK_THROWS_AS(enumerate_polyominoes(4, 16, caps), ResourceGuardError);
  CHECK_THROWS_AS(enumerate_polyominoes(13, 8, caps), ResourceGuardError);
}

TEST_CASE("minimal perimeter shapes") {
  // Winding area N: exactly the two 1-strips, perimeter 2N.
  for (int N : {4, 6}) {
    auto res = minimal_perimeter_shapes(N, N, true);
    CHECK(res.min_perimeter == 2 * N);
    CHECK(res.minimizers.size() == 2);  // vertical + horizontal
    for (const auto& cls : res.classes) {
      CHECK(cls.kind == ShapeClass::StripProt);
      CHECK(cls.q == 0);
    }
  }
  // Winding area N+1 on N=6: strips with a 1-protuberance, perimeter 2N+2.
  auto res7 = minimal_perimeter_shapes(7, 6, true);
  CHECK(res7.min_perimeter == 14);
  for (const auto& cls : res7.classes) {
    CHECK(cls.kind == ShapeClass::StripProt);
    CHECK(cls.q == 1);
  }
  // Non-winding area 6 on N=8: 2x3 quasi-squares, perimeter 10.
  auto res6 = minimal_perimeter_shapes(6, 8, false);
  CHECK(res6.min_perimeter == 10);
  CHECK(res6.minimizers.size() == 2);  // both orientations
  for (const auto& cls : res6.classes) {
    CHECK(cls.kind == ShapeClass::QuasiSquareProt);
    CHECK(cls.q == 0);
  }
}

TEST_CASE("protuberance removal drops edge perimeter by two") {
  auto res7 = minimal_perimeter_shapes(7, 6, true);
  for (size_t i = 0; i < res7.minimizers.size(); ++i) {
    const auto& p = res7.minimizers[i];
    REQUIRE(res7.classes[i].q == 1);
    // Remove the protuberance cell (the one with a single neighbor run off
    // the strip): brute force by trying to delete each cell and checking for
    // a clean strip.
    bool found = false;
    for (size_t j = 0; j < p.cells().size(); ++j) {
      auto cells = p.cells();
      cells.erase(cells.begin() + j);
      try {
        Polyomino q(6, cells);
        auto cls = q.classify();
        if (cls.kind == ShapeClass::StripProt && cls.q == 0) {
          CHECK(q.edge_perimeter() == p.edge_perimeter() - 2);
          found = true;
        }
      } catch (const std::invalid_argument&) {
        // removing an interior cell may disconnect; skip
      }
    }
    CHECK(found);
  }
}
