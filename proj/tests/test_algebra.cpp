#include "doctest.h"
#include "fixtures.hpp"

using namespace glitlab;

TEST_CASE("golden algebra builds with the expected basis") {
  auto T = fixtures::golden_algebra();
  algebra::check_algebra(*T);
  CHECK(T->nvert() == 3);
  // e1, e2, e3, a, b, c
  CHECK(T->dim() == 6);
  // the two-step path b*c dies, a*b dies, a*a dies
  int b = T->presentation->quiver.arrow_index("b");
  CHECK(b >= 0);
}

TEST_CASE("acyclic quiver with no relations counts paths") {
  algebra::Quiver q;
  q.vertices = {"1", "2", "3"};
  q.arrows = {{"u", 0, 1}, {"v", 1, 2}};
  exactlin::FieldSpec F(101);
  // paths: e1,e2,e3,u,v,uv
  auto a = algebra::build_bound_quiver_algebra(q, {}, 3, F);
  CHECK(a->dim() == 6);
  algebra::check_algebra(*a);
}

TEST_CASE("inadmissible ideals are rejected") {
  // nilpotency 2 with no relations leaves the loop alive at length 2
  CHECK_THROWS_AS(algebra::parse_algebra("field 101\nvertices 1\narrow x 1 1\n"
                                         "nilpotency 2\nrelations\n"),
                  algebra::ValidationError);
}

TEST_CASE("opposite is an involution on dimensions and grading") {
  auto T = fixtures::golden_algebra();
  auto op = algebra::opposite(T);
  algebra::check_algebra(*op);
  CHECK(op->dim() == T->dim());
  auto opop = algebra::opposite(op);
  CHECK(opop->dim() == T->dim());
  for (int i = 0; i < T->dim(); ++i) {
    CHECK(T->basis[i].src == op->basis[i].tgt);
    CHECK(T->basis[i].tgt == op->basis[i].src);
  }
}

TEST_CASE("format and reparse round trip") {
  auto T = fixtures::golden_algebra();
  auto T2 = algebra::parse_algebra(algebra::format_algebra(*T), "T2");
  CHECK(T2->dim() == T->dim());
  CHECK(T2->nvert() == T->nvert());
  for (int i = 0; i < T->dim(); ++i) {
    CHECK(T2->basis[i].src == T->basis[i].src);
    CHECK(T2->basis[i].tgt == T->basis[i].tgt);
  }
}

TEST_CASE("skew-commuting square-zero algebra on three loops") {
  auto e3 = fixtures::exterior3();
  algebra::check_algebra(*e3);
  // 1, x, y, z, xy, xz, yz, xyz
  CHECK(e3->dim() == 8);
}

TEST_CASE("parse errors carry line numbers") {
  CHECK_THROWS_AS(algebra::parse_algebra("field 101\nvertices 1\narrow x 9 1\n"
                                         "nilpotency 1\n"),
                  algebra::ParseError);
}
