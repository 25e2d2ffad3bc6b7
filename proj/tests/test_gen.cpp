#include "doctest.h"
#include "glitlab/gen.hpp"

using namespace glitlab;
using repcat::Module;

TEST_CASE("generation is deterministic in the seed") {
  exactlin::FieldSpec F(101);
  gen::Rng r1(77), r2(77);
  for (int i = 0; i < 10; ++i) {
    auto a1 = gen::random_algebra(r1, F);
    auto a2 = gen::random_algebra(r2, F);
    CHECK(a1->dim() == a2->dim());
    CHECK(a1->nvert() == a2->nvert());
    Module m1 = gen::random_module(r1, a1);
    Module m2 = gen::random_module(r2, a2);
    CHECK(m1.dims == m2.dims);
    for (size_t g = 0; g < m1.act.size(); ++g) CHECK(m1.act[g] == m2.act[g]);
  }
}

TEST_CASE("random algebras and modules are valid and bounded") {
  exactlin::FieldSpec F(101);
  gen::Rng rng(3);
  for (int i = 0; i < 25; ++i) {
    auto a = gen::random_algebra(rng, F);
    algebra::check_algebra(*a);
    CHECK(a->dim() <= 24);
    CHECK(a->nvert() <= 4);
    Module m = gen::random_module(rng, a);
    repcat::validate_module(m);
    CHECK_FALSE(m.is_zero());
    CHECK(m.total_dim() <= 24);
  }
}

TEST_CASE("random bimodules are projective on both sides") {
  exactlin::FieldSpec F(101);
  gen::Rng rng(9);
  for (int i = 0; i < 10; ++i) {
    auto t = gen::random_algebra(rng, F, 3, 4, 12);
    auto u = gen::random_algebra(rng, F, 3, 4, 12);
    morita::Bimodule m = gen::random_projective_bimodule(rng, t, u);
    morita::validate_bimodule(m);  // also validates both one-sided modules
    if (m.is_zero()) continue;
    CHECK(repcat::is_projective(morita::underlying_left(m)));
    CHECK(repcat::is_projective(
        morita::underlying_right(m, algebra::opposite(t))));
  }
}

TEST_CASE("random contexts validate and produce valid tuples") {
  exactlin::FieldSpec F(101);
  gen::Rng rng(14);
  int both_sides = 0;
  for (int i = 0; i < 8; ++i) {
    morita::MoritaContext c = gen::random_context(rng, F);
    CHECK(morita::validate_context(c).all_ok());
    algebra::check_algebra(*c.lambda);
    if (!c.N.is_zero() && !c.M.is_zero()) ++both_sides;
    for (int j = 0; j < 2; ++j) {
      morita::TupleModule x = gen::random_tuple(rng, c);
      morita::validate_tuple(c, x);
      repcat::validate_module(morita::to_lambda(c, x));
    }
  }
  // the generator must exercise genuinely two-sided contexts sometimes
  CHECK(both_sides > 0);
}

TEST_CASE("other field moduli work") {
  exactlin::FieldSpec F(2);
  gen::Rng rng(5);
  for (int i = 0; i < 5; ++i) {
    auto a = gen::random_algebra(rng, F);
    algebra::check_algebra(*a);
    Module m = gen::random_module(rng, a);
    repcat::validate_module(m);
  }
}
