#include "doctest.h"
#include "fixtures.hpp"

#include <filesystem>
#include <fstream>

using namespace glitlab;
using repcat::Module;

namespace {

morita::MoritaContext golden_context(const algebra::AlgebraPtr& T) {
  return morita::build_triangular(T, T, morita::regular_bimodule(T));
}

}  // namespace

TEST_CASE("triangular ring over the golden algebra") {
  auto T = fixtures::golden_algebra();
  auto c = golden_context(T);
  CHECK(c.lambda->nvert() == 6);
  CHECK(c.lambda->dim() == 18);  // 6 + 6 + dim of the bimodule
  algebra::check_algebra(*c.lambda);
  CHECK(morita::validate_context(c).all_ok());
}

TEST_CASE("tuple round trip through the Morita ring") {
  auto T = fixtures::golden_algebra();
  auto c = golden_context(T);
  morita::TupleModule x = morita::tuple_from_T(c, fixtures::I2(T));
  Module l = morita::to_lambda(c, x);
  repcat::validate_module(l);
  morita::TupleModule back = morita::from_lambda(c, l);
  CHECK(back.A.dims == x.A.dims);
  CHECK(back.B.dims == x.B.dims);
  CHECK(morita::to_lambda(c, back).dims == l.dims);
}

TEST_CASE("tensor products with the regular bimodule") {
  auto T = fixtures::golden_algebra();
  auto c = golden_context(T);
  // M = T as bimodule: M (x) A = A as a space
  Module a = fixtures::I2(T);
  morita::TensorResult r = morita::tensor_over(c.M, a);
  CHECK(r.mod.total_dim() == a.total_dim());
  // tensoring a projective stays projective
  morita::TensorResult rp =
      morita::tensor_over(c.M, repcat::projective_module(T, 0));
  CHECK(repcat::is_projective(rp.mod));
}

TEST_CASE("projective tuples are the projectives of the ring") {
  auto T = fixtures::golden_algebra();
  auto c = golden_context(T);
  for (int v = 0; v < 3; ++v) {
    Module p = morita::to_lambda(c, morita::tuple_projective(c, true, v));
    CHECK(repcat::is_projective(p));
    Module q = morita::to_lambda(c, morita::tuple_projective(c, false, v));
    CHECK(repcat::is_projective(q));
  }
}

TEST_CASE("golden phi over the triangular ring") {
  auto T = fixtures::golden_algebra();
  auto c = golden_context(T);
  Module x = repcat::direct_sum(fixtures::S1(T), fixtures::I2(T));
  krull::ClassRegistry reg;
  reg.seed = 5;
  itfun::Engine e(reg);
  CHECK(e.phi(morita::to_lambda(c, morita::tuple_from_T(c, x))) == 3);
}

TEST_CASE("golden third-syzygy isomorphism and level-2 obstruction") {
  auto T = fixtures::golden_algebra();
  auto c = golden_context(T);
  Module ls1 = morita::to_lambda(c, morita::tuple_from_T(c, fixtures::S1(T)));
  Module li2 = morita::to_lambda(c, morita::tuple_from_T(c, fixtures::I2(T)));
  Module pad = morita::to_lambda(
      c, morita::tuple_from_U(c, repcat::projective_module(T, 2)));

  Module lhs3 = repcat::syzygy_power(ls1, 3);
  Module rhs3 = repcat::direct_sum(repcat::syzygy_power(li2, 3), pad);
  CHECK(krull::iso_test(lhs3, rhs3, 7).iso);

  // at level 2 no projective padding of either side makes them isomorphic
  Module lhs2 = repcat::syzygy_power(ls1, 2);
  Module rhs2 = repcat::direct_sum(repcat::syzygy_power(li2, 2), pad);
  CHECK_FALSE(krull::iso_test(lhs2, rhs2, 7).iso);
  for (int v = 0; v < c.lambda->nvert(); ++v) {
    Module p = repcat::projective_module(c.lambda, v);
    CHECK_FALSE(krull::iso_test(repcat::direct_sum(lhs2, p), rhs2, 7).iso);
    CHECK_FALSE(krull::iso_test(lhs2, repcat::direct_sum(rhs2, p), 7).iso);
  }
}

TEST_CASE("closed-form syzygy matches the generic one") {
  auto T = fixtures::golden_algebra();
  auto c = golden_context(T);
  for (const Module& a : {fixtures::S1(T), fixtures::I2(T), fixtures::S2(T)}) {
    morita::TupleModule x = morita::tuple_from_T(c, a);
    morita::TupleModule s = morita::tuple_syzygy(c, x, 9);  // audits internally
    morita::validate_tuple(c, s);
  }
  morita::TupleModule y = morita::tuple_from_U(c, fixtures::S3(T));
  morita::validate_tuple(c, morita::tuple_syzygy(c, y, 9));
}

TEST_CASE("splitting the ring recovers the corners") {
  auto T = fixtures::golden_algebra();
  auto c = golden_context(T);
  morita::MoritaContext back = morita::split_context(c.lambda, {0, 1, 2});
  CHECK(back.T->dim() == T->dim());
  CHECK(back.U->dim() == T->dim());
  CHECK(back.M.total_dim() == c.M.total_dim());
  CHECK(back.N.total_dim() == 0);
  CHECK(morita::validate_context(back).all_ok());
}

TEST_CASE("tensor with a path algebra, flat against tower") {
  auto T = fixtures::golden_algebra();
  algebra::Quiver q;
  q.vertices = {"1", "2"};
  q.arrows = {{"e", 0, 1}};
  morita::TensorPathResult r = morita::build_tensor_path(T, q);
  CHECK(r.flat->dim() == 18);
  CHECK(r.flat->nvert() == 6);
  REQUIRE(r.tower.size() == 1);
  CHECK(r.tower[0].lambda->dim() == r.flat->dim());
  CHECK(morita::validate_context(r.tower[0]).all_ok());

  algebra::Quiver cyc;
  cyc.vertices = {"1"};
  cyc.arrows = {{"l", 0, 0}};
  CHECK_THROWS(morita::build_tensor_path(T, cyc));
}

TEST_CASE("context and tuple files round trip") {
  auto T = fixtures::golden_algebra();
  auto c = golden_context(T);
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "glitlab_morita_test";
  fs::create_directories(dir);
  {
    std::ofstream o(dir / "T.alg");
    o << fixtures::kGoldenText;
  }
  {
    std::ofstream o(dir / "ctx.txt");
    o << morita::format_context(c, "T.alg", "T.alg");
  }
  morita::MoritaContext back =
      morita::parse_context_file((dir / "ctx.txt").string());
  CHECK(back.lambda->dim() == c.lambda->dim());
  CHECK(morita::validate_context(back).all_ok());

  morita::TupleModule x = morita::tuple_from_T(back, fixtures::I2(back.T));
  morita::TupleModule x2 =
      morita::parse_tuple(morita::format_tuple(x, back, "ctx.txt"), back);
  CHECK(morita::to_lambda(back, x2).dims == morita::to_lambda(back, x).dims);
}
