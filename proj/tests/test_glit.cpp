#include "doctest.h"
#include "fixtures.hpp"

#include <filesystem>
#include <fstream>

using namespace glitlab;
using glit::GlitWitness;
using repcat::Module;

namespace {

// V = the algebra itself, D = the syzygy-closed classes of the sample syzygies
GlitWitness base_witness(itfun::Engine& e, const algebra::AlgebraPtr& a,
                         const std::vector<Module>& family) {
  GlitWitness w;
  w.alg = a;
  w.n = 0;
  w.t = 1;
  w.V = {glit::regular_module(a)};
  std::vector<Module> syz;
  for (const Module& m : family)
    if (!repcat::syzygy(m).is_zero()) syz.push_back(repcat::syzygy(m));
  w.D = glit::saturate_class(e, syz, 1);
  w.phidim_D = w.D.empty() ? 0 : e.phidim_add(w.D);
  return w;
}

}  // namespace

TEST_CASE("base witness verifies and bounds the golden family") {
  auto T = fixtures::golden_algebra();
  krull::ClassRegistry reg;
  reg.seed = 5;
  itfun::Engine e(reg);
  std::vector<Module> family{fixtures::S1(T), fixtures::I2(T), fixtures::S2(T),
                             fixtures::S3(T)};
  GlitWitness w = base_witness(e, T, {fixtures::S1(T)});
  CHECK(w.D.size() == 2);  // classes of S1 and S2

  glit::Report rep = glit::verify_witness(e, w, family);
  CHECK(rep.all_ok());
  CHECK(rep.scope.find("family-level") != std::string::npos);

  glit::FindimBound b = glit::findim_bound(e, w, family);
  CHECK(b.bound == 3);
  CHECK_FALSE(b.tainted);
  REQUIRE(b.audit.size() == 4);
  CHECK(b.audit[0].pd == "infinite");
  CHECK(b.audit[1].pd == "infinite");
  CHECK(b.audit[2].pd == "1");
  CHECK(b.audit[3].pd == "0");
  for (const auto& s : b.audit) CHECK(s.ok);
}

TEST_CASE("index shift keeps the witness valid") {
  auto T = fixtures::golden_algebra();
  krull::ClassRegistry reg;
  reg.seed = 5;
  itfun::Engine e(reg);
  GlitWitness w = base_witness(e, T, {fixtures::S1(T)});
  GlitWitness s = glit::shift_witness(e, w, 2);
  CHECK(s.n == 2);
  CHECK(s.V.size() == 1);  // the shifted regular module dies, the regular stays
  CHECK(s.D.size() == 2);
  CHECK(s.phidim_D_bound == 1);
  glit::Report rep = glit::verify_witness(
      e, s, {fixtures::S1(T), fixtures::I2(T), fixtures::S2(T)});
  CHECK(rep.all_ok());
}

TEST_CASE("approximation covers") {
  auto T = fixtures::golden_algebra();
  krull::ClassRegistry reg;
  reg.seed = 5;
  itfun::Engine e(reg);
  Module s2 = fixtures::S2(T);
  // target already in add(W): the identity sequence with zero kernel
  glit::CoverResult hit = glit::approx_cover(e, s2, {s2}, {});
  CHECK(hit.found);
  CHECK(hit.ses.x1.total_dim() == 0);
  // no morphisms S3 -> S1 at all
  glit::CoverResult miss = glit::approx_cover(e, fixtures::S1(T),
                                              {fixtures::S3(T)}, {});
  CHECK_FALSE(miss.found);
  CHECK(miss.diagnosis == "not surjective");
}

TEST_CASE("self-covering over the dual numbers") {
  auto kx = algebra::parse_algebra(
      "field 101\nvertices 1\narrow x 1 1\nnilpotency 2\nrelations\nx*x\n",
      "KX");
  Module s{kx, {1}, {exactlin::Mat(1, 1)}};
  krull::ClassRegistry reg;
  reg.seed = 9;
  itfun::Engine e(reg);
  glit::CoverResult c = glit::approx_cover(e, s, {s}, {});
  CHECK(c.found);
  GlitWitness w;
  w.alg = kx;
  w.n = 0;
  w.t = 1;
  w.D = {s};
  GlitWitness ws = glit::shift_witness(e, w, 1);
  REQUIRE(ws.D.size() == 1);  // Omega S = S
  CHECK(ws.D[0].total_dim() == 1);
}

TEST_CASE("special witness of the finite-pd subfamily") {
  auto T = fixtures::golden_algebra();
  krull::ClassRegistry reg;
  reg.seed = 5;
  itfun::Engine e(reg);
  std::vector<Module> fam{fixtures::S2(T), fixtures::S3(T)};
  glit::FinitudeFilter f = glit::filter_finite(e, fam);
  CHECK(f.members.size() == 2);
  CHECK(f.pds == std::vector<int>{1, 0});

  GlitWitness sw = glit::special_glit_witness(e, fam);
  CHECK(sw.n == 0);
  CHECK(sw.t == 1);
  CHECK(sw.V.empty());
  CHECK(sw.D.size() == 4);
  CHECK(glit::verify_witness(e, sw, fam).all_ok());

  // a family with an infinite-pd member is rejected by the filter only
  glit::FinitudeFilter g = glit::filter_finite(e, {fixtures::S1(T), fixtures::S2(T)});
  CHECK(g.members.size() == 1);
}

TEST_CASE("assembling over the triangular ring and restricting back") {
  auto T = fixtures::golden_algebra();
  morita::MoritaContext c =
      morita::build_triangular(T, T, morita::regular_bimodule(T));
  krull::ClassRegistry regT, regU, regL;
  regT.seed = 5;
  regU.seed = 6;
  regL.seed = 7;
  itfun::Engine eT(regT), eU(regU), eL(regL);

  GlitWitness wT = base_witness(eT, T, {fixtures::S1(T), fixtures::I2(T),
                                        fixtures::S2(T)});
  GlitWitness wU = base_witness(eU, T, {fixtures::S1(T), fixtures::S3(T)});
  GlitWitness wL = glit::assemble_morita_witness(c, eL, eT, wT, eU, wU);
  CHECK(wL.n == 1);
  CHECK(wL.t == 1);
  CHECK(wL.V.size() == 2);
  CHECK(wL.D.size() == 4);
  CHECK(wL.phidim_D == 1);

  std::vector<Module> samples;
  samples.push_back(morita::to_lambda(
      c, morita::tuple_from_T(c, repcat::direct_sum(fixtures::S1(T),
                                                    fixtures::I2(T)))));
  samples.push_back(morita::to_lambda(c, morita::tuple_from_T(c, fixtures::S2(T))));
  samples.push_back(morita::to_lambda(c, morita::tuple_from_U(c, fixtures::S3(T))));
  samples.push_back(morita::to_lambda(c, morita::tuple_projective(c, true, 0)));
  CHECK(glit::verify_witness(eL, wL, samples).all_ok());

  glit::FindimBound b = glit::findim_bound(eL, wL, samples);
  CHECK(b.bound == 4);
  REQUIRE(b.audit.size() == 4);
  CHECK(b.audit[0].pd == "infinite");
  CHECK(b.audit[1].pd == "2");
  CHECK(b.audit[2].pd == "0");
  CHECK(b.audit[3].pd == "0");

  auto [rT, rU] = glit::restrict_witness(c, eL, wL, eT, eU);
  CHECK(rT.V.size() == 1);
  CHECK(rT.D.size() == 2);
  CHECK(glit::verify_witness(eT, rT, {fixtures::S1(T), fixtures::S2(T),
                                      fixtures::S3(T), fixtures::I2(T)})
            .all_ok());
  CHECK(glit::verify_witness(eU, rU, {fixtures::S1(T), fixtures::S3(T)}).all_ok());
}

TEST_CASE("witness files round trip") {
  auto T = fixtures::golden_algebra();
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "glitlab_glit_test";
  fs::create_directories(dir);
  {
    std::ofstream o(dir / "T.alg");
    o << fixtures::kGoldenText;
  }
  {
    std::ofstream o(dir / "v0.mod");
    o << repcat::format_module(fixtures::S2(T), "T.alg");
  }
  {
    std::ofstream o(dir / "d0.mod");
    o << repcat::format_module(fixtures::S3(T), "T.alg");
  }
  GlitWitness w;
  w.alg = T;
  w.n = 1;
  w.t = 2;
  w.V = {fixtures::S2(T)};
  w.D = {fixtures::S3(T)};
  {
    std::ofstream o(dir / "wit.txt");
    o << glit::format_witness(w, {"v0.mod"}, {"d0.mod"});
  }
  GlitWitness back = glit::parse_witness_file((dir / "wit.txt").string());
  CHECK(back.n == 1);
  CHECK(back.t == 2);
  REQUIRE(back.V.size() == 1);
  REQUIRE(back.D.size() == 1);
  CHECK(back.V[0].dims == fixtures::S2(T).dims);
  CHECK(back.D[0].dims == fixtures::S3(T).dims);
}
