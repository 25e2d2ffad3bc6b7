#include "doctest.h"
#include "fixtures.hpp"

#include <random>

using namespace glitlab;
using exactlin::Mat;
using repcat::Module;

namespace {

// conjugate every vertex space by a random invertible change of basis
Module shuffle_basis(const Module& m, std::uint64_t seed) {
  const exactlin::FieldSpec& F = m.alg->field;
  std::mt19937_64 rng(seed);
  std::vector<Mat> g, ginv;
  for (int d : m.dims) {
    Mat x;
    std::optional<Mat> inv;
    do {
      x = Mat(d, d);
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) x.at(r, c) = (std::uint32_t)(rng() % F.p);
      inv = exactlin::inverse(F, x);
    } while (!inv);
    g.push_back(x);
    ginv.push_back(*inv);
  }
  Module out = m;
  for (size_t k = 0; k < m.act.size(); ++k) {
    int s = m.alg->gens[k].src, t = m.alg->gens[k].tgt;
    out.act[k] = exactlin::mul(F, g[t], exactlin::mul(F, m.act[k], ginv[s]));
  }
  repcat::validate_module(out);
  return out;
}

}  // namespace

TEST_CASE("iso test accepts basis changes and rejects different modules") {
  auto T = fixtures::golden_algebra();
  Module i2 = fixtures::I2(T);
  for (std::uint64_t s = 1; s <= 5; ++s) {
    auto r = krull::iso_test(i2, shuffle_basis(i2, s), s);
    CHECK(r.iso);
    // the witness really is an isomorphism of modules
    REQUIRE(r.witness.size() == i2.dims.size());
  }
  CHECK_FALSE(krull::iso_test(i2, fixtures::S1(T), 3).iso);
  // same dimension vector, different action: S1+S2 vs I2
  Module split = repcat::direct_sum(fixtures::S1(T), fixtures::S2(T));
  CHECK_FALSE(krull::iso_test(i2, split, 3).iso);
}

TEST_CASE("splitting a decomposable module") {
  auto T = fixtures::golden_algebra();
  Module sum = repcat::direct_sum(fixtures::S1(T), fixtures::S2(T));
  auto r = krull::split_once(sum, 7);
  CHECK(r.split);
  CHECK(r.summand.total_dim() + r.complement.total_dim() == sum.total_dim());
}

TEST_CASE("indecomposables certify locality") {
  auto T = fixtures::golden_algebra();
  auto r = krull::split_once(fixtures::I2(T), 7);
  CHECK_FALSE(r.split);
  CHECK(r.certified_local);
}

TEST_CASE("full decomposition with multiplicities") {
  auto T = fixtures::golden_algebra();
  Module x = repcat::direct_sum(
      {fixtures::S1(T), fixtures::I2(T), fixtures::S1(T), fixtures::S2(T)});
  krull::ClassRegistry reg;
  reg.seed = 11;
  auto d = krull::decompose(x, reg);
  int total = 0, mults = 0;
  for (auto [id, m] : d.summands) {
    total += m * reg.entries[id].rep.total_dim();
    mults += m;
  }
  CHECK(total == x.total_dim());
  CHECK(mults == 4);
  CHECK(d.summands.size() == 3);  // three distinct classes
}

TEST_CASE("registry ids are stable across repeated decompositions") {
  auto T = fixtures::golden_algebra();
  krull::ClassRegistry reg;
  reg.seed = 19;
  Module i2 = fixtures::I2(T);
  auto d1 = krull::decompose(i2, reg);
  auto d2 = krull::decompose(shuffle_basis(i2, 3), reg);
  REQUIRE(d1.summands.size() == 1);
  REQUIRE(d2.summands.size() == 1);
  CHECK(d1.summands[0].first == d2.summands[0].first);
  CHECK(reg.size() == 1);
}

TEST_CASE("registry dump and reload") {
  auto T = fixtures::golden_algebra();
  krull::ClassRegistry reg;
  reg.seed = 23;
  krull::decompose(repcat::direct_sum(fixtures::S1(T), fixtures::I2(T)), reg);
  std::string text = krull::dump_registry(reg, "unused.alg");
  krull::ClassRegistry back = krull::load_registry(text, T);
  REQUIRE(back.size() == reg.size());
  for (int i = 0; i < reg.size(); ++i) {
    CHECK(back.entries[i].projective == reg.entries[i].projective);
    CHECK(back.entries[i].rep.dims == reg.entries[i].rep.dims);
  }
}
