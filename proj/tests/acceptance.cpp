// End-to-end acceptance gate: one pass/fail line per criterion, exit code 0
// only when every criterion holds. Counts and time limits are part of the
// contract, so each line also reports the wall time.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "glitlab/gen.hpp"
#include "glitlab/glit.hpp"

using namespace glitlab;
using repcat::Module;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void criterion(int num, const std::string& what,
               const std::function<std::string()>& body) {
  auto t0 = Clock::now();
  std::string err;
  try {
    err = body();
  } catch (const std::exception& ex) {
    err = std::string("exception: ") + ex.what();
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (err.empty()) {
    std::printf("criterion %2d: PASS  %-46s (%.1fs)\n", num, what.c_str(),
                secs);
  } else {
    ++g_failures;
    std::printf("criterion %2d: FAIL  %-46s (%.1fs)  %s\n", num, what.c_str(),
                secs, err.c_str());
  }
  std::fflush(stdout);
}

std::string check_time(double secs, double limit) {
  if (secs <= limit) return "";
  std::ostringstream ss;
  ss << "took " << secs << "s, limit " << limit << "s";
  return ss.str();
}

krull::ClassRegistry fresh_registry(std::uint64_t seed) {
  krull::ClassRegistry reg;
  reg.seed = seed;
  return reg;
}

// the witness shape used throughout: V = the regular module, D = the
// 1-syzygy closure of the nonzero syzygies of the family
glit::GlitWitness family_witness(itfun::Engine& e, const algebra::AlgebraPtr& a,
                                 const std::vector<Module>& family) {
  glit::GlitWitness w;
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

std::string run_batch(int count, std::uint64_t seed0,
                      const std::function<std::string(std::uint64_t)>& one) {
  for (int i = 0; i < count; ++i) {
    std::string err = one(seed0 + (std::uint64_t)i);
    if (!err.empty())
      return "instance " + std::to_string(i) + ": " + err;
  }
  return "";
}

std::string golden_values() {
  auto T = fixtures::golden_algebra();
  auto reg = fresh_registry(5);
  itfun::Engine e(reg);
  Module x = repcat::direct_sum(fixtures::S1(T), fixtures::I2(T));
  if (e.phi(x) != 2) return "phi over the corner algebra != 2";

  auto c = morita::build_triangular(T, T, morita::regular_bimodule(T));
  auto regL = fresh_registry(7);
  itfun::Engine eL(regL);
  Module lx = morita::to_lambda(c, morita::tuple_from_T(c, x));
  if (eL.phi(lx) != 3) return "phi over the triangular ring != 3";
  return "";
}

std::string golden_ranks() {
  auto T = fixtures::golden_algebra();
  auto reg = fresh_registry(5);
  itfun::Engine e(reg);
  Module x = repcat::direct_sum(fixtures::S1(T), fixtures::I2(T));
  auto r = e.phi_detail(x);
  if (r.rank_trace.size() < 3) return "rank trace too short";
  if (r.rank_trace[1] != 2) return "rank at syzygy level 1 != 2";
  for (size_t m = 2; m < r.rank_trace.size(); ++m)
    if (r.rank_trace[m] != 1)
      return "rank at syzygy level " + std::to_string(m) + " != 1";
  return "";
}

std::string golden_iso() {
  auto T = fixtures::golden_algebra();
  auto c = morita::build_triangular(T, T, morita::regular_bimodule(T));
  Module ls1 = morita::to_lambda(c, morita::tuple_from_T(c, fixtures::S1(T)));
  Module li2 = morita::to_lambda(c, morita::tuple_from_T(c, fixtures::I2(T)));
  Module pad = morita::to_lambda(
      c, morita::tuple_from_U(c, repcat::projective_module(T, 2)));

  Module lhs3 = repcat::syzygy_power(ls1, 3);
  Module rhs3 = repcat::direct_sum(repcat::syzygy_power(li2, 3), pad);
  auto iso = krull::iso_test(lhs3, rhs3, 7);
  if (!iso.iso) return "third syzygies not isomorphic";
  if (iso.witness.size() != lhs3.dims.size())
    return "isomorphism witness missing";

  Module lhs2 = repcat::syzygy_power(ls1, 2);
  Module rhs2 = repcat::direct_sum(repcat::syzygy_power(li2, 2), pad);
  if (krull::iso_test(lhs2, rhs2, 7).iso)
    return "second syzygies unexpectedly isomorphic";
  for (int v = 0; v < c.lambda->nvert(); ++v) {
    Module p = repcat::projective_module(c.lambda, v);
    if (krull::iso_test(repcat::direct_sum(lhs2, p), rhs2, 7).iso ||
        krull::iso_test(lhs2, repcat::direct_sum(rhs2, p), 7).iso)
      return "level-2 padding by projective " + std::to_string(v) +
             " gave an isomorphism";
  }
  return "";
}

std::string huard_instance(std::uint64_t seed) {
  exactlin::FieldSpec F(101);
  gen::Rng rng(seed);
  auto a = gen::random_algebra(rng, F);
  Module x = gen::random_module(rng, a);
  Module ox = repcat::syzygy(x);
  auto reg = fresh_registry(seed + 100);
  itfun::Engine e(reg);
  if (e.phi(x) > e.phi(ox) + 1) return "phi(X) > phi(OX) + 1";
  itfun::Bound sx = e.psi(x), sox = e.psi(ox);
  if (!sx.tainted && !sox.tainted && sx.value > sox.value + 1)
    return "psi(X) > psi(OX) + 1";
  return "";
}

std::string phi_basic_instance(std::uint64_t seed) {
  exactlin::FieldSpec F(101);
  gen::Rng rng(seed);
  auto a = gen::random_algebra(rng, F);
  Module x = gen::random_module(rng, a);
  Module y = gen::random_module(rng, a);
  Module p = repcat::projective_module(a, (int)(rng() % a->nvert()));
  auto reg = fresh_registry(seed + 200);
  itfun::Engine e(reg);
  int px = e.phi(x);
  if (e.phi(repcat::direct_sum(x, x)) != px) return "phi(X+X) != phi(X)";
  if (e.phi(repcat::direct_sum(x, p)) != px) return "phi(X+P) != phi(X)";
  if (px > e.phi(repcat::direct_sum(x, y))) return "phi(X) > phi(X+Y)";
  auto pd = e.pd(x);
  if (pd.tag == itfun::PdResult::Finite && px != pd.value)
    return "finite pd but phi != pd";
  return "";
}

std::string rel_phi_instance(std::uint64_t seed) {
  exactlin::FieldSpec F(101);
  gen::Rng rng(seed);
  auto a = gen::random_algebra(rng, F);
  Module seed_mod = gen::random_module(rng, a);
  Module x = gen::random_module(rng, a);
  auto reg = fresh_registry(seed + 300);
  itfun::Engine e(reg);
  std::vector<Module> gens =
      glit::saturate_class(e, {repcat::syzygy(seed_mod)}, 1);
  itfun::ClassDescriptor d;
  d.t = 1;
  for (const auto& g : gens)
    for (auto [id, mult] : krull::decompose(g, reg).summands)
      if (!reg.entries[id].projective) d.generators.push_back(id);
  std::sort(d.generators.begin(), d.generators.end());
  d.generators.erase(std::unique(d.generators.begin(), d.generators.end()),
                     d.generators.end());
  e.check_descriptor(d);

  int rel = e.phi_rel(x, d);
  if (!gens.empty()) {
    Module with = repcat::direct_sum(x, repcat::direct_sum(gens));
    if (e.phi_rel(with, d) != rel)
      return "relative phi changed under adding descriptor modules";
  }
  int pdD = gens.empty() ? 0 : e.phidim_add(gens);
  if (e.phi(x) > rel + pdD) return "phi(X) > phi_[D](X) + phidim(D)";
  return "";
}

std::string morita_instance(std::uint64_t seed) {
  exactlin::FieldSpec F(101);
  gen::Rng rng(seed);
  morita::MoritaContext c = gen::random_context(rng, F);
  std::vector<morita::TupleModule> samples;
  for (int k = 0; k < 3; ++k) samples.push_back(gen::tame_tuple(rng, c));
  // corner samples, skipped when their resolutions explode past desk scale
  for (int side = 0; side < 2; ++side)
    for (int t = 0; t < 10; ++t) {
      morita::TupleModule s =
          side == 0
              ? morita::tuple_from_T(c, gen::random_module(rng, c.T, 12))
              : morita::tuple_from_U(c, gen::random_module(rng, c.U, 12));
      if (gen::tame_chain(c, s)) {
        samples.push_back(std::move(s));
        break;
      }
    }
  samples.push_back(morita::tuple_projective(c, true, 0));
  morita::BatteryReport rep =
      morita::phi_bound_battery(c, samples, seed, itfun::Budget{});
  if (!rep.all_ok()) {
    for (const auto& ch : rep.checks)
      if (!ch.ok) return ch.name + " (" + ch.detail + ")";
    return "battery failed";
  }
  return "";
}

std::string assemble_instance(std::uint64_t seed) {
  exactlin::FieldSpec F(101);
  gen::Rng rng(seed);
  morita::MoritaContext c = gen::random_context(rng, F);
  auto regT = fresh_registry(seed + 1), regU = fresh_registry(seed + 2),
       regL = fresh_registry(seed + 3);
  itfun::Engine eT(regT), eU(regU), eL(regL);

  // corner families with desk-scale resolutions over the Morita ring
  auto draw_corner = [&](bool row) {
    for (int t = 0; t < 10; ++t) {
      Module m = gen::random_module(rng, row ? c.T : c.U, 12);
      morita::TupleModule s =
          row ? morita::tuple_from_T(c, m) : morita::tuple_from_U(c, m);
      if (gen::tame_chain(c, s)) return m;
    }
    return repcat::projective_module(row ? c.T : c.U, 0);
  };
  std::vector<Module> famT{draw_corner(true), draw_corner(true)};
  std::vector<Module> famU{draw_corner(false), draw_corner(false)};
  glit::GlitWitness wT = family_witness(eT, c.T, famT);
  glit::GlitWitness wU = family_witness(eU, c.U, famU);
  glit::GlitWitness wL = glit::assemble_morita_witness(c, eL, eT, wT, eU, wU);

  // tuple modules drawn from the families the corner witnesses certify:
  // random additive combinations of row and column pieces
  std::vector<Module> samples;
  for (int k = 0; k < 8; ++k) {
    Module m = morita::to_lambda(
        c, morita::tuple_from_T(c, famT[rng() % famT.size()]));
    Module n = morita::to_lambda(
        c, morita::tuple_from_U(c, famU[rng() % famU.size()]));
    samples.push_back(repcat::direct_sum(m, n));
  }
  for (const Module& m : famT)
    samples.push_back(morita::to_lambda(c, morita::tuple_from_T(c, m)));
  for (const Module& m : famU)
    samples.push_back(morita::to_lambda(c, morita::tuple_from_U(c, m)));

  glit::Report rep = glit::verify_witness(eL, wL, samples);
  if (!rep.all_ok()) {
    for (const auto& ch : rep.checks)
      if (!ch.ok) return "assembled witness: " + ch.name;
    return "assembled witness failed";
  }
  glit::FindimBound b = glit::findim_bound(eL, wL, samples);
  for (const auto& s : b.audit)
    if (!s.ok)
      return "findim audit failed at sample " + std::to_string(s.index);

  auto [rT, rU] = glit::restrict_witness(c, eL, wL, eT, eU);
  if (!glit::verify_witness(eT, rT, famT).all_ok())
    return "restricted witness failed on the row corner";
  if (!glit::verify_witness(eU, rU, famU).all_ok())
    return "restricted witness failed on the column corner";
  return "";
}

// the two-vertex path algebra with one arrow, and the same category presented
// as the triangular ring over two copies of the ground field
std::string two_point_cross_validation() {
  auto pt = fixtures::point_algebra(101);
  auto c = morita::build_triangular(pt, pt, morita::regular_bimodule(pt));
  auto a2 = algebra::parse_algebra(
      "field 101\nvertices 1 2\narrow a 1 2\nnilpotency 2\nrelations\n", "A2");
  if (c.lambda->nvert() != 2 || a2->nvert() != 2)
    return "unexpected vertex counts";

  // the three indecomposables, by dimension vector (the arrow acts by 1 on
  // the two-dimensional one)
  auto modules_of = [](const algebra::AlgebraPtr& alg) {
    auto make = [&](std::vector<int> dims, bool arrow_acts) {
      Module m;
      m.alg = alg;
      m.dims = std::move(dims);
      for (const auto& g : alg->gens) {
        exactlin::Mat a(m.dims[g.tgt], m.dims[g.src]);
        if (arrow_acts && g.src != g.tgt && a.rows() == 1 && a.cols() == 1)
          a.at(0, 0) = 1;
        m.act.push_back(std::move(a));
      }
      return m;
    };
    std::vector<Module> out;
    out.push_back(make({1, 0}, false));
    out.push_back(make({0, 1}, false));
    out.push_back(make({1, 1}, true));
    return out;
  };
  auto as_string = [](itfun::Engine& e, const Module& m) {
    std::ostringstream ss;
    ss << "phi=" << e.phi(m);
    auto psi = e.psi(m);
    ss << " psi=" << psi.value << (psi.tainted ? "?" : "");
    auto pd = e.pd(m);
    if (pd.tag == itfun::PdResult::Finite)
      ss << " pd=" << pd.value;
    else if (pd.tag == itfun::PdResult::InfiniteCertified)
      ss << " pd=inf";
    else
      ss << " pd=?";
    return ss.str();
  };

  auto regL = fresh_registry(31), regP = fresh_registry(37);
  itfun::Engine eL(regL), eP(regP);
  std::vector<Module> tuples = modules_of(c.lambda);
  std::vector<Module> reps = modules_of(a2);
  for (size_t i = 0; i < 3; ++i) {
    repcat::validate_module(tuples[i]);
    repcat::validate_module(reps[i]);
    // round-trip through the tuple presentation to pin the identification
    morita::TupleModule t = morita::from_lambda(c, tuples[i]);
    morita::validate_tuple(c, t);
    std::string a = as_string(eL, morita::to_lambda(c, t));
    std::string b = as_string(eP, reps[i]);
    if (a != b)
      return "indecomposable " + std::to_string(i) + ": triangular " + a +
             " vs path algebra " + b;
  }
  return "";
}

std::string scope_labels() {
  auto T = fixtures::golden_algebra();
  auto reg = fresh_registry(5);
  itfun::Engine e(reg);
  std::vector<Module> family{fixtures::S2(T), fixtures::S3(T)};
  glit::GlitWitness w = family_witness(e, T, family);
  glit::Report rep = glit::verify_witness(e, w, family);
  glit::FindimBound b = glit::findim_bound(e, w, family);
  for (const std::string& s : {rep.scope, b.scope}) {
    if (s.find("family-level") == std::string::npos)
      return "scope line is not family-level: " + s;
    if (s.find("algebra-level") != std::string::npos)
      return "scope line claims algebra-level results";
  }
  return "";
}

}  // namespace

int main() {
  criterion(1, "golden phi values (corner 2, triangular 3)", [] {
    auto t0 = Clock::now();
    std::string err = golden_values();
    if (!err.empty()) return err;
    return check_time(std::chrono::duration<double>(Clock::now() - t0).count(),
                      5.0);
  });
  criterion(2, "golden rank trace (2 then 1 from level 2 on)", golden_ranks);
  criterion(3, "golden third-syzygy iso, level-2 obstruction", golden_iso);
  criterion(4, "huard suite, 500 instances under 120s", [] {
    auto t0 = Clock::now();
    std::string err = run_batch(500, 1, huard_instance);
    if (!err.empty()) return err;
    return check_time(std::chrono::duration<double>(Clock::now() - t0).count(),
                      120.0);
  });
  criterion(5, "phi-basic suite, 500 instances", [] {
    return run_batch(500, 1, phi_basic_instance);
  });
  criterion(6, "relative-phi suite, 300 instances", [] {
    return run_batch(300, 1, rel_phi_instance);
  });
  criterion(7, "sandwich battery, 100 contexts under 600s", [] {
    auto t0 = Clock::now();
    std::string err = run_batch(100, 1, morita_instance);
    if (!err.empty()) return err;
    return check_time(std::chrono::duration<double>(Clock::now() - t0).count(),
                      600.0);
  });
  criterion(8, "witness assembly round trips, 20 contexts", [] {
    return run_batch(20, 1, assemble_instance);
  });
  criterion(9, "two-point cross validation", two_point_cross_validation);
  criterion(10, "reports stay family-level", scope_labels);

  if (g_failures == 0) {
    std::printf("acceptance: all criteria pass\n");
    return 0;
  }
  std::printf("acceptance: %d criteria FAILED\n", g_failures);
  return 1;
}
