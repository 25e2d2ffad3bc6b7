// glitlab: command-line front end over the core library. Every run prints a
// structured report (JSON, or a human rendering of the same data) embedding
// the field modulus, seed, budgets and tool version, so identical inputs give
// byte-identical reports.
//
// Exit codes: 0 success, 1 assertion/verification failure, 2 input error,
// 3 budget exhaustion.

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "glitlab/gen.hpp"
#include "glitlab/glit.hpp"

using json = nlohmann::ordered_json;
using namespace glitlab;
using repcat::Module;

namespace {

constexpr const char* kVersion = "0.1.0";

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Run {
  std::uint32_t field = 101;
  std::uint64_t seed = 1;
  int budget_split = 64;    // decomposition / iso retries
  int budget_depth = 256;   // syzygy depth cap
  int class_cap = 10000;    // registry growth cap
  std::string format = "human";
  int jobs = 1;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

itfun::Budget budget_of(const Run& run) {
  return {run.class_cap, run.budget_depth};
}

krull::ClassRegistry registry_of(const Run& run, std::uint64_t salt = 0) {
  krull::ClassRegistry reg;
  reg.seed = run.seed + salt;
  reg.budget = run.budget_split;
  return reg;
}

std::vector<Module> load_modules(const algebra::AlgebraPtr& alg,
                                 const std::vector<std::string>& files) {
  std::vector<Module> out;
  for (const auto& f : files) {
    Module m = repcat::parse_module(slurp(f), alg);
    repcat::validate_module(m);
    out.push_back(std::move(m));
  }
  return out;
}

bool all_scalar(const json& j) {
  for (const auto& v : j)
    if (v.is_structured()) return false;
  return true;
}

void render_human(const json& j, int indent, std::ostream& os) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    os << std::string(indent, ' ');
    if (j.is_object())
      os << it.key() << ":";
    else
      os << "-";
    if (it->is_structured() && !all_scalar(*it)) {
      os << "\n";
      render_human(*it, indent + 2, os);
    } else {
      os << " " << it->dump() << "\n";
    }
  }
}

int emit(const Run& run, const std::string& command, const json& data,
         bool ok) {
  json report;
  report["tool"] = "glitlab";
  report["version"] = kVersion;
  report["command"] = command;
  report["field"] = run.field;
  report["seed"] = run.seed;
  report["budgets"] = {{"split", run.budget_split},
                       {"depth", run.budget_depth},
                       {"class_cap", run.class_cap}};
  report["ok"] = ok;
  report["data"] = data;
  if (run.format == "json") {
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << "glitlab " << kVersion << "  " << command << "  (field "
              << run.field << ", seed " << run.seed << ")\n";
    render_human(data, 0, std::cout);
    std::cout << (ok ? "ok" : "FAILED") << "\n";
  }
  return ok ? 0 : 1;
}

json dump_classes(const krull::ClassRegistry& reg) {
  json out = json::array();
  for (int i = 0; i < reg.size(); ++i) {
    const auto& e = reg.entries[i];
    out.push_back({{"id", i},
                   {"label", e.label},
                   {"projective", e.projective},
                   {"dims", e.rep.dims}});
  }
  return out;
}

json dump_report(const glit::Report& rep) {
  json checks = json::array();
  for (const auto& c : rep.checks)
    checks.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
  return {{"checks", checks}, {"scope", rep.scope}, {"ok", rep.all_ok()}};
}

// ---------------------------------------------------------------- commands

int cmd_phi(const Run& run, const std::string& alg_file,
            const std::vector<std::string>& mod_files) {
  auto alg = algebra::parse_algebra_file(alg_file);
  auto mods = load_modules(alg, mod_files);
  auto reg = registry_of(run);
  itfun::Engine e(reg, budget_of(run));
  itfun::PhiResult r = e.phi_detail(repcat::direct_sum(mods));
  json data;
  data["phi"] = r.phi;
  data["rank_trace"] = r.rank_trace;
  data["generators"] = r.generators;
  data["classes"] = dump_classes(reg);
  return emit(run, "phi", data, true);
}

int cmd_psi(const Run& run, const std::string& alg_file,
            const std::vector<std::string>& mod_files) {
  auto alg = algebra::parse_algebra_file(alg_file);
  auto mods = load_modules(alg, mod_files);
  auto reg = registry_of(run);
  itfun::Engine e(reg, budget_of(run));
  itfun::Bound b = e.psi(repcat::direct_sum(mods));
  json data;
  data["psi"] = b.value;
  data["tainted"] = b.tainted;
  return emit(run, "psi", data, true);
}

int cmd_pd(const Run& run, const std::string& alg_file,
           const std::vector<std::string>& mod_files) {
  auto alg = algebra::parse_algebra_file(alg_file);
  auto mods = load_modules(alg, mod_files);
  auto reg = registry_of(run);
  itfun::Engine e(reg, budget_of(run));
  json data;
  json per = json::array();
  for (size_t i = 0; i < mods.size(); ++i) {
    itfun::PdResult r = e.pd(mods[i]);
    json entry;
    entry["file"] = mod_files[i];
    switch (r.tag) {
      case itfun::PdResult::Finite:
        entry["pd"] = r.value;
        break;
      case itfun::PdResult::InfiniteCertified:
        entry["pd"] = "infinite";
        entry["cycle"] = r.cycle;
        break;
      case itfun::PdResult::Unknown:
        entry["pd"] = "unknown";
        break;
    }
    per.push_back(std::move(entry));
  }
  data["modules"] = per;
  return emit(run, "pd", data, true);
}

int cmd_resolve(const Run& run, const std::string& alg_file,
                const std::string& mod_file, int depth) {
  auto alg = algebra::parse_algebra_file(alg_file);
  Module m = load_modules(alg, {mod_file})[0];
  json chain = json::array();
  for (int k = 0; k <= depth; ++k) {
    json entry;
    entry["k"] = k;
    entry["dims"] = m.dims;
    entry["projective"] = repcat::is_projective(m);
    if (!m.is_zero()) {
      repcat::Cover c = repcat::projective_cover(m);
      entry["cover_dims"] = c.proj.dims;
    }
    chain.push_back(std::move(entry));
    if (m.is_zero()) break;
    m = repcat::syzygy(m);
  }
  json data;
  data["chain"] = chain;
  return emit(run, "resolve", data, true);
}

int cmd_decompose(const Run& run, const std::string& alg_file,
                  const std::vector<std::string>& mod_files) {
  auto alg = algebra::parse_algebra_file(alg_file);
  auto mods = load_modules(alg, mod_files);
  auto reg = registry_of(run);
  krull::Decomposition d = krull::decompose(repcat::direct_sum(mods), reg);
  json data;
  json parts = json::array();
  for (auto [id, mult] : d.summands)
    parts.push_back({{"class", id},
                     {"multiplicity", mult},
                     {"dims", reg.entries[id].rep.dims},
                     {"projective", reg.entries[id].projective}});
  data["summands"] = parts;
  data["classes"] = dump_classes(reg);
  return emit(run, "decompose", data, true);
}

int cmd_triangular_build(const Run& run, const std::string& t_file,
                         const std::string& u_file, bool regular,
                         const std::string& out) {
  auto T = algebra::parse_algebra_file(t_file);
  // --regular puts the algebra itself in the corner, so both corners must be
  // the same algebra object
  auto U = regular ? T : algebra::parse_algebra_file(u_file);
  morita::Bimodule M =
      regular ? morita::regular_bimodule(T) : morita::zero_bimodule(T, U);
  morita::MoritaContext c = morita::build_triangular(T, U, std::move(M));
  morita::ContextReport v = morita::validate_context(c);
  json data;
  data["lambda_dim"] = c.lambda->dim();
  data["lambda_vertices"] = c.lambda->nvert();
  data["bimodule_dim"] = c.M.total_dim();
  json checks = json::array();
  for (const auto& ch : v.checks)
    checks.push_back({{"name", ch.name}, {"ok", ch.ok}});
  data["validation"] = checks;
  if (!out.empty()) {
    std::ofstream o(out);
    if (!o) throw InputError("cannot write '" + out + "'");
    // referenced files are resolved relative to the context file on re-read
    namespace fs = std::filesystem;
    fs::path base = fs::absolute(out).parent_path();
    o << morita::format_context(
        c, fs::proximate(fs::absolute(t_file), base).string(),
        fs::proximate(fs::absolute(regular ? t_file : u_file), base).string());
    data["written"] = out;
  }
  return emit(run, "triangular_build", data, v.all_ok());
}

algebra::Quiver parse_quiver_file(const std::string& path) {
  algebra::Quiver q;
  std::istringstream in(slurp(path));
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw) || kw[0] == '#') continue;
    if (kw == "vertices") {
      std::string v;
      while (ls >> v) q.vertices.push_back(v);
    } else if (kw == "arrow") {
      std::string id, s, t;
      if (!(ls >> id >> s >> t)) throw InputError("bad arrow line in " + path);
      int si = q.vertex_index(s), ti = q.vertex_index(t);
      if (si < 0 || ti < 0) throw InputError("unknown vertex in " + path);
      q.arrows.push_back({id, si, ti});
    } else {
      throw InputError("unknown keyword '" + kw + "' in " + path);
    }
  }
  if (q.vertices.empty()) throw InputError("quiver file has no vertices");
  return q;
}

int cmd_tensor_build(const Run& run, const std::string& t_file,
                     const std::string& quiver_file, const std::string& out) {
  auto T = algebra::parse_algebra_file(t_file);
  algebra::Quiver q = parse_quiver_file(quiver_file);
  morita::TensorPathResult r = morita::build_tensor_path(T, q);
  json data;
  data["flat_dim"] = r.flat->dim();
  data["flat_vertices"] = r.flat->nvert();
  data["tower_size"] = (int)r.tower.size();
  data["path_counts"] = r.d;
  if (!out.empty()) {
    std::ofstream o(out);
    if (!o) throw InputError("cannot write '" + out + "'");
    o << algebra::format_algebra(*r.flat);
    data["written"] = out;
  }
  return emit(run, "tensor_build", data, true);
}

int cmd_glit_verify(const Run& run, const std::string& witness_file,
                    const std::vector<std::string>& mod_files) {
  glit::GlitWitness w = glit::parse_witness_file(witness_file);
  auto samples = load_modules(w.alg, mod_files);
  auto reg = registry_of(run);
  itfun::Engine e(reg, budget_of(run));
  glit::Report rep = glit::verify_witness(e, w, samples);
  json data;
  data["n"] = w.n;
  data["t"] = w.t;
  data["v_count"] = (int)w.V.size();
  data["d_count"] = (int)w.D.size();
  data["report"] = dump_report(rep);
  return emit(run, "glit_verify", data, rep.all_ok());
}

int cmd_glit_shift(const Run& run, const std::string& witness_file, int m,
                   const std::string& out_dir) {
  glit::GlitWitness w = glit::parse_witness_file(witness_file);
  auto reg = registry_of(run);
  itfun::Engine e(reg, budget_of(run));
  glit::GlitWitness s = glit::shift_witness(e, w, m);
  json data;
  data["n"] = s.n;
  data["t"] = s.t;
  data["v_count"] = (int)s.V.size();
  data["d_count"] = (int)s.D.size();
  data["phidim_D"] = s.phidim_D;
  data["phidim_D_bound"] = s.phidim_D_bound;
  if (!out_dir.empty()) {
    if (!s.alg->presentation)
      throw InputError("witness algebra has no presentation to serialize");
    std::string alg_file = out_dir + "/algebra.txt";
    { std::ofstream o(alg_file); o << algebra::format_algebra(*s.alg); }
    std::vector<std::string> vf, df;
    for (size_t i = 0; i < s.V.size(); ++i) {
      vf.push_back("v" + std::to_string(i) + ".txt");
      std::ofstream o(out_dir + "/" + vf.back());
      o << repcat::format_module(s.V[i], "algebra.txt");
    }
    for (size_t i = 0; i < s.D.size(); ++i) {
      df.push_back("d" + std::to_string(i) + ".txt");
      std::ofstream o(out_dir + "/" + df.back());
      o << repcat::format_module(s.D[i], "algebra.txt");
    }
    std::ofstream o(out_dir + "/witness.txt");
    if (!o) throw InputError("cannot write into '" + out_dir + "'");
    o << glit::format_witness(s, vf, df);
    data["written"] = out_dir + "/witness.txt";
  }
  return emit(run, "glit_shift", data, true);
}

int cmd_glit_assemble(const Run& run, const std::string& context_file,
                      const std::string& wt_file, const std::string& wu_file,
                      const std::vector<std::string>& tuple_files) {
  morita::MoritaContext c = morita::parse_context_file(context_file);
  glit::GlitWitness wT = glit::parse_witness_file(wt_file);
  glit::GlitWitness wU = glit::parse_witness_file(wu_file);
  auto regT = registry_of(run, 1), regU = registry_of(run, 2),
       regL = registry_of(run, 3);
  itfun::Engine eT(regT, budget_of(run)), eU(regU, budget_of(run)),
      eL(regL, budget_of(run));
  glit::GlitWitness wL = glit::assemble_morita_witness(c, eL, eT, wT, eU, wU);
  json data;
  data["n"] = wL.n;
  data["t"] = wL.t;
  data["v_count"] = (int)wL.V.size();
  data["d_count"] = (int)wL.D.size();
  data["phidim_D"] = wL.phidim_D;
  data["phidim_D_bound"] = wL.phidim_D_bound;
  bool ok = true;
  if (!tuple_files.empty()) {
    std::vector<Module> samples;
    for (const auto& f : tuple_files) {
      morita::TupleModule x = morita::parse_tuple(slurp(f), c);
      samples.push_back(morita::to_lambda(c, x));
    }
    glit::Report rep = glit::verify_witness(eL, wL, samples);
    data["report"] = dump_report(rep);
    ok = rep.all_ok();
  }
  return emit(run, "glit_assemble", data, ok);
}

int cmd_findim_bound(const Run& run, const std::string& witness_file,
                     const std::vector<std::string>& mod_files) {
  glit::GlitWitness w = glit::parse_witness_file(witness_file);
  auto samples = load_modules(w.alg, mod_files);
  auto reg = registry_of(run);
  itfun::Engine e(reg, budget_of(run));
  glit::FindimBound b = glit::findim_bound(e, w, samples);
  json data;
  data["bound"] = b.bound;
  data["tainted"] = b.tainted;
  json audit = json::array();
  bool ok = true;
  for (const auto& s : b.audit) {
    audit.push_back({{"index", s.index}, {"pd", s.pd}, {"ok", s.ok}});
    ok = ok && s.ok;
  }
  data["audit"] = audit;
  data["scope"] = b.scope;
  return emit(run, "findim_bound", data, ok);
}

// the three golden assertions on the embedded three-vertex monomial algebra
int cmd_paper_example(const Run& run, bool negative_control) {
  exactlin::FieldSpec F(run.field);
  std::string txt =
      "field " + std::to_string(run.field) +
      "\nvertices 1 2 3\narrow a 1 1\narrow b 1 2\narrow c 2 3\n"
      "nilpotency 2\nrelations\na*a\na*b\nb*c\n";
  auto T = algebra::parse_algebra(txt, "T");
  using exactlin::Mat;
  Module S1{T, {1, 0, 0}, {Mat(1, 1), Mat(0, 1), Mat(0, 0)}};
  Mat fb(1, 1);
  fb.at(0, 0) = 1;
  Module I2{T, {1, 1, 0}, {Mat(1, 1), fb, Mat(0, 1)}};
  Module X = repcat::direct_sum(S1, I2);

  auto regT = registry_of(run, 1);
  itfun::Engine eT(regT, budget_of(run));
  itfun::PhiResult base = eT.phi_detail(X);
  int expect_base = negative_control ? 3 : 2;

  morita::MoritaContext c =
      morita::build_triangular(T, T, morita::regular_bimodule(T));
  auto regL = registry_of(run, 2);
  itfun::Engine eL(regL, budget_of(run));
  Module XL = morita::to_lambda(c, morita::tuple_from_T(c, X));
  int phi_lambda = eL.phi(XL);

  Module lhs =
      repcat::syzygy_power(morita::to_lambda(c, morita::tuple_from_T(c, S1)), 3);
  Module P3 = repcat::projective_module(T, 2);
  Module rhs = repcat::direct_sum(
      repcat::syzygy_power(morita::to_lambda(c, morita::tuple_from_T(c, I2)), 3),
      morita::to_lambda(c, morita::tuple_from_U(c, P3)));
  krull::IsoResult iso = krull::iso_test(lhs, rhs, run.seed + 7);

  json data;
  json checks = json::array();
  checks.push_back({{"name", "phi of the base module"},
                    {"expected", expect_base},
                    {"got", base.phi},
                    {"ok", base.phi == expect_base}});
  checks.push_back({{"name", "phi over the triangular ring"},
                    {"expected", 3},
                    {"got", phi_lambda},
                    {"ok", phi_lambda == 3}});
  checks.push_back({{"name", "third syzygies isomorphic"},
                    {"lhs_dims", lhs.dims},
                    {"rhs_dims", rhs.dims},
                    {"ok", iso.iso}});
  data["checks"] = checks;
  data["rank_trace"] = base.rank_trace;
  bool ok = true;
  for (const auto& ch : data["checks"]) ok = ok && ch["ok"].get<bool>();
  return emit(run, "paper_example", data, ok);
}

// ------------------------------------------------------------ suites

struct Instance {
  bool ok = true;
  std::string detail;
};

template <class F>
json run_sharded(const Run& run, int count, F body, int& failures) {
  std::vector<Instance> results(count);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        results[i] = body(i);
      } catch (const itfun::BudgetExhausted&) {
        throw;
      } catch (const std::exception& ex) {
        results[i] = {false, std::string("exception: ") + ex.what()};
      }
    }
  };
  int jobs = std::max(1, run.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  failures = 0;
  json fail_detail = json::array();
  for (int i = 0; i < count; ++i)
    if (!results[i].ok) {
      ++failures;
      if (fail_detail.size() < 3)
        fail_detail.push_back({{"instance", i},
                               {"seed", run.seed + (std::uint64_t)i},
                               {"detail", results[i].detail}});
    }
  json data;
  data["count"] = count;
  data["failures"] = failures;
  if (failures > 0) data["failure_detail"] = fail_detail;
  return data;
}

std::string describe(const algebra::Algebra& a, const Module& m) {
  std::ostringstream ss;
  ss << "algebra:\n" << algebra::format_algebra(a) << "module dims:";
  for (int d : m.dims) ss << " " << d;
  return ss.str();
}

Instance suite_huard(const Run& run, int i) {
  exactlin::FieldSpec F(run.field);
  gen::Rng rng(run.seed + (std::uint64_t)i);
  auto a = gen::random_algebra(rng, F);
  Module x = gen::random_module(rng, a);
  Module ox = repcat::syzygy(x);
  auto reg = registry_of(run, 100 + (std::uint64_t)i);
  itfun::Engine e(reg, budget_of(run));
  int px = e.phi(x), pox = e.phi(ox);
  if (px > pox + 1)
    return {false, "phi(X) > phi(OX)+1: " + std::to_string(px) + " vs " +
                       std::to_string(pox) + "\n" + describe(*a, x)};
  itfun::Bound sx = e.psi(x), sox = e.psi(ox);
  if (!sx.tainted && !sox.tainted && sx.value > sox.value + 1)
    return {false, "psi(X) > psi(OX)+1: " + std::to_string(sx.value) + " vs " +
                       std::to_string(sox.value) + "\n" + describe(*a, x)};
  return {};
}

Instance suite_phi_basic(const Run& run, int i) {
  exactlin::FieldSpec F(run.field);
  gen::Rng rng(run.seed + (std::uint64_t)i);
  auto a = gen::random_algebra(rng, F);
  Module x = gen::random_module(rng, a);
  Module y = gen::random_module(rng, a);
  Module p = repcat::projective_module(a, (int)(rng() % a->nvert()));
  auto reg = registry_of(run, 200 + (std::uint64_t)i);
  itfun::Engine e(reg, budget_of(run));
  int px = e.phi(x);
  if (e.phi(repcat::direct_sum(x, x)) != px)
    return {false, "phi(X+X) != phi(X)\n" + describe(*a, x)};
  if (e.phi(repcat::direct_sum(x, p)) != px)
    return {false, "phi(X+P) != phi(X)\n" + describe(*a, x)};
  if (px > e.phi(repcat::direct_sum(x, y)))
    return {false, "phi(X) > phi(X+Y)\n" + describe(*a, x)};
  itfun::PdResult pd = e.pd(x);
  if (pd.tag == itfun::PdResult::Finite && px != pd.value)
    return {false, "finite pd but phi != pd: " + std::to_string(px) + " vs " +
                       std::to_string(pd.value) + "\n" + describe(*a, x)};
  return {};
}

Instance suite_rel_phi(const Run& run, int i) {
  exactlin::FieldSpec F(run.field);
  gen::Rng rng(run.seed + (std::uint64_t)i);
  auto a = gen::random_algebra(rng, F);
  Module seed_mod = gen::random_module(rng, a);
  Module x = gen::random_module(rng, a);
  auto reg = registry_of(run, 300 + (std::uint64_t)i);
  itfun::Engine e(reg, budget_of(run));
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
      return {false, "relative phi changed under adding descriptor modules\n" +
                         describe(*a, x)};
  }
  int pdD = gens.empty() ? 0 : e.phidim_add(gens);
  if (e.phi(x) > rel + pdD)
    return {false, "phi(X) > phi_[D](X) + phidim(D)\n" + describe(*a, x)};
  return {};
}

Instance suite_morita_sandwich(const Run& run, int i) {
  exactlin::FieldSpec F(run.field);
  gen::Rng rng(run.seed + (std::uint64_t)i);
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
  morita::BatteryReport rep = morita::phi_bound_battery(
      c, samples, run.seed + (std::uint64_t)i, budget_of(run));
  if (!rep.all_ok()) {
    std::string bad;
    for (const auto& ch : rep.checks)
      if (!ch.ok) bad += ch.name + " (" + ch.detail + "); ";
    return {false, "battery failed: " + bad};
  }
  return {};
}

Instance suite_glit_bounds(const Run& run, int i) {
  exactlin::FieldSpec F(run.field);
  gen::Rng rng(run.seed + (std::uint64_t)i);
  auto a = gen::random_algebra(rng, F);
  std::vector<Module> family{gen::random_module(rng, a),
                             gen::random_module(rng, a)};
  auto reg = registry_of(run, 500 + (std::uint64_t)i);
  itfun::Engine e(reg, budget_of(run));

  glit::GlitWitness w;
  w.alg = a;
  w.n = 0;
  w.t = 1;
  w.V = {glit::regular_module(a)};
  std::vector<Module> syz;
  for (const auto& m : family)
    if (!repcat::syzygy(m).is_zero()) syz.push_back(repcat::syzygy(m));
  w.D = glit::saturate_class(e, syz, 1);
  w.phidim_D = w.D.empty() ? 0 : e.phidim_add(w.D);

  glit::Report rep = glit::verify_witness(e, w, family);
  if (!rep.all_ok()) {
    std::string bad;
    for (const auto& ch : rep.checks)
      if (!ch.ok) bad += ch.name + " (" + ch.detail + "); ";
    return {false, "witness failed: " + bad + "\n" + describe(*a, family[0])};
  }
  glit::FindimBound b = glit::findim_bound(e, w, family);  // throws on violation
  for (const auto& s : b.audit)
    if (!s.ok) return {false, "findim audit failed at sample " +
                                  std::to_string(s.index)};
  return {};
}

int cmd_property_suite(const Run& run, const std::string& name, int count) {
  Instance (*body)(const Run&, int) = nullptr;
  if (name == "huard") body = suite_huard;
  else if (name == "phi-basic") body = suite_phi_basic;
  else if (name == "rel-phi") body = suite_rel_phi;
  else if (name == "morita-sandwich") body = suite_morita_sandwich;
  else if (name == "glit-bounds") body = suite_glit_bounds;
  else
    throw InputError("unknown suite '" + name +
                     "' (huard, phi-basic, rel-phi, morita-sandwich, "
                     "glit-bounds)");
  int failures = 0;
  json data = run_sharded(
      run, count, [&](int i) { return body(run, i); }, failures);
  data["suite"] = name;
  data["scope"] =
      "family-level: certifies only the generated instances, not any algebra "
      "as a whole";
  return emit(run, "property_suite", data, failures == 0);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"igusa-todorov functions, syzygies and finitistic-dimension "
               "witnesses over bound quiver algebras and Morita rings"};
  app.require_subcommand(1);

  Run run;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--field", run.field, "prime field modulus")
        ->default_val(101);
    sub->add_option("--seed", run.seed, "rng seed")
        ->envname("GLITLAB_SEED")
        ->default_val(1);
    sub->add_option("--budget-split", run.budget_split,
                    "decomposition/iso retry budget")
        ->default_val(64);
    sub->add_option("--budget-depth", run.budget_depth, "syzygy depth cap")
        ->default_val(256);
    sub->add_option("--format", run.format, "human|json")
        ->check(CLI::IsMember({"human", "json"}))
        ->default_val("human");
    sub->add_option("--jobs", run.jobs, "worker threads for batch commands")
        ->default_val(1);
  };

  std::string alg_file, mod_file, witness_file, context_file, wt_file, wu_file,
      u_file, quiver_file, out, out_dir, suite;
  std::vector<std::string> mod_files, tuple_files;
  int depth = 8, shift_m = 1, count = 100;
  bool regular = false, negative_control = false;

  auto* phi = app.add_subcommand("phi", "phi of a direct sum of modules");
  phi->add_option("algebra", alg_file)->required();
  phi->add_option("modules", mod_files)->required();
  add_common(phi);

  auto* psi = app.add_subcommand("psi", "psi of a direct sum of modules");
  psi->add_option("algebra", alg_file)->required();
  psi->add_option("modules", mod_files)->required();
  add_common(psi);

  auto* pd = app.add_subcommand("pd", "projective dimensions");
  pd->add_option("algebra", alg_file)->required();
  pd->add_option("modules", mod_files)->required();
  add_common(pd);

  auto* resolve = app.add_subcommand("resolve", "syzygy chain with covers");
  resolve->add_option("algebra", alg_file)->required();
  resolve->add_option("module", mod_file)->required();
  resolve->add_option("--depth", depth)->default_val(8);
  add_common(resolve);

  auto* dec = app.add_subcommand("decompose", "indecomposable summands");
  dec->add_option("algebra", alg_file)->required();
  dec->add_option("modules", mod_files)->required();
  add_common(dec);

  auto* tri = app.add_subcommand("triangular_build",
                                 "triangular matrix ring of two algebras");
  tri->add_option("t_algebra", alg_file)->required();
  tri->add_option("u_algebra", u_file)->required();
  tri->add_flag("--regular", regular, "use the regular bimodule (T = U)");
  tri->add_option("--out", out, "write the context file");
  add_common(tri);

  auto* ten = app.add_subcommand("tensor_build",
                                 "tensor with an acyclic path algebra");
  ten->add_option("t_algebra", alg_file)->required();
  ten->add_option("quiver", quiver_file)->required();
  ten->add_option("--out", out, "write the flat algebra file");
  add_common(ten);

  auto* gv = app.add_subcommand("glit_verify", "verify a witness on samples");
  gv->add_option("witness", witness_file)->required();
  gv->add_option("modules", mod_files)->required();
  add_common(gv);

  auto* gs = app.add_subcommand("glit_shift", "shift a witness index");
  gs->add_option("witness", witness_file)->required();
  gs->add_option("m", shift_m)->required();
  gs->add_option("--out-dir", out_dir, "write the shifted witness");
  add_common(gs);

  auto* ga = app.add_subcommand(
      "glit_assemble", "combine corner witnesses over a Morita ring");
  ga->add_option("context", context_file)->required();
  ga->add_option("witness_t", wt_file)->required();
  ga->add_option("witness_u", wu_file)->required();
  ga->add_option("--sample", tuple_files, "tuple files to verify against");
  add_common(ga);

  auto* fb = app.add_subcommand("findim_bound",
                                "certified bound for a tested family");
  fb->add_option("witness", witness_file)->required();
  fb->add_option("modules", mod_files)->required();
  add_common(fb);

  auto* pe = app.add_subcommand("paper_example", "golden fixture assertions");
  pe->add_flag("--negative-control", negative_control,
               "corrupt an expectation; must exit nonzero");
  add_common(pe);

  auto* ps = app.add_subcommand("property_suite", "randomized invariant batteries");
  ps->add_option("name", suite)->required();
  ps->add_option("--count", count)->default_val(100);
  add_common(ps);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*phi) return cmd_phi(run, alg_file, mod_files);
    if (*psi) return cmd_psi(run, alg_file, mod_files);
    if (*pd) return cmd_pd(run, alg_file, mod_files);
    if (*resolve) return cmd_resolve(run, alg_file, mod_file, depth);
    if (*dec) return cmd_decompose(run, alg_file, mod_files);
    if (*tri) return cmd_triangular_build(run, alg_file, u_file, regular, out);
    if (*ten) return cmd_tensor_build(run, alg_file, quiver_file, out);
    if (*gv) return cmd_glit_verify(run, witness_file, mod_files);
    if (*gs) return cmd_glit_shift(run, witness_file, shift_m, out_dir);
    if (*ga)
      return cmd_glit_assemble(run, context_file, wt_file, wu_file, tuple_files);
    if (*fb) return cmd_findim_bound(run, witness_file, mod_files);
    if (*pe) return cmd_paper_example(run, negative_control);
    if (*ps) return cmd_property_suite(run, suite, count);
  } catch (const itfun::BudgetExhausted& ex) {
    std::cerr << "budget exhausted: " << ex.what() << "\n";
    return 3;
  } catch (const InputError& ex) {
    std::cerr << "input error: " << ex.what() << "\n";
    return 2;
  } catch (const algebra::ParseError& ex) {
    std::cerr << "parse error: " << ex.what() << "\n";
    return 2;
  } catch (const algebra::ValidationError& ex) {
    std::cerr << "validation error: " << ex.what() << "\n";
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 2;
}
