#include "glitlab/glit.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace glitlab::glit {

using exactlin::FieldSpec;
using exactlin::kernel_basis;

bool Report::all_ok() const {
  for (const auto& c : checks)
    if (!c.ok) return false;
  return true;
}

Module regular_module(const AlgebraPtr& a) {
  std::vector<Module> parts;
  for (int v = 0; v < a->nvert(); ++v)
    parts.push_back(repcat::projective_module(a, v));
  return repcat::direct_sum(parts);
}

namespace {

// every class id appearing in the decompositions of the given generators
std::set<int> allowed_classes(Engine& e, const std::vector<Module>& gens) {
  std::set<int> out;
  for (const auto& g : gens) {
    if (g.is_zero()) continue;
    krull::Decomposition d = krull::decompose(g, e.registry());
    for (auto [id, mult] : d.summands) {
      (void)mult;
      out.insert(id);
    }
  }
  return out;
}

// split a module into an add(V) part and an add(D) part (as sums of class
// representatives); nullopt when some summand belongs to neither
std::optional<std::pair<Module, Module>> assign_split(
    Engine& e, const Module& x, const std::set<int>& v_allowed,
    const std::set<int>& d_allowed) {
  std::vector<Module> v_parts, d_parts;
  if (!x.is_zero()) {
    krull::Decomposition dec = krull::decompose(x, e.registry());
    for (auto [id, mult] : dec.summands) {
      const Module& rep = e.registry().entries[id].rep;
      std::vector<Module>* dst = nullptr;
      if (v_allowed.count(id)) dst = &v_parts;
      else if (d_allowed.count(id)) dst = &d_parts;
      else return std::nullopt;
      for (int k = 0; k < mult; ++k) dst->push_back(rep);
    }
  }
  Module v = v_parts.empty() ? repcat::zero_module(x.alg) : repcat::direct_sum(v_parts);
  Module d = d_parts.empty() ? repcat::zero_module(x.alg) : repcat::direct_sum(d_parts);
  return std::make_pair(std::move(v), std::move(d));
}

std::vector<Mat> identity_maps(const Module& m) {
  std::vector<Mat> out;
  for (int d : m.dims) out.push_back(Mat::identity(d));
  return out;
}

std::vector<Mat> zero_maps(const Module& from, const Module& to) {
  std::vector<Mat> out;
  for (size_t v = 0; v < from.dims.size(); ++v)
    out.emplace_back(to.dims[v], from.dims[v]);
  return out;
}

// checks f: x -> y commutes with every generator action
bool is_morphism(const Module& x, const Module& y, const std::vector<Mat>& f) {
  const FieldSpec& F = x.alg->field;
  for (size_t g = 0; g < x.alg->gens.size(); ++g) {
    int s = x.alg->gens[g].src, t = x.alg->gens[g].tgt;
    if (exactlin::mul(F, y.act[g], f[s]) != exactlin::mul(F, f[t], x.act[g]))
      return false;
  }
  return true;
}

SesWitness make_ses(Engine& e, Module x1, Module x0, std::vector<Mat> mono,
                    std::vector<Mat> epi, const std::set<int>& v_allowed,
                    const std::set<int>& d_allowed, bool& ok) {
  SesWitness s;
  auto s1 = assign_split(e, x1, v_allowed, d_allowed);
  auto s0 = assign_split(e, x0, v_allowed, d_allowed);
  ok = s1.has_value() && s0.has_value();
  s.x1 = std::move(x1);
  s.x0 = std::move(x0);
  s.mono = std::move(mono);
  s.epi = std::move(epi);
  if (ok) {
    std::tie(s.v1, s.d1) = *s1;
    std::tie(s.v0, s.d0) = *s0;
  }
  return s;
}

std::string failed_names(const Report& r) {
  std::string out;
  for (const auto& c : r.checks)
    if (!c.ok) {
      if (!out.empty()) out += ", ";
      out += c.name;
      if (!c.detail.empty()) out += " (" + c.detail + ")";
    }
  return out;
}

}  // namespace

itfun::ClassDescriptor witness_descriptor(Engine& e, const GlitWitness& w) {
  std::set<int> ids;
  for (const auto& d : w.D) {
    if (d.is_zero()) continue;
    krull::Decomposition dec = krull::decompose(d, e.registry());
    for (auto [id, mult] : dec.summands) {
      (void)mult;
      if (!e.registry().entries[id].projective) ids.insert(id);
    }
  }
  itfun::ClassDescriptor desc;
  desc.generators.assign(ids.begin(), ids.end());
  desc.t = w.t;
  e.check_descriptor(desc);
  return desc;
}

std::vector<Module> saturate_class(Engine& e, const std::vector<Module>& gens,
                                   int t, int cap) {
  std::set<int> ids;
  std::vector<int> queue;
  auto push = [&](const Module& m) {
    if (m.is_zero()) return;
    krull::Decomposition dec = krull::decompose(m, e.registry());
    for (auto [id, mult] : dec.summands) {
      (void)mult;
      if (e.registry().entries[id].projective) continue;
      if (ids.insert(id).second) queue.push_back(id);
    }
  };
  for (const auto& g : gens) push(g);
  for (size_t i = 0; i < queue.size(); ++i) {
    if ((int)ids.size() > cap)
      throw itfun::BudgetExhausted("class saturation exceeded its cap");
    push(repcat::syzygy_power(e.registry().entries[queue[i]].rep, t));
  }
  std::vector<Module> out;
  for (int id : ids) out.push_back(e.registry().entries[id].rep);
  return out;
}

Report verify_ses(Engine& e, const SesWitness& s, const Module& target,
                  const std::vector<Module>& V, const std::vector<Module>& D) {
  Report rep;
  const FieldSpec& F = target.alg->field;
  const size_t nv = target.dims.size();
  auto add = [&](const std::string& name, bool ok, std::string detail = "") {
    rep.checks.push_back({name, ok, std::move(detail)});
  };

  bool shapes = s.mono.size() == nv && s.epi.size() == nv &&
                s.x1.dims.size() == nv && s.x0.dims.size() == nv;
  if (shapes)
    for (size_t v = 0; v < nv; ++v)
      shapes = shapes && s.mono[v].rows() == s.x0.dims[v] &&
               s.mono[v].cols() == s.x1.dims[v] &&
               s.epi[v].rows() == target.dims[v] &&
               s.epi[v].cols() == s.x0.dims[v];
  add("shapes", shapes);
  if (!shapes) return rep;

  bool mono_ok = true, epi_ok = true, dims_ok = true, comp_ok = true;
  std::string dim_detail;
  for (size_t v = 0; v < nv; ++v) {
    mono_ok = mono_ok && exactlin::rank(F, s.mono[v]) == s.x1.dims[v];
    epi_ok = epi_ok && exactlin::rank(F, s.epi[v]) == target.dims[v];
    if (s.x0.dims[v] != s.x1.dims[v] + target.dims[v]) {
      dims_ok = false;
      dim_detail += "vertex " + std::to_string(v) + ": " +
                    std::to_string(s.x0.dims[v]) + " != " +
                    std::to_string(s.x1.dims[v]) + "+" +
                    std::to_string(target.dims[v]) + "; ";
    }
    comp_ok = comp_ok && exactlin::mul(F, s.epi[v], s.mono[v]).is_zero();
  }
  add("mono injective", mono_ok);
  add("epi surjective", epi_ok);
  add("vertexwise dimensions", dims_ok, dim_detail);
  add("composite zero", comp_ok);
  add("mono is a morphism", is_morphism(s.x1, s.x0, s.mono));
  add("epi is a morphism", is_morphism(s.x0, target, s.epi));

  auto member = [&](const std::string& name, const Module& whole,
                    const Module& vp, const Module& dp) {
    Module sum = repcat::direct_sum(vp, dp);
    bool iso = (whole.is_zero() && sum.is_zero()) ||
               krull::iso_test(whole, sum, e.registry().seed + 17).iso;
    add(name + " splits", iso);
    std::set<int> va = allowed_classes(e, V), da = allowed_classes(e, D);
    bool vin = true, din = true;
    if (!vp.is_zero()) {
      krull::Decomposition dec = krull::decompose(vp, e.registry());
      for (auto [id, mult] : dec.summands) {
        (void)mult;
        vin = vin && va.count(id) > 0;
      }
    }
    if (!dp.is_zero()) {
      krull::Decomposition dec = krull::decompose(dp, e.registry());
      for (auto [id, mult] : dec.summands) {
        (void)mult;
        din = din && da.count(id) > 0;
      }
    }
    add(name + " V-part in add(V)", vin);
    add(name + " D-part in add(D)", din);
  };
  member("x1", s.x1, s.v1, s.d1);
  member("x0", s.x0, s.v0, s.d0);
  return rep;
}

CoverResult approx_cover(Engine& e, const Module& target,
                         const std::vector<Module>& V,
                         const std::vector<Module>& D) {
  CoverResult res;
  const FieldSpec& F = target.alg->field;
  std::set<int> va = allowed_classes(e, V), da = allowed_classes(e, D);

  struct Copy {
    const Module* w;
    std::vector<Mat> h;  // per vertex: target.dims x w.dims
  };
  std::vector<Copy> copies;
  auto collect = [&](const std::vector<Module>& gens) {
    for (const auto& w : gens) {
      if (w.is_zero()) continue;
      for (auto& h : repcat::hom_basis(w, target)) copies.push_back({&w, h});
    }
  };
  collect(V);
  collect(D);

  auto surjective = [&](const std::vector<bool>& keep) {
    for (size_t v = 0; v < target.dims.size(); ++v) {
      Mat cat(target.dims[v], 0);
      for (size_t k = 0; k < copies.size(); ++k)
        if (keep[k]) cat = exactlin::hcat(cat, copies[k].h[v]);
      if (exactlin::rank(F, cat) != target.dims[v]) return false;
    }
    return true;
  };

  std::vector<bool> keep(copies.size(), true);
  if (!target.is_zero() && !surjective(keep)) {
    res.diagnosis = "not surjective";
    return res;
  }
  // greedy pruning, deterministic in list order
  for (size_t k = 0; k < copies.size(); ++k) {
    keep[k] = false;
    if (!surjective(keep)) keep[k] = true;
  }

  std::vector<Module> parts;
  for (size_t k = 0; k < copies.size(); ++k)
    if (keep[k]) parts.push_back(*copies[k].w);
  Module x0 = parts.empty() ? repcat::zero_module(target.alg)
                            : repcat::direct_sum(parts);
  std::vector<Mat> epi;
  for (size_t v = 0; v < target.dims.size(); ++v) {
    Mat cat(target.dims[v], 0);
    for (size_t k = 0; k < copies.size(); ++k)
      if (keep[k]) cat = exactlin::hcat(cat, copies[k].h[v]);
    epi.push_back(cat);
  }

  Module x1 = repcat::kernel_module(x0, epi);
  std::vector<Mat> mono;
  for (size_t v = 0; v < target.dims.size(); ++v)
    mono.push_back(kernel_basis(F, epi[v]));

  bool ok = false;
  SesWitness s = make_ses(e, std::move(x1), std::move(x0), std::move(mono),
                          std::move(epi), va, da, ok);
  if (!ok) {
    res.diagnosis = "kernel escapes add(W)";
    return res;
  }
  res.found = true;
  res.ses = std::move(s);
  return res;
}

CoverResult find_ses(Engine& e, const Module& target,
                     const std::vector<Module>& V, const std::vector<Module>& D) {
  const FieldSpec& F = target.alg->field;
  std::set<int> va = allowed_classes(e, V), da = allowed_classes(e, D);
  Module zero = repcat::zero_module(target.alg);

  // target already in add(V + D): identity sequence
  {
    bool ok = false;
    SesWitness s = make_ses(e, zero, target, zero_maps(zero, target),
                            identity_maps(target), va, da, ok);
    if (ok) return {true, std::move(s), ""};
  }
  // the projective-cover sequence, when both ends certify
  if (!target.is_zero()) {
    repcat::Cover cover = repcat::projective_cover(target);
    Module x1 = repcat::kernel_module(cover.proj, cover.map);
    std::vector<Mat> mono;
    for (size_t v = 0; v < target.dims.size(); ++v)
      mono.push_back(kernel_basis(F, cover.map[v]));
    bool ok = false;
    SesWitness s = make_ses(e, std::move(x1), cover.proj, std::move(mono),
                            cover.map, va, da, ok);
    if (ok) return {true, std::move(s), ""};
  }
  return approx_cover(e, target, V, D);
}

Report verify_witness(Engine& e, const GlitWitness& w,
                      const std::vector<Module>& samples) {
  Report rep;
  try {
    witness_descriptor(e, w);
    rep.checks.push_back({"descriptor closure", true, ""});
  } catch (const std::exception& ex) {
    rep.checks.push_back({"descriptor closure", false, ex.what()});
  }
  for (size_t i = 0; i < samples.size(); ++i) {
    std::string name = "sample " + std::to_string(i);
    Module target = repcat::syzygy_power(samples[i], w.n);
    CoverResult cr = find_ses(e, target, w.V, w.D);
    if (!cr.found) {
      rep.checks.push_back({name, false, "no sequence found: " + cr.diagnosis});
      continue;
    }
    Report r2 = verify_ses(e, cr.ses, target, w.V, w.D);
    rep.checks.push_back({name, r2.all_ok(), failed_names(r2)});
  }
  return rep;
}

// the phi bound a transformer starts from: the carried analytic bound when
// there is one, else the computed value (parsed witnesses carry neither)
static int carried_phidim(Engine& e, const GlitWitness& w) {
  if (w.phidim_D_bound >= 0) return w.phidim_D_bound;
  if (w.phidim_D > 0 || w.D.empty()) return w.phidim_D;
  return e.phidim_add(w.D);
}

GlitWitness shift_witness(Engine& e, const GlitWitness& w, int m) {
  if (m < w.n)
    throw ValidationError("shift_witness needs m >= the witness index n");
  const int k = m - w.n;
  GlitWitness out;
  out.alg = w.alg;
  out.n = m;
  out.t = w.t;
  for (const auto& v : w.V) {
    Module s = repcat::syzygy_power(v, k);
    if (!s.is_zero()) out.V.push_back(std::move(s));
  }
  out.V.push_back(regular_module(w.alg));

  std::set<int> ids;
  for (const auto& d : w.D) {
    Module s = repcat::syzygy_power(d, k);
    if (s.is_zero()) continue;
    krull::Decomposition dec = krull::decompose(s, e.registry());
    for (auto [id, mult] : dec.summands) {
      (void)mult;
      if (!e.registry().entries[id].projective) ids.insert(id);
    }
  }
  for (int id : ids) out.D.push_back(e.registry().entries[id].rep);

  witness_descriptor(e, out);
  out.phidim_D =
      out.D.empty() ? 0 : e.phidim_add(out.D);
  out.phidim_D_bound = carried_phidim(e, w) + k * (w.t - 1);
  return out;
}

GlitWitness assemble_morita_witness(const morita::MoritaContext& c, Engine& eL,
                                    Engine& eT, const GlitWitness& wT,
                                    Engine& eU, const GlitWitness& wU) {
  morita::ContextReport crep = morita::validate_context(c);
  if (!crep.all_ok())
    throw ValidationError("assemble_morita_witness: context failed validation");

  GlitWitness t = wT, u = wU;
  if (t.n < u.n) t = shift_witness(eT, t, u.n);
  if (u.n < t.n) u = shift_witness(eU, u, t.n);

  // tuple syzygy of the pair (a, b) with zero connecting maps
  auto pair_syzygy = [&](const Module* a, const Module* b) -> Module {
    morita::TupleModule x;
    bool have = false;
    if (a && !a->is_zero()) {
      x = morita::tuple_from_T(c, *a);
      have = true;
    }
    if (b && !b->is_zero()) {
      morita::TupleModule y = morita::tuple_from_U(c, *b);
      x = have ? morita::tuple_direct_sum(c, x, y) : y;
      have = true;
    }
    if (!have) return repcat::zero_module(c.lambda);
    morita::TupleModule s = morita::tuple_syzygy(c, x, eL.registry().seed + 5);
    return morita::to_lambda(c, s);
  };

  GlitWitness out;
  out.alg = c.lambda;
  out.n = t.n + 1;
  out.t = t.t * u.t;

  size_t nv = std::max(t.V.size(), u.V.size());
  for (size_t k = 0; k < nv; ++k) {
    Module s = pair_syzygy(k < t.V.size() ? &t.V[k] : nullptr,
                           k < u.V.size() ? &u.V[k] : nullptr);
    if (!s.is_zero()) out.V.push_back(std::move(s));
  }
  out.V.push_back(regular_module(c.lambda));

  std::set<int> ids;
  size_t nd = std::max(t.D.size(), u.D.size());
  for (size_t k = 0; k < nd; ++k) {
    Module s = pair_syzygy(k < t.D.size() ? &t.D[k] : nullptr,
                           k < u.D.size() ? &u.D[k] : nullptr);
    if (s.is_zero()) continue;
    krull::Decomposition dec = krull::decompose(s, eL.registry());
    for (auto [id, mult] : dec.summands) {
      (void)mult;
      if (!eL.registry().entries[id].projective) ids.insert(id);
    }
  }
  for (int id : ids) out.D.push_back(eL.registry().entries[id].rep);

  try {
    witness_descriptor(eL, out);
  } catch (const std::exception& ex) {
    throw ValidationError(std::string("assembled class is not closed "
                                      "(construction bug): ") +
                          ex.what());
  }
  out.phidim_D = out.D.empty() ? 0 : eL.phidim_add(out.D);
  out.phidim_D_bound = std::max(carried_phidim(eT, t), carried_phidim(eU, u)) +
                       out.t;
  return out;
}

std::pair<GlitWitness, GlitWitness> restrict_witness(
    const morita::MoritaContext& c, Engine& eL, const GlitWitness& wL,
    Engine& eT, Engine& eU) {
  std::vector<Module> vt, vu, dt, du;
  auto split = [&](const std::vector<Module>& gens, std::vector<Module>& a_out,
                   std::vector<Module>& b_out) {
    for (const auto& g : gens) {
      morita::TupleModule x = morita::from_lambda(c, g);
      if (!x.A.is_zero()) a_out.push_back(x.A);
      if (!x.B.is_zero()) b_out.push_back(x.B);
    }
  };
  split(wL.V, vt, vu);
  split(wL.D, dt, du);

  auto build = [&](Engine& e, const AlgebraPtr& alg, std::vector<Module> v,
                   std::vector<Module> d) {
    GlitWitness w;
    w.alg = alg;
    w.n = wL.n;
    w.t = wL.t;
    w.V = std::move(v);
    w.D = saturate_class(e, d, wL.t);
    witness_descriptor(e, w);
    w.phidim_D = w.D.empty() ? 0 : e.phidim_add(w.D);
    w.phidim_D_bound = carried_phidim(eL, wL) + wL.t;
    return w;
  };
  return {build(eT, c.T, std::move(vt), std::move(dt)),
          build(eU, c.U, std::move(vu), std::move(du))};
}

FinitudeFilter filter_finite(Engine& e, const std::vector<Module>& family) {
  FinitudeFilter out;
  for (const auto& m : family) {
    itfun::PdResult r = e.pd(m);
    if (r.tag == itfun::PdResult::Unknown)
      throw ValidationError("unresolved projective dimension in the family");
    if (r.tag == itfun::PdResult::Finite) {
      out.members.push_back(m);
      out.pds.push_back(r.value);
    }
  }
  return out;
}

FindimBound findim_bound(Engine& e, const GlitWitness& w,
                         const std::vector<Module>& samples) {
  Report vr = verify_witness(e, w, samples);
  if (!vr.all_ok())
    throw ValidationError("findim_bound: witness does not verify on the "
                          "samples: " +
                          failed_names(vr));

  FindimBound out;
  std::vector<Module> gens = w.D;
  gens.insert(gens.end(), w.V.begin(), w.V.end());
  itfun::Bound psi = e.psidim_add(gens);
  out.bound = psi.value + w.n + 1;
  out.tainted = psi.tainted;

  for (size_t i = 0; i < samples.size(); ++i) {
    itfun::PdResult r = e.pd(samples[i]);
    FindimBound::Sample s;
    s.index = (int)i;
    if (r.tag == itfun::PdResult::Finite) {
      s.pd = std::to_string(r.value);
      s.ok = r.value <= out.bound;
      if (!s.ok)
        throw ValidationError("findim_bound audit failed: sample " +
                              std::to_string(i) + " has pd " +
                              std::to_string(r.value) + " > bound " +
                              std::to_string(out.bound));
    } else {
      s.pd = r.tag == itfun::PdResult::InfiniteCertified ? "infinite" : "unknown";
      s.ok = true;  // only finite pds are bounded
    }
    out.audit.push_back(std::move(s));
  }
  return out;
}

GlitWitness special_glit_witness(Engine& e, const std::vector<Module>& family) {
  FinitudeFilter ff = filter_finite(e, family);
  GlitWitness w;
  if (family.empty())
    throw ValidationError("special_glit_witness: empty family");
  w.alg = family.front().alg;
  w.n = 0;
  int maxpd = 0;
  for (int p : ff.pds) maxpd = std::max(maxpd, p);
  w.t = std::max(1, maxpd);
  w.D.push_back(regular_module(w.alg));
  for (size_t i = 0; i < ff.members.size(); ++i) {
    Module stage = ff.members[i];
    for (int k = 0; k <= ff.pds[i]; ++k) {
      if (stage.is_zero()) break;
      w.D.push_back(stage);
      stage = repcat::syzygy(stage);
    }
  }
  witness_descriptor(e, w);
  w.phidim_D = e.phidim_add(w.D);
  w.phidim_D_bound = w.t;
  return w;
}

GlitWitness parse_witness_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open witness file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  std::istringstream in(ss.str());

  GlitWitness w;
  bool header = false;
  int section = 0;  // 0 none, 1 V, 2 D
  std::vector<std::pair<std::string, int>> files;  // (path, section)
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (!header) {
      if (tok != "glit")
        throw algebra::ParseError(lineno, "witness file must start with 'glit'");
      std::string a, b;
      if (!(ls >> a >> b) || a.rfind("n=", 0) != 0 || b.rfind("t=", 0) != 0)
        throw algebra::ParseError(lineno, "expected 'glit n=<n> t=<t>'");
      w.n = std::stoi(a.substr(2));
      w.t = std::stoi(b.substr(2));
      if (w.n < 0 || w.t < 1)
        throw algebra::ParseError(lineno, "need n >= 0 and t >= 1");
      header = true;
    } else if (tok == "V:") {
      section = 1;
    } else if (tok == "D:") {
      section = 2;
    } else {
      if (section == 0)
        throw algebra::ParseError(lineno, "module file outside V:/D: section");
      files.emplace_back(tok, section);
    }
  }
  if (!header) throw std::runtime_error("empty witness file: " + path);
  if (files.empty())
    throw std::runtime_error("witness file lists no modules: " + path);

  AlgebraPtr alg;
  for (auto& [file, sec] : files) {
    std::filesystem::path resolved(file);
    if (resolved.is_relative())
      resolved = std::filesystem::path(path).parent_path() / resolved;
    Module m;
    if (!alg) {
      m = repcat::parse_module_file(resolved.string());
      alg = m.alg;
    } else {
      std::ifstream mf(resolved);
      if (!mf)
        throw std::runtime_error("cannot open module file: " + resolved.string());
      std::stringstream ms;
      ms << mf.rdbuf();
      m = repcat::parse_module(ms.str(), alg);
    }
    (sec == 1 ? w.V : w.D).push_back(std::move(m));
  }
  w.alg = alg;
  return w;
}

std::string format_witness(const GlitWitness& w,
                           const std::vector<std::string>& v_files,
                           const std::vector<std::string>& d_files) {
  if (v_files.size() != w.V.size() || d_files.size() != w.D.size())
    throw ValidationError("format_witness: file list sizes do not match");
  std::ostringstream out;
  out << "glit n=" << w.n << " t=" << w.t << "\n";
  out << "V:\n";
  for (const auto& f : v_files) out << f << "\n";
  out << "D:\n";
  for (const auto& f : d_files) out << f << "\n";
  return out.str();
}

}  // namespace glitlab::glit
