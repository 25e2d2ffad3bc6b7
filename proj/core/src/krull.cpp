#include "glitlab/krull.hpp"

#include <random>
#include <sstream>

namespace glitlab::krull {

using algebra::Algebra;
using exactlin::FieldSpec;

namespace {

using HomElem = std::vector<Mat>;  // per-vertex blocks

// restrict a module to the span of the given per-vertex columns (must be
// action-invariant)
Module submodule_from_columns(const Module& r, const std::vector<Mat>& cols) {
  const Algebra& A = *r.alg;
  const FieldSpec& F = A.field;
  Module s;
  s.alg = r.alg;
  s.dims.resize(A.nvert());
  for (int v = 0; v < A.nvert(); ++v) s.dims[v] = cols[v].cols();
  for (size_t g = 0; g < A.gens.size(); ++g) {
    int sv = A.gens[g].src, tv = A.gens[g].tgt;
    Mat rhs = exactlin::mul(F, r.act[g], cols[sv]);
    auto X = exactlin::solve_matrix(F, cols[tv], rhs);
    if (!X) throw repcat::ValidationError("internal: subspace not action-invariant");
    s.act.push_back(*X);
  }
  return s;
}

// f^(2^k) with 2^k >= e, blockwise per vertex
HomElem stable_power(const FieldSpec& F, HomElem f, int e) {
  for (int m = 1; m < e; m *= 2)
    for (auto& b : f) b = exactlin::mul(F, b, b);
  return f;
}

bool invertible_everywhere(const FieldSpec& F, const HomElem& f) {
  for (const auto& b : f) {
    if (b.rows() != b.cols()) return false;
    if (b.rows() == 0) continue;
    if (!exactlin::inverse(F, b)) return false;
  }
  return true;
}

HomElem combine(const FieldSpec& F, const std::vector<HomElem>& basis,
                const std::vector<std::uint32_t>& coeffs) {
  HomElem out = basis[0];
  for (auto& b : out) b = Mat(b.rows(), b.cols());
  for (size_t k = 0; k < basis.size(); ++k) {
    if (coeffs[k] == 0) continue;
    for (size_t v = 0; v < out.size(); ++v)
      out[v] = exactlin::add(F, out[v], exactlin::scale(F, coeffs[k], basis[k][v]));
  }
  return out;
}

// attempt a Fitting split along f; fills the result and returns true on split
bool try_fitting(const Module& r, const HomElem& f, SplitResult& out) {
  const FieldSpec& F = r.alg->field;
  const int D = r.total_dim();
  HomElem g = stable_power(F, f, D);
  std::vector<Mat> ker(g.size()), im(g.size());
  int kd = 0;
  for (size_t v = 0; v < g.size(); ++v) {
    ker[v] = exactlin::kernel_basis(F, g[v]);
    im[v] = exactlin::column_space_basis(F, g[v]);
    kd += ker[v].cols();
  }
  if (kd == 0 || kd == D) return false;
  out.split = true;
  out.summand = submodule_from_columns(r, im);
  out.complement = submodule_from_columns(r, ker);
  out.embed_summand = im;
  out.embed_complement = ker;
  return true;
}

// monic minimal polynomial of a square block, constant term first; the unit
// polynomial for the empty block
std::vector<std::uint32_t> min_poly(const FieldSpec& F, const Mat& b) {
  const int d = b.rows();
  if (d == 0) return {1};
  const int n2 = d * d;
  // incremental echelon over flattened powers, tracking combination coords
  std::vector<std::vector<std::uint32_t>> vecs, coords;
  std::vector<int> pivots;
  Mat power = Mat::identity(d);
  for (int k = 0;; ++k) {
    std::vector<std::uint32_t> v(n2);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) v[i * d + j] = power.at(i, j);
    std::vector<std::uint32_t> c(k + 1, 0);
    c[k] = 1;
    for (size_t t = 0; t < vecs.size(); ++t) {
      std::uint32_t f = v[pivots[t]];
      if (f == 0) continue;
      for (int j = 0; j < n2; ++j) v[j] = F.sub(v[j], F.mul(f, vecs[t][j]));
      for (size_t j = 0; j < coords[t].size(); ++j)
        c[j] = F.sub(c[j], F.mul(f, coords[t][j]));
    }
    int piv = -1;
    for (int j = 0; j < n2; ++j)
      if (v[j] != 0) {
        piv = j;
        break;
      }
    if (piv < 0) return c;  // dependency found: these are the coefficients
    std::uint32_t inv = F.inv(v[piv]);
    for (int j = 0; j < n2; ++j) v[j] = F.mul(inv, v[j]);
    for (auto& x : c) x = F.mul(inv, x);
    vecs.push_back(std::move(v));
    coords.push_back(std::move(c));
    pivots.push_back(piv);
    power = exactlin::mul(F, power, b);
  }
}

// eigenvalues of the block-diagonal operator: union over the vertex blocks
// of the roots of the minimal polynomial (min and char share their roots)
std::vector<std::uint32_t> eigenvalues(const FieldSpec& F, const HomElem& f) {
  std::vector<std::uint32_t> out;
  for (const auto& b : f) {
    std::vector<std::uint32_t> mp = min_poly(F, b);
    for (std::uint32_t lam = 0; lam < F.p; ++lam) {
      std::uint32_t val = 0, pw = 1;
      for (std::uint32_t coef : mp) {
        val = F.add(val, F.mul(coef, pw));
        pw = F.mul(pw, lam);
      }
      if (val == 0 && std::find(out.begin(), out.end(), lam) == out.end())
        out.push_back(lam);
    }
  }
  return out;
}

// Fitting split along f - lambda for every eigenvalue lambda of f. A generic
// endomorphism of a decomposable module is invertible, so splitting along f
// itself systematically misses; shifting by an eigenvalue always exposes a
// split when f has at least two of them.
bool try_spectrum(const Module& r, const HomElem& f, SplitResult& out,
                  int* n_eigs = nullptr) {
  const FieldSpec& F = r.alg->field;
  std::vector<std::uint32_t> eigs = eigenvalues(F, f);
  if (n_eigs) *n_eigs = (int)eigs.size();
  for (std::uint32_t lam : eigs) {
    HomElem g = f;
    for (auto& b : g)
      for (int i = 0; i < b.rows(); ++i) b.at(i, i) = F.sub(b.at(i, i), lam);
    if (try_fitting(r, g, out)) return true;
  }
  return false;
}

}  // namespace

SplitResult split_once(const Module& r, std::uint64_t seed, int budget) {
  if (r.is_zero()) throw repcat::ValidationError("split_once on the zero module");
  const FieldSpec& F = r.alg->field;
  SplitResult out;
  if (r.total_dim() == 1) {
    out.certified_local = true;
    return out;
  }
  std::vector<HomElem> endo = repcat::hom_basis(r, r);
  const size_t n = endo.size();

  // basis elements, then seeded random combinations; each candidate is swept
  // across its spectrum
  auto attempt = [&](const HomElem& f) {
    int n_eigs = 0;
    if (try_spectrum(r, f, out, &n_eigs)) return true;
    if (n_eigs >= 2)
      throw SplitFailure(
          "endomorphism with several eigenvalues produced no Fitting split");
    return false;
  };
  for (size_t i = 0; i < n; ++i)
    if (attempt(endo[i])) return out;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> dist(0, F.p - 1);
  for (int t = 0; t < budget; ++t) {
    std::vector<std::uint32_t> coeffs(n);
    for (auto& c : coeffs) c = dist(rng);
    if (attempt(combine(F, endo, coeffs))) return out;
  }

  // no split: every tested endomorphism was scalar plus nilpotent, which is
  // exactly locality of End(r) on the tested set
  out.certified_local = true;
  return out;
}

IsoResult iso_test(const Module& x, const Module& y, std::uint64_t seed, int budget) {
  IsoResult res;
  if (x.alg->dim() != y.alg->dim()) {
    res.certificate = "modules over different algebras";
    return res;
  }
  const FieldSpec& F = x.alg->field;
  if (x.dims != y.dims) {
    res.certificate = "dimension vectors differ";
    return res;
  }
  if (x.is_zero()) {
    res.iso = true;
    for (int d : x.dims) res.witness.push_back(Mat(d, d));
    return res;
  }
  std::vector<HomElem> fwd = repcat::hom_basis(x, y);
  std::vector<HomElem> bwd = repcat::hom_basis(y, x);
  if (fwd.size() != bwd.size()) {
    res.certificate = "hom-dimension asymmetry";
    return res;
  }
  if (fwd.empty()) {
    res.certificate = "no homomorphisms";
    return res;
  }
  auto accept = [&](const HomElem& f) {
    if (!invertible_everywhere(F, f)) return false;
    res.iso = true;
    res.witness = f;
    return true;
  };
  for (const auto& f : fwd)
    if (accept(f)) return res;

  const size_t n = fwd.size();
  // exhaustive when the hom space is tiny
  double total = 1;
  for (size_t i = 0; i < n && total <= 4096; ++i) total *= F.p;
  if (total <= 4096) {
    std::vector<std::uint32_t> coeffs(n, 0);
    while (true) {
      size_t k = 0;
      while (k < n && ++coeffs[k] == F.p) coeffs[k++] = 0;
      if (k == n) break;
      if (accept(combine(F, fwd, coeffs))) return res;
    }
    res.certificate = "exhaustive search found no invertible morphism";
    return res;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> dist(0, F.p - 1);
  for (int t = 0; t < budget; ++t) {
    std::vector<std::uint32_t> coeffs(n);
    for (auto& c : coeffs) c = dist(rng);
    if (accept(combine(F, fwd, coeffs))) return res;
  }
  res.certificate = "randomized search found no invertible morphism (budget " +
                    std::to_string(budget) + ")";
  return res;
}

namespace {

std::pair<int, HomElem> locate_or_insert(ClassRegistry& reg, const Module& indec) {
  for (int id = 0; id < reg.size(); ++id) {
    if (reg.entries[id].rep.dims != indec.dims) continue;
    IsoResult r = iso_test(reg.entries[id].rep, indec, reg.seed, reg.budget);
    if (r.iso) return {id, r.witness};
  }
  ClassRegistry::Entry e;
  e.rep = indec;
  e.projective = repcat::is_projective(indec);
  e.label = "c" + std::to_string(reg.size());
  reg.entries.push_back(std::move(e));
  HomElem id_wit;
  for (int d : indec.dims) id_wit.push_back(Mat::identity(d));
  return {reg.size() - 1, id_wit};
}

}  // namespace

int ClassRegistry::class_of(const Module& indec) {
  return locate_or_insert(*this, indec).first;
}

Decomposition decompose(const Module& r, ClassRegistry& reg) {
  const Algebra& A = *r.alg;
  const FieldSpec& F = A.field;
  const int nv = A.nvert();

  struct Piece {
    Module m;
    std::vector<Mat> embed;  // per-vertex columns into r
  };
  std::vector<Piece> work, indecs;
  {
    Piece whole{r, {}};
    for (int v = 0; v < nv; ++v) whole.embed.push_back(Mat::identity(r.dims[v]));
    if (!r.is_zero()) work.push_back(std::move(whole));
  }
  std::uint64_t salt = reg.seed;
  while (!work.empty()) {
    Piece p = std::move(work.back());
    work.pop_back();
    SplitResult s = split_once(p.m, salt++, reg.budget);
    if (!s.split) {
      indecs.push_back(std::move(p));
      continue;
    }
    Piece a{std::move(s.summand), {}}, b{std::move(s.complement), {}};
    for (int v = 0; v < nv; ++v) {
      a.embed.push_back(exactlin::mul(F, p.embed[v], s.embed_summand[v]));
      b.embed.push_back(exactlin::mul(F, p.embed[v], s.embed_complement[v]));
    }
    work.push_back(std::move(a));
    work.push_back(std::move(b));
  }

  Decomposition out;
  // classify, then group columns by class in first-seen order
  struct Classified {
    int id;
    std::vector<Mat> cols;  // embed . witness
  };
  std::vector<Classified> parts;
  for (auto& p : indecs) {
    auto [id, wit] = locate_or_insert(reg, p.m);
    Classified c{id, {}};
    for (int v = 0; v < nv; ++v) c.cols.push_back(exactlin::mul(F, p.embed[v], wit[v]));
    parts.push_back(std::move(c));
  }
  std::vector<Mat> witness;
  for (int v = 0; v < nv; ++v) witness.push_back(Mat(r.dims[v], 0));
  std::vector<int> seen_order;
  for (const auto& c : parts)
    if (std::find(seen_order.begin(), seen_order.end(), c.id) == seen_order.end())
      seen_order.push_back(c.id);
  for (int id : seen_order) {
    int mult = 0;
    for (const auto& c : parts) {
      if (c.id != id) continue;
      ++mult;
      for (int v = 0; v < nv; ++v) witness[v] = exactlin::hcat(witness[v], c.cols[v]);
    }
    out.summands.emplace_back(id, mult);
  }
  for (int v = 0; v < nv; ++v) {
    if (witness[v].rows() != witness[v].cols())
      throw RegistryCollision("decomposition witness is not square");
    if (witness[v].rows() > 0 && !exactlin::inverse(F, witness[v]))
      throw RegistryCollision(
          "decomposition witness is singular: registry holds isomorphic "
          "representatives under distinct ids");
  }
  out.witness = std::move(witness);
  return out;
}

std::string dump_registry(const ClassRegistry& reg, const std::string& algebra_file) {
  std::ostringstream out;
  out << "registry seed " << reg.seed << " budget " << reg.budget << "\n";
  for (int id = 0; id < reg.size(); ++id) {
    const auto& e = reg.entries[id];
    out << "class " << id << " projective " << (e.projective ? 1 : 0) << "\n";
    out << repcat::format_module(e.rep, algebra_file);
  }
  return out.str();
}

ClassRegistry load_registry(const std::string& text, const AlgebraPtr& alg) {
  ClassRegistry reg;
  std::istringstream in(text);
  std::string line;
  std::vector<std::pair<bool, std::string>> blocks;  // (projective, body)
  bool in_block = false;
  std::string body;
  bool proj = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "registry") {
      std::string f1, f2;
      ls >> f1 >> reg.seed >> f2 >> reg.budget;
    } else if (kw == "class") {
      if (in_block) blocks.emplace_back(proj, body);
      body.clear();
      in_block = true;
      int id;
      std::string pk;
      int pv = 0;
      ls >> id >> pk >> pv;
      proj = pv != 0;
    } else if (kw == "module") {
      continue;  // algebra supplied by the caller
    } else if (in_block) {
      body += line + "\n";
    }
  }
  if (in_block) blocks.emplace_back(proj, body);
  for (auto& [p, b] : blocks) {
    ClassRegistry::Entry e;
    e.rep = repcat::parse_module(b, alg);
    e.projective = p;
    e.label = "c" + std::to_string(reg.size());
    reg.entries.push_back(std::move(e));
  }
  return reg;
}

}  // namespace glitlab::krull
