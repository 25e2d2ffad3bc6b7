#include "glitlab/repcat.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace glitlab::repcat {

using algebra::ParseError;

std::vector<int> Module::offsets() const {
  std::vector<int> off(dims.size() + 1, 0);
  for (size_t v = 0; v < dims.size(); ++v) off[v + 1] = off[v] + dims[v];
  return off;
}

Module zero_module(const AlgebraPtr& a) {
  Module m;
  m.alg = a;
  m.dims.assign(a->nvert(), 0);
  m.act.assign(a->gens.size(), Mat(0, 0));
  return m;
}

Mat basis_action(const Module& m, int b) {
  const Algebra& A = *m.alg;
  const auto& be = A.basis[b];
  if (A.is_idempotent(b)) return Mat::identity(m.dims[be.src]);
  Mat acc(m.dims[be.tgt], m.dims[be.src]);
  for (const auto& word : be.expr) {
    Mat w = Mat::identity(m.dims[be.src]);
    for (int g : word.gens) w = exactlin::mul(A.field, m.act[g], w);
    acc = exactlin::add(A.field, acc, exactlin::scale(A.field, word.coeff, w));
  }
  return acc;
}

Mat ambient_action(const Module& m, int b) {
  const Algebra& A = *m.alg;
  auto off = m.offsets();
  Mat big(m.total_dim(), m.total_dim());
  Mat blk = basis_action(m, b);
  int rs = off[A.basis[b].tgt], cs = off[A.basis[b].src];
  for (int i = 0; i < blk.rows(); ++i)
    for (int j = 0; j < blk.cols(); ++j) big.at(rs + i, cs + j) = blk.at(i, j);
  return big;
}

namespace {

Mat sparse_action(const Module& m, const SparseVec& v, int src, int tgt) {
  const FieldSpec& F = m.alg->field;
  Mat acc(m.dims[tgt], m.dims[src]);
  for (auto [k, c] : v.nz)
    acc = exactlin::add(F, acc, exactlin::scale(F, c, basis_action(m, k)));
  return acc;
}

}  // namespace

void validate_module(const Module& m) {
  const Algebra& A = *m.alg;
  if ((int)m.dims.size() != A.nvert())
    throw ValidationError("module has wrong number of vertex dimensions");
  if (m.act.size() != A.gens.size())
    throw ValidationError("module has wrong number of generator actions");
  for (size_t g = 0; g < A.gens.size(); ++g)
    if (m.act[g].rows() != m.dims[A.gens[g].tgt] || m.act[g].cols() != m.dims[A.gens[g].src])
      throw ValidationError("action of generator '" + A.gens[g].label +
                            "' has the wrong shape");
  // for quiver algebras, report a violated relation by its text first
  if (A.presentation) {
    const auto& pres = *A.presentation;
    const FieldSpec& F = A.field;
    for (size_t r = 0; r < pres.relations.size(); ++r) {
      const auto& rel = pres.relations[r];
      int src = pres.quiver.arrows[rel.terms[0].arrows.front()].src;
      int tgt = pres.quiver.arrows[rel.terms[0].arrows.back()].tgt;
      Mat acc(m.dims[tgt], m.dims[src]);
      for (const auto& term : rel.terms) {
        Mat w = Mat::identity(m.dims[src]);
        for (int a : term.arrows) w = exactlin::mul(F, m.act[a], w);
        acc = exactlin::add(F, acc, exactlin::scale(F, term.coeff, w));
      }
      if (!acc.is_zero()) {
        std::string text = r < pres.relation_texts.size() ? pres.relation_texts[r] : "";
        throw ValidationError("module action violates relation" +
                              (text.empty() ? "" : " '" + text + "'"));
      }
    }
    // paths longer than the nilpotency bound must act by zero
    // (implied by the pairwise check below, so nothing extra here)
  }
  // complete check: the action respects every basis product
  for (int i = 0; i < A.dim(); ++i)
    for (int j = 0; j < A.dim(); ++j) {
      if (A.basis[i].tgt != A.basis[j].src) continue;
      Mat lhs = sparse_action(m, A.prod[i][j], A.basis[i].src, A.basis[j].tgt);
      Mat rhs = exactlin::mul(A.field, basis_action(m, j), basis_action(m, i));
      if (!(lhs == rhs))
        throw ValidationError("module action does not respect the product " +
                              A.basis[i].label + " * " + A.basis[j].label);
    }
}

Module direct_sum(const Module& a, const Module& b) {
  if (a.alg != b.alg && a.alg->dim() != b.alg->dim())
    throw ValidationError("direct sum of modules over different algebras");
  Module s;
  s.alg = a.alg;
  s.dims.resize(a.dims.size());
  for (size_t v = 0; v < a.dims.size(); ++v) s.dims[v] = a.dims[v] + b.dims[v];
  for (size_t g = 0; g < a.act.size(); ++g)
    s.act.push_back(exactlin::block_diag(a.act[g], b.act[g]));
  return s;
}

Module direct_sum(const std::vector<Module>& parts) {
  if (parts.empty()) throw ValidationError("direct sum of an empty list");
  Module s = parts[0];
  for (size_t i = 1; i < parts.size(); ++i) s = direct_sum(s, parts[i]);
  return s;
}

Module projective_module(const AlgebraPtr& a, int vertex) {
  const Algebra& A = *a;
  if (vertex < 0 || vertex >= A.nvert()) throw ValidationError("bad vertex index");
  std::vector<int> rows = A.basis_from(vertex);
  Module p;
  p.alg = a;
  p.dims.assign(A.nvert(), 0);
  std::vector<int> pos(A.dim(), -1);  // local index at the target vertex
  for (int b : rows) pos[b] = p.dims[A.basis[b].tgt]++;
  for (const auto& g : A.gens) p.act.push_back(Mat(p.dims[g.tgt], p.dims[g.src]));
  const FieldSpec& F = A.field;
  for (size_t gi = 0; gi < A.gens.size(); ++gi) {
    const auto& g = A.gens[gi];
    for (int b : rows) {
      if (A.basis[b].tgt != g.src) continue;
      // right multiplication b * g
      for (auto [k, c] : g.elem.nz)
        for (auto [k2, c2] : A.prod[b][k].nz) {
          if (pos[k2] < 0) throw ValidationError("internal: projective closure");
          auto& cell = p.act[gi].at(pos[k2], pos[b]);
          cell = F.add(cell, F.mul(c, c2));
        }
    }
  }
  return p;
}

std::vector<Mat> radical(const Module& m) {
  const Algebra& A = *m.alg;
  std::vector<Mat> rad;
  for (int v = 0; v < A.nvert(); ++v) {
    Mat span(m.dims[v], 0);
    for (size_t g = 0; g < A.gens.size(); ++g)
      if (A.gens[g].tgt == v) span = exactlin::hcat(span, m.act[g]);
    rad.push_back(exactlin::column_space_basis(A.field, span));
  }
  return rad;
}

Cover projective_cover(const Module& m) {
  const Algebra& A = *m.alg;
  const FieldSpec& F = A.field;
  std::vector<Mat> rad = radical(m);

  // representatives of a complement of rad M in each vertex space
  std::vector<std::vector<int>> tops(A.nvert());
  for (int v = 0; v < A.nvert(); ++v) {
    Mat probe = exactlin::hcat(rad[v], Mat::identity(m.dims[v]));
    exactlin::Echelon e = exactlin::echelon(F, probe);
    for (int pc : e.pivot_cols)
      if (pc >= rad[v].cols()) tops[v].push_back(pc - rad[v].cols());
  }

  Cover cov;
  cov.proj.alg = m.alg;
  cov.proj.dims.assign(A.nvert(), 0);
  cov.proj.act.assign(A.gens.size(), Mat(0, 0));
  std::vector<Mat> cover_cols(A.nvert());  // accumulated per vertex
  for (int u = 0; u < A.nvert(); ++u) cover_cols[u] = Mat(m.dims[u], 0);

  std::vector<Module> parts;
  for (int v = 0; v < A.nvert(); ++v) {
    if (tops[v].empty()) continue;
    cov.multiplicity.emplace_back(v, (int)tops[v].size());
    Module pv = projective_module(m.alg, v);
    // local position of each basis element inside P(v) at its target vertex
    std::vector<int> rowsv = A.basis_from(v);
    std::vector<int> pos(A.dim(), -1);
    std::vector<int> cnt(A.nvert(), 0);
    for (int b : rowsv) pos[b] = cnt[A.basis[b].tgt]++;
    for (int topidx : tops[v]) {
      parts.push_back(pv);
      std::vector<Mat> cols(A.nvert());
      for (int u = 0; u < A.nvert(); ++u) cols[u] = Mat(m.dims[u], pv.dims[u]);
      for (int b : rowsv) {
        Mat actb = basis_action(m, b);  // dims[tgt(b)] x dims[v]
        int u = A.basis[b].tgt;
        for (int i = 0; i < m.dims[u]; ++i)
          cols[u].at(i, pos[b]) = actb.at(i, topidx);
      }
      for (int u = 0; u < A.nvert(); ++u)
        cover_cols[u] = exactlin::hcat(cover_cols[u], cols[u]);
    }
  }
  if (parts.empty())
    cov.proj = zero_module(m.alg);
  else
    cov.proj = direct_sum(parts);
  cov.map = cover_cols;

  for (int u = 0; u < A.nvert(); ++u)
    if (exactlin::rank(F, cov.map[u]) != m.dims[u])
      throw ValidationError("internal: projective cover is not surjective");
  return cov;
}

Module kernel_module(const Module& m, const std::vector<Mat>& f) {
  const Algebra& A = *m.alg;
  const FieldSpec& F = A.field;
  std::vector<Mat> K(A.nvert());
  Module ker;
  ker.alg = m.alg;
  ker.dims.assign(A.nvert(), 0);
  for (int v = 0; v < A.nvert(); ++v) {
    K[v] = exactlin::kernel_basis(F, f[v]);
    ker.dims[v] = K[v].cols();
  }
  for (size_t g = 0; g < A.gens.size(); ++g) {
    int s = A.gens[g].src, t = A.gens[g].tgt;
    Mat rhs = exactlin::mul(F, m.act[g], K[s]);
    auto X = exactlin::solve_matrix(F, K[t], rhs);
    if (!X)
      throw ValidationError("kernel is not closed under the action of '" +
                            A.gens[g].label + "'");
    ker.act.push_back(*X);
  }
  return ker;
}

Module syzygy(const Module& m) {
  Cover cov = projective_cover(m);
  return kernel_module(cov.proj, cov.map);
}

Module syzygy_power(const Module& m, int k) {
  Module cur = m;
  for (int i = 0; i < k; ++i) cur = syzygy(cur);
  return cur;
}

bool is_projective(const Module& m) { return syzygy(m).is_zero(); }

std::vector<std::vector<Mat>> hom_basis(const Module& m, const Module& n) {
  const Algebra& A = *m.alg;
  const FieldSpec& F = A.field;
  const int nv = A.nvert();
  std::vector<int> var_off(nv + 1, 0);
  for (int v = 0; v < nv; ++v) var_off[v + 1] = var_off[v] + n.dims[v] * m.dims[v];
  const int nvars = var_off[nv];

  int nrows = 0;
  for (const auto& g : A.gens) nrows += n.dims[g.tgt] * m.dims[g.src];
  Mat sys(nrows, nvars);
  int row = 0;
  for (size_t gi = 0; gi < A.gens.size(); ++gi) {
    int s = A.gens[gi].src, t = A.gens[gi].tgt;
    // f_t * actM[g] - actN[g] * f_s = 0
    for (int i = 0; i < n.dims[t]; ++i)
      for (int j = 0; j < m.dims[s]; ++j, ++row) {
        for (int k = 0; k < m.dims[t]; ++k) {
          std::uint32_t c = m.act[gi].at(k, j);
          if (c) {
            int var = var_off[t] + i * m.dims[t] + k;
            sys.at(row, var) = F.add(sys.at(row, var), c);
          }
        }
        for (int k = 0; k < n.dims[s]; ++k) {
          std::uint32_t c = n.act[gi].at(i, k);
          if (c) {
            int var = var_off[s] + k * m.dims[s] + j;
            sys.at(row, var) = F.sub(sys.at(row, var), c);
          }
        }
      }
  }
  Mat ker = exactlin::kernel_basis(F, sys);
  std::vector<std::vector<Mat>> out;
  for (int c = 0; c < ker.cols(); ++c) {
    std::vector<Mat> f(nv);
    for (int v = 0; v < nv; ++v) {
      f[v] = Mat(n.dims[v], m.dims[v]);
      for (int i = 0; i < n.dims[v]; ++i)
        for (int j = 0; j < m.dims[v]; ++j)
          f[v].at(i, j) = ker.at(var_off[v] + i * m.dims[v] + j, c);
    }
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<Mat> hom_compose(const FieldSpec& F, const std::vector<Mat>& g,
                             const std::vector<Mat>& f) {
  std::vector<Mat> out;
  for (size_t v = 0; v < f.size(); ++v) out.push_back(exactlin::mul(F, g[v], f[v]));
  return out;
}

// ---------------------------------------------------------------------------
// text format

namespace {

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream is(line);
  std::string t;
  while (is >> t) toks.push_back(t);
  return toks;
}

}  // namespace

Module parse_module(const std::string& text, const AlgebraPtr& a) {
  const Algebra& A = *a;
  Module m;
  m.alg = a;
  m.dims.assign(A.nvert(), 0);

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool seen_dims = false;
  std::vector<bool> have_act(A.gens.size(), false);
  std::vector<Mat> act(A.gens.size());

  auto read_matrix = [&](int gi) {
    int rows = m.dims[A.gens[gi].tgt], cols = m.dims[A.gens[gi].src];
    Mat mat(rows, cols);
    for (int i = 0; i < rows; ++i) {
      if (cols == 0) continue;
      std::string mline;
      do {
        if (!std::getline(in, mline))
          throw ParseError(lineno, "unexpected end of file inside matrix for '" +
                                       A.gens[gi].label + "'");
        ++lineno;
        mline = strip_comment(mline);
      } while (tokenize(mline).empty());
      auto toks = tokenize(mline);
      if ((int)toks.size() != cols)
        throw ParseError(lineno, "expected " + std::to_string(cols) + " entries");
      for (int j = 0; j < cols; ++j) {
        try {
          mat.at(i, j) = A.field.reduce(std::stoll(toks[j]));
        } catch (const std::exception&) {
          throw ParseError(lineno, "bad matrix entry '" + toks[j] + "'");
        }
      }
    }
    return mat;
  };

  while (std::getline(in, line)) {
    ++lineno;
    auto toks = tokenize(strip_comment(line));
    if (toks.empty()) continue;
    if (toks[0] == "module") {
      // "module over <file>": the algebra is supplied by the caller here
      continue;
    } else if (toks[0] == "dims") {
      seen_dims = true;
      for (size_t i = 1; i < toks.size(); ++i) {
        auto colon = toks[i].find(':');
        if (colon == std::string::npos)
          throw ParseError(lineno, "expected <vertex>:<dim>, got '" + toks[i] + "'");
        std::string vname = toks[i].substr(0, colon);
        int v = -1;
        for (int u = 0; u < A.nvert(); ++u)
          if (A.vertex_names[u] == vname) v = u;
        if (v < 0) throw ParseError(lineno, "unknown vertex '" + vname + "'");
        try {
          m.dims[v] = (int)std::stoll(toks[i].substr(colon + 1));
        } catch (const std::exception&) {
          throw ParseError(lineno, "bad dimension in '" + toks[i] + "'");
        }
        if (m.dims[v] < 0) throw ParseError(lineno, "negative dimension");
      }
    } else if (toks[0] == "map") {
      if (!seen_dims) throw ParseError(lineno, "'map' before 'dims'");
      if (toks.size() != 2) throw ParseError(lineno, "expected: map <generator>");
      int gi = -1;
      for (size_t g = 0; g < A.gens.size(); ++g)
        if (A.gens[g].label == toks[1]) gi = (int)g;
      if (gi < 0) throw ParseError(lineno, "unknown generator '" + toks[1] + "'");
      act[gi] = read_matrix(gi);
      have_act[gi] = true;
    } else {
      throw ParseError(lineno, "unknown keyword '" + toks[0] + "'");
    }
  }
  if (!seen_dims) throw ParseError(lineno, "missing 'dims' line");
  for (size_t g = 0; g < A.gens.size(); ++g)
    m.act.push_back(have_act[g] ? act[g]
                                : Mat(m.dims[A.gens[g].tgt], m.dims[A.gens[g].src]));
  validate_module(m);
  return m;
}

Module parse_module_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open module file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  std::string text = ss.str();

  // locate the referenced algebra file
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::string alg_file;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = tokenize(strip_comment(line));
    if (toks.empty()) continue;
    if (toks[0] == "module") {
      if (toks.size() != 3 || toks[1] != "over")
        throw ParseError(lineno, "expected: module over <algebra-file>");
      alg_file = toks[2];
      break;
    }
    throw ParseError(lineno, "module file must start with 'module over <algebra-file>'");
  }
  if (alg_file.empty()) throw ParseError(lineno, "missing 'module over' line");
  std::filesystem::path resolved(alg_file);
  if (resolved.is_relative())
    resolved = std::filesystem::path(path).parent_path() / resolved;
  AlgebraPtr a = algebra::parse_algebra_file(resolved.string());
  return parse_module(text, a);
}

std::string format_module(const Module& m, const std::string& algebra_file) {
  const Algebra& A = *m.alg;
  std::ostringstream out;
  out << "module over " << algebra_file << "\n";
  out << "dims";
  for (int v = 0; v < A.nvert(); ++v) out << " " << A.vertex_names[v] << ":" << m.dims[v];
  out << "\n";
  for (size_t g = 0; g < A.gens.size(); ++g) {
    if (m.act[g].rows() == 0 || m.act[g].cols() == 0) continue;
    out << "map " << A.gens[g].label << "\n";
    for (int i = 0; i < m.act[g].rows(); ++i) {
      for (int j = 0; j < m.act[g].cols(); ++j)
        out << (j ? " " : "") << m.act[g].at(i, j);
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace glitlab::repcat
