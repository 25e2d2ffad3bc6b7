#include "glitlab/algebra.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace glitlab::algebra {

int Quiver::vertex_index(const std::string& name) const {
  for (int i = 0; i < (int)vertices.size(); ++i)
    if (vertices[i] == name) return i;
  return -1;
}

int Quiver::arrow_index(const std::string& id) const {
  for (int i = 0; i < (int)arrows.size(); ++i)
    if (arrows[i].id == id) return i;
  return -1;
}

bool Quiver::acyclic() const {
  // Kahn's algorithm
  std::vector<int> indeg(vertices.size(), 0);
  for (const auto& a : arrows) ++indeg[a.tgt];
  std::vector<int> queue;
  for (int v = 0; v < (int)vertices.size(); ++v)
    if (indeg[v] == 0) queue.push_back(v);
  size_t seen = 0;
  while (!queue.empty()) {
    int v = queue.back();
    queue.pop_back();
    ++seen;
    for (const auto& a : arrows)
      if (a.src == v && --indeg[a.tgt] == 0) queue.push_back(a.tgt);
  }
  return seen == vertices.size();
}

std::vector<int> Algebra::basis_from(int vertex) const {
  std::vector<int> out;
  for (int b = 0; b < dim(); ++b)
    if (basis[b].src == vertex) out.push_back(b);
  return out;
}

namespace {

struct Path {
  int src = 0, tgt = 0;
  std::vector<int> arrows;
  int length() const { return (int)arrows.size(); }
};

std::string path_label(const Quiver& q, const Path& p) {
  if (p.arrows.empty()) return "e_" + q.vertices[p.src];
  std::string s;
  for (size_t i = 0; i < p.arrows.size(); ++i) {
    if (i) s += "*";
    s += q.arrows[p.arrows[i]].id;
  }
  return s;
}

// lexicographic order on the sequence of arrow id strings
bool lex_less(const Quiver& q, const Path& a, const Path& b) {
  size_t n = std::min(a.arrows.size(), b.arrows.size());
  for (size_t i = 0; i < n; ++i) {
    const std::string& x = q.arrows[a.arrows[i]].id;
    const std::string& y = q.arrows[b.arrows[i]].id;
    if (x != y) return x < y;
  }
  if (a.arrows.size() != b.arrows.size()) return a.arrows.size() < b.arrows.size();
  return a.src < b.src;
}

SparseVec sparse_scale_add(const FieldSpec& F, const SparseVec& a, std::uint32_t c,
                           const SparseVec& b) {
  // a + c*b
  SparseVec out;
  size_t i = 0, j = 0;
  while (i < a.nz.size() || j < b.nz.size()) {
    if (j == b.nz.size() || (i < a.nz.size() && a.nz[i].first < b.nz[j].first)) {
      out.nz.push_back(a.nz[i++]);
    } else if (i == a.nz.size() || b.nz[j].first < a.nz[i].first) {
      std::uint32_t v = F.mul(c, b.nz[j].second);
      if (v) out.nz.emplace_back(b.nz[j].first, v);
      ++j;
    } else {
      std::uint32_t v = F.add(a.nz[i].second, F.mul(c, b.nz[j].second));
      if (v) out.nz.emplace_back(a.nz[i].first, v);
      ++i, ++j;
    }
  }
  return out;
}

}  // namespace

AlgebraPtr build_bound_quiver_algebra(const Quiver& q,
                                      const std::vector<RelationExpr>& relations,
                                      int nilpotency, const FieldSpec& field,
                                      std::size_t path_cap) {
  if (nilpotency < 1) throw ValidationError("nilpotency bound must be >= 1");
  const int N = nilpotency;
  const int nv = (int)q.vertices.size();
  if (nv == 0) throw ValidationError("quiver has no vertices");

  // validate relations: nonzero parallel terms of length >= 2
  for (const auto& rel : relations) {
    if (rel.terms.empty()) throw ValidationError("empty relation");
    int rs = -1, rt = -1;
    for (const auto& term : rel.terms) {
      if (term.arrows.size() < 2)
        throw ValidationError("relation term of length < 2 (ideal not admissible)");
      int s = q.arrows[term.arrows.front()].src;
      int t = q.arrows[term.arrows.back()].tgt;
      for (size_t k = 0; k + 1 < term.arrows.size(); ++k)
        if (q.arrows[term.arrows[k]].tgt != q.arrows[term.arrows[k + 1]].src)
          throw ValidationError("relation term is not a composable path");
      if (rs < 0) rs = s, rt = t;
      if (s != rs || t != rt)
        throw ValidationError("relation terms are not parallel paths");
    }
  }

  // enumerate paths of length <= N
  std::vector<Path> paths;
  std::map<std::pair<int, std::vector<int>>, int> path_index;
  auto push_path = [&](const Path& p) {
    if (paths.size() >= path_cap)
      throw ResourceError("path count exceeds cap (" + std::to_string(path_cap) +
                          "); raise the cap or lower the nilpotency bound");
    path_index[{p.src, p.arrows}] = (int)paths.size();
    paths.push_back(p);
  };
  for (int v = 0; v < nv; ++v) push_path({v, v, {}});
  {
    size_t level_begin = 0;
    for (int len = 1; len <= N; ++len) {
      size_t level_end = paths.size();
      for (size_t i = level_begin; i < level_end; ++i) {
        for (int a = 0; a < (int)q.arrows.size(); ++a) {
          if (q.arrows[a].src != paths[i].tgt) continue;
          Path p = paths[i];
          p.arrows.push_back(a);
          p.tgt = q.arrows[a].tgt;
          push_path(p);
        }
      }
      level_begin = level_end;
    }
  }

  // column order: longest first, ties by lexicographic arrow-id order
  std::vector<int> col_of(paths.size());
  {
    std::vector<int> order(paths.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = (int)i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (paths[a].length() != paths[b].length())
        return paths[a].length() > paths[b].length();
      return lex_less(q, paths[a], paths[b]);
    });
    for (size_t c = 0; c < order.size(); ++c) col_of[order[c]] = (int)c;
  }
  const int ncols = (int)paths.size();
  std::vector<int> path_of_col(ncols);
  for (int i = 0; i < ncols; ++i) path_of_col[col_of[i]] = i;

  // span of { u * r * v : total length <= N }, terms beyond N truncated
  std::vector<std::vector<std::uint32_t>> rows;
  for (const auto& rel : relations) {
    int rs = q.arrows[rel.terms.front().arrows.front()].src;
    int rt = q.arrows[rel.terms.front().arrows.back()].tgt;
    size_t min_len = SIZE_MAX;
    for (const auto& t : rel.terms) min_len = std::min(min_len, t.arrows.size());
    for (const auto& u : paths) {
      if (u.tgt != rs) continue;
      for (const auto& v : paths) {
        if (v.src != rt) continue;
        if (u.length() + (int)min_len + v.length() > N) continue;
        std::vector<std::uint32_t> row(ncols, 0);
        bool nonzero = false;
        for (const auto& term : rel.terms) {
          int total = u.length() + (int)term.arrows.size() + v.length();
          if (total > N) continue;  // truncated: lies beyond the modelled degrees
          std::vector<int> w = u.arrows;
          w.insert(w.end(), term.arrows.begin(), term.arrows.end());
          w.insert(w.end(), v.arrows.begin(), v.arrows.end());
          auto it = path_index.find({u.src, w});
          if (it == path_index.end()) throw ValidationError("internal: path lookup failed");
          int c = col_of[it->second];
          row[c] = field.add(row[c], term.coeff % field.p);
          nonzero = nonzero || row[c] != 0;
        }
        if (nonzero) rows.push_back(std::move(row));
      }
    }
  }

  Mat rel_mat((int)rows.size(), ncols);
  for (int i = 0; i < (int)rows.size(); ++i)
    for (int j = 0; j < ncols; ++j) rel_mat.at(i, j) = rows[i][j];
  exactlin::Echelon ech = exactlin::echelon(field, rel_mat);

  std::vector<bool> is_pivot(ncols, false);
  for (int c : ech.pivot_cols) is_pivot[c] = true;

  // canonical form of a single path column modulo the relation span
  auto canon_col = [&](int col) {
    std::vector<std::uint32_t> x(ncols, 0);
    x[col] = 1;
    for (int r = 0; r < ech.rank(); ++r) {
      int pc = ech.pivot_cols[r];
      std::uint32_t f = x[pc];
      if (f == 0) continue;
      for (int j = 0; j < ncols; ++j)
        x[j] = field.sub(x[j], field.mul(f, ech.rref.at(r, j)));
    }
    return x;
  };

  // admissibility: every path of length N must reduce to zero
  for (int pi = 0; pi < ncols; ++pi) {
    if (paths[pi].length() != N) continue;
    auto x = canon_col(col_of[pi]);
    if (!std::all_of(x.begin(), x.end(), [](std::uint32_t v) { return v == 0; }))
      throw ValidationError("admissibility failure: length-" + std::to_string(N) +
                            " path '" + path_label(q, paths[pi]) +
                            "' is not in the ideal generated by the relations");
  }

  // quotient basis = non-pivot path columns (all of length < N now)
  std::vector<int> basis_paths;  // path indices
  for (int pi = 0; pi < ncols; ++pi) {
    if (is_pivot[col_of[pi]]) continue;
    if (paths[pi].length() == N) continue;  // reduced to zero above
    basis_paths.push_back(pi);
  }
  // order: trivial idempotents first (vertex order), then by length, then lex
  std::sort(basis_paths.begin(), basis_paths.end(), [&](int a, int b) {
    if (paths[a].length() != paths[b].length())
      return paths[a].length() < paths[b].length();
    if (paths[a].length() == 0) return paths[a].src < paths[b].src;
    return lex_less(q, paths[a], paths[b]);
  });

  auto alg = std::make_shared<Algebra>();
  alg->field = field;
  alg->vertex_names = q.vertices;
  std::vector<int> basis_of_path(ncols, -1);
  for (int bi = 0; bi < (int)basis_paths.size(); ++bi) basis_of_path[basis_paths[bi]] = bi;
  std::vector<int> basis_of_col(ncols, -1);
  for (int pi = 0; pi < ncols; ++pi)
    if (basis_of_path[pi] >= 0) basis_of_col[col_of[pi]] = basis_of_path[pi];

  for (int pi : basis_paths) {
    Algebra::BasisElem be;
    be.label = path_label(q, paths[pi]);
    be.src = paths[pi].src;
    be.tgt = paths[pi].tgt;
    if (!paths[pi].arrows.empty()) be.expr = {GenWord{1, paths[pi].arrows}};
    alg->basis.push_back(std::move(be));
  }
  for (int v = 0; v < nv; ++v)
    if (alg->basis[v].src != v || !alg->basis[v].expr.empty())
      throw ValidationError("internal: trivial path e_" + q.vertices[v] +
                            " missing from the basis");

  for (int a = 0; a < (int)q.arrows.size(); ++a) {
    auto it = path_index.find({q.arrows[a].src, {a}});
    int bi = it == path_index.end() ? -1 : basis_of_path[it->second];
    if (bi < 0)
      throw ValidationError("arrow '" + q.arrows[a].id +
                            "' vanishes in the quotient (nilpotency bound too low)");
    alg->gens.push_back({q.arrows[a].id, q.arrows[a].src, q.arrows[a].tgt,
                         SparseVec{{{bi, 1}}}});
  }

  // precompute canonical forms (as sparse basis vectors) of every path
  std::vector<SparseVec> canon(ncols);
  for (int pi = 0; pi < ncols; ++pi) {
    auto x = canon_col(col_of[pi]);
    SparseVec v;
    for (int c = 0; c < ncols; ++c)
      if (x[c] != 0) {
        int bi = basis_of_col[c];
        if (bi < 0) throw ValidationError("internal: canonical form hits non-basis path");
        v.nz.emplace_back(bi, x[c]);
      }
    std::sort(v.nz.begin(), v.nz.end());
    canon[pi] = std::move(v);
  }

  const int dim = (int)basis_paths.size();
  alg->prod.assign(dim, std::vector<SparseVec>(dim));
  for (int i = 0; i < dim; ++i) {
    const Path& p = paths[basis_paths[i]];
    for (int j = 0; j < dim; ++j) {
      const Path& r = paths[basis_paths[j]];
      if (p.tgt != r.src) continue;
      if (p.length() + r.length() > N) continue;  // J^N = 0 in the quotient
      std::vector<int> w = p.arrows;
      w.insert(w.end(), r.arrows.begin(), r.arrows.end());
      auto it = path_index.find({p.src, w});
      if (it == path_index.end()) throw ValidationError("internal: product path lookup");
      alg->prod[i][j] = canon[it->second];
    }
  }

  QuiverPresentation pres;
  pres.quiver = q;
  pres.relations = relations;
  pres.nilpotency = N;
  alg->presentation = std::move(pres);
  return alg;
}

AlgebraPtr opposite(const AlgebraPtr& a) {
  auto op = std::make_shared<Algebra>();
  op->field = a->field;
  op->name = a->name.empty() ? "op" : a->name + "^op";
  op->vertex_names = a->vertex_names;
  op->basis = a->basis;
  for (auto& be : op->basis) {
    std::swap(be.src, be.tgt);
    for (auto& w : be.expr) std::reverse(w.gens.begin(), w.gens.end());
  }
  op->gens = a->gens;
  for (auto& g : op->gens) std::swap(g.src, g.tgt);
  int d = a->dim();
  op->prod.assign(d, std::vector<SparseVec>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) op->prod[i][j] = a->prod[j][i];
  return op;
}

namespace {

SparseVec sparse_mul(const Algebra& A, const SparseVec& x, const SparseVec& y) {
  SparseVec out;
  for (auto [i, ci] : x.nz)
    for (auto [j, cj] : y.nz)
      out = sparse_scale_add(A.field, out, A.field.mul(ci, cj), A.prod[i][j]);
  return out;
}

}  // namespace

void check_algebra(const Algebra& a) {
  const int nv = a.nvert(), d = a.dim();
  if (d < nv) throw ValidationError("fewer basis elements than vertices");
  for (int v = 0; v < nv; ++v) {
    if (a.basis[v].src != v || a.basis[v].tgt != v)
      throw ValidationError("basis[v] is not the idempotent at vertex v");
    if (!a.basis[v].expr.empty()) throw ValidationError("idempotent with nonempty expression");
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const SparseVec& p = a.prod[i][j];
      if (a.basis[i].tgt != a.basis[j].src && !p.zero())
        throw ValidationError("ungraded product is nonzero");
      for (auto [k, c] : p.nz) {
        (void)c;
        if (a.basis[k].src != a.basis[i].src || a.basis[k].tgt != a.basis[j].tgt)
          throw ValidationError("product violates grading");
      }
    }
  // unit behaviour
  for (int i = 0; i < d; ++i) {
    const SparseVec left = a.prod[a.basis[i].src][i];
    const SparseVec right = a.prod[i][a.basis[i].tgt];
    SparseVec self{{{i, 1}}};
    if (left.nz != self.nz || right.nz != self.nz)
      throw ValidationError("trivial idempotents do not act as local units");
  }
  // associativity on all triples
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (a.basis[i].tgt != a.basis[j].src) continue;
      for (int k = 0; k < d; ++k) {
        if (a.basis[j].tgt != a.basis[k].src) continue;
        SparseVec lhs = sparse_mul(a, a.prod[i][j], SparseVec{{{k, 1}}});
        SparseVec rhs = sparse_mul(a, SparseVec{{{i, 1}}}, a.prod[j][k]);
        if (lhs.nz != rhs.nz)
          throw ValidationError("associativity failure at basis triple (" +
                                a.basis[i].label + ", " + a.basis[j].label + ", " +
                                a.basis[k].label + ")");
      }
    }
  // generators: grading of their residues, and basis expressions evaluate back
  for (const auto& g : a.gens)
    for (auto [k, c] : g.elem.nz) {
      (void)c;
      if (a.basis[k].src != g.src || a.basis[k].tgt != g.tgt)
        throw ValidationError("generator '" + g.label + "' has an ungraded residue");
    }
  for (int b = 0; b < d; ++b) {
    if (a.basis[b].expr.empty()) continue;
    SparseVec acc;
    for (const auto& word : a.basis[b].expr) {
      if (word.gens.empty()) throw ValidationError("empty generator word on " + a.basis[b].label);
      SparseVec s = a.gens[word.gens[0]].elem;
      for (size_t k = 1; k < word.gens.size(); ++k)
        s = sparse_mul(a, s, a.gens[word.gens[k]].elem);
      acc = sparse_scale_add(a.field, acc, word.coeff, s);
    }
    if (acc.nz != SparseVec{{{b, 1}}}.nz)
      throw ValidationError("generator expression of '" + a.basis[b].label +
                            "' does not evaluate to the element");
  }
}

// ---------------------------------------------------------------------------
// text format

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream is(line);
  std::string t;
  while (is >> t) toks.push_back(t);
  return toks;
}

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

bool is_integer(const std::string& s) {
  if (s.empty()) return false;
  size_t i = s[0] == '-' ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!isdigit((unsigned char)s[i])) return false;
  return true;
}

RelationExpr parse_relation_line(const Quiver& q, const FieldSpec& F,
                                 const std::string& line, int lineno) {
  // split into signed terms on +/-
  RelationExpr rel;
  std::string cur;
  std::vector<std::pair<int, std::string>> signed_terms;  // sign, text
  int sign = 1;
  for (size_t i = 0; i <= line.size(); ++i) {
    char ch = i < line.size() ? line[i] : '+';
    if (ch == '+' || ch == '-') {
      std::string t;
      for (char c : cur)
        if (!isspace((unsigned char)c)) t += c;
      if (!t.empty()) signed_terms.emplace_back(sign, t);
      else if (i < line.size() && !signed_terms.empty())
        throw ParseError(lineno, "empty relation term");
      sign = ch == '-' ? -1 : 1;
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (signed_terms.empty()) throw ParseError(lineno, "empty relation");
  for (auto& [sg, text] : signed_terms) {
    std::vector<std::string> factors;
    std::string f;
    for (char c : text + "*") {
      if (c == '*') {
        if (f.empty()) throw ParseError(lineno, "empty factor in relation term");
        factors.push_back(f);
        f.clear();
      } else {
        f += c;
      }
    }
    RelationTerm term;
    size_t k = 0;
    if (is_integer(factors[0]) && q.arrow_index(factors[0]) < 0) {
      term.coeff = F.reduce(std::stoll(factors[0]));
      k = 1;
    }
    if (sg < 0) term.coeff = F.neg(term.coeff);
    if (k == factors.size()) throw ParseError(lineno, "relation term has no arrows");
    for (; k < factors.size(); ++k) {
      int ai = q.arrow_index(factors[k]);
      if (ai < 0) throw ParseError(lineno, "unknown arrow '" + factors[k] + "'");
      term.arrows.push_back(ai);
    }
    if (term.coeff != 0) rel.terms.push_back(std::move(term));
  }
  if (rel.terms.empty()) throw ParseError(lineno, "relation is zero modulo p");
  return rel;
}

}  // namespace

AlgebraPtr parse_algebra(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::optional<FieldSpec> field;
  Quiver q;
  int nilpotency = -1;
  bool in_relations = false;
  std::vector<RelationExpr> relations;
  std::vector<std::string> relation_texts;

  while (std::getline(in, line)) {
    ++lineno;
    std::string body = strip_comment(line);
    auto toks = tokenize(body);
    if (toks.empty()) continue;
    if (in_relations) {
      relations.push_back(parse_relation_line(q, field ? *field : FieldSpec(101), body, lineno));
      std::string t;
      for (auto& s : toks) t += (t.empty() ? "" : " ") + s;
      relation_texts.push_back(t);
      continue;
    }
    const std::string& kw = toks[0];
    if (kw == "field") {
      if (toks.size() != 2 || !is_integer(toks[1]))
        throw ParseError(lineno, "expected: field <p>");
      long long p = std::stoll(toks[1]);
      if (p < 2 || !exactlin::is_prime((std::uint32_t)p))
        throw ParseError(lineno, "field modulus must be prime");
      field = FieldSpec((std::uint32_t)p);
    } else if (kw == "vertices") {
      if (toks.size() < 2) throw ParseError(lineno, "expected at least one vertex id");
      for (size_t i = 1; i < toks.size(); ++i) {
        if (q.vertex_index(toks[i]) >= 0)
          throw ParseError(lineno, "duplicate vertex id '" + toks[i] + "'");
        q.vertices.push_back(toks[i]);
      }
    } else if (kw == "arrow") {
      if (toks.size() != 4) throw ParseError(lineno, "expected: arrow <id> <src> <tgt>");
      if (q.arrow_index(toks[1]) >= 0)
        throw ParseError(lineno, "duplicate arrow id '" + toks[1] + "'");
      int s = q.vertex_index(toks[2]), t = q.vertex_index(toks[3]);
      if (s < 0) throw ParseError(lineno, "unknown vertex '" + toks[2] + "'");
      if (t < 0) throw ParseError(lineno, "unknown vertex '" + toks[3] + "'");
      q.arrows.push_back({toks[1], s, t});
    } else if (kw == "nilpotency") {
      if (toks.size() != 2 || !is_integer(toks[1]))
        throw ParseError(lineno, "expected: nilpotency <N>");
      nilpotency = (int)std::stoll(toks[1]);
    } else if (kw == "relations") {
      in_relations = true;
    } else {
      throw ParseError(lineno, "unknown keyword '" + kw + "'");
    }
  }
  if (q.vertices.empty()) throw ParseError(lineno, "no vertices declared");
  if (nilpotency < 1) throw ParseError(lineno, "missing or invalid nilpotency bound");
  FieldSpec F = field ? *field : FieldSpec(101);
  auto alg = build_bound_quiver_algebra(q, relations, nilpotency, F);
  auto mut = std::const_pointer_cast<Algebra>(alg);
  mut->name = name;
  mut->presentation->relation_texts = relation_texts;
  return alg;
}

AlgebraPtr parse_algebra_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open algebra file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_algebra(ss.str(), path);
}

std::string format_algebra(const Algebra& a) {
  if (!a.presentation) throw ValidationError("algebra has no quiver presentation");
  const auto& pres = *a.presentation;
  std::ostringstream out;
  out << "field " << a.field.p << "\n";
  out << "vertices";
  for (const auto& v : pres.quiver.vertices) out << " " << v;
  out << "\n";
  for (const auto& ar : pres.quiver.arrows)
    out << "arrow " << ar.id << " " << pres.quiver.vertices[ar.src] << " "
        << pres.quiver.vertices[ar.tgt] << "\n";
  out << "nilpotency " << pres.nilpotency << "\n";
  if (!pres.relations.empty()) {
    out << "relations\n";
    for (const auto& rel : pres.relations) {
      std::string s;
      for (size_t i = 0; i < rel.terms.size(); ++i) {
        const auto& t = rel.terms[i];
        if (i) s += " + ";
        if (t.coeff != 1) s += std::to_string(t.coeff) + "*";
        for (size_t k = 0; k < t.arrows.size(); ++k) {
          if (k) s += "*";
          s += pres.quiver.arrows[t.arrows[k]].id;
        }
      }
      out << s << "\n";
    }
  }
  return out.str();
}

}  // namespace glitlab::algebra
