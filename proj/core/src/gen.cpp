#include "glitlab/gen.hpp"

#include <algorithm>

namespace glitlab::gen {

using algebra::Quiver;
using algebra::RelationExpr;
using algebra::RelationTerm;
using exactlin::Mat;

namespace {

int pick(Rng& rng, int n) { return n <= 1 ? 0 : (int)(rng() % n); }

std::vector<std::vector<int>> paths_of_length(const Quiver& q, int len) {
  std::vector<std::vector<int>> cur;
  for (int a = 0; a < (int)q.arrows.size(); ++a) cur.push_back({a});
  for (int l = 1; l < len; ++l) {
    std::vector<std::vector<int>> next;
    for (const auto& p : cur)
      for (int a = 0; a < (int)q.arrows.size(); ++a)
        if (q.arrows[p.back()].tgt == q.arrows[a].src) {
          auto e = p;
          e.push_back(a);
          next.push_back(std::move(e));
        }
    cur = std::move(next);
  }
  return cur;
}

// quotient of p by the submodule with per-vertex column spans s
Module quotient_module(const Module& p, const std::vector<Mat>& s) {
  const exactlin::FieldSpec& F = p.alg->field;
  std::vector<Mat> proj, incl;
  std::vector<int> qdims;
  for (size_t v = 0; v < p.dims.size(); ++v) {
    int d = p.dims[v];
    exactlin::Echelon E = exactlin::echelon(F, exactlin::transpose(s[v]));
    std::vector<bool> is_pivot(d, false);
    for (int c : E.pivot_cols) is_pivot[c] = true;
    std::vector<int> kept;
    for (int c = 0; c < d; ++c)
      if (!is_pivot[c]) kept.push_back(c);
    int q = (int)kept.size();
    Mat pr(q, d), in(d, q);
    for (int k = 0; k < q; ++k) {
      pr.at(k, kept[k]) = 1;
      in.at(kept[k], k) = 1;
    }
    for (size_t r = 0; r < E.pivot_cols.size(); ++r)
      for (int k = 0; k < q; ++k)
        pr.at(k, E.pivot_cols[r]) = F.neg(E.rref.at((int)r, kept[k]));
    qdims.push_back(q);
    proj.push_back(std::move(pr));
    incl.push_back(std::move(in));
  }
  Module out;
  out.alg = p.alg;
  out.dims = std::move(qdims);
  for (size_t g = 0; g < p.alg->gens.size(); ++g) {
    int sv = p.alg->gens[g].src, tv = p.alg->gens[g].tgt;
    out.act.push_back(
        exactlin::mul(F, proj[tv], exactlin::mul(F, p.act[g], incl[sv])));
  }
  repcat::validate_module(out);
  return out;
}

Module simple_module(const AlgebraPtr& a, int v) {
  Module m;
  m.alg = a;
  m.dims.assign(a->nvert(), 0);
  m.dims[v] = 1;
  for (const auto& g : a->gens)
    m.act.emplace_back(m.dims[g.tgt], m.dims[g.src]);
  return m;
}

}  // namespace

AlgebraPtr random_algebra(Rng& rng, const FieldSpec& F, int max_vertices,
                          int max_arrows, int max_dim) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    Quiver q;
    int nv = 1 + pick(rng, max_vertices);
    for (int v = 0; v < nv; ++v) q.vertices.push_back(std::to_string(v + 1));
    int na = pick(rng, max_arrows + 1);
    for (int a = 0; a < na; ++a)
      q.arrows.push_back({"a" + std::to_string(a), pick(rng, nv), pick(rng, nv)});

    int N = q.arrows.empty() ? 1 : 2 + pick(rng, 2);
    std::vector<RelationExpr> rels;
    for (auto& p : paths_of_length(q, N)) {
      RelationExpr r;
      r.terms.push_back({1, p});
      rels.push_back(std::move(r));
    }
    // occasionally bind two parallel length-2 paths together
    if (N == 3 && rng() % 3 == 0) {
      auto len2 = paths_of_length(q, 2);
      std::vector<std::pair<int, int>> parallel;
      for (size_t i = 0; i < len2.size(); ++i)
        for (size_t j = i + 1; j < len2.size(); ++j)
          if (q.arrows[len2[i].front()].src == q.arrows[len2[j].front()].src &&
              q.arrows[len2[i].back()].tgt == q.arrows[len2[j].back()].tgt)
            parallel.emplace_back((int)i, (int)j);
      if (!parallel.empty()) {
        auto [i, j] = parallel[pick(rng, (int)parallel.size())];
        RelationExpr r;
        r.terms.push_back({1, len2[i]});
        r.terms.push_back({F.p - 1, len2[j]});
        rels.push_back(std::move(r));
      }
    }

    try {
      AlgebraPtr a = algebra::build_bound_quiver_algebra(q, rels, N, F);
      if (a->dim() <= max_dim) return a;
    } catch (const std::exception&) {
      // inadmissible draw; redraw
    }
  }
  Quiver q;
  q.vertices = {"1"};
  return algebra::build_bound_quiver_algebra(q, {}, 1, F);
}

Module random_module(Rng& rng, const AlgebraPtr& a, int max_dim) {
  const FieldSpec& F = a->field;
  for (int attempt = 0; attempt < 20; ++attempt) {
    int k = 1 + pick(rng, 3);
    std::vector<Module> parts;
    for (int i = 0; i < k; ++i)
      parts.push_back(repcat::projective_module(a, pick(rng, a->nvert())));
    Module p = repcat::direct_sum(parts);
    if (p.total_dim() > 2 * max_dim) continue;

    std::vector<Mat> rad = repcat::radical(p);
    std::vector<Mat> sub;
    for (size_t v = 0; v < p.dims.size(); ++v) sub.emplace_back(p.dims[v], 0);
    int nvec = pick(rng, 4);
    for (int i = 0; i < nvec; ++i) {
      int v = pick(rng, a->nvert());
      if (rad[v].cols() == 0) continue;
      Mat combo(p.dims[v], 1);
      for (int c = 0; c < rad[v].cols(); ++c) {
        std::uint32_t coef = (std::uint32_t)(rng() % F.p);
        for (int r = 0; r < p.dims[v]; ++r)
          combo.at(r, 0) = F.add(combo.at(r, 0), F.mul(coef, rad[v].at(r, c)));
      }
      sub[v] = exactlin::hcat(sub[v], combo);
    }
    // close the span under the generator actions
    bool grew = true;
    while (grew) {
      grew = false;
      for (size_t g = 0; g < a->gens.size(); ++g) {
        int sv = a->gens[g].src, tv = a->gens[g].tgt;
        if (sub[sv].cols() == 0) continue;
        Mat img = exactlin::mul(F, p.act[g], sub[sv]);
        Mat joined = exactlin::column_space_basis(F, exactlin::hcat(sub[tv], img));
        if (joined.cols() != sub[tv].cols()) {
          sub[tv] = std::move(joined);
          grew = true;
        }
      }
    }
    Module q = quotient_module(p, sub);
    if (!q.is_zero() && q.total_dim() <= max_dim) return q;
  }
  return simple_module(a, pick(rng, a->nvert()));
}

namespace {

// direct sum of free one-generator pieces at the requested gradings; pieces
// that would be empty or push past max_dim are silently dropped
morita::Bimodule pieces_bimodule(const AlgebraPtr& row, const AlgebraPtr& col,
                                 const std::vector<std::pair<int, int>>& at,
                                 int max_dim) {
  const FieldSpec& F = row->field;
  morita::Bimodule m = morita::zero_bimodule(row, col);
  const int nr = row->nvert(), nc = col->nvert();

  struct Piece {
    std::vector<int> ta, ub;               // basis indices
    std::vector<std::vector<int>> pos;     // [ai][bi] -> slot in dims block
  };
  std::vector<Piece> pieces;
  int total = 0;
  for (auto [i, j] : at) {
    Piece p;
    for (int b = 0; b < row->dim(); ++b)
      if (row->basis[b].tgt == i) p.ta.push_back(b);
    for (int b = 0; b < col->dim(); ++b)
      if (col->basis[b].src == j) p.ub.push_back(b);
    int sz = (int)(p.ta.size() * p.ub.size());
    if (sz == 0 || total + sz > max_dim) continue;
    total += sz;
    p.pos.assign(p.ta.size(), std::vector<int>(p.ub.size(), 0));
    for (size_t ai = 0; ai < p.ta.size(); ++ai)
      for (size_t bi = 0; bi < p.ub.size(); ++bi) {
        int r = row->basis[p.ta[ai]].src, cl = col->basis[p.ub[bi]].tgt;
        p.pos[ai][bi] = m.dims[r][cl]++;
      }
    pieces.push_back(std::move(p));
  }
  if (pieces.empty()) return m;

  // (re)shape the action matrices now that dims are final
  for (size_t t = 0; t < row->gens.size(); ++t)
    for (int cl = 0; cl < nc; ++cl)
      m.pre[t][cl] =
          Mat(m.dims[row->gens[t].src][cl], m.dims[row->gens[t].tgt][cl]);
  for (size_t u = 0; u < col->gens.size(); ++u)
    for (int r = 0; r < nr; ++r)
      m.post[u][r] =
          Mat(m.dims[r][col->gens[u].tgt], m.dims[r][col->gens[u].src]);

  for (const auto& p : pieces) {
    std::vector<int> ta_slot(row->dim(), -1), ub_slot(col->dim(), -1);
    for (size_t ai = 0; ai < p.ta.size(); ++ai) ta_slot[p.ta[ai]] = (int)ai;
    for (size_t bi = 0; bi < p.ub.size(); ++bi) ub_slot[p.ub[bi]] = (int)bi;
    for (size_t ai = 0; ai < p.ta.size(); ++ai)
      for (size_t bi = 0; bi < p.ub.size(); ++bi) {
        int a = p.ta[ai], b = p.ub[bi];
        int r = row->basis[a].src, cl = col->basis[b].tgt;
        int from = p.pos[ai][bi];
        for (size_t t = 0; t < row->gens.size(); ++t) {
          if (row->gens[t].tgt != r) continue;
          for (auto [tb, tc] : row->gens[t].elem.nz)
            for (auto [pb, pc] : row->prod[tb][a].nz) {
              Mat& dst = m.pre[t][cl];
              int to = p.pos[ta_slot[pb]][bi];
              dst.at(to, from) = F.add(dst.at(to, from), F.mul(tc, pc));
            }
        }
        for (size_t u = 0; u < col->gens.size(); ++u) {
          if (col->gens[u].src != cl) continue;
          for (auto [ub2, uc] : col->gens[u].elem.nz)
            for (auto [pb, pc] : col->prod[b][ub2].nz) {
              Mat& dst = m.post[u][r];
              int to = p.pos[ai][ub_slot[pb]];
              dst.at(to, from) = F.add(dst.at(to, from), F.mul(uc, pc));
            }
        }
      }
  }
  morita::validate_bimodule(m);
  return m;
}

}  // namespace

morita::Bimodule random_projective_bimodule(Rng& rng, const AlgebraPtr& row,
                                            const AlgebraPtr& col,
                                            int max_pieces, int max_dim) {
  std::vector<std::pair<int, int>> at;
  int want = pick(rng, max_pieces + 1);
  for (int n = 0; n < want; ++n)
    at.emplace_back(pick(rng, row->nvert()), pick(rng, col->nvert()));
  return pieces_bimodule(row, col, at, max_dim);
}

namespace {

// syzygies over the Morita ring can grow exponentially even for tiny
// corners; keep only contexts whose resolutions stay desk-scale, probed on a
// random tuple from each side
bool tame_resolutions(Rng& rng, const morita::MoritaContext& c) {
  Module probe = repcat::direct_sum(
      morita::to_lambda(c, morita::tuple_from_T(c, random_module(rng, c.T, 12))),
      morita::to_lambda(c, morita::tuple_from_U(c, random_module(rng, c.U, 12))));
  for (int k = 0; k < 6; ++k) {
    probe = repcat::syzygy(probe);
    if (probe.total_dim() > 120) return false;
  }
  return true;
}

}  // namespace

morita::MoritaContext random_context(Rng& rng, const FieldSpec& F,
                                     int max_corner_dim) {
  for (int attempt = 0; attempt < 60; ++attempt) {
    AlgebraPtr T = random_algebra(rng, F, 3, 4, max_corner_dim);
    AlgebraPtr U = random_algebra(rng, F, 3, 4, max_corner_dim);
    bool triangular = attempt >= 30 || rng() % 2 == 0;
    if (triangular) {
      morita::Bimodule M = random_projective_bimodule(rng, T, U, 2);
      try {
        morita::MoritaContext c = morita::build_context(
            T, U, std::move(M), morita::zero_bimodule(U, T));
        if (morita::validate_context(c).all_ok() && tame_resolutions(rng, c))
          return c;
      } catch (const std::exception&) {
        // bad draw; redraw
      }
      continue;
    }
    // both bimodules nonzero: one free piece each, searching the generator
    // gradings for a pair whose mutual tensor products vanish
    for (int tries = 0; tries < 20; ++tries) {
      std::vector<std::pair<int, int>> mat{
          {pick(rng, T->nvert()), pick(rng, U->nvert())}};
      std::vector<std::pair<int, int>> nat{
          {pick(rng, U->nvert()), pick(rng, T->nvert())}};
      morita::Bimodule M = pieces_bimodule(T, U, mat, 24);
      morita::Bimodule N = pieces_bimodule(U, T, nat, 24);
      if (M.is_zero() || N.is_zero()) continue;
      try {
        morita::MoritaContext c =
            morita::build_context(T, U, std::move(M), std::move(N));
        if (morita::validate_context(c).all_ok() && tame_resolutions(rng, c))
          return c;
      } catch (const std::exception&) {
        // tensor conditions failed for this grading pair; keep searching
      }
    }
  }
  Quiver q;
  q.vertices = {"1"};
  AlgebraPtr K = algebra::build_bound_quiver_algebra(q, {}, 1, F);
  return morita::build_triangular(K, K, morita::regular_bimodule(K));
}

morita::TupleModule random_tuple(Rng& rng, const morita::MoritaContext& c,
                                 int max_dim) {
  const FieldSpec& F = c.T->field;
  Module A = rng() % 5 == 0 ? repcat::zero_module(c.T)
                            : random_module(rng, c.T, max_dim / 2);
  Module B = (!A.is_zero() && rng() % 5 == 0)
                 ? repcat::zero_module(c.U)
                 : random_module(rng, c.U, max_dim / 2);

  morita::TensorResult ma = morita::tensor_over(c.M, A);
  morita::TensorResult nb = morita::tensor_over(c.N, B);
  auto draw = [&](const Module& from, const Module& to) {
    std::vector<Mat> f;
    for (size_t v = 0; v < to.dims.size(); ++v)
      f.emplace_back(to.dims[v], from.dims[v]);
    if (from.is_zero() || to.is_zero()) return f;
    auto homs = repcat::hom_basis(from, to);
    for (auto& h : homs) {
      std::uint32_t coef = (std::uint32_t)(rng() % F.p);
      if (coef == 0) continue;
      for (size_t v = 0; v < f.size(); ++v)
        f[v] = exactlin::add(F, f[v], exactlin::scale(F, coef, h[v]));
    }
    return f;
  };

  morita::TupleModule x;
  x.A = A;
  x.B = B;
  x.f = draw(ma.mod, B);
  x.g = draw(nb.mod, A);
  try {
    morita::validate_tuple(c, x);
    return x;
  } catch (const std::exception&) {
    // the pair (f, g) drawn from the hom spaces violated the compatibility
    // composites; retreat to zero connecting maps
  }
  for (size_t v = 0; v < x.f.size(); ++v) x.f[v] = Mat(B.dims[v], ma.mod.dims[v]);
  for (size_t v = 0; v < x.g.size(); ++v) x.g[v] = Mat(A.dims[v], nb.mod.dims[v]);
  morita::validate_tuple(c, x);
  return x;
}

bool tame_chain(const morita::MoritaContext& c, const morita::TupleModule& x,
                int steps, int cap) {
  Module m = morita::to_lambda(c, x);
  for (int k = 0; k < steps; ++k) {
    if (m.total_dim() > cap) return false;
    m = repcat::syzygy(m);
  }
  return m.total_dim() <= cap;
}

morita::TupleModule tame_tuple(Rng& rng, const morita::MoritaContext& c,
                               int max_dim, int steps, int cap) {
  for (int t = 0; t < 10; ++t) {
    morita::TupleModule x = random_tuple(rng, c, max_dim);
    if (tame_chain(c, x, steps, cap)) return x;
  }
  return morita::tuple_projective(c, true, 0);
}

}  // namespace glitlab::gen
