#pragma once

// Morita contexts with zero pairings: graded bimodules, tensor products over
// the base algebras, the Morita ring realized as a generic vertex-graded
// algebra (so modules, syzygies and decompositions run through the same
// machinery as quiver algebras), the 4-tuple presentation of its modules with
// the closed-form syzygy, triangular matrix algebras, and the tensor product
// with an acyclic path algebra (flat view plus iterated-triangular tower).

#include "glitlab/itfun.hpp"
#include "glitlab/repcat.hpp"

namespace glitlab::morita {

using algebra::Algebra;
using algebra::AlgebraPtr;
using algebra::ValidationError;
using exactlin::FieldSpec;
using exactlin::Mat;
using repcat::Module;

// A bimodule graded by pairs (row vertex, col vertex). The col algebra acts
// covariantly (like a module action); the row algebra acts contravariantly
// (right action): pre_{a*b} = pre_a . pre_b.
struct Bimodule {
  AlgebraPtr row;  // right-acting algebra
  AlgebraPtr col;  // left-acting algebra
  std::vector<std::vector<int>> dims;  // [row vertex][col vertex]
  // pre[row gen t][col vertex j] : (tgt(t), j) -> (src(t), j)
  std::vector<std::vector<Mat>> pre;
  // post[col gen u][row vertex i] : (i, src(u)) -> (i, tgt(u))
  std::vector<std::vector<Mat>> post;

  int total_dim() const;
  bool is_zero() const { return total_dim() == 0; }
};

Bimodule zero_bimodule(const AlgebraPtr& row, const AlgebraPtr& col);
// the algebra as a bimodule over itself: space (i,j) spanned by basis
// elements i -> j, both actions by multiplication
Bimodule regular_bimodule(const AlgebraPtr& a);

// shape, grading and commutation checks; also validates both underlying
// one-sided modules (which exercises the relations of both algebras)
void validate_bimodule(const Bimodule& b);

// one-sided collapses: left module over col, right module as a left module
// over the given opposite of row
Module underlying_left(const Bimodule& b);
Module underlying_right(const Bimodule& b, const AlgebraPtr& row_op);

// B (x)_row A for a module A over b.row, with the deterministic quotient
// data needed to transport maps in and out of the tensor coordinates.
struct TensorResult {
  Module mod;              // over b.col
  std::vector<Mat> proj;   // per col vertex: quotient_dim x ambient_dim
  std::vector<Mat> incl;   // per col vertex: ambient_dim x quotient_dim
  // ambient block offsets: amb_off[j][i] = start of block (row vertex i,
  // basis of B(i,j) tensor basis of A_i) inside the ambient space at j
  std::vector<std::vector<int>> amb_off;
};
TensorResult tensor_over(const Bimodule& b, const Module& a);

struct MoritaContext {
  AlgebraPtr T, U;
  AlgebraPtr Top, Uop;  // cached opposites
  Bimodule M;           // row = T, col = U (lower-left corner)
  Bimodule N;           // row = U, col = T (upper-right corner)
  AlgebraPtr lambda;    // the Morita ring

  // layout bookkeeping inside lambda
  std::vector<int> t_basis, u_basis;  // T/U basis index -> lambda basis index
  // m_basis[i][j][k] / n_basis[j][i][k] -> lambda basis index
  std::vector<std::vector<std::vector<int>>> m_basis, n_basis;
  int tgen_off = 0, ugen_off = 0, mgen_off = 0, ngen_off = 0;

  int nT() const { return T->nvert(); }
  int nU() const { return U->nvert(); }
};

// builds the Morita ring (products with zero pairings) and the bookkeeping;
// validates both bimodules structurally
MoritaContext build_context(const AlgebraPtr& T, const AlgebraPtr& U,
                            Bimodule M, Bimodule N);
MoritaContext build_triangular(const AlgebraPtr& T, const AlgebraPtr& U,
                               Bimodule M);

struct ContextReport {
  struct Check {
    std::string name;
    bool ok = false;
  };
  std::vector<Check> checks;
  bool all_ok() const;
};
// the four projectivity conditions and both tensor-vanishing conditions
ContextReport validate_context(const MoritaContext& c);

// a Morita-ring module as (A, B, f, g); f per col vertex of M (U-vertex),
// in the quotient coordinates of tensor_over(M, A); g mirrored
struct TupleModule {
  Module A, B;
  std::vector<Mat> f;  // [U-vertex j]: B.dims[j] x dim (M (x) A)_j
  std::vector<Mat> g;  // [T-vertex i]: A.dims[i] x dim (N (x) B)_i
};

void validate_tuple(const MoritaContext& c, const TupleModule& x);
Module to_lambda(const MoritaContext& c, const TupleModule& x);
TupleModule from_lambda(const MoritaContext& c, const Module& m);

TupleModule tuple_from_T(const MoritaContext& c, const Module& A);  // (A,0,0,0)
TupleModule tuple_from_U(const MoritaContext& c, const Module& B);  // (0,B,0,0)
TupleModule tuple_direct_sum(const MoritaContext& c, const TupleModule& x,
                             const TupleModule& y);
// (P, M(x)P, id, 0) for side T, (N(x)Q, Q, 0, id) for side U
TupleModule tuple_projective(const MoritaContext& c, bool side_T, int vertex);

// the two closed-form syzygy summands (Omega_T A part, Omega_U B part)
std::pair<TupleModule, TupleModule> tuple_syzygy_parts(const MoritaContext& c,
                                                       const TupleModule& x);
// their sum, audited against the generic minimal syzygy over the Morita ring
// (up to projective summands; the closed form is minimal only when the
// connecting maps land in the radical)
TupleModule tuple_syzygy(const MoritaContext& c, const TupleModule& x,
                         std::uint64_t audit_seed = 1);

// basis of tuple morphisms as pairs (h1 per T-vertex, h2 per U-vertex)
std::vector<std::pair<std::vector<Mat>, std::vector<Mat>>> tuple_hom(
    const MoritaContext& c, const TupleModule& x, const TupleModule& y);

// carve a Morita context out of a vertex-graded algebra: the diagonal block
// on the given vertices becomes T, the rest U; off-diagonal parts become the
// bimodules. Requires the parts to be multiplicatively closed.
MoritaContext split_context(const AlgebraPtr& flat,
                            const std::vector<int>& t_vertices);

struct TensorPathResult {
  AlgebraPtr flat;                   // bound quiver algebra on Q_T x Q
  std::vector<MoritaContext> tower;  // peeling Q's vertices in reverse
                                     // topological order; tower[k] splits the
                                     // flat algebra on the first k+2 vertices
  std::vector<std::vector<int>> d;   // d[i][j] = number of paths j -> i in Q
};
// T (x) KQ for an acyclic quiver Q; requires T to carry a presentation
TensorPathResult build_tensor_path(const AlgebraPtr& T, const algebra::Quiver& q);

struct BatteryReport {
  struct Check {
    std::string name;
    bool ok = false;
    std::string detail;
  };
  std::vector<Check> checks;
  bool all_ok() const;
};
// asserts the syzygy-formula identities and every phi inequality relating the
// Morita ring to its corner algebras, on the given samples
BatteryReport phi_bound_battery(const MoritaContext& c,
                                const std::vector<TupleModule>& samples,
                                std::uint64_t seed, itfun::Budget budget = {});

// file formats
MoritaContext parse_context_file(const std::string& path);
std::string format_context(const MoritaContext& c, const std::string& t_file,
                           const std::string& u_file);
TupleModule parse_tuple(const std::string& text, const MoritaContext& c);
TupleModule parse_tuple_file(const std::string& path, MoritaContext& c_out);
std::string format_tuple(const TupleModule& x, const MoritaContext& c,
                         const std::string& context_file);

}  // namespace glitlab::morita
