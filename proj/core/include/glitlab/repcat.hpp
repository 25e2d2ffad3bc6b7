#pragma once

// Finite-dimensional modules over a vertex-graded algebra: validation, direct
// sums, hom spaces, radicals, minimal projective covers and syzygies.
//
// A module assigns a GF(p) space of dimension dims[v] to each vertex and a
// matrix act[g] of shape dims[tgt(g)] x dims[src(g)] to each algebra
// generator, acting on column vectors; composites follow phi_{u*v} =
// phi_v . phi_u.

#include "glitlab/algebra.hpp"

namespace glitlab::repcat {

using algebra::Algebra;
using algebra::AlgebraPtr;
using algebra::SparseVec;
using algebra::ValidationError;
using exactlin::FieldSpec;
using exactlin::Mat;

struct Module {
  AlgebraPtr alg;
  std::vector<int> dims;  // one per vertex
  std::vector<Mat> act;   // one per generator, dims[tgt] x dims[src]

  int total_dim() const {
    int t = 0;
    for (int d : dims) t += d;
    return t;
  }
  // offset of each vertex block inside the concatenated ambient space
  std::vector<int> offsets() const;
  bool is_zero() const { return total_dim() == 0; }
};

Module zero_module(const AlgebraPtr& a);

// Checks shapes and that the action respects every product of basis elements
// (complete, since the basis spans and products are closed). For algebras
// with a quiver presentation, a failing relation is reported by its text.
void validate_module(const Module& m);

Module direct_sum(const Module& a, const Module& b);
Module direct_sum(const std::vector<Module>& parts);

// Action of the basis element b (via its generator expression): a matrix
// dims[tgt(b)] x dims[src(b)]. Idempotents give identities.
Mat basis_action(const Module& m, int b);

// Action of b on the whole ambient space (total_dim square, single block).
Mat ambient_action(const Module& m, int b);

// Indecomposable projective at a vertex: basis elements with that source,
// generators acting by right multiplication.
Module projective_module(const AlgebraPtr& a, int vertex);

// Per-vertex column bases of the radical rad M = sum of generator images.
std::vector<Mat> radical(const Module& m);

struct Cover {
  Module proj;                                   // the covering projective P
  std::vector<Mat> map;                          // per vertex: dims_M[v] x dims_P[v]
  std::vector<std::pair<int, int>> multiplicity; // (vertex, count) of P(v) summands
};

// Minimal projective cover P ->> M (top of P matches top of M).
Cover projective_cover(const Module& m);

// Kernel of a per-vertex module map f: M -> (anything), f[v] with dims_M[v]
// columns; the kernel must be action-invariant (true for module maps).
Module kernel_module(const Module& m, const std::vector<Mat>& f);

Module syzygy(const Module& m);               // kernel of the minimal cover
Module syzygy_power(const Module& m, int k);  // iterate k times
bool is_projective(const Module& m);

// Basis of Hom(M, N): each element is a per-vertex block matrix
// (dims_N[v] x dims_M[v]) commuting with the generator actions.
std::vector<std::vector<Mat>> hom_basis(const Module& m, const Module& n);

// Compose per-vertex maps: (g . f)[v] = g[v] * f[v].
std::vector<Mat> hom_compose(const FieldSpec& F, const std::vector<Mat>& g,
                             const std::vector<Mat>& f);

// Text format (line oriented, '#' comments):
//   module over <algebra-file>
//   dims <vertex>:<dim> ...
//   map <generator-label>
//   <dims[tgt] rows of dims[src] entries>
// Maps omitted from the file are zero.
Module parse_module(const std::string& text, const AlgebraPtr& a);
Module parse_module_file(const std::string& path);  // loads the algebra too
std::string format_module(const Module& m, const std::string& algebra_file);

}  // namespace glitlab::repcat
