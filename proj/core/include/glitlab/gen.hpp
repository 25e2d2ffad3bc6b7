#pragma once

// Seeded random instance generation for property suites: bound quiver
// algebras with J-adic (plus optional parallel-path) relations, modules as
// quotients of projectives, bimodules projective on both sides, Morita
// contexts and tuple modules. Everything is deterministic in the seed.

#include <random>

#include "glitlab/morita.hpp"

namespace glitlab::gen {

using algebra::AlgebraPtr;
using exactlin::FieldSpec;
using repcat::Module;
using Rng = std::mt19937_64;

// <= max_vertices vertices, <= max_arrows arrows, nilpotency N in {2,3},
// relations = all length-N paths plus occasional parallel-path differences;
// retries until the total dimension is <= max_dim
AlgebraPtr random_algebra(Rng& rng, const FieldSpec& F, int max_vertices = 4,
                          int max_arrows = 6, int max_dim = 24);

// quotient of a random finite sum of indecomposable projectives by the
// submodule generated by random radical vectors; never zero
Module random_module(Rng& rng, const AlgebraPtr& a, int max_dim = 24);

// direct sum of free one-generator pieces (row-projective and
// col-projective by construction); possibly zero, total dimension <= max_dim
morita::Bimodule random_projective_bimodule(Rng& rng, const AlgebraPtr& row,
                                            const AlgebraPtr& col,
                                            int max_pieces = 2,
                                            int max_dim = 24);

// corners of dimension <= max_corner_dim; tries zero-pairing contexts with
// both bimodules and falls back to triangular (N = 0) shapes until
// validate_context passes
morita::MoritaContext random_context(Rng& rng, const FieldSpec& F,
                                     int max_corner_dim = 12);

// random corner modules with connecting maps drawn from the hom spaces;
// falls back to zero maps when a draw fails validation
morita::TupleModule random_tuple(Rng& rng, const morita::MoritaContext& c,
                                 int max_dim = 24);

// true when the syzygy chain of the tuple over the Morita ring stays within
// `cap` total dimension for `steps` steps; batteries use this to skip
// samples whose resolutions explode beyond desk scale
bool tame_chain(const morita::MoritaContext& c, const morita::TupleModule& x,
                int steps = 6, int cap = 150);

// random_tuple retried until tame_chain accepts; falls back to a projective
// tuple when draws keep exploding
morita::TupleModule tame_tuple(Rng& rng, const morita::MoritaContext& c,
                               int max_dim = 12, int steps = 6, int cap = 150);

}  // namespace glitlab::gen
