#pragma once

// Krull-Schmidt machinery: randomized Fitting splitting, isomorphism testing
// with explicit witnesses, and an append-only registry of iso-classes of
// indecomposables (the generating set of the free abelian group used by the
// dimension functions).

#include <cstdint>

#include "glitlab/repcat.hpp"

namespace glitlab::krull {

using algebra::AlgebraPtr;
using exactlin::Mat;
using repcat::Module;

// Randomized splitting exhausted its budget without a certificate.
struct SplitFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// A late-detected class collision (two registered representatives turned out
// isomorphic). Surfaced loudly, never merged silently.
struct RegistryCollision : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SplitResult {
  bool split = false;
  Module summand, complement;       // valid when split
  std::vector<Mat> embed_summand;   // per-vertex columns into the input
  std::vector<Mat> embed_complement;
  bool certified_local = false;     // valid when !split: End is local
};

// Samples endomorphisms (basis, pairwise sums, `budget` random combinations)
// and tries the Fitting decomposition r = ker(f^d) + im(f^d). When no sample
// splits, certifies locality of End(r) (every tested non-invertible element
// is nilpotent) or throws SplitFailure.
SplitResult split_once(const Module& r, std::uint64_t seed, int budget = 64);

struct IsoResult {
  bool iso = false;
  std::vector<Mat> witness;  // per-vertex invertible blocks y <- x, when iso
  std::string certificate;   // reason, when not iso
};

// Dimension vectors, hom-dimension symmetry, then a search for an invertible
// morphism (exhaustive when the hom space has at most 4096 elements,
// otherwise `budget` seeded random combinations).
IsoResult iso_test(const Module& x, const Module& y, std::uint64_t seed,
                   int budget = 64);

struct ClassRegistry {
  struct Entry {
    Module rep;  // canonical indecomposable representative
    bool projective = false;
    std::string label;
  };
  std::vector<Entry> entries;
  std::uint64_t seed = 0;
  int budget = 64;

  int size() const { return (int)entries.size(); }
  // Find the class of an (already indecomposable) module, appending a new
  // entry when unseen. Throws RegistryCollision on a late collision.
  int class_of(const Module& indec);
};

struct Decomposition {
  std::vector<std::pair<int, int>> summands;  // (class id, multiplicity)
  std::vector<Mat> witness;  // per-vertex iso from the sum of representatives
                             // (grouped by summand order) onto the input
};

// Full decomposition into registered classes, with an invertibility-checked
// witness. Extends the registry with new classes.
Decomposition decompose(const Module& r, ClassRegistry& reg);

// Document form: one "class <id> projective <0|1>" header per entry followed
// by the representative in module file format.
std::string dump_registry(const ClassRegistry& reg, const std::string& algebra_file);
ClassRegistry load_registry(const std::string& text, const AlgebraPtr& alg);

}  // namespace glitlab::krull
