#pragma once

// Quivers, admissible relations and bound quiver algebras KQ/I, realized as a
// generic vertex-graded algebra with an explicit basis and structure
// constants. The same Algebra container also hosts Morita rings (see
// morita.hpp), so everything downstream (modules, syzygies, decompositions)
// runs unchanged over both.
//
// Path composition convention: for u: i->j and v: j->k the composite "u then
// v" is written u*v, and a module assigns phi_{u*v} = phi_v . phi_u. Basis
// elements carry a source and target vertex; phi_b maps the source vertex
// space to the target vertex space.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "glitlab/exactlin.hpp"

namespace glitlab::algebra {

using exactlin::FieldSpec;
using exactlin::Mat;

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_) + ": " + what), line(line_) {}
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Quiver {
  std::vector<std::string> vertices;
  struct Arrow {
    std::string id;
    int src = 0, tgt = 0;
  };
  std::vector<Arrow> arrows;

  int vertex_index(const std::string& name) const;  // -1 if absent
  int arrow_index(const std::string& id) const;
  bool acyclic() const;
};

// One term of a relation: coeff * (path as arrow indices, in "then" order).
struct RelationTerm {
  std::uint32_t coeff = 1;
  std::vector<int> arrows;
};
// Sum of parallel-path terms, each of length >= 2.
struct RelationExpr {
  std::vector<RelationTerm> terms;
};

// A word in generator indices with a coefficient; the empty word at a vertex
// denotes the trivial idempotent.
struct GenWord {
  std::uint32_t coeff = 1;
  std::vector<int> gens;
};
using GenExpr = std::vector<GenWord>;

struct SparseVec {
  std::vector<std::pair<int, std::uint32_t>> nz;  // (basis index, coeff)
  bool zero() const { return nz.empty(); }
};

// Bound-quiver presentation metadata, kept when the algebra came from a
// quiver so it can be serialized back and relations reported by name.
struct QuiverPresentation {
  Quiver quiver;
  std::vector<RelationExpr> relations;
  int nilpotency = 1;
  std::vector<std::string> relation_texts;  // as written, for error messages
};

struct Algebra {
  FieldSpec field;
  std::string name;
  std::vector<std::string> vertex_names;

  struct BasisElem {
    std::string label;
    int src = 0, tgt = 0;
    GenExpr expr;  // expression in generators; empty word for idempotents
  };
  // basis[v] = trivial idempotent e_v for v < nvert(); the rest span the radical
  std::vector<BasisElem> basis;

  struct Generator {
    std::string label;
    int src = 0, tgt = 0;
    SparseVec elem;  // the generator as an element of the algebra
  };
  std::vector<Generator> gens;

  // structure constants: prod[i][j] = i*j ("i then j"), graded src(i)->tgt(j)
  std::vector<std::vector<SparseVec>> prod;

  std::optional<QuiverPresentation> presentation;

  int nvert() const { return (int)vertex_names.size(); }
  int dim() const { return (int)basis.size(); }
  bool is_idempotent(int b) const { return b < nvert(); }

  // indices of basis elements with the given source vertex (projective support)
  std::vector<int> basis_from(int vertex) const;
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

// Enumerates paths of length < N, quotients by the relation-generated
// subspace, and verifies admissibility (every length-N path reduces to zero).
// Throws ValidationError / ResourceError on failure.
AlgebraPtr build_bound_quiver_algebra(const Quiver& q,
                                      const std::vector<RelationExpr>& relations,
                                      int nilpotency, const FieldSpec& field,
                                      std::size_t path_cap = 20000);

// Opposite algebra: sources and targets swapped, products reversed.
AlgebraPtr opposite(const AlgebraPtr& a);

// Structural self-checks: grading, idempotent behaviour, associativity on all
// basis triples, generator expressions. Throws ValidationError on defect.
void check_algebra(const Algebra& a);

// Text format (line oriented, '#' comments):
//   field <p>
//   vertices <id> <id> ...
//   arrow <id> <src> <tgt>
//   nilpotency <N>
//   relations
//   <relation per line, e.g.  a*a  or  x*y + y*x  or  2*a*b - c*d>
AlgebraPtr parse_algebra(const std::string& text, const std::string& name = "");
AlgebraPtr parse_algebra_file(const std::string& path);
std::string format_algebra(const Algebra& a);  // requires presentation

}  // namespace glitlab::algebra
