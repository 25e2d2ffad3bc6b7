#pragma once

// Dimension functions on the free abelian group generated by iso-classes of
// non-projective indecomposables: the syzygy operator L, the functions phi
// and psi, the relative phi over a syzygy-invariant class, projective
// dimension with infinite-pd certification, and finitistic-dimension bounds
// over additive closures of finite lists.

#include <map>

#include "glitlab/krull.hpp"

namespace glitlab::itfun {

using krull::ClassRegistry;
using repcat::Module;

// Exploration exceeded its class or depth budget.
struct BudgetExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Budget {
  int class_cap = 10000;  // registry growth cap during exploration
  int depth_cap = 256;    // syzygy depth cap
};

// Integer vector over iso-class ids; projective classes never appear.
struct ClassVector {
  std::map<int, long long> coords;
  bool zero() const { return coords.empty(); }
  bool operator==(const ClassVector&) const = default;
};

struct PdResult {
  enum Tag { Finite, InfiniteCertified, Unknown } tag = Finite;
  int value = 0;           // when Finite
  std::vector<int> cycle;  // an L-graph cycle, when InfiniteCertified
};

struct PhiResult {
  int phi = 0;
  std::vector<int> rank_trace;  // rk L^k for k = 0..horizon
  std::vector<int> generators;  // class ids generating <X>
};

// value plus a taint flag: tainted means some pd was Unknown and the true
// value may be larger
struct Bound {
  int value = 0;
  bool tainted = false;
};

// Finite generating data for an additively closed, Omega^t-invariant class.
struct ClassDescriptor {
  std::vector<int> generators;  // class ids in the engine's registry
  int t = 1;
};

class Engine {
 public:
  Engine(ClassRegistry& reg, Budget budget = {}) : reg_(reg), budget_(budget) {}

  ClassRegistry& registry() { return reg_; }
  const Budget& budget() const { return budget_; }

  // multiplicities of non-projective indecomposable summands
  ClassVector class_vector(const Module& x);
  // L extended linearly: [X] -> [Omega X], memoized through the syzygy graph
  ClassVector L_step(const ClassVector& v);
  // non-projective summand classes of Omega(representative of id), with mult
  const std::vector<std::pair<int, int>>& syzygy_classes(int id);

  PhiResult phi_detail(const Module& x);
  int phi(const Module& x) { return phi_detail(x).phi; }

  PdResult pd(const Module& x);
  PdResult pd_class(int id);  // for a registered (non-projective) class

  // sup of the finite pds over indecomposable summands of the direct sum;
  // sup of the empty set is 0
  Bound findim_add(const std::vector<Module>& xs);

  Bound psi(const Module& x);

  // relative phi: the same rank computation with coordinates in add(d)
  // dropped at every level; requires d to pass its closure check with t = 1
  PhiResult phi_rel_detail(const Module& x, const ClassDescriptor& d);
  int phi_rel(const Module& x, const ClassDescriptor& d) {
    return phi_rel_detail(x, d).phi;
  }

  // phi / psi over the additive closure of a finite list = value on the sum
  int phidim_add(const std::vector<Module>& xs);
  Bound psidim_add(const std::vector<Module>& xs);

  // verifies that every non-projective summand of Omega^t of each generator
  // is again a listed generator; throws ValidationError otherwise
  void check_descriptor(const ClassDescriptor& d);

 private:
  PhiResult phi_from_classes(std::vector<int> gens, const std::vector<int>& dropped);

  ClassRegistry& reg_;
  Budget budget_;
  std::map<int, std::vector<std::pair<int, int>>> graph_;  // memoized L edges
  std::map<int, PdResult> pd_memo_;
};

}  // namespace glitlab::itfun
