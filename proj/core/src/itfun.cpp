#include "glitlab/itfun.hpp"

#include <algorithm>
#include <set>

namespace glitlab::itfun {

using repcat::ValidationError;

ClassVector Engine::class_vector(const Module& x) {
  ClassVector v;
  if (x.is_zero()) return v;
  krull::Decomposition d = krull::decompose(x, reg_);
  if (reg_.size() > budget_.class_cap)
    throw BudgetExhausted("class registry exceeded its cap");
  for (auto [id, mult] : d.summands)
    if (!reg_.entries[id].projective) v.coords[id] += mult;
  return v;
}

const std::vector<std::pair<int, int>>& Engine::syzygy_classes(int id) {
  auto it = graph_.find(id);
  if (it != graph_.end()) return it->second;
  if (reg_.entries[id].projective)
    return graph_[id];  // empty: L kills projective classes
  Module omega = repcat::syzygy(reg_.entries[id].rep);
  ClassVector v = class_vector(omega);
  auto& out = graph_[id];
  for (auto [cid, mult] : v.coords) out.emplace_back(cid, (int)mult);
  return out;
}

ClassVector Engine::L_step(const ClassVector& v) {
  ClassVector out;
  for (auto [id, n] : v.coords)
    for (auto [succ, mult] : syzygy_classes(id)) {
      out.coords[succ] += n * mult;
      if (out.coords[succ] == 0) out.coords.erase(succ);
    }
  return out;
}

PhiResult Engine::phi_from_classes(std::vector<int> gens,
                                   const std::vector<int>& dropped) {
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  auto is_dropped = [&](int id) {
    return std::find(dropped.begin(), dropped.end(), id) != dropped.end();
  };
  gens.erase(std::remove_if(gens.begin(), gens.end(), is_dropped), gens.end());

  PhiResult res;
  res.generators = gens;
  if (gens.empty()) {
    res.rank_trace = {0};
    return res;
  }

  // closure of the generating classes under the (projected) syzygy map
  std::vector<int> closure = gens;
  std::set<int> seen(gens.begin(), gens.end());
  for (size_t i = 0; i < closure.size(); ++i) {
    if ((int)closure.size() > budget_.class_cap)
      throw BudgetExhausted("class closure exceeded the class cap");
    for (auto [succ, mult] : syzygy_classes(closure[i])) {
      (void)mult;
      if (is_dropped(succ) || seen.count(succ)) continue;
      seen.insert(succ);
      closure.push_back(succ);
    }
  }
  std::sort(closure.begin(), closure.end());
  const int S = (int)closure.size();
  auto col_of = [&](int id) {
    return (int)(std::lower_bound(closure.begin(), closure.end(), id) - closure.begin());
  };

  // the kernel chain of the L matrix stabilizes within S steps, so the rank
  // sequence is guaranteed constant from level S on; horizon S+1 reaches it
  const int horizon = S + 1;
  if (horizon > budget_.depth_cap)
    throw BudgetExhausted("phi horizon exceeds the depth cap");

  std::vector<std::vector<long long>> rows;
  for (int g : gens) {
    std::vector<long long> r(S, 0);
    r[col_of(g)] = 1;
    rows.push_back(std::move(r));
  }
  res.rank_trace.push_back(exactlin::int_rank(rows));
  for (int n = 1; n <= horizon; ++n) {
    std::vector<std::vector<long long>> next(rows.size(),
                                             std::vector<long long>(S, 0));
    for (size_t i = 0; i < rows.size(); ++i)
      for (int c = 0; c < S; ++c) {
        if (rows[i][c] == 0) continue;
        for (auto [succ, mult] : syzygy_classes(closure[c])) {
          if (is_dropped(succ)) continue;
          long long& cell = next[i][col_of(succ)];
          cell += rows[i][c] * mult;
          if (std::abs(cell) > (1LL << 62))
            throw BudgetExhausted("integer overflow guard in rank iteration");
        }
      }
    rows = std::move(next);
    res.rank_trace.push_back(exactlin::int_rank(rows));
    if (res.rank_trace[n] > res.rank_trace[n - 1])
      throw ValidationError("internal: rank sequence increased");
  }
  int limit = res.rank_trace.back();
  for (int n = 0; n <= horizon; ++n)
    if (res.rank_trace[n] == limit) {
      res.phi = n;
      break;
    }
  return res;
}

PhiResult Engine::phi_detail(const Module& x) {
  ClassVector v = class_vector(x);
  std::vector<int> gens;
  for (auto [id, n] : v.coords) {
    (void)n;
    gens.push_back(id);
  }
  return phi_from_classes(std::move(gens), {});
}

PdResult Engine::pd_class(int id) {
  auto memo = pd_memo_.find(id);
  if (memo != pd_memo_.end()) return memo->second;

  std::vector<int> path;
  std::set<int> on_path;
  // explicit DFS to allow cycle extraction
  std::function<PdResult(int, int)> rec = [&](int c, int depth) -> PdResult {
    auto it = pd_memo_.find(c);
    if (it != pd_memo_.end()) return it->second;
    if (on_path.count(c)) {
      PdResult r;
      r.tag = PdResult::InfiniteCertified;
      auto start = std::find(path.begin(), path.end(), c);
      r.cycle.assign(start, path.end());
      return r;  // back edge: not memoized here
    }
    if (depth > budget_.depth_cap) {
      PdResult r;
      r.tag = PdResult::Unknown;
      return r;
    }
    path.push_back(c);
    on_path.insert(c);
    PdResult res;
    res.value = 0;
    bool unknown = false;
    for (auto [succ, mult] : syzygy_classes(c)) {
      (void)mult;
      PdResult r = rec(succ, depth + 1);
      if (r.tag == PdResult::InfiniteCertified) {
        path.pop_back();
        on_path.erase(c);
        PdResult inf = r;
        pd_memo_[c] = inf;
        return inf;
      }
      if (r.tag == PdResult::Unknown) unknown = true;
      else res.value = std::max(res.value, r.value);
    }
    path.pop_back();
    on_path.erase(c);
    if (unknown) {
      PdResult r;
      r.tag = PdResult::Unknown;
      pd_memo_[c] = r;
      return r;
    }
    res.tag = PdResult::Finite;
    res.value += 1;  // the projective-cover step
    pd_memo_[c] = res;
    return res;
  };
  return rec(id, 0);
}

PdResult Engine::pd(const Module& x) {
  if (x.is_zero()) return PdResult{PdResult::Finite, 0, {}};
  krull::Decomposition d = krull::decompose(x, reg_);
  PdResult out{PdResult::Finite, 0, {}};
  bool unknown = false;
  for (auto [id, mult] : d.summands) {
    (void)mult;
    if (reg_.entries[id].projective) continue;
    PdResult r = pd_class(id);
    if (r.tag == PdResult::InfiniteCertified) return r;
    if (r.tag == PdResult::Unknown) unknown = true;
    else out.value = std::max(out.value, r.value);
  }
  if (unknown) out.tag = PdResult::Unknown;
  return out;
}

Bound Engine::findim_add(const std::vector<Module>& xs) {
  Bound b;
  for (const auto& x : xs) {
    if (x.is_zero()) continue;
    krull::Decomposition d = krull::decompose(x, reg_);
    for (auto [id, mult] : d.summands) {
      (void)mult;
      if (reg_.entries[id].projective) continue;  // contributes pd 0
      PdResult r = pd_class(id);
      if (r.tag == PdResult::Finite) b.value = std::max(b.value, r.value);
      if (r.tag == PdResult::Unknown) b.tainted = true;
    }
  }
  return b;
}

Bound Engine::psi(const Module& x) {
  PhiResult pr = phi_detail(x);
  Module omega = repcat::syzygy_power(x, pr.phi);
  Bound tail = findim_add({omega});
  return {pr.phi + tail.value, tail.tainted};
}

void Engine::check_descriptor(const ClassDescriptor& d) {
  if (d.t < 1) throw ValidationError("class descriptor needs t >= 1");
  for (int id : d.generators) {
    if (id < 0 || id >= reg_.size())
      throw ValidationError("class descriptor references an unknown class");
    Module omega = repcat::syzygy_power(reg_.entries[id].rep, d.t);
    ClassVector v = class_vector(omega);
    for (auto [cid, n] : v.coords) {
      (void)n;
      if (std::find(d.generators.begin(), d.generators.end(), cid) ==
          d.generators.end())
        throw ValidationError(
            "class descriptor is not closed: a syzygy summand of '" +
            reg_.entries[id].label + "' is outside the class");
    }
  }
}

PhiResult Engine::phi_rel_detail(const Module& x, const ClassDescriptor& d) {
  if (d.t != 1)
    throw ValidationError("relative phi requires a 1-syzygy-invariant class");
  check_descriptor(d);
  ClassVector v = class_vector(x);
  std::vector<int> gens;
  for (auto [id, n] : v.coords) {
    (void)n;
    gens.push_back(id);
  }
  return phi_from_classes(std::move(gens), d.generators);
}

int Engine::phidim_add(const std::vector<Module>& xs) {
  if (xs.empty()) return 0;
  return phi(repcat::direct_sum(xs));
}

Bound Engine::psidim_add(const std::vector<Module>& xs) {
  if (xs.empty()) return {0, false};
  return psi(repcat::direct_sum(xs));
}

}  // namespace glitlab::itfun
