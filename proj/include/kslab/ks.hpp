#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kslab/linalg.hpp"

namespace kslab {

struct IncompleteValuation : std::invalid_argument {
  IncompleteValuation() : std::invalid_argument("valuation not total on ray table") {}
};

struct SearchBudgetExceeded : std::runtime_error {
  SearchBudgetExceeded() : std::runtime_error("valuation search node budget exceeded") {}
};

// A maximal set of co-measurable rays: pairwise orthogonal, projectors
// summing to the identity.
struct Context {
  std::vector<int> ray_ids;  // sorted ascending

  bool operator==(const Context&) const = default;
};

struct KSInstance {
  std::vector<Ray> rays;
  std::vector<Context> contexts;
  int dimension = 0;
};

// Global {0,1} assignment, indexed by ray id.
struct Valuation {
  std::vector<int> assignment;

  bool operator==(const Valuation&) const = default;
};

// Exists exactly when every ray incidence is even and the context count
// is odd; witnesses valuation non-existence without search.
struct ParityCertificate {
  std::vector<int> ray_incidence;
  int context_count = 0;
};

inline std::vector<int> ray_incidences(const KSInstance& inst) {
  std::vector<int> counts(inst.rays.size(), 0);
  for (const Context& c : inst.contexts)
    for (int id : c.ray_ids) counts[static_cast<std::size_t>(id)]++;
  return counts;
}

// The 18-ray, 9-context set of Cabello, Estebaranz and Garcia-Alcaine.
// The first context reads P_{0,0,0,1} + P_{0,0,1,0} + P_{1,1,0,0} + P_{1,-1,0,0}.
inline KSInstance builtin_cabello() {
  static const std::vector<std::vector<std::vector<long long>>> context_rays = {
      {{0, 0, 0, 1}, {0, 0, 1, 0}, {1, 1, 0, 0}, {1, -1, 0, 0}},
      {{0, 0, 0, 1}, {0, 1, 0, 0}, {1, 0, 1, 0}, {1, 0, -1, 0}},
      {{1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, 0, 0}, {0, 0, 1, 1}},
      {{1, -1, 1, -1}, {1, 1, 1, 1}, {1, 0, -1, 0}, {0, 1, 0, -1}},
      {{0, 0, 1, 0}, {0, 1, 0, 0}, {1, 0, 0, 1}, {1, 0, 0, -1}},
      {{1, -1, -1, 1}, {1, 1, 1, 1}, {1, 0, 0, -1}, {0, 1, -1, 0}},
      {{1, 1, -1, 1}, {1, 1, 1, -1}, {1, -1, 0, 0}, {0, 0, 1, 1}},
      {{1, 1, -1, 1}, {-1, 1, 1, 1}, {1, 0, 1, 0}, {0, 1, 0, -1}},
      {{1, 1, 1, -1}, {-1, 1, 1, 1}, {1, 0, 0, 1}, {0, 1, -1, 0}},
  };
  KSInstance inst;
  inst.dimension = 4;
  std::map<Ray, int> ids;
  for (const auto& ctx : context_rays) {
    Context c;
    for (const auto& raw : ctx) {
      Ray r = canonical_ray(raw);
      auto [it, fresh] = ids.try_emplace(r, static_cast<int>(inst.rays.size()));
      if (fresh) inst.rays.push_back(r);
      c.ray_ids.push_back(it->second);
    }
    std::sort(c.ray_ids.begin(), c.ray_ids.end());
    inst.contexts.push_back(std::move(c));
  }
  return inst;
}

struct ContextReport {
  int context_index = 0;
  std::vector<std::pair<int, int>> non_orthogonal_pairs;
  bool resolves_identity = false;
  bool size_matches_dimension = false;

  bool ok() const {
    return non_orthogonal_pairs.empty() && resolves_identity && size_matches_dimension;
  }
};

struct ValidationReport {
  std::vector<ContextReport> contexts;
  bool no_duplicate_rays = false;
  bool every_ray_used = false;
  std::vector<int> incidence;
  bool passed = false;
};

inline ValidationReport validate_instance(const KSInstance& inst) {
  ValidationReport rep;
  for (std::size_t ci = 0; ci < inst.contexts.size(); ++ci) {
    const Context& c = inst.contexts[ci];
    ContextReport cr;
    cr.context_index = static_cast<int>(ci);
    cr.size_matches_dimension =
        static_cast<int>(c.ray_ids.size()) == inst.dimension;
    for (std::size_t i = 0; i < c.ray_ids.size(); ++i)
      for (std::size_t j = i + 1; j < c.ray_ids.size(); ++j)
        if (!orthogonal(inst.rays[c.ray_ids[i]], inst.rays[c.ray_ids[j]]))
          cr.non_orthogonal_pairs.emplace_back(c.ray_ids[i], c.ray_ids[j]);
    std::vector<Projector> ps;
    for (int id : c.ray_ids) ps.push_back(projector_from_ray(inst.rays[id]));
    cr.resolves_identity = !ps.empty() && sum_is_identity(ps);
    rep.contexts.push_back(std::move(cr));
  }
  rep.no_duplicate_rays = true;
  for (std::size_t i = 0; i < inst.rays.size(); ++i)
    for (std::size_t j = i + 1; j < inst.rays.size(); ++j)
      if (inst.rays[i] == inst.rays[j]) rep.no_duplicate_rays = false;
  rep.incidence = ray_incidences(inst);
  rep.every_ray_used =
      std::all_of(rep.incidence.begin(), rep.incidence.end(), [](int n) { return n >= 1; });
  rep.passed = rep.no_duplicate_rays && rep.every_ray_used &&
               std::all_of(rep.contexts.begin(), rep.contexts.end(),
                           [](const ContextReport& c) { return c.ok(); });
  return rep;
}

inline bool check_valuation(const KSInstance& inst, const Valuation& v) {
  if (v.assignment.size() != inst.rays.size()) throw IncompleteValuation{};
  for (const Context& c : inst.contexts) {
    int sum = 0;
    for (int id : c.ray_ids) sum += v.assignment[static_cast<std::size_t>(id)];
    if (sum != 1) return false;
  }
  return true;
}

struct SearchResult {
  std::vector<Valuation> valuations;
  bool exhaustive = false;
};

namespace detail {

// Constraint propagation over "exactly one true per context".
// Returns false on contradiction. -1 marks unassigned.
inline bool propagate(const KSInstance& inst, std::vector<int>& assign) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Context& c : inst.contexts) {
      int ones = 0, open = 0;
      for (int id : c.ray_ids) {
        const int v = assign[static_cast<std::size_t>(id)];
        if (v == 1) ++ones;
        else if (v == -1) ++open;
      }
      if (ones > 1) return false;
      if (ones == 1 && open > 0) {
        for (int id : c.ray_ids)
          if (assign[static_cast<std::size_t>(id)] == -1) {
            assign[static_cast<std::size_t>(id)] = 0;
            changed = true;
          }
      } else if (ones == 0) {
        if (open == 0) return false;
        if (open == 1) {
          for (int id : c.ray_ids)
            if (assign[static_cast<std::size_t>(id)] == -1) {
              assign[static_cast<std::size_t>(id)] = 1;
              changed = true;
            }
        }
      }
    }
  }
  return true;
}

struct SearchState {
  const KSInstance& inst;
  std::vector<Valuation>& out;
  std::optional<std::size_t> limit;
  std::optional<std::uint64_t> node_budget;
  std::uint64_t nodes = 0;
  bool truncated = false;
};

inline void dfs(SearchState& st, std::vector<int> assign) {
  if (st.truncated) return;
  if (st.node_budget && ++st.nodes > *st.node_budget) throw SearchBudgetExceeded{};
  if (!propagate(st.inst, assign)) return;
  auto it = std::find(assign.begin(), assign.end(), -1);
  if (it == assign.end()) {
    if (st.limit && st.out.size() >= *st.limit) {
      st.truncated = true;
      return;
    }
    st.out.push_back(Valuation{assign});
    return;
  }
  const auto idx = static_cast<std::size_t>(it - assign.begin());
  for (int value : {1, 0}) {
    std::vector<int> next = assign;
    next[idx] = value;
    dfs(st, std::move(next));
    if (st.truncated) return;
  }
}

}  // namespace detail

// DFS with unit propagation, branching on the lowest-id unassigned ray,
// value 1 before 0. Output order is deterministic.
inline SearchResult search_valuations(const KSInstance& inst,
                                      std::optional<std::size_t> limit = {},
                                      std::optional<std::uint64_t> node_budget = {}) {
  SearchResult res;
  detail::SearchState st{inst, res.valuations, limit, node_budget};
  detail::dfs(st, std::vector<int>(inst.rays.size(), -1));
  res.exhaustive = !st.truncated;
  return res;
}

inline std::optional<ParityCertificate> parity_certificate(const KSInstance& inst) {
  const auto incidence = ray_incidences(inst);
  const int contexts = static_cast<int>(inst.contexts.size());
  if (contexts % 2 == 0) return std::nullopt;
  for (int n : incidence)
    if (n % 2 != 0) return std::nullopt;
  return ParityCertificate{incidence, contexts};
}

}  // namespace kslab
