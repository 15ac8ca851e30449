#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "kslab/jpd.hpp"
#include "kslab/ks.hpp"
#include "kslab/prng.hpp"
#include "kslab/qset.hpp"

namespace kslab {

// <<P, V>; [[x]]_z>: a truth value for one projector, borne by a strong
// singleton rather than an identified particle.
struct QsetValuationEntry {
  int ray_id = 0;
  int value = 0;  // 0 or 1
  StrongSingleton bearer;
};

// One bearer and one sum-to-1 assignment per context. Bearers of
// different contexts are distinct strong singletons of the same kind:
// indistinguishable, not identical. No cross-context consistency is
// imposed or implied.
struct ContextualValuationFamily {
  Qset system;
  std::vector<Context> contexts;
  std::vector<std::vector<QsetValuationEntry>> entries;  // per context
};

struct ClassicalModeResult {
  Verdict verdict = Verdict::Infeasible;
  std::vector<Valuation> valuations;
  std::optional<ParityCertificate> parity;
};

// One global valuation shared by all contexts: the bearer is a single
// c-object with classical identity, so every occurrence of a ray must
// get the same value.
inline ClassicalModeResult classical_mode(const KSInstance& inst) {
  ClassicalModeResult out;
  const SearchResult search = search_valuations(inst);
  out.valuations = search.valuations;
  out.verdict = out.valuations.empty() ? Verdict::Infeasible : Verdict::Feasible;
  if (out.verdict == Verdict::Infeasible) out.parity = parity_certificate(inst);
  return out;
}

inline const Kind kSystemKind = "system";

// Per-context valuations borne by distinct strong singletons drawn from
// one qset of indistinguishable systems, one per context. Default
// assignment is deterministic: the first ray of each context is true.
// A seed switches to an independent random choice per context.
inline ContextualValuationFamily qset_mode(const KSInstance& inst,
                                           std::optional<std::uint64_t> seed = {}) {
  ContextualValuationFamily fam;
  fam.system = new_qset({{kSystemKind, static_cast<long long>(inst.contexts.size())}});
  fam.contexts = inst.contexts;
  std::optional<SplitMix64> rng;
  if (seed) rng.emplace(*seed);
  for (std::size_t ci = 0; ci < inst.contexts.size(); ++ci) {
    const Context& ctx = inst.contexts[ci];
    const StrongSingleton bearer =
        strong_singleton(fam.system, kSystemKind, static_cast<std::uint64_t>(ci));
    std::size_t chosen = 0;
    if (rng)
      chosen = static_cast<std::size_t>(static_cast<std::uint64_t>(uniform_below(
          *rng, Integer(static_cast<std::uint64_t>(ctx.ray_ids.size())))));
    std::vector<QsetValuationEntry> row;
    for (std::size_t k = 0; k < ctx.ray_ids.size(); ++k)
      row.push_back({ctx.ray_ids[k], k == chosen ? 1 : 0, bearer});
    fam.entries.push_back(std::move(row));
  }
  return fam;
}

// True iff every context sums to exactly 1, every bearer is a
// well-formed strong singleton of the system qset, and no bearer is
// shared between two contexts.
inline bool verify_family(const ContextualValuationFamily& fam) {
  if (fam.entries.size() != fam.contexts.size()) return false;
  std::set<std::uint64_t> tokens;
  for (std::size_t ci = 0; ci < fam.entries.size(); ++ci) {
    const auto& row = fam.entries[ci];
    if (row.empty()) return false;
    std::set<int> covered;
    int sum = 0;
    for (const QsetValuationEntry& e : row) {
      if (e.value != 0 && e.value != 1) return false;
      if (fam.system.multiplicity(e.bearer.kind) < 1) return false;
      if (e.bearer.kind != row.front().bearer.kind ||
          e.bearer.token != row.front().bearer.token)
        return false;  // one bearer per context
      sum += e.value;
      covered.insert(e.ray_id);
    }
    if (sum != 1) return false;
    const std::set<int> expect(fam.contexts[ci].ray_ids.begin(),
                               fam.contexts[ci].ray_ids.end());
    if (covered != expect) return false;
    if (!tokens.insert(row.front().bearer.token).second) return false;
  }
  return true;
}

// Samples one ray of the context with Born weight <psi|P|psi>/<psi|psi>,
// computed exactly; by resolution of identity the weights sum to 1.
// splitmix64 stream from the seed; bit-reproducible.
inline int simulate_context_run(const Ray& state, const KSInstance& inst,
                                std::size_t context_index, std::uint64_t seed) {
  const Context& ctx = inst.contexts.at(context_index);
  std::vector<Rational> probs;
  const Rational norm = inner_product(state, state);
  for (int id : ctx.ray_ids) {
    const Ray& v = inst.rays[static_cast<std::size_t>(id)];
    if (v.dimension() != state.dimension())
      throw DimensionMismatch("simulate_context_run: state dimension");
    const Rational ip = inner_product(state, v);
    probs.push_back(ip * ip / (norm * inner_product(v, v)));
  }
  Integer denom = 1;
  for (const Rational& p : probs) denom = lcm(denom, denominator(p));
  Integer total = 0;
  std::vector<Integer> weights;
  for (const Rational& p : probs) {
    weights.push_back(numerator(p) * (denom / denominator(p)));
    total += weights.back();
  }
  if (total != denom)
    throw std::logic_error("simulate_context_run: context is not a resolution of identity");
  SplitMix64 rng(seed);
  Integer draw = uniform_below(rng, denom);
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (draw < weights[k]) return ctx.ray_ids[k];
    draw -= weights[k];
  }
  return ctx.ray_ids.back();  // unreachable
}

}  // namespace kslab
