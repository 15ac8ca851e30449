#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "kslab/prng.hpp"

namespace kslab {

using Kind = std::string;

struct NegativeMultiplicity : std::invalid_argument {
  NegativeMultiplicity() : std::invalid_argument("multiplicity is negative") {}
};

struct KindAbsent : std::invalid_argument {
  KindAbsent() : std::invalid_argument("kind has multiplicity 0 in this qset") {}
};

class Qset;

// Opaque handle on one element of a qset. Only the kind and membership
// tests are observable; no identity predicate between two refs exists.
class QObjectRef {
 public:
  const Kind& kind() const { return kind_; }
  bool member_of(const Qset& z) const;

 private:
  friend class Qset;
  QObjectRef(Kind k, std::uint64_t hidden) : kind_(std::move(k)), hidden_(hidden) {}

  Kind kind_;
  std::uint64_t hidden_;  // bookkeeping only, never exposed
};

// A collection of possibly indistinguishable elements, represented
// extensionally as kind -> multiplicity. Hidden per-element labels
// exist for bookkeeping; every public observation is invariant under
// permuting them within a kind.
class Qset {
 public:
  Qset() = default;

  static Qset from_spec(const std::vector<std::pair<Kind, long long>>& spec) {
    // Hidden labels are unique across all qsets, so membership of a ref
    // in an unrelated qset of the same kind is false.
    static std::uint64_t next = 1;
    Qset q;
    for (const auto& [kind, count] : spec) {
      if (count < 0) throw NegativeMultiplicity{};
      auto& labels = q.members_[kind];
      for (long long i = 0; i < count; ++i) labels.push_back(next++);
      if (labels.empty()) q.members_.erase(kind);
    }
    return q;
  }

  long long multiplicity(const Kind& k) const {
    auto it = members_.find(k);
    return it == members_.end() ? 0 : static_cast<long long>(it->second.size());
  }

  long long qcard() const {
    long long total = 0;
    for (const auto& [kind, labels] : members_) total += labels.size();
    return total;
  }

  std::vector<Kind> kinds() const {
    std::vector<Kind> out;
    for (const auto& [kind, labels] : members_) out.push_back(kind);
    return out;
  }

  // [x]_z restricted to one kind: everything indistinguishable from an
  // element of that kind.
  Qset sub_of_kind(const Kind& k) const {
    Qset q;
    auto it = members_.find(k);
    if (it != members_.end()) q.members_[k] = it->second;
    return q;
  }

  // Some element of the given kind; which one is not a fact the API
  // can express.
  QObjectRef some_element(const Kind& k) const {
    auto it = members_.find(k);
    if (it == members_.end() || it->second.empty()) throw KindAbsent{};
    return QObjectRef(k, it->second.front());
  }

  // Shuffles hidden labels within each kind. Public observations of the
  // result must be indistinguishable from the original; the identity
  // firewall tests exercise exactly this.
  Qset relabeled(std::uint64_t seed) const {
    Qset q = *this;
    SplitMix64 rng(seed);
    for (auto& [kind, labels] : q.members_) {
      for (std::size_t i = labels.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(
            uniform_below(rng, Integer(static_cast<std::uint64_t>(i))));
        std::swap(labels[i - 1], labels[j]);
      }
      for (auto& l : labels) l ^= seed * 0x9e3779b97f4a7c15ULL;
    }
    return q;
  }

 private:
  friend class QObjectRef;
  std::map<Kind, std::vector<std::uint64_t>> members_;
};

inline bool QObjectRef::member_of(const Qset& z) const {
  auto it = z.members_.find(kind_);
  if (it == z.members_.end()) return false;
  return std::find(it->second.begin(), it->second.end(), hidden_) != it->second.end();
}

inline Qset new_qset(const std::vector<std::pair<Kind, long long>>& spec) {
  return Qset::from_spec(spec);
}

// Two qsets are indiscernible iff they agree kind-by-kind on
// multiplicity: same q-cardinal, same quantity of each kind.
inline bool qset_indistinguishable(const Qset& a, const Qset& b) {
  std::set<Kind> all;
  for (const Kind& k : a.kinds()) all.insert(k);
  for (const Kind& k : b.kinds()) all.insert(k);
  for (const Kind& k : all)
    if (a.multiplicity(k) != b.multiplicity(k)) return false;
  return true;
}

// Sub-collection of [x]_z with q-cardinal one. Deliberately carries no
// information about which element it holds; the token only records
// which draw this is, so distinct draws are distinct singletons.
struct StrongSingleton {
  Kind kind;
  std::uint64_t token = 0;
};

inline StrongSingleton strong_singleton(const Qset& z, const Kind& k,
                                        std::uint64_t token = 0) {
  if (z.multiplicity(k) < 1) throw KindAbsent{};
  return StrongSingleton{k, token};
}

// Kind-slot associations between two qsets. Lawful when same-kind
// inputs always land on same-kind outputs.
struct QFunction {
  std::vector<std::pair<Kind, Kind>> pairs;
};

inline bool check_qfunction(const QFunction& f) {
  std::map<Kind, Kind> image;
  for (const auto& [in, out] : f.pairs) {
    auto [it, fresh] = image.try_emplace(in, out);
    if (!fresh && it->second != out) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Finite relational structures: automorphisms, orbit indiscernibility,
// rigid extension.

struct ElementNotInDomain : std::invalid_argument {
  ElementNotInDomain() : std::invalid_argument("element not in structure domain") {}
};

struct AutomorphismBudgetExceeded : std::runtime_error {
  AutomorphismBudgetExceeded() : std::runtime_error("domain exceeds automorphism budget") {}
};

struct FiniteStructure {
  std::vector<std::string> domain;
  std::map<std::string, std::vector<std::vector<std::string>>> relations;
};

using Permutation = std::vector<std::size_t>;  // images by domain index

namespace detail {

inline std::size_t domain_index(const FiniteStructure& s, const std::string& e) {
  auto it = std::find(s.domain.begin(), s.domain.end(), e);
  if (it == s.domain.end()) throw ElementNotInDomain{};
  return static_cast<std::size_t>(it - s.domain.begin());
}

inline std::set<std::vector<std::size_t>> relation_tuples(
    const FiniteStructure& s, const std::vector<std::vector<std::string>>& rel) {
  std::set<std::vector<std::size_t>> out;
  for (const auto& tuple : rel) {
    std::vector<std::size_t> ix;
    for (const auto& e : tuple) ix.push_back(domain_index(s, e));
    out.insert(std::move(ix));
  }
  return out;
}

}  // namespace detail

// All relation-preserving bijections of the domain, by backtracking
// with partial-image pruning. Deterministic: images tried in ascending
// order, results in lexicographic order.
inline std::vector<Permutation> automorphisms(const FiniteStructure& s,
                                              std::size_t budget = 10) {
  const std::size_t n = s.domain.size();
  if (n > budget) throw AutomorphismBudgetExceeded{};
  std::vector<std::set<std::vector<std::size_t>>> rels;
  for (const auto& [name, tuples] : s.relations)
    rels.push_back(detail::relation_tuples(s, tuples));

  std::vector<Permutation> found;
  Permutation img(n, n);
  std::vector<bool> used(n, false);

  // A fully-assigned tuple must map into the relation; with a bijection
  // and equal tuple counts, forward closure is equality.
  auto consistent = [&](std::size_t just_set) {
    for (const auto& rel : rels)
      for (const auto& tuple : rel) {
        bool touches = false, complete = true;
        for (std::size_t e : tuple) {
          if (e == just_set) touches = true;
          if (img[e] == n) complete = false;
        }
        if (!touches || !complete) continue;
        std::vector<std::size_t> mapped;
        for (std::size_t e : tuple) mapped.push_back(img[e]);
        if (!rel.count(mapped)) return false;
      }
    return true;
  };

  std::function<void(std::size_t)> extend = [&](std::size_t pos) {
    if (pos == n) {
      found.push_back(img);
      return;
    }
    for (std::size_t target = 0; target < n; ++target) {
      if (used[target]) continue;
      img[pos] = target;
      used[target] = true;
      if (consistent(pos)) extend(pos + 1);
      used[target] = false;
      img[pos] = n;
    }
  };
  extend(0);
  return found;
}

inline bool structure_indiscernible(const FiniteStructure& s, const std::string& a,
                                    const std::string& b, std::size_t budget = 10) {
  const std::size_t ia = detail::domain_index(s, a);
  const std::size_t ib = detail::domain_index(s, b);
  for (const Permutation& h : automorphisms(s, budget))
    if (h[ia] == ib) return true;
  return false;
}

// Adds fresh unary singleton relations until only the identity
// automorphism remains. Already-rigid structures come back unchanged.
inline FiniteStructure rigid_extension(FiniteStructure s, std::size_t budget = 10) {
  int fresh = 0;
  for (;;) {
    const auto autos = automorphisms(s, budget);
    if (autos.size() <= 1) return s;
    // Lowest-index element moved by some nontrivial automorphism.
    std::size_t pick = s.domain.size();
    for (const Permutation& h : autos)
      for (std::size_t i = 0; i < h.size(); ++i)
        if (h[i] != i && i < pick) pick = i;
    std::string name;
    do {
      name = "fixed_" + std::to_string(++fresh);
    } while (s.relations.count(name));
    s.relations[name] = {{s.domain[pick]}};
  }
}

}  // namespace kslab
