#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kslab/lp.hpp"
#include "kslab/rational.hpp"

namespace kslab {

struct NegativeWeight : std::invalid_argument {
  NegativeWeight() : std::invalid_argument("probability weight is negative") {}
};

struct MassNotOne : std::invalid_argument {
  MassNotOne() : std::invalid_argument("probability weights do not sum to 1") {}
};

struct DomainMismatch : std::invalid_argument {
  DomainMismatch() : std::invalid_argument("random variable not total on the space") {}
};

struct BudgetExceeded : std::runtime_error {
  BudgetExceeded() : std::runtime_error("product outcome space exceeds budget") {}
};

// Finite probability space over labelled atoms; the event algebra is
// the full power set, represented implicitly.
struct ProbabilitySpace {
  std::vector<std::string> atoms;
  std::vector<Rational> weights;
};

inline ProbabilitySpace make_space(std::vector<std::string> atoms,
                                   std::vector<Rational> weights) {
  if (atoms.size() != weights.size())
    throw std::invalid_argument("make_space: atom/weight count mismatch");
  Rational mass = 0;
  for (const Rational& w : weights) {
    if (w < 0) throw NegativeWeight{};
    mass += w;
  }
  if (mass != 1) throw MassNotOne{};
  return ProbabilitySpace{std::move(atoms), std::move(weights)};
}

struct RandomVariable {
  std::vector<Rational> values;  // indexed like the space's atoms
};

inline Rational expectation(const ProbabilitySpace& sp, const RandomVariable& a) {
  if (a.values.size() != sp.atoms.size()) throw DomainMismatch{};
  Rational acc = 0;
  for (std::size_t i = 0; i < sp.atoms.size(); ++i)
    acc += sp.weights[i] * a.values[i];
  return acc;
}

// Expectation of the pointwise product; covers second and higher moments.
inline Rational moment(const ProbabilitySpace& sp,
                       const std::vector<RandomVariable>& vars) {
  for (const RandomVariable& v : vars)
    if (v.values.size() != sp.atoms.size()) throw DomainMismatch{};
  Rational acc = 0;
  for (std::size_t i = 0; i < sp.atoms.size(); ++i) {
    Rational prod = sp.weights[i];
    for (const RandomVariable& v : vars) prod *= v.values[i];
    acc += prod;
  }
  return acc;
}

struct CorrelationTriple {
  Rational e_xy, e_xz, e_yz;
};

// -1 <= E(XY)+E(XZ)+E(YZ) <= 1 + 2 min{E(XY),E(XZ),E(YZ)}, exactly.
inline bool suppes_zanotti_holds(const CorrelationTriple& c) {
  const Rational sum = c.e_xy + c.e_xz + c.e_yz;
  const Rational lo = std::min({c.e_xy, c.e_xz, c.e_yz});
  return Rational(-1) <= sum && sum <= Rational(1) + 2 * lo;
}

enum class Verdict { Feasible, Infeasible };

struct FeasibilityResult {
  Verdict verdict = Verdict::Infeasible;
  std::optional<ProbabilitySpace> witness;
  std::optional<std::vector<Rational>> certificate;
};

// The eight sign triples of {+1,-1}^3, fixed atom order.
inline std::vector<std::array<int, 3>> sign_triples() {
  std::vector<std::array<int, 3>> out;
  for (int sx : {+1, -1})
    for (int sy : {+1, -1})
      for (int sz : {+1, -1}) out.push_back({sx, sy, sz});
  return out;
}

// JD existence for three +/-1 variables from their pairwise second
// moments; first moments are left unconstrained.
inline FeasibilityResult feasibility_three(const CorrelationTriple& c) {
  const auto atoms = sign_triples();
  LinearProblem lp;
  lp.a.assign(4, std::vector<Rational>(8, Rational(0)));
  for (std::size_t j = 0; j < 8; ++j) {
    lp.a[0][j] = 1;
    lp.a[1][j] = atoms[j][0] * atoms[j][1];
    lp.a[2][j] = atoms[j][0] * atoms[j][2];
    lp.a[3][j] = atoms[j][1] * atoms[j][2];
  }
  lp.b = {Rational(1), c.e_xy, c.e_xz, c.e_yz};
  LpResult r = lp_feasible(lp);
  FeasibilityResult out;
  if (r.feasible) {
    out.verdict = Verdict::Feasible;
    std::vector<std::string> labels;
    for (const auto& t : atoms) {
      std::string s;
      for (int v : t) s += v > 0 ? '+' : '-';
      labels.push_back(s);
    }
    out.witness = make_space(std::move(labels), std::move(r.witness));
  } else {
    out.certificate = std::move(r.certificate);
  }
  return out;
}

struct Observable {
  std::string name;
  std::vector<std::string> outcomes;
};

// Observables with finite outcome sets, contexts as name subsets, and
// one empirical distribution per context. Outcomes absent from a
// distribution map carry probability zero.
struct MeasurementSystem {
  std::vector<Observable> observables;
  std::vector<std::vector<std::string>> contexts;
  std::vector<std::map<std::vector<std::string>, Rational>> context_distributions;
};

struct InvalidSystem : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline const Observable& find_observable(const MeasurementSystem& sys,
                                         const std::string& name) {
  for (const Observable& o : sys.observables)
    if (o.name == name) return o;
  throw InvalidSystem("unknown observable '" + name + "'");
}

inline void validate_system(const MeasurementSystem& sys) {
  if (sys.contexts.size() != sys.context_distributions.size())
    throw InvalidSystem("context/distribution count mismatch");
  for (const Observable& o : sys.observables) {
    if (o.outcomes.empty()) throw InvalidSystem("observable with empty outcome set");
    // Witness atoms are "name=outcome" lists; keep them parseable.
    for (char c : o.name)
      if (c == ',' || c == '=')
        throw InvalidSystem("observable name may not contain ',' or '='");
    for (const std::string& v : o.outcomes)
      for (char c : v)
        if (c == ',' || c == '=')
          throw InvalidSystem("outcome label may not contain ',' or '='");
    bool used = false;
    for (const auto& ctx : sys.contexts)
      used = used || std::find(ctx.begin(), ctx.end(), o.name) != ctx.end();
    if (!used) throw InvalidSystem("observable '" + o.name + "' appears in no context");
  }
  for (std::size_t ci = 0; ci < sys.contexts.size(); ++ci) {
    for (const std::string& name : sys.contexts[ci]) find_observable(sys, name);
    Rational mass = 0;
    for (const auto& [tuple, p] : sys.context_distributions[ci]) {
      if (tuple.size() != sys.contexts[ci].size())
        throw InvalidSystem("joint outcome arity mismatch");
      if (p < 0) throw NegativeWeight{};
      mass += p;
    }
    if (mass != 1) throw MassNotOne{};
  }
}

namespace detail {

// Enumerate the cartesian product of outcome lists in lexicographic
// order of positions, first coordinate slowest.
inline void for_each_tuple(const std::vector<std::vector<std::string>>& sets,
                           const std::function<void(const std::vector<std::string>&)>& f) {
  std::vector<std::string> tuple(sets.size());
  std::function<void(std::size_t)> rec = [&](std::size_t pos) {
    if (pos == sets.size()) {
      f(tuple);
      return;
    }
    for (const std::string& v : sets[pos]) {
      tuple[pos] = v;
      rec(pos + 1);
    }
  };
  rec(0);
}

}  // namespace detail

// Def.-4 feasibility: one LP variable per global outcome assignment,
// one equality per (context, joint outcome), plus normalization.
inline FeasibilityResult feasibility_general(const MeasurementSystem& sys,
                                             std::uint64_t budget = 1u << 20) {
  validate_system(sys);
  std::uint64_t product = 1;
  for (const Observable& o : sys.observables) {
    product *= o.outcomes.size();
    if (product > budget) throw BudgetExceeded{};
  }
  const auto n = static_cast<std::size_t>(product);

  std::vector<std::vector<std::string>> assignments;  // one per LP column
  std::vector<std::vector<std::string>> outcome_sets;
  for (const Observable& o : sys.observables) outcome_sets.push_back(o.outcomes);
  detail::for_each_tuple(outcome_sets, [&](const std::vector<std::string>& t) {
    assignments.push_back(t);
  });

  std::map<std::string, std::size_t> obs_index;
  for (std::size_t i = 0; i < sys.observables.size(); ++i)
    obs_index[sys.observables[i].name] = i;

  LinearProblem lp;
  lp.a.emplace_back(n, Rational(1));  // normalization
  lp.b.emplace_back(1);
  for (std::size_t ci = 0; ci < sys.contexts.size(); ++ci) {
    const auto& ctx = sys.contexts[ci];
    std::vector<std::vector<std::string>> ctx_sets;
    for (const std::string& name : ctx)
      ctx_sets.push_back(find_observable(sys, name).outcomes);
    detail::for_each_tuple(ctx_sets, [&](const std::vector<std::string>& joint) {
      std::vector<Rational> row(n, Rational(0));
      for (std::size_t col = 0; col < n; ++col) {
        bool match = true;
        for (std::size_t k = 0; k < ctx.size(); ++k)
          if (assignments[col][obs_index.at(ctx[k])] != joint[k]) match = false;
        if (match) row[col] = 1;
      }
      const auto& dist = sys.context_distributions[ci];
      auto it = dist.find(joint);
      lp.a.push_back(std::move(row));
      lp.b.push_back(it == dist.end() ? Rational(0) : it->second);
    });
  }

  LpResult r = lp_feasible(lp);
  FeasibilityResult out;
  if (r.feasible) {
    out.verdict = Verdict::Feasible;
    std::vector<std::string> labels;
    for (const auto& t : assignments) {
      std::string s;
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) s += ",";
        s += sys.observables[i].name + "=" + t[i];
      }
      labels.push_back(s);
    }
    out.witness = make_space(std::move(labels), std::move(r.witness));
  } else {
    out.certificate = std::move(r.certificate);
  }
  return out;
}

// Probability a witness space assigns to a joint outcome of one
// context. Atoms are "name=outcome" lists separated by commas, the
// labelling both feasibility_general and the split-system witness use.
inline Rational witness_marginal(const MeasurementSystem& sys,
                                 const ProbabilitySpace& witness,
                                 std::size_t context_index,
                                 const std::vector<std::string>& joint) {
  const auto& ctx = sys.contexts[context_index];
  Rational acc = 0;
  for (std::size_t i = 0; i < witness.atoms.size(); ++i) {
    std::map<std::string, std::string> assignment;
    const std::string& atom = witness.atoms[i];
    std::size_t pos = 0;
    while (pos < atom.size()) {
      auto comma = atom.find(',', pos);
      if (comma == std::string::npos) comma = atom.size();
      const auto eq = atom.find('=', pos);
      if (eq == std::string::npos || eq > comma)
        throw std::invalid_argument("witness atom is not a 'name=outcome' list");
      assignment[atom.substr(pos, eq - pos)] = atom.substr(eq + 1, comma - eq - 1);
      pos = comma + 1;
    }
    bool match = true;
    for (std::size_t k = 0; k < ctx.size(); ++k)
      if (assignment.at(ctx[k]) != joint[k]) match = false;
    if (match) acc += witness.weights[i];
  }
  return acc;
}

}  // namespace kslab
