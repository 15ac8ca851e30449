#pragma once

#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kslab/jpd.hpp"

namespace kslab {

struct NotASplitSystem : std::invalid_argument {
  NotASplitSystem() : std::invalid_argument("contexts share observables") {}
};

// (original observable, context index) -> fresh split observable name.
// Context indices are 1-based, matching the subscript convention
// X_1, X_2, Y_1, Y_3, Z_2, Z_3.
struct SplitMap {
  std::map<std::pair<std::string, std::size_t>, std::string> names;
};

// Contextuality-by-Default relabelling: one fresh observable per
// (observable, context) incidence; distributions carried over unchanged.
inline std::pair<MeasurementSystem, SplitMap> split_by_context(
    const MeasurementSystem& sys) {
  validate_system(sys);
  MeasurementSystem out;
  SplitMap map;
  for (std::size_t ci = 0; ci < sys.contexts.size(); ++ci) {
    std::vector<std::string> ctx;
    for (const std::string& name : sys.contexts[ci]) {
      const std::string fresh = name + "_" + std::to_string(ci + 1);
      map.names[{name, ci + 1}] = fresh;
      out.observables.push_back({fresh, find_observable(sys, name).outcomes});
      ctx.push_back(fresh);
    }
    out.contexts.push_back(std::move(ctx));
    out.context_distributions.push_back(sys.context_distributions[ci]);
  }
  return {std::move(out), std::move(map)};
}

// A split system always admits a joint distribution: the product of
// its context distributions. Returns it as an explicit witness.
inline FeasibilityResult verify_split_feasible(const MeasurementSystem& sys) {
  validate_system(sys);
  std::set<std::string> seen;
  for (const auto& ctx : sys.contexts)
    for (const std::string& name : ctx)
      if (!seen.insert(name).second) throw NotASplitSystem{};

  // Contexts partition the observables, so a global assignment is one
  // joint outcome per context and its product-measure weight is the
  // product of the per-context probabilities. Only the support of each
  // context distribution is enumerated.
  std::map<std::string, std::size_t> obs_index;
  for (std::size_t i = 0; i < sys.observables.size(); ++i)
    obs_index[sys.observables[i].name] = i;

  std::vector<std::vector<std::pair<std::vector<std::string>, Rational>>> supports;
  for (const auto& dist : sys.context_distributions)
    supports.emplace_back(dist.begin(), dist.end());

  std::vector<std::string> labels;
  std::vector<Rational> weights;
  std::vector<std::map<std::vector<std::string>, Rational>> marginals(
      sys.contexts.size());
  std::vector<std::string> assignment(sys.observables.size());
  std::function<void(std::size_t, Rational)> expand = [&](std::size_t ci, Rational w) {
    if (ci == sys.contexts.size()) {
      std::string s;
      for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (i) s += ",";
        s += sys.observables[i].name + "=" + assignment[i];
      }
      labels.push_back(std::move(s));
      weights.push_back(w);
      return;
    }
    for (const auto& [joint, p] : supports[ci]) {
      for (std::size_t k = 0; k < joint.size(); ++k)
        assignment[obs_index.at(sys.contexts[ci][k])] = joint[k];
      expand(ci + 1, w * p);
    }
  };
  expand(0, Rational(1));

  FeasibilityResult out;
  out.verdict = Verdict::Feasible;
  out.witness = make_space(std::move(labels), std::move(weights));

  // Marginal check in one pass: each context's marginal of the product
  // measure is its own distribution scaled by the other contexts'
  // total mass, which is 1.
  std::vector<std::size_t> choice(sys.contexts.size(), 0);
  std::size_t atom = 0;
  std::function<void(std::size_t)> accumulate = [&](std::size_t ci) {
    if (ci == sys.contexts.size()) {
      for (std::size_t c = 0; c < sys.contexts.size(); ++c)
        marginals[c][supports[c][choice[c]].first] += out.witness->weights[atom];
      ++atom;
      return;
    }
    for (std::size_t k = 0; k < supports[ci].size(); ++k) {
      choice[ci] = k;
      accumulate(ci + 1);
    }
  };
  accumulate(0);
  for (std::size_t ci = 0; ci < sys.contexts.size(); ++ci)
    for (const auto& [joint, p] : sys.context_distributions[ci])
      if (marginals[ci].at(joint) != p)
        throw std::logic_error("split witness failed marginal check");
  return out;
}

}  // namespace kslab
