#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "kslab/cbd.hpp"
#include "kslab/jpd.hpp"
#include "kslab/ks.hpp"
#include "kslab/ks_qset.hpp"
#include "kslab/qset.hpp"

namespace kslab {

using Json = nlohmann::ordered_json;

struct FileFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// On-disk description of problem inputs. Rationals are strings "p/q"
// or "n"; floating point is rejected in every verdict-bearing field.
struct SystemFile {
  int format_version = 1;
  std::optional<KSInstance> ks_instance;
  std::optional<MeasurementSystem> measurement_system;
  std::optional<FiniteStructure> structure;
};

namespace detail {

inline void reject_unknown(const Json& obj, const std::set<std::string>& known,
                           const std::string& where) {
  for (const auto& [key, value] : obj.items())
    if (!known.count(key))
      throw FileFormatError("unknown field '" + key + "' in " + where);
}

inline Rational json_rational(const Json& v, const std::string& where) {
  if (!v.is_string())
    throw FileFormatError("rational in " + where + " must be a string like \"p/q\"");
  try {
    return parse_rational(v.get<std::string>());
  } catch (const ParseError& e) {
    throw FileFormatError(where + ": " + e.what());
  }
}

}  // namespace detail

inline KSInstance parse_ks_instance(const Json& j) {
  detail::reject_unknown(j, {"dimension", "rays", "contexts"}, "ks_instance");
  KSInstance inst;
  inst.dimension = j.at("dimension").get<int>();
  for (const auto& raw : j.at("rays")) {
    std::vector<long long> comps;
    for (const auto& c : raw) {
      if (!c.is_number_integer())
        throw FileFormatError("ray components must be integers");
      comps.push_back(c.get<long long>());
    }
    inst.rays.push_back(canonical_ray(comps));
  }
  for (std::size_t i = 0; i < inst.rays.size(); ++i)
    for (std::size_t k = i + 1; k < inst.rays.size(); ++k)
      if (inst.rays[i] == inst.rays[k])
        throw FileFormatError("duplicate canonical ray in ray table");
  for (const auto& ctx : j.at("contexts")) {
    Context c;
    for (const auto& id : ctx) {
      const int v = id.get<int>();
      if (v < 0 || v >= static_cast<int>(inst.rays.size()))
        throw FileFormatError("context ray index out of range");
      c.ray_ids.push_back(v);
    }
    std::sort(c.ray_ids.begin(), c.ray_ids.end());
    inst.contexts.push_back(std::move(c));
  }
  return inst;
}

inline MeasurementSystem parse_measurement_system(const Json& j) {
  detail::reject_unknown(j, {"observables", "contexts", "distributions"},
                         "measurement_system");
  MeasurementSystem sys;
  for (const auto& o : j.at("observables")) {
    detail::reject_unknown(o, {"name", "outcomes"}, "observable");
    Observable obs;
    obs.name = o.at("name").get<std::string>();
    for (const auto& v : o.at("outcomes")) obs.outcomes.push_back(v.get<std::string>());
    sys.observables.push_back(std::move(obs));
  }
  for (const auto& ctx : j.at("contexts")) {
    std::vector<std::string> names;
    for (const auto& n : ctx) names.push_back(n.get<std::string>());
    sys.contexts.push_back(std::move(names));
  }
  for (const auto& dist : j.at("distributions")) {
    std::map<std::vector<std::string>, Rational> d;
    for (const auto& entry : dist) {
      detail::reject_unknown(entry, {"outcome", "p"}, "distribution entry");
      std::vector<std::string> joint;
      for (const auto& v : entry.at("outcome")) joint.push_back(v.get<std::string>());
      d[joint] = detail::json_rational(entry.at("p"), "distribution entry");
    }
    sys.context_distributions.push_back(std::move(d));
  }
  return sys;
}

inline FiniteStructure parse_structure(const Json& j) {
  detail::reject_unknown(j, {"domain", "relations"}, "structure");
  FiniteStructure s;
  for (const auto& e : j.at("domain")) s.domain.push_back(e.get<std::string>());
  for (const auto& [name, tuples] : j.at("relations").items()) {
    std::vector<std::vector<std::string>> rel;
    for (const auto& tuple : tuples) {
      std::vector<std::string> t;
      for (const auto& e : tuple) t.push_back(e.get<std::string>());
      rel.push_back(std::move(t));
    }
    s.relations[name] = std::move(rel);
  }
  return s;
}

inline SystemFile parse_system_file(const Json& j) {
  detail::reject_unknown(
      j, {"format_version", "ks_instance", "measurement_system", "structure"},
      "system file");
  SystemFile f;
  f.format_version = j.at("format_version").get<int>();
  if (f.format_version != 1)
    throw FileFormatError("unsupported format_version");
  if (j.contains("ks_instance")) f.ks_instance = parse_ks_instance(j["ks_instance"]);
  if (j.contains("measurement_system"))
    f.measurement_system = parse_measurement_system(j["measurement_system"]);
  if (j.contains("structure")) f.structure = parse_structure(j["structure"]);
  return f;
}

// --------------------------------------------------------------------------
// Report serialization. Rationals stay exact as strings.

inline Json ray_json(const Ray& r) {
  Json a = Json::array();
  for (long long c : r.components) a.push_back(c);
  return a;
}

inline Json validation_report_json(const KSInstance& inst, const ValidationReport& rep) {
  Json j;
  j["passed"] = rep.passed;
  j["ray_count"] = inst.rays.size();
  j["context_count"] = inst.contexts.size();
  j["no_duplicate_rays"] = rep.no_duplicate_rays;
  j["every_ray_used"] = rep.every_ray_used;
  j["incidence"] = rep.incidence;
  Json ctxs = Json::array();
  for (const ContextReport& c : rep.contexts) {
    Json cj;
    cj["context"] = c.context_index;
    cj["size_matches_dimension"] = c.size_matches_dimension;
    cj["resolves_identity"] = c.resolves_identity;
    Json bad = Json::array();
    for (const auto& [a, b] : c.non_orthogonal_pairs) bad.push_back({a, b});
    cj["non_orthogonal_pairs"] = bad;
    ctxs.push_back(std::move(cj));
  }
  j["contexts"] = std::move(ctxs);
  return j;
}

inline Json valuation_json(const Valuation& v) { return Json(v.assignment); }

inline Json parity_certificate_json(const ParityCertificate& c) {
  Json j;
  j["ray_incidence"] = c.ray_incidence;
  j["context_count"] = c.context_count;
  return j;
}

inline Json space_json(const ProbabilitySpace& sp) {
  Json j;
  Json atoms = Json::array(), weights = Json::array();
  for (std::size_t i = 0; i < sp.atoms.size(); ++i) {
    atoms.push_back(sp.atoms[i]);
    weights.push_back(format_rational(sp.weights[i]));
  }
  j["atoms"] = std::move(atoms);
  j["weights"] = std::move(weights);
  return j;
}

inline Json feasibility_json(const FeasibilityResult& r) {
  Json j;
  j["verdict"] = r.verdict == Verdict::Feasible ? "feasible" : "infeasible";
  if (r.witness) j["witness"] = space_json(*r.witness);
  if (r.certificate) {
    Json cert = Json::array();
    for (const Rational& y : *r.certificate) cert.push_back(format_rational(y));
    j["certificate"] = std::move(cert);
  }
  return j;
}

inline Json split_map_json(const SplitMap& m) {
  Json arr = Json::array();
  for (const auto& [key, fresh] : m.names) {
    Json e;
    e["observable"] = key.first;
    e["context"] = key.second;
    e["split_name"] = fresh;
    arr.push_back(std::move(e));
  }
  return arr;
}

// Bearers appear as kind plus an opaque singleton token, never as
// hidden labels.
inline Json family_json(const ContextualValuationFamily& fam) {
  Json j;
  j["system_qcard"] = fam.system.qcard();
  Json ctxs = Json::array();
  for (std::size_t ci = 0; ci < fam.entries.size(); ++ci) {
    Json cj;
    cj["context"] = ci;
    const auto& row = fam.entries[ci];
    cj["bearer"] = row.front().bearer.kind + "#" + std::to_string(row.front().bearer.token);
    Json vals = Json::array();
    for (const QsetValuationEntry& e : row) {
      Json ej;
      ej["ray_id"] = e.ray_id;
      ej["value"] = e.value;
      vals.push_back(std::move(ej));
    }
    cj["entries"] = std::move(vals);
    ctxs.push_back(std::move(cj));
  }
  j["contexts"] = std::move(ctxs);
  return j;
}

}  // namespace kslab
