// kslab: exact-arithmetic toolkit for Kochen-Specker sets, joint
// probability distribution existence, and quasi-set valuations.
//
// Exit codes: 0 feasible/valid/holds, 1 infeasible/contextual/violated,
// 2 usage or data error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kslab/io.hpp"

namespace {

using namespace kslab;

struct Options {
  bool json = false;
  std::uint64_t seed = 0;
  std::uint64_t budget = 1u << 20;
  std::optional<std::size_t> limit;
};

void emit(const Options& opt, const Json& report, const std::string& text) {
  if (opt.json)
    std::cout << report.dump(2) << "\n";
  else
    std::cout << text;
}

KSInstance load_instance(const std::string& file, const std::string& builtin) {
  if (!builtin.empty()) {
    if (builtin != "cabello")
      throw FileFormatError("unknown builtin instance '" + builtin + "'");
    return builtin_cabello();
  }
  std::ifstream in(file);
  if (!in) throw FileFormatError("cannot open '" + file + "'");
  const SystemFile sf = parse_system_file(Json::parse(in));
  if (!sf.ks_instance) throw FileFormatError("file has no ks_instance block");
  return *sf.ks_instance;
}

MeasurementSystem load_system(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw FileFormatError("cannot open '" + file + "'");
  const SystemFile sf = parse_system_file(Json::parse(in));
  if (!sf.measurement_system)
    throw FileFormatError("file has no measurement_system block");
  return *sf.measurement_system;
}

int cmd_verify_cabello(const Options& opt) {
  const KSInstance inst = builtin_cabello();
  const ValidationReport rep = validate_instance(inst);
  Json j;
  j["command"] = "verify-cabello";
  j["report"] = validation_report_json(inst, rep);
  std::string text = rep.passed ? "PASS" : "FAIL";
  text += ": " + std::to_string(inst.rays.size()) + " rays, " +
          std::to_string(inst.contexts.size()) + " contexts\n";
  emit(opt, j, text);
  return rep.passed ? 0 : 1;
}

int cmd_search(const Options& opt, const std::string& file, const std::string& builtin) {
  const KSInstance inst = load_instance(file, builtin);
  const SearchResult res = search_valuations(inst, opt.limit);
  const auto parity = parity_certificate(inst);
  Json j;
  j["command"] = "search";
  j["valuation_count"] = res.valuations.size();
  j["exhaustive"] = res.exhaustive;
  Json vals = Json::array();
  for (const Valuation& v : res.valuations) vals.push_back(valuation_json(v));
  j["valuations"] = std::move(vals);
  if (parity) j["parity_certificate"] = parity_certificate_json(*parity);
  std::string text = std::to_string(res.valuations.size()) + " valuation(s), " +
                     (res.exhaustive ? "exhaustive" : "truncated");
  if (parity) text += "; parity certificate applies";
  text += "\n";
  emit(opt, j, text);
  return res.valuations.empty() ? 1 : 0;
}

int cmd_suppes_zanotti(const Options& opt, const std::string& exy,
                       const std::string& exz, const std::string& eyz, bool oracle) {
  const CorrelationTriple c{parse_rational(exy), parse_rational(exz),
                            parse_rational(eyz)};
  for (const Rational* e : {&c.e_xy, &c.e_xz, &c.e_yz})
    if (*e < -1 || *e > 1) throw FileFormatError("correlation outside [-1,1]");
  const bool holds = suppes_zanotti_holds(c);
  Json j;
  j["command"] = "suppes-zanotti";
  j["holds"] = holds;
  std::string text = std::string("inequality ") + (holds ? "holds" : "violated");
  if (oracle) {
    const FeasibilityResult lp = feasibility_three(c);
    const bool feasible = lp.verdict == Verdict::Feasible;
    j["lp"] = feasibility_json(lp);
    j["agree"] = feasible == holds;
    text += std::string("; LP ") + (feasible ? "feasible" : "infeasible") +
            (feasible == holds ? "; agree" : "; DISAGREE");
  }
  text += "\n";
  emit(opt, j, text);
  return holds ? 0 : 1;
}

int cmd_feasibility(const Options& opt, const std::string& file) {
  const MeasurementSystem sys = load_system(file);
  const FeasibilityResult res = feasibility_general(sys, opt.budget);
  Json j;
  j["command"] = "feasibility";
  j["result"] = feasibility_json(res);
  const bool feasible = res.verdict == Verdict::Feasible;
  emit(opt, j, std::string(feasible ? "feasible" : "infeasible (contextual)") + "\n");
  return feasible ? 0 : 1;
}

int cmd_cbd(const Options& opt, const std::string& file) {
  const MeasurementSystem sys = load_system(file);
  auto [split, map] = split_by_context(sys);
  const FeasibilityResult res = verify_split_feasible(split);
  Json j;
  j["command"] = "cbd";
  j["split_map"] = split_map_json(map);
  Json obs = Json::array();
  for (const Observable& o : split.observables) obs.push_back(o.name);
  j["split_observables"] = std::move(obs);
  j["result"] = feasibility_json(res);
  emit(opt, j,
       "split into " + std::to_string(split.observables.size()) +
           " observables; feasible\n");
  return 0;
}

int cmd_qset_demo(const Options& opt, const std::string& mode) {
  const KSInstance inst = builtin_cabello();
  Json j;
  j["command"] = "qset-demo";
  j["mode"] = mode;
  if (mode == "classical") {
    const ClassicalModeResult res = classical_mode(inst);
    j["verdict"] = res.verdict == Verdict::Feasible ? "feasible" : "infeasible";
    if (res.parity) j["parity_certificate"] = parity_certificate_json(*res.parity);
    emit(opt, j,
         std::string("classical mode: ") +
             (res.verdict == Verdict::Feasible ? "feasible\n"
                                               : "infeasible (KS contradiction)\n"));
    return res.verdict == Verdict::Feasible ? 0 : 1;
  }
  if (mode != "qset") throw FileFormatError("mode must be classical or qset");
  const ContextualValuationFamily fam = qset_mode(inst);
  const bool ok = verify_family(fam);
  j["family"] = family_json(fam);
  j["verified"] = ok;
  emit(opt, j,
       "qset mode: " + std::to_string(fam.entries.size()) + " bearers, " +
           (ok ? "verified\n" : "verification FAILED\n"));
  return ok ? 0 : 1;
}

int cmd_simulate(const Options& opt, const std::string& state_str,
                 std::size_t context_index, std::size_t runs) {
  const KSInstance inst = builtin_cabello();
  std::vector<long long> comps;
  std::string token;
  for (char ch : state_str + ",") {
    if (ch == ',') {
      if (token.empty()) throw FileFormatError("bad state vector");
      comps.push_back(std::stoll(token));
      token.clear();
    } else {
      token += ch;
    }
  }
  const Ray state = canonical_ray(comps);
  if (context_index < 1 || context_index > inst.contexts.size())
    throw FileFormatError("context index out of range");
  std::map<int, std::size_t> counts;
  SplitMix64 seeder(opt.seed);
  for (std::size_t i = 0; i < runs; ++i) {
    const int id = simulate_context_run(state, inst, context_index - 1, seeder.next());
    counts[id]++;
  }
  Json j;
  j["command"] = "simulate";
  j["seed"] = opt.seed;
  j["runs"] = runs;
  j["context"] = context_index;
  Json cj = Json::object();
  std::string text;
  for (const auto& [id, n] : counts) {
    const std::string ray = ray_to_string(inst.rays[static_cast<std::size_t>(id)]);
    cj[ray] = n;
    text += ray + ": " + std::to_string(n) + "\n";
  }
  j["counts"] = std::move(cj);
  emit(opt, j, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact-arithmetic Kochen-Specker / contextuality toolkit"};
  app.require_subcommand(1);

  Options opt;
  if (const char* env = std::getenv("KSLAB_BUDGET")) opt.budget = std::strtoull(env, nullptr, 10);
  app.add_flag("--json", opt.json, "machine-readable JSON report");
  app.add_option("--seed", opt.seed, "PRNG seed");
  app.add_option("--budget", opt.budget, "product-space budget");
  std::size_t limit_value = 0;
  auto* limit_opt = app.add_option("--limit", limit_value, "max valuations to return");

  auto* verify = app.add_subcommand("verify-cabello", "validate the builtin 18-ray instance");

  auto* search = app.add_subcommand("search", "exhaustive noncontextual valuation search");
  std::string search_file, search_builtin;
  search->add_option("file", search_file, "system file with a ks_instance block");
  search->add_option("--builtin", search_builtin, "builtin instance name (cabello)");

  auto* sz = app.add_subcommand("suppes-zanotti", "three-correlation inequality check");
  std::string exy, exz, eyz;
  bool oracle = false;
  sz->add_option("exy", exy)->required();
  sz->add_option("exz", exz)->required();
  sz->add_option("eyz", eyz)->required();
  sz->add_flag("--oracle", oracle, "also run the exact LP and compare");

  auto* feas = app.add_subcommand("feasibility", "joint distribution existence (Def. of contextuality)");
  std::string feas_file;
  feas->add_option("file", feas_file)->required();

  auto* cbd = app.add_subcommand("cbd", "context-splitting transform plus product witness");
  std::string cbd_file;
  cbd->add_option("file", cbd_file)->required();

  auto* demo = app.add_subcommand("qset-demo", "classical vs quasi-set valuation of the builtin instance");
  std::string mode = "qset";
  demo->add_option("--mode", mode, "classical | qset");

  auto* sim = app.add_subcommand("simulate", "seeded Born-rule sampling on a builtin context");
  std::string state = "1,0,0,0";
  std::size_t context_index = 1, runs = 1;
  sim->add_option("--state", state, "integer state vector, comma separated");
  sim->add_option("--context", context_index, "1-based context index");
  sim->add_option("--runs", runs, "number of samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (limit_opt->count()) opt.limit = limit_value;
    if (verify->parsed()) return cmd_verify_cabello(opt);
    if (search->parsed()) {
      if (search_file.empty() && search_builtin.empty())
        throw FileFormatError("search needs a file or --builtin");
      return cmd_search(opt, search_file, search_builtin);
    }
    if (sz->parsed()) return cmd_suppes_zanotti(opt, exy, exz, eyz, oracle);
    if (feas->parsed()) return cmd_feasibility(opt, feas_file);
    if (cbd->parsed()) return cmd_cbd(opt, cbd_file);
    if (demo->parsed()) return cmd_qset_demo(opt, mode);
    if (sim->parsed()) return cmd_simulate(opt, state, context_index, runs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
