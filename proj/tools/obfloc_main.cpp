// obfloc: exact mechanisms, optimal welfare, strategyproofness checks and
// worst-case search for two-obnoxious-facility location on [0,1].
//
// Exit codes: 0 ok, 1 property violation, 2 usage/parse error,
//             3 mechanism not applicable, 4 I/O error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "obfloc/errors.hpp"
#include "obfloc/harness.hpp"
#include "obfloc/json_io.hpp"
#include "obfloc/opt.hpp"
#include "obfloc/verification.hpp"

using namespace obfloc;

namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;
constexpr int kApplicability = 3;
constexpr int kIo = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) throw IoError("cannot read '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_output(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out.good()) throw IoError("cannot write '" + out_path + "'");
  out << content;
  if (!out.good()) throw IoError("write to '" + out_path + "' failed");
}

Instance load_instance(const std::string& path) {
  const Instance instance = parse_instance_json(read_file(path));
  const auto violations = validate_instance(instance);
  if (!violations.empty()) {
    std::string message = "invalid instance '" + path + "':";
    for (const std::string& v : violations) message += "\n  " + v;
    throw ValidationError(message);
  }
  return instance;
}

const Mechanism& mechanism_or_fail(const std::string& id) {
  const Mechanism* mechanism = MechanismRegistry::global().find(id);
  if (!mechanism) throw ValidationError("unknown mechanism id '" + id + "'");
  return *mechanism;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) out.push_back(token);
  return out;
}

std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  for (const std::string& token : split_list(text)) out.push_back(Rational::parse(token));
  return out;
}

PreferenceMix parse_mix(const std::string& text) {
  const auto parts = parse_rational_list(text);
  if (parts.size() != 3) throw ValidationError("--mix expects three weights q10,q01,q11");
  return {parts[0], parts[1], parts[2]};
}

std::vector<Preference> parse_profile(const std::string& text) {
  std::vector<Preference> out;
  for (const std::string& token : split_list(text)) {
    if (token == "10")
      out.push_back({1, 0});
    else if (token == "01")
      out.push_back({0, 1});
    else if (token == "11")
      out.push_back({1, 1});
    else
      throw ValidationError("--profile tokens must be 10, 01 or 11");
  }
  return out;
}

std::string placement_str(const Placement& p) {
  return "(" + p.y1.str() + ", " + p.y2.str() + ")";
}

std::string outcome_text(const MechanismOutcome& outcome) {
  if (outcome.is_deterministic()) return "outcome: " + placement_str(outcome.placement()) + "\n";
  std::string out = "outcome: lottery\n";
  for (const auto& [placement, prob] : outcome.lottery().support())
    out += "  " + placement_str(placement) + " with probability " + prob.str() + "\n";
  return out;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string instance_path, mechanism, format = "text", out_path;
};

int cmd_eval(const EvalArgs& args) {
  const Instance instance = load_instance(args.instance_path);
  const Mechanism& mechanism = mechanism_or_fail(args.mechanism);
  if (!mechanism.applicable(instance))
    throw ApplicabilityError(mechanism.id + " is not applicable at d = " + instance.d.str());
  const MechanismOutcome outcome = mechanism.evaluate(instance);
  const Rational su = social_utility(instance, outcome);

  if (args.format == "json") {
    nlohmann::ordered_json doc;
    doc["mechanism"] = mechanism.id;
    doc["outcome"] = nlohmann::ordered_json::parse(outcome_to_json(outcome));
    doc["social_utility"] = su.str();
    doc["social_utility_dec"] = su.decimal();
    write_output(doc.dump(2) + "\n", args.out_path);
  } else {
    std::string text = "mechanism: " + mechanism.id + "\n";
    text += outcome_text(outcome);
    text += "social_utility: " + su.str() + "\n";
    text += "social_utility_dec: " + su.decimal() + "\n";
    write_output(text, args.out_path);
  }
  return kOk;
}

struct OptArgs {
  std::string instance_path, format = "text", out_path;
  int resolution = 0;  // 0: exact vertex solver; > 0: grid oracle
  bool pure_grid = false;
};

int cmd_opt(const OptArgs& args) {
  const Instance instance = load_instance(args.instance_path);
  if (args.pure_grid && args.resolution <= 0)
    throw ValidationError("--pure-grid requires --resolution");
  const OptResult result = args.resolution > 0
                               ? brute_force_opt(instance, args.resolution, !args.pure_grid)
                               : optimal_placement(instance);
  if (args.format == "json") {
    write_output(opt_result_to_json(result), args.out_path);
  } else {
    std::string text = "placement: " + placement_str(result.placement) + "\n";
    text += "value: " + result.value.str() + "\n";
    text += "value_dec: " + result.value.decimal() + "\n";
    text += "candidates_evaluated: " + std::to_string(result.candidates_evaluated) + "\n";
    write_output(text, args.out_path);
  }
  return kOk;
}

struct VerifyArgs {
  std::vector<std::string> instance_paths;
  std::string mechanisms;  // empty: every applicable built-in
  int count = 0, n = 8, grid = 32;
  std::string d = "0", mix = "1/3,1/3,1/3";
  std::uint64_t seed = 0;
  std::string out_path;
};

int cmd_verify(const VerifyArgs& args) {
  std::vector<Instance> instances;
  for (const std::string& path : args.instance_paths) instances.push_back(load_instance(path));
  if (args.count > 0) {
    GeneratorConfig config;
    config.n = args.n;
    config.d = Rational::parse(args.d);
    config.mix = parse_mix(args.mix);
    config.grid_m = args.grid;
    for (int i = 0; i < args.count; ++i) {
      config.seed = child_seed(args.seed, i);
      instances.push_back(generate_instance(config));
    }
  }
  if (instances.empty())
    throw ValidationError("verify needs instance files or --count for generated ones");

  const bool explicit_mechs = !args.mechanisms.empty();
  const std::vector<std::string> requested =
      explicit_mechs ? split_list(args.mechanisms)
                     : std::vector<std::string>{"M1", "M2", "M3", "M4"};

  nlohmann::ordered_json findings = nlohmann::ordered_json::array();
  std::size_t checks = 0;
  for (std::size_t index = 0; index < instances.size(); ++index) {
    const Instance& instance = instances[index];
    const std::string digest = instance_digest(instance);
    if (optimal_placement(instance).value > welfare_upper_bound(instance)) {
      findings.push_back({{"instance", digest}, {"kind", "welfare_bound_breach"}});
    }
    for (const std::string& id : requested) {
      const Mechanism& mechanism = mechanism_or_fail(id);
      if (!mechanism.applicable(instance)) {
        if (explicit_mechs)
          throw ApplicabilityError(id + " is not applicable at d = " + instance.d.str());
        continue;
      }
      ++checks;
      const auto violations = check_strategyproof(mechanism, instance);
      for (const SpViolation& v : violations) {
        nlohmann::ordered_json node;
        node["instance"] = digest;
        node["kind"] = "strategyproofness";
        node["mechanism"] = id;
        node["agent"] = v.agent;
        node["true_location"] = v.true_location.str();
        node["misreport"] = v.misreport.str();
        node["truthful_utility"] = v.truthful_utility.str();
        node["misreport_utility"] = v.misreport_utility.str();
        findings.push_back(std::move(node));
      }
      const auto cap = ratio_cap(id);
      if (cap) {
        const RatioReport report = approximation_ratio(mechanism, instance);
        Rational limit = *cap;
        if (id == "M3") limit = std::min(limit, mechanism3_refined_cap(instance));
        if (report.ratio.is_infinite() || report.ratio.value() > limit) {
          findings.push_back({{"instance", digest},
                              {"kind", "ratio_cap_breach"},
                              {"mechanism", id},
                              {"ratio", report.ratio.str()},
                              {"cap", limit.str()}});
        }
      }
    }
  }

  nlohmann::ordered_json doc;
  doc["instances"] = instances.size();
  doc["mechanism_checks"] = checks;
  doc["violations"] = std::move(findings);
  write_output(doc.dump(2) + "\n", args.out_path);
  return doc["violations"].empty() ? kOk : kViolation;
}

struct ProbeArgs {
  std::string mechanism, kind, format = "text", out_path;
  bool wrap_deterministic = false;
};

int cmd_probe(const ProbeArgs& args) {
  const Mechanism& mechanism = mechanism_or_fail(args.mechanism);
  Rational ratio(0), bound(0);
  if (args.kind == "det") {
    ratio = probe_deterministic_lower_bound(mechanism);
    bound = deterministic_universal_bound();
  } else if (args.kind == "rand") {
    ratio = probe_randomized_lower_bound(mechanism, args.wrap_deterministic);
    bound = randomized_universal_bound();
  } else {
    throw ValidationError("--kind must be det or rand");
  }
  const bool meets = ratio >= bound;

  if (args.format == "json") {
    nlohmann::ordered_json doc;
    doc["mechanism"] = mechanism.id;
    doc["kind"] = args.kind == "det" ? "deterministic" : "randomized";
    doc["ratio"] = ratio.str();
    doc["ratio_dec"] = ratio.decimal();
    doc["universal_bound"] = bound.str();
    doc["meets_bound"] = meets;
    write_output(doc.dump(2) + "\n", args.out_path);
  } else {
    std::string text = "mechanism: " + mechanism.id + "\n";
    text += std::string("kind: ") + (args.kind == "det" ? "deterministic" : "randomized") + "\n";
    text += "ratio: " + ratio.str() + "\n";
    text += "ratio_dec: " + ratio.decimal() + "\n";
    text += "universal_bound: " + bound.str() + "\n";
    text += std::string("meets_bound: ") + (meets ? "yes" : "no") + "\n";
    write_output(text, args.out_path);
  }
  return kOk;
}

struct SearchArgs {
  std::string mechanism;
  int n = 2, grid = 32;
  std::string d = "0", profile;
  std::uint64_t budget = 10000, seed = 0;
  bool exhaustive = false;
  std::string out_path;
};

int cmd_search(const SearchArgs& args) {
  const Mechanism& mechanism = mechanism_or_fail(args.mechanism);
  SearchOptions options;
  options.n = args.n;
  options.d = Rational::parse(args.d);
  options.budget = args.budget;
  options.seed = args.seed;
  options.grid_m = args.grid;
  options.exhaustive = args.exhaustive;
  if (!args.profile.empty()) options.profile = parse_profile(args.profile);

  Instance probe_d;
  probe_d.d = options.d;
  if (!mechanism.applicable(probe_d))
    throw ApplicabilityError(mechanism.id + " is not applicable at d = " + args.d);

  const SearchResult result = adversarial_search(mechanism, options);
  write_output(search_result_to_json(result), args.out_path);
  return kOk;
}

struct SweepArgs {
  std::string mechanisms, d_values = "0";
  std::string n_values = "8";
  int count = 100, grid = 32;
  std::string mix = "1/3,1/3,1/3";
  std::uint64_t seed = 0;
  bool skip_sp = false;
  std::string format = "csv", out_path;
};

int cmd_sweep(const SweepArgs& args) {
  SweepOptions options;
  options.mechanisms = split_list(args.mechanisms);
  options.d_values = parse_rational_list(args.d_values);
  options.instances_per_cell = args.count;
  options.run_sp_checks = !args.skip_sp;

  const auto n_list = split_list(args.n_values);
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    GeneratorConfig config;
    config.n = std::stoi(n_list[i]);
    config.mix = parse_mix(args.mix);
    config.grid_m = args.grid;
    config.seed = child_seed(args.seed, i);
    options.configs.push_back(std::move(config));
  }

  const auto records = sweep(MechanismRegistry::global(), options);
  if (args.format == "json") {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    const auto flag = [](CellFlag f) {
      switch (f) {
        case CellFlag::kYes: return "yes";
        case CellFlag::kNo: return "no";
        case CellFlag::kSkipped: return "skipped";
        default: return "na";
      }
    };
    for (const SweepRecord& r : records) {
      nlohmann::ordered_json node;
      node["mechanism"] = r.mechanism;
      node["d"] = r.d.str();
      node["n"] = r.n;
      node["q10"] = r.mix.q10.str();
      node["q01"] = r.mix.q01.str();
      node["q11"] = r.mix.q11.str();
      node["seed"] = r.seed;
      node["skipped"] = r.skipped;
      if (!r.skipped) {
        node["max_ratio"] = r.max_ratio.str();
        node["max_ratio_dec"] = r.max_ratio.decimal();
        node["mean_ratio"] = r.mean_ratio.str();
        node["mean_ratio_dec"] = r.mean_ratio.decimal();
        node["sp_ok"] = flag(r.sp_ok);
        node["cap_ok"] = flag(r.cap_ok);
      }
      arr.push_back(std::move(node));
    }
    write_output(arr.dump(2) + "\n", args.out_path);
  } else {
    write_output(sweep_csv(records), args.out_path);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact mechanisms for two-obnoxious-facility location on [0,1]"};
  app.require_subcommand(1);

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "evaluate a mechanism on an instance file");
  eval->add_option("instance", eval_args.instance_path, "instance JSON file")->required();
  eval->add_option("--mech", eval_args.mechanism, "mechanism id")->required();
  eval->add_option("--format", eval_args.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  eval->add_option("--out", eval_args.out_path, "output file (default stdout)");

  OptArgs opt_args;
  CLI::App* opt = app.add_subcommand("opt", "compute the optimal social utility");
  opt->add_option("instance", opt_args.instance_path, "instance JSON file")->required();
  opt->add_option("--resolution", opt_args.resolution,
                  "use the grid oracle at resolution m instead of the vertex solver");
  opt->add_flag("--pure-grid", opt_args.pure_grid,
                "with --resolution: skip the vertex candidates");
  opt->add_option("--format", opt_args.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  opt->add_option("--out", opt_args.out_path, "output file (default stdout)");

  VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand(
      "verify", "strategyproofness, ratio caps and welfare bounds over an instance set");
  verify->add_option("instances", verify_args.instance_paths, "instance JSON files");
  verify->add_option("--mech", verify_args.mechanisms,
                     "comma-separated mechanism ids (default: applicable built-ins)");
  verify->add_option("--count", verify_args.count, "number of generated instances");
  verify->add_option("--n", verify_args.n, "agents per generated instance");
  verify->add_option("--d", verify_args.d, "minimum distance for generated instances");
  verify->add_option("--mix", verify_args.mix, "preference mix q10,q01,q11");
  verify->add_option("--grid", verify_args.grid, "location grid resolution");
  verify->add_option("--seed", verify_args.seed, "generator seed");
  verify->add_option("--out", verify_args.out_path, "output file (default stdout)");

  ProbeArgs probe_args;
  CLI::App* probe = app.add_subcommand("probe", "replay the adversarial lower-bound probes");
  probe->add_option("--mech", probe_args.mechanism, "mechanism id")->required();
  probe->add_option("--kind", probe_args.kind, "det or rand")->required();
  probe->add_flag("--wrap-deterministic", probe_args.wrap_deterministic,
                  "probe a deterministic mechanism as a one-point lottery");
  probe->add_option("--format", probe_args.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  probe->add_option("--out", probe_args.out_path, "output file (default stdout)");

  SearchArgs search_args;
  CLI::App* search = app.add_subcommand("search", "adversarial worst-case-ratio search");
  search->add_option("--mech", search_args.mechanism, "mechanism id")->required();
  search->add_option("--n", search_args.n, "number of agents");
  search->add_option("--d", search_args.d, "minimum distance");
  search->add_option("--budget", search_args.budget, "ratio evaluations");
  search->add_option("--seed", search_args.seed, "search seed");
  search->add_option("--grid", search_args.grid, "breakpoint grid resolution");
  search->add_flag("--exhaustive", search_args.exhaustive,
                   "enumerate the full lattice (n <= 3)");
  search->add_option("--profile", search_args.profile,
                     "fixed preference profile, e.g. 10,11,01");
  search->add_option("--out", search_args.out_path, "output file (default stdout)");

  SweepArgs sweep_args;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "batch experiments over mechanisms and d");
  sweep_cmd->add_option("--mech", sweep_args.mechanisms, "comma-separated mechanism ids")
      ->required();
  sweep_cmd->add_option("--d", sweep_args.d_values, "comma-separated d values");
  sweep_cmd->add_option("--n", sweep_args.n_values, "comma-separated agent counts");
  sweep_cmd->add_option("--count", sweep_args.count, "instances per cell");
  sweep_cmd->add_option("--mix", sweep_args.mix, "preference mix q10,q01,q11");
  sweep_cmd->add_option("--grid", sweep_args.grid, "location grid resolution");
  sweep_cmd->add_option("--seed", sweep_args.seed, "base seed");
  sweep_cmd->add_flag("--no-sp", sweep_args.skip_sp, "skip per-instance SP checks");
  sweep_cmd->add_option("--format", sweep_args.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep_cmd->add_option("--out", sweep_args.out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (eval->parsed()) return cmd_eval(eval_args);
    if (opt->parsed()) return cmd_opt(opt_args);
    if (verify->parsed()) return cmd_verify(verify_args);
    if (probe->parsed()) return cmd_probe(probe_args);
    if (search->parsed()) return cmd_search(search_args);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_args);
    std::cerr << "error: no subcommand\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ApplicabilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kApplicability;
  } catch (const FeasibilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kViolation;
  }
}
