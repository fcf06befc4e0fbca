#include "obfloc/json_io.hpp"

#include <json.hpp>

#include "obfloc/errors.hpp"

namespace obfloc {

namespace {

using ordered_json = nlohmann::ordered_json;

Rational parse_rational_field(const nlohmann::json& node, const char* what) {
  if (!node.is_string())
    throw ParseError(std::string(what) + " must be a rational string like \"1/3\"");
  try {
    return Rational::parse(node.get<std::string>());
  } catch (const ParseError& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

ordered_json placement_json(const Placement& p) {
  ordered_json out;
  out["y1"] = p.y1.str();
  out["y2"] = p.y2.str();
  return out;
}

ordered_json lottery_json(const Lottery& lottery) {
  ordered_json out = ordered_json::array();
  for (const auto& [placement, prob] : lottery.support()) {
    ordered_json entry = placement_json(placement);
    entry["prob"] = prob.str();
    out.push_back(std::move(entry));
  }
  return out;
}

ordered_json ratio_json(const Ratio& ratio) {
  ordered_json out;
  out["ratio"] = ratio.str();
  out["ratio_dec"] = ratio.decimal();
  return out;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

Instance parse_instance_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid instance JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("d") || !doc.contains("agents") ||
      !doc["agents"].is_array())
    throw ParseError("instance JSON must be {\"d\": ..., \"agents\": [...]}");

  Instance instance;
  instance.d = parse_rational_field(doc["d"], "d");
  for (const auto& node : doc["agents"]) {
    if (!node.is_object() || !node.contains("x") || !node.contains("p"))
      throw ParseError("agent entries must be {\"x\": ..., \"p\": [p1, p2]}");
    Agent agent;
    agent.x = parse_rational_field(node["x"], "agent x");
    const auto& p = node["p"];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer())
      throw ParseError("agent p must be a [0|1, 0|1] pair");
    agent.p.p1 = p[0].get<int>();
    agent.p.p2 = p[1].get<int>();
    if ((agent.p.p1 != 0 && agent.p.p1 != 1) || (agent.p.p2 != 0 && agent.p.p2 != 1))
      throw ParseError("agent p entries must be 0 or 1");
    instance.agents.push_back(std::move(agent));
  }
  return instance;
}

std::string instance_to_json(const Instance& instance) {
  ordered_json out;
  out["d"] = instance.d.str();
  ordered_json agents = ordered_json::array();
  for (const Agent& agent : instance.agents) {
    ordered_json node;
    node["x"] = agent.x.str();
    node["p"] = {agent.p.p1, agent.p.p2};
    agents.push_back(std::move(node));
  }
  out["agents"] = std::move(agents);
  return dump(out);
}

std::string outcome_to_json(const MechanismOutcome& outcome) {
  ordered_json out;
  if (outcome.is_deterministic()) {
    out["type"] = "deterministic";
    out["placement"] = placement_json(outcome.placement());
  } else {
    out["type"] = "randomized";
    out["lottery"] = lottery_json(outcome.lottery());
  }
  return dump(out);
}

std::string opt_result_to_json(const OptResult& result) {
  ordered_json out;
  out["placement"] = placement_json(result.placement);
  out["value"] = result.value.str();
  out["value_dec"] = result.value.decimal();
  out["candidates_evaluated"] = result.candidates_evaluated;
  return dump(out);
}

std::string ratio_report_to_json(const RatioReport& report) {
  ordered_json out;
  out["digest"] = report.digest;
  out["mechanism"] = report.mechanism;
  out["mechanism_value"] = report.mechanism_value.str();
  out["mechanism_value_dec"] = report.mechanism_value.decimal();
  out["opt_value"] = report.opt_value.str();
  out["opt_value_dec"] = report.opt_value.decimal();
  out.update(ratio_json(report.ratio));
  return dump(out);
}

std::string violations_to_json(const std::vector<SpViolation>& violations) {
  ordered_json arr = ordered_json::array();
  for (const SpViolation& v : violations) {
    ordered_json node;
    node["agent"] = v.agent;
    node["true_location"] = v.true_location.str();
    node["misreport"] = v.misreport.str();
    node["truthful_utility"] = v.truthful_utility.str();
    node["misreport_utility"] = v.misreport_utility.str();
    arr.push_back(std::move(node));
  }
  return dump(arr);
}

std::string search_result_to_json(const SearchResult& result) {
  ordered_json out;
  out["best_instance"] = nlohmann::ordered_json::parse(instance_to_json(result.best_instance));
  out["best_ratio"] = result.best_ratio.str();
  out["best_ratio_dec"] = result.best_ratio.decimal();
  out["evaluations"] = result.evaluations;
  ordered_json trace = ordered_json::array();
  for (const auto& [step, ratio] : result.trace) {
    ordered_json node;
    node["evaluation"] = step;
    node["ratio"] = ratio.str();
    trace.push_back(std::move(node));
  }
  out["trace"] = std::move(trace);
  return dump(out);
}

}  // namespace obfloc
