#include "obfloc/core.hpp"

#include <algorithm>
#include <cstdint>

#include "obfloc/errors.hpp"

namespace obfloc {

Lottery Lottery::make(std::vector<Entry> support) {
  std::stable_sort(support.begin(), support.end(),
                   [](const Entry& a, const Entry& b) { return a.first < b.first; });
  Lottery out;
  Rational total = 0;
  for (auto& [placement, prob] : support) {
    if (prob.sign() < 0) throw ValidationError("lottery probability is negative");
    if (prob.is_zero()) continue;
    total += prob;
    if (!out.support_.empty() && out.support_.back().first == placement)
      out.support_.back().second += prob;
    else
      out.support_.emplace_back(placement, prob);
  }
  if (out.support_.empty()) throw ValidationError("lottery support is empty");
  if (total != Rational(1))
    throw ValidationError("lottery probabilities sum to " + total.str() + ", expected 1");
  return out;
}

Lottery MechanismOutcome::as_lottery() const {
  if (is_deterministic()) return Lottery::make({{placement(), Rational(1)}});
  return lottery();
}

Rational agent_utility(const Agent& agent, const Placement& placement) {
  Rational u = 0;
  if (agent.p.p1 == 1) u += (agent.x - placement.y1).abs();
  if (agent.p.p2 == 1) u += (agent.x - placement.y2).abs();
  return u;
}

Rational expected_agent_utility(const Agent& agent, const MechanismOutcome& outcome) {
  if (outcome.is_deterministic()) return agent_utility(agent, outcome.placement());
  Rational u = 0;
  for (const auto& [placement, prob] : outcome.lottery().support())
    u += prob * agent_utility(agent, placement);
  return u;
}

Rational social_utility(const Instance& instance, const MechanismOutcome& outcome) {
  const Lottery lottery = outcome.as_lottery();
  for (const auto& [placement, prob] : lottery.support()) {
    if (!placement.feasible_for(instance.d))
      throw FeasibilityError("placement (" + placement.y1.str() + ", " + placement.y2.str() +
                             ") violates minimum separation " + instance.d.str());
  }
  Rational total = 0;
  for (const Agent& agent : instance.agents) total += expected_agent_utility(agent, outcome);
  return total;
}

Rational social_utility(const Instance& instance, const Placement& placement) {
  return social_utility(instance, MechanismOutcome::deterministic(placement));
}

PartitionCounts partition_counts(const Instance& instance) {
  PartitionCounts c;
  for (const Agent& agent : instance.agents) {
    if (agent.p.p1 == 1) ++c.n1;
    if (agent.p.p2 == 1) ++c.n2;
    if (agent.p.p1 == 1 && agent.p.p2 == 1)
      ++c.shared;
    else if (agent.p.p1 == 1)
      ++c.only1;
    else
      ++c.only2;
  }
  return c;
}

std::vector<std::string> validate_instance(const Instance& instance) {
  std::vector<std::string> violations;
  if (instance.d < Rational(0) || instance.d > Rational(1))
    violations.push_back("minimum distance d=" + instance.d.str() + " out of [0,1]");
  for (std::size_t i = 0; i < instance.agents.size(); ++i) {
    const Agent& agent = instance.agents[i];
    if (agent.x < Rational(0) || agent.x > Rational(1))
      violations.push_back("location out of [0,1] at index " + std::to_string(i));
    if (!agent.p.valid())
      violations.push_back("preference (" + std::to_string(agent.p.p1) + "," +
                           std::to_string(agent.p.p2) + ") forbidden at index " +
                           std::to_string(i));
  }
  return violations;
}

Instance reflect(const Instance& instance) {
  Instance out = instance;
  for (Agent& agent : out.agents) agent.x = Rational(1) - agent.x;
  return out;
}

Placement reflect(const Placement& placement) {
  return Placement{Rational(1) - placement.y1, Rational(1) - placement.y2};
}

std::string instance_key(const Instance& instance) {
  std::string key = "d=" + instance.d.str();
  for (const Agent& agent : instance.agents) {
    key += ";x=" + agent.x.str();
    key += ",p=" + std::to_string(agent.p.p1) + std::to_string(agent.p.p2);
  }
  return key;
}

std::string instance_digest(const Instance& instance) {
  const std::string key = instance_key(instance);
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
  for (unsigned char c : key) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace obfloc
