#include "obfloc/verification.hpp"

#include <algorithm>

#include "obfloc/errors.hpp"
#include "obfloc/opt.hpp"

namespace obfloc {

namespace {

MechanismOutcome evaluate_checked(const Mechanism& mechanism, const Instance& instance) {
  if (!mechanism.applicable(instance))
    throw ApplicabilityError(mechanism.id + " is not applicable at d = " + instance.d.str());
  return mechanism.evaluate(instance);
}

Ratio make_ratio(const Rational& opt_value, const Rational& mechanism_value) {
  if (!mechanism_value.is_zero()) return Ratio::finite(opt_value / mechanism_value);
  if (opt_value.is_zero()) return Ratio::finite(Rational(1));
  return Ratio::infinity();
}

// Ratio on one instance, with the mechanism evaluated directly.
Rational finite_ratio_on(const Mechanism& mechanism, const Instance& instance) {
  const RatioReport report = approximation_ratio(mechanism, instance);
  if (report.ratio.is_infinite())
    throw ValidationError("probe hit a zero-welfare outcome on " + instance_key(instance));
  return report.ratio.value();
}

// Expected |Y1 - point| under the outcome's marginal of the first coordinate.
Rational expected_distance_y1(const MechanismOutcome& outcome, const Rational& point) {
  Rational total = 0;
  const Lottery lottery = outcome.as_lottery();
  for (const auto& [placement, prob] : lottery.support())
    total += prob * (placement.y1 - point).abs();
  return total;
}

}  // namespace

RatioReport approximation_ratio(const Mechanism& mechanism, const Instance& instance) {
  const MechanismOutcome outcome = evaluate_checked(mechanism, instance);
  const Rational mechanism_value = social_utility(instance, outcome);
  const Rational opt_value = optimal_placement(instance).value;
  return {instance_digest(instance), mechanism.id, mechanism_value, opt_value,
          make_ratio(opt_value, mechanism_value)};
}

std::vector<Rational> default_misreports(const Instance& instance) {
  std::vector<Rational> candidates;
  for (int k = 0; k <= 32; ++k) candidates.emplace_back(k, 32);
  for (int q : {0, 1, 2, 3, 4}) candidates.emplace_back(q, 4);
  for (const Agent& agent : instance.agents) candidates.push_back(agent.x);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  return candidates;
}

std::vector<SpViolation> check_strategyproof(const Mechanism& mechanism,
                                             const Instance& instance,
                                             const std::vector<Rational>& misreports) {
  for (const Rational& r : misreports)
    if (r < Rational(0) || r > Rational(1))
      throw ValidationError("misreport " + r.str() + " out of [0,1]");

  std::vector<SpViolation> violations;
  const MechanismOutcome truthful = evaluate_checked(mechanism, instance);
  Instance reported = instance;
  for (std::size_t i = 0; i < instance.agents.size(); ++i) {
    const Agent& agent = instance.agents[i];
    const Rational truthful_utility = expected_agent_utility(agent, truthful);
    for (const Rational& misreport : misreports) {
      if (misreport == agent.x) continue;
      reported.agents[i].x = misreport;
      const MechanismOutcome lied = mechanism.evaluate(reported);
      // Utility is always measured at the true location.
      const Rational misreport_utility = expected_agent_utility(agent, lied);
      if (misreport_utility > truthful_utility)
        violations.push_back({i, agent.x, misreport, truthful_utility, misreport_utility});
    }
    reported.agents[i].x = agent.x;
  }
  return violations;
}

std::vector<SpViolation> check_strategyproof(const Mechanism& mechanism,
                                             const Instance& instance) {
  return check_strategyproof(mechanism, instance, default_misreports(instance));
}

bool check_constant_outcome(const Mechanism& mechanism, const std::vector<Instance>& instances) {
  if (instances.size() < 2)
    throw ValidationError("constant-outcome check needs at least two instances");
  const MechanismOutcome first = evaluate_checked(mechanism, instances.front());
  for (std::size_t i = 1; i < instances.size(); ++i)
    if (!(evaluate_checked(mechanism, instances[i]) == first)) return false;
  return true;
}

Rational probe_deterministic_lower_bound(const Mechanism& mechanism) {
  if (mechanism.randomized)
    throw ApplicabilityError(mechanism.id + " is randomized; use the randomized probe");

  const Preference f1_only{1, 0};
  const Rational third(1, 3), two_thirds(2, 3);
  Instance probe{{{third, f1_only}, {two_thirds, f1_only}}, Rational(0)};

  const Lottery outcome = evaluate_checked(mechanism, probe).as_lottery();
  if (outcome.support().size() != 1)
    throw ApplicabilityError(mechanism.id + " returned a non-degenerate lottery");
  const Rational y1 = outcome.support().front().first.y1;
  Rational best = finite_ratio_on(mechanism, probe);

  if (y1 < third) {
    // The agent at 1/3 moves to 0; an SP mechanism cannot chase her.
    Instance shifted = probe;
    shifted.agents[0].x = 0;
    best = std::max(best, finite_ratio_on(mechanism, shifted));
  } else if (y1 > two_thirds) {
    // Mirror image: the agent at 2/3 moves to 1.
    Instance shifted = probe;
    shifted.agents[1].x = 1;
    best = std::max(best, finite_ratio_on(mechanism, shifted));
  }
  return best;
}

Rational probe_randomized_lower_bound(const Mechanism& mechanism, bool wrap_deterministic) {
  if (!mechanism.randomized && !wrap_deterministic)
    throw ApplicabilityError(mechanism.id + " is deterministic; use the deterministic probe");

  const Preference f1_only{1, 0};
  const Rational sixth(1, 6), five_sixths(5, 6), half(1, 2);
  Instance probe{{{sixth, f1_only}, {five_sixths, f1_only}}, Rational(0)};

  const MechanismOutcome outcome = evaluate_checked(mechanism, probe);
  // SU on this instance is at most 1, so at least one side passes the test.
  Instance shifted = probe;
  if (expected_distance_y1(outcome, five_sixths) <= half)
    shifted.agents[1].x = 1;
  else
    shifted.agents[0].x = 0;
  return finite_ratio_on(mechanism, shifted);
}

const Rational& deterministic_universal_bound() {
  static const Rational bound(2);
  return bound;
}

const Rational& randomized_universal_bound() {
  static const Rational bound(14, 13);
  return bound;
}

std::optional<Rational> ratio_cap(const std::string& mechanism_id) {
  if (mechanism_id == "M1") return Rational(4);
  if (mechanism_id == "M2") return Rational(2);
  if (mechanism_id == "M3") return Rational(8);
  if (mechanism_id == "M4") return Rational(2);
  return std::nullopt;
}

Rational mechanism3_refined_cap(const Instance& instance) {
  if (mechanism3_case(instance) == Mechanism3Case::kExclusive) return Rational(8);
  const Rational four(4);
  if (instance.d <= Rational(1, 2)) return Rational(2) * (four - instance.d);
  return (four - instance.d) / instance.d;
}

}  // namespace obfloc
