#include "obfloc/mechanisms.hpp"

#include "obfloc/errors.hpp"

namespace obfloc {

namespace {

const Rational kHalf(1, 2);

void require_zero_d(const Instance& instance, const char* id) {
  if (!instance.d.is_zero())
    throw ApplicabilityError(std::string(id) + " requires d = 0, got d = " + instance.d.str());
}

// Number of Nj-agents located in [0,1/2] and |Nj|, for facility j in {1,2}.
std::pair<std::size_t, std::size_t> left_count(const Instance& instance, int facility) {
  std::size_t left = 0, total = 0;
  for (const Agent& agent : instance.agents) {
    const bool affected = facility == 1 ? agent.p.p1 == 1 : agent.p.p2 == 1;
    if (!affected) continue;
    ++total;
    if (agent.x <= kHalf) ++left;
  }
  return {left, total};
}

}  // namespace

Placement mechanism1(const Instance& instance) {
  require_zero_d(instance, "M1");
  Placement out{Rational(0), Rational(0)};
  for (int facility : {1, 2}) {
    auto [left, total] = left_count(instance, facility);
    const bool at_one = 2 * left > total;  // "more than |Nj|/2"; false when Nj is empty
    (facility == 1 ? out.y1 : out.y2) = at_one ? Rational(1) : Rational(0);
  }
  return out;
}

Lottery mechanism2(const Instance& instance) {
  require_zero_d(instance, "M2");
  const Rational quarter(1, 4);
  return Lottery::make({{Placement{0, 0}, quarter},
                        {Placement{0, 1}, quarter},
                        {Placement{1, 0}, quarter},
                        {Placement{1, 1}, quarter}});
}

Mechanism3Case mechanism3_case(const Instance& instance) {
  const PartitionCounts c = partition_counts(instance);
  const std::size_t exclusive = std::max(c.only1, c.only2);
  return c.shared >= exclusive ? Mechanism3Case::kShared : Mechanism3Case::kExclusive;
}

Placement mechanism3(const Instance& instance) {
  const PartitionCounts c = partition_counts(instance);
  const int jstar = c.only1 >= c.only2 ? 1 : 2;  // argmax, ties toward 1
  const std::size_t exclusive = jstar == 1 ? c.only1 : c.only2;

  // Majority side of the deciding group, x = 1/2 counting as left.
  std::size_t left = 0, right = 0;
  const bool shared_case = c.shared >= exclusive;
  for (const Agent& agent : instance.agents) {
    bool in_group;
    if (shared_case)
      in_group = agent.p.affects_both();
    else
      in_group = jstar == 1 ? (agent.p.p1 == 1 && agent.p.p2 == 0)
                            : (agent.p.p2 == 1 && agent.p.p1 == 0);
    if (!in_group) continue;
    if (agent.x <= kHalf)
      ++left;
    else
      ++right;
  }

  Rational y_star, y_other;
  if (shared_case) {
    if (left >= right) {
      y_star = 1;
      y_other = Rational(1) - instance.d;
    } else {
      y_star = 0;
      y_other = instance.d;
    }
  } else {
    if (left >= right) {
      y_star = 1;
      y_other = 0;
    } else {
      y_star = 0;
      y_other = 1;
    }
  }
  return jstar == 1 ? Placement{y_star, y_other} : Placement{y_other, y_star};
}

Lottery mechanism4(const Instance&) {
  return Lottery::make({{Placement{0, 1}, kHalf}, {Placement{1, 0}, kHalf}});
}

MechanismRegistry& MechanismRegistry::global() {
  static MechanismRegistry registry;
  return registry;
}

MechanismRegistry::MechanismRegistry() {
  add({.id = "M1",
       .randomized = false,
       .requires_zero_d = true,
       .evaluate = [](const Instance& c) { return MechanismOutcome::deterministic(mechanism1(c)); }});
  add({.id = "M2",
       .randomized = true,
       .requires_zero_d = true,
       .evaluate = [](const Instance& c) { return MechanismOutcome::randomized(mechanism2(c)); }});
  add({.id = "M3",
       .randomized = false,
       .requires_zero_d = false,
       .evaluate = [](const Instance& c) { return MechanismOutcome::deterministic(mechanism3(c)); }});
  add({.id = "M4",
       .randomized = true,
       .requires_zero_d = false,
       .evaluate = [](const Instance& c) { return MechanismOutcome::randomized(mechanism4(c)); }});
  // Negative control: follows agent 1's report, so that agent can push the
  // facilities away by lying. Must fail every strategyproofness check.
  add({.id = "NC1",
       .randomized = false,
       .requires_zero_d = true,
       .evaluate = [](const Instance& c) {
         require_zero_d(c, "NC1");
         const Rational y = c.agents.empty() ? Rational(0) : c.agents.front().x;
         return MechanismOutcome::deterministic(Placement{y, y});
       }});
}

void MechanismRegistry::add(Mechanism mechanism) {
  if (mechanism.id.empty() || !mechanism.evaluate)
    throw ValidationError("mechanism registration needs an id and an evaluate function");
  by_id_[mechanism.id] = std::move(mechanism);
}

const Mechanism* MechanismRegistry::find(const std::string& id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &it->second;
}

std::vector<std::string> MechanismRegistry::ids() const {
  std::vector<std::string> out;
  out.reserve(by_id_.size());
  for (const auto& [id, _] : by_id_) out.push_back(id);
  return out;
}

}  // namespace obfloc
