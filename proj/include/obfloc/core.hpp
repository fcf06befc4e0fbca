#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "obfloc/rational.hpp"

namespace obfloc {

// Which of the two facilities affect an agent. At least one must.
struct Preference {
  int p1 = 0;
  int p2 = 0;

  bool valid() const {
    return (p1 == 0 || p1 == 1) && (p2 == 0 || p2 == 1) && p1 + p2 >= 1;
  }
  bool affects_both() const { return p1 == 1 && p2 == 1; }

  friend bool operator==(const Preference&, const Preference&) = default;
};

struct Agent {
  Rational x;    // location in [0,1]
  Preference p;  // public preference

  friend bool operator==(const Agent&, const Agent&) = default;
};

// Agent profile plus the minimum separation d required between the
// two facility positions.
struct Instance {
  std::vector<Agent> agents;
  Rational d;

  std::size_t size() const { return agents.size(); }

  friend bool operator==(const Instance&, const Instance&) = default;
};

// A pair of facility positions. Feasible for an instance when the
// separation |y1 - y2| is at least the instance's d.
struct Placement {
  Rational y1;
  Rational y2;

  Rational separation() const { return (y1 - y2).abs(); }
  bool feasible_for(const Rational& d) const { return separation() >= d; }

  friend bool operator==(const Placement&, const Placement&) = default;
  friend std::strong_ordering operator<=>(const Placement& a, const Placement& b) {
    if (auto c = a.y1 <=> b.y1; c != 0) return c;
    return a.y2 <=> b.y2;
  }
};

// Finite-support distribution over placements. The support is kept canonical:
// sorted lexicographically by (y1, y2), duplicates merged, zero-probability
// entries dropped, probabilities summing exactly to 1. Lottery equality is
// therefore structural.
class Lottery {
 public:
  using Entry = std::pair<Placement, Rational>;

  static Lottery make(std::vector<Entry> support);

  const std::vector<Entry>& support() const { return support_; }

  friend bool operator==(const Lottery&, const Lottery&) = default;

 private:
  Lottery() = default;
  std::vector<Entry> support_;
};

// Outcome of a mechanism: a single placement or a lottery over placements.
// A deterministic outcome compares equal to the one-point lottery on the
// same placement.
class MechanismOutcome {
 public:
  static MechanismOutcome deterministic(Placement p) { return MechanismOutcome(std::move(p)); }
  static MechanismOutcome randomized(Lottery l) { return MechanismOutcome(std::move(l)); }

  bool is_deterministic() const { return std::holds_alternative<Placement>(v_); }
  const Placement& placement() const { return std::get<Placement>(v_); }
  const Lottery& lottery() const { return std::get<Lottery>(v_); }

  // One-point lottery view of a deterministic outcome; identity otherwise.
  Lottery as_lottery() const;

  friend bool operator==(const MechanismOutcome& a, const MechanismOutcome& b) {
    return a.as_lottery() == b.as_lottery();
  }

 private:
  explicit MechanismOutcome(Placement p) : v_(std::move(p)) {}
  explicit MechanismOutcome(Lottery l) : v_(std::move(l)) {}
  std::variant<Placement, Lottery> v_;
};

struct PartitionCounts {
  std::size_t n1 = 0;      // |N1|
  std::size_t n2 = 0;      // |N2|
  std::size_t shared = 0;  // |N1 ∩ N2|
  std::size_t only1 = 0;   // |N1 \ N2|
  std::size_t only2 = 0;   // |N2 \ N1|

  friend bool operator==(const PartitionCounts&, const PartitionCounts&) = default;
};

// Sum of the agent's distances to the facilities that affect her.
Rational agent_utility(const Agent& agent, const Placement& placement);

// Probability-weighted agent utility; equals agent_utility on deterministic
// outcomes.
Rational expected_agent_utility(const Agent& agent, const MechanismOutcome& outcome);

// Total (expected) utility over all agents. Throws FeasibilityError if any
// placement in the outcome violates the instance's minimum separation.
Rational social_utility(const Instance& instance, const MechanismOutcome& outcome);
Rational social_utility(const Instance& instance, const Placement& placement);

PartitionCounts partition_counts(const Instance& instance);

// Collects every violated instance invariant (empty result means valid):
// locations in [0,1], d in [0,1], preferences in {0,1}^2 with p1+p2 >= 1.
std::vector<std::string> validate_instance(const Instance& instance);

// Reflection x -> 1-x of every location / coordinate. Social utility is
// invariant under reflecting instance and placement together.
Instance reflect(const Instance& instance);
Placement reflect(const Placement& placement);

// Canonical flat encoding of an instance (collision-free, deterministic) and
// its 64-bit FNV-1a digest in hex. The digest is what reports carry; the key
// is what deterministic tie-breaks compare.
std::string instance_key(const Instance& instance);
std::string instance_digest(const Instance& instance);

}  // namespace obfloc
