#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "obfloc/core.hpp"
#include "obfloc/mechanisms.hpp"

namespace obfloc {

// Exact ratio with a +infinity sentinel for the zero-welfare case
// (mechanism value 0 while OPT > 0).
class Ratio {
 public:
  static Ratio finite(Rational value) { return Ratio(false, std::move(value)); }
  static Ratio infinity() { return Ratio(true, Rational(0)); }

  bool is_infinite() const { return infinite_; }
  const Rational& value() const { return value_; }  // meaningful only when finite

  std::string str() const { return infinite_ ? "inf" : value_.str(); }
  std::string decimal(int digits = 12) const { return infinite_ ? "inf" : value_.decimal(digits); }

  friend bool operator==(const Ratio&, const Ratio&) = default;
  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
    if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
    if (a.infinite_) return std::strong_ordering::greater;
    if (b.infinite_) return std::strong_ordering::less;
    return a.value_ <=> b.value_;
  }

 private:
  Ratio(bool infinite, Rational value) : infinite_(infinite), value_(std::move(value)) {}
  bool infinite_;
  Rational value_;
};

struct RatioReport {
  std::string digest;     // instance digest
  std::string mechanism;  // mechanism id
  Rational mechanism_value;
  Rational opt_value;
  Ratio ratio;  // opt/mech; 1 when both zero; inf when mech = 0 < opt
};

// A strict strategyproofness violation: the agent gains by misreporting.
struct SpViolation {
  std::size_t agent = 0;
  Rational true_location;
  Rational misreport;
  Rational truthful_utility;
  Rational misreport_utility;  // strictly greater than truthful_utility
};

// Per-instance term of the worst-case ratio. Throws ApplicabilityError when
// the mechanism does not apply to the instance's d.
RatioReport approximation_ratio(const Mechanism& mechanism, const Instance& instance);

// {k/32 : 0 <= k <= 32} ∪ {0, 1/4, 1/2, 3/4, 1} ∪ {all reported locations},
// deduplicated and sorted. All four built-ins branch on locations only
// through the x <= 1/2 test, so this set is branch-complete for them.
std::vector<Rational> default_misreports(const Instance& instance);

// For every agent and every candidate misreport, compares the agent's
// expected utility (measured at her true location) under the truthful profile
// vs. the misreported one. Returns every strict violation, ordered by
// (agent, misreport). Empty result certifies strategyproofness within the
// candidate set.
std::vector<SpViolation> check_strategyproof(const Mechanism& mechanism,
                                             const Instance& instance,
                                             const std::vector<Rational>& misreports);
std::vector<SpViolation> check_strategyproof(const Mechanism& mechanism,
                                             const Instance& instance);

// True iff the mechanism returns a structurally identical outcome on every
// given instance (needs at least two). Constant mechanisms are trivially
// group strategyproof.
bool check_constant_outcome(const Mechanism& mechanism, const std::vector<Instance>& instances);

// Replays the adversarial two-agent construction for deterministic
// mechanisms: evaluate on agents (1/3, 2/3) affected by facility 1 only at
// d = 0; depending on where y1 lands, also evaluate the instance obtained by
// moving the boundary agent to the nearer endpoint. Returns the largest
// per-instance ratio observed. The result is a witness lower bound for this
// mechanism, 2 for M3.
Rational probe_deterministic_lower_bound(const Mechanism& mechanism);

// Randomized counterpart on agents (1/6, 5/6): picks the facility-1 side
// whose expected distance is at most 1/2, moves the agent on that side to the
// endpoint, and returns OPT/SU on the modified instance; 7/6 for M4.
// Deterministic mechanisms are rejected unless wrap_deterministic is set, in
// which case their output is probed as a one-point lottery.
Rational probe_randomized_lower_bound(const Mechanism& mechanism,
                                      bool wrap_deterministic = false);

// No deterministic (randomized) strategyproof mechanism can beat 2 (14/13);
// a verified-SP mechanism probing below these would indicate a probe bug.
const Rational& deterministic_universal_bound();  // 2
const Rational& randomized_universal_bound();     // 14/13

// Proven worst-case caps for the built-ins: M1 -> 4, M2 -> 2, M3 -> 8,
// M4 -> 2. Empty for unknown ids.
std::optional<Rational> ratio_cap(const std::string& mechanism_id);

// Sharper M3 cap for the instance's branch: shared branch 2(4-d) for
// d <= 1/2 and (4-d)/d for d > 1/2; exclusive branch 8.
Rational mechanism3_refined_cap(const Instance& instance);

}  // namespace obfloc
