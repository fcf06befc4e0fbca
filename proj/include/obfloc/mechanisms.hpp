#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "obfloc/core.hpp"

namespace obfloc {

// The four built-in mechanisms. M1/M2 are defined only for d = 0; M3/M4 work
// for any d in [0,1]. Randomized mechanisms return their full lottery, never
// a sample, so expected-utility checks stay exact.

// Per facility j: place at 1 when strictly more than |Nj|/2 of the Nj-agents
// sit in the closed interval [0,1/2], else at 0. Requires d = 0.
Placement mechanism1(const Instance& instance);

// The fixed lottery over the four corners of [0,1]^2, 1/4 each. Requires d = 0.
Lottery mechanism2(const Instance& instance);

// Chooses the facility j* with the larger exclusive audience (ties -> 1),
// then branches on whether the shared audience N1∩N2 is at least as large:
//   shared branch:    majority side of N1∩N2 decides (1, 1-d) vs (0, d)
//   exclusive branch: majority side of Nj*\N_{3-j*} decides (1, 0) vs (0, 1)
// Output is reordered into (y1, y2) facility order.
Placement mechanism3(const Instance& instance);

// The fixed lottery {(0,1): 1/2, (1,0): 1/2}; separation 1 is feasible for
// every d.
Lottery mechanism4(const Instance& instance);

enum class Mechanism3Case {
  kShared,     // |N1∩N2| >= |Nj*\N_{3-j*}|
  kExclusive,  // |Nj*\N_{3-j*}| > |N1∩N2|
};
Mechanism3Case mechanism3_case(const Instance& instance);

// A registered mechanism: a pure function from instances to outcomes plus the
// metadata the verification and harness layers dispatch on.
struct Mechanism {
  std::string id;
  bool randomized = false;
  // Mechanisms restricted to d = 0 set this; evaluate throws
  // ApplicabilityError outside the domain.
  bool requires_zero_d = false;
  std::function<MechanismOutcome(const Instance&)> evaluate;

  bool applicable(const Instance& instance) const {
    return !requires_zero_d || instance.d.is_zero();
  }
};

// String-keyed registry used by the CLI and the harness. Built-ins M1..M4 are
// always present, together with NC1, a deliberately non-strategyproof control
// (places both facilities on agent 1's report; d = 0 only) used to prove the
// checker's sensitivity. Additional mechanisms can be registered under new
// ids.
class MechanismRegistry {
 public:
  static MechanismRegistry& global();
  MechanismRegistry();

  void add(Mechanism mechanism);
  const Mechanism* find(const std::string& id) const;
  std::vector<std::string> ids() const;

 private:
  std::map<std::string, Mechanism> by_id_;
};

}  // namespace obfloc
