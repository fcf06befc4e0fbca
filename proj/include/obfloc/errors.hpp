#pragma once

#include <stdexcept>
#include <string>

namespace obfloc {

// Malformed textual input: bad rational syntax, bad instance JSON.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A structural invariant does not hold (lottery probabilities, mix weights, ...).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A placement violates the minimum separation of the instance it is scored on.
struct FeasibilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A mechanism or probe was invoked outside its domain (e.g. M1 with d > 0).
struct ApplicabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace obfloc
