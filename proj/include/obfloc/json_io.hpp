#pragma once

#include <string>

#include "obfloc/core.hpp"
#include "obfloc/harness.hpp"
#include "obfloc/opt.hpp"
#include "obfloc/verification.hpp"

namespace obfloc {

// Canonical instance schema:
//   {"d": "<rational>", "agents": [{"x": "<rational>", "p": [0|1, 0|1]}, ...]}
// Rational strings are "a/b" or "a". Serialization is canonical (fixed key
// order, two-space indent, trailing newline), so parse -> serialize is the
// identity on canonical documents.
Instance parse_instance_json(const std::string& text);  // throws ParseError
std::string instance_to_json(const Instance& instance);

// Report serialization. Rationals appear as exact strings with decimal
// companions; the +infinity ratio sentinel renders as "inf".
std::string outcome_to_json(const MechanismOutcome& outcome);
std::string opt_result_to_json(const OptResult& result);
std::string ratio_report_to_json(const RatioReport& report);
std::string violations_to_json(const std::vector<SpViolation>& violations);
std::string search_result_to_json(const SearchResult& result);

}  // namespace obfloc
