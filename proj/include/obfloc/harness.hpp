#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "obfloc/core.hpp"
#include "obfloc/mechanisms.hpp"
#include "obfloc/verification.hpp"

namespace obfloc {

enum class LocationLaw {
  kUniformGrid,    // uniform over {k/m : 0 <= k <= m}
  kBreakpointSet,  // uniform over a caller-supplied rational support
};

struct PreferenceMix {
  Rational q10{1, 3};  // P[(1,0)]
  Rational q01{1, 3};  // P[(0,1)]
  Rational q11{1, 3};  // P[(1,1)]
};

struct GeneratorConfig {
  int n = 0;
  Rational d;
  PreferenceMix mix;
  LocationLaw law = LocationLaw::kUniformGrid;
  int grid_m = 32;
  std::vector<Rational> breakpoints;  // support when law == kBreakpointSet
  std::uint64_t seed = 0;
};

// Deterministic function of the config (same seed, same instance). Locations
// are always drawn from a rational support; no floats are involved.
Instance generate_instance(const GeneratorConfig& config);

struct SearchOptions {
  int n = 2;
  Rational d;
  // Fixed preference profile of size n; when absent, local search samples a
  // profile per restart and exhaustive mode enumerates all 3^n profiles.
  std::optional<std::vector<Preference>> profile;
  std::uint64_t budget = 1000;  // number of ratio evaluations
  std::uint64_t seed = 0;
  int grid_m = 32;
  bool exhaustive = false;  // full enumeration; only for n <= 3
};

struct SearchResult {
  Instance best_instance;
  Ratio best_ratio = Ratio::finite(Rational(0));
  std::uint64_t evaluations = 0;
  // (evaluation count, best ratio) appended whenever the best improves;
  // ratios are non-decreasing along the trace.
  std::vector<std::pair<std::uint64_t, Ratio>> trace;
};

// Worst-case-ratio search. Mechanism branches flip only at 1/2 and the
// optimum kinks only at vertex coordinates, so locations are restricted to
// the breakpoint set {0, 1/2, 1, d, 1-d} ∪ {k/m}. Local mode runs seeded
// coordinate ascent (move one agent at a time, accept strict improvements)
// with random restarts until the budget is spent; exhaustive mode enumerates
// the whole lattice. Ties between equal ratios keep the instance with the
// lexicographically smallest canonical key.
SearchResult adversarial_search(const Mechanism& mechanism, const SearchOptions& options);

enum class CellFlag { kYes, kNo, kSkipped, kNa };

struct SweepRecord {
  std::string mechanism;
  Rational d;
  int n = 0;
  PreferenceMix mix;
  std::uint64_t seed = 0;
  bool skipped = false;  // mechanism not applicable at this d
  Ratio max_ratio = Ratio::finite(Rational(0));
  Ratio mean_ratio = Ratio::finite(Rational(0));
  CellFlag sp_ok = CellFlag::kSkipped;
  CellFlag cap_ok = CellFlag::kSkipped;
};

struct SweepOptions {
  std::vector<std::string> mechanisms;
  std::vector<Rational> d_values;
  std::vector<GeneratorConfig> configs;  // each config's d is overridden per cell
  int instances_per_cell = 100;
  bool run_sp_checks = true;
};

// One record per (mechanism, d, config) cell, in axis order. Bitwise
// reproducible for fixed seeds. Cap checks use the per-mechanism caps plus
// the refined per-branch M3 caps; mechanisms without a known cap get kNa.
std::vector<SweepRecord> sweep(const MechanismRegistry& registry, const SweepOptions& options);

// CSV rendering of sweep records. Ratio columns carry the exact rational and
// a 12-digit decimal companion; decimals are presentation only.
std::string sweep_csv(const std::vector<SweepRecord>& records);

// Deterministic per-index child seed used by sweeps; exposed so experiments
// can be reproduced cell by cell.
std::uint64_t child_seed(std::uint64_t base, std::uint64_t index);

}  // namespace obfloc
