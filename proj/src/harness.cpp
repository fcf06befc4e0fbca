#include "obfloc/harness.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <random>

#include "obfloc/errors.hpp"

namespace obfloc {

namespace {

// Integer weights of the preference mix over a common denominator, so that
// category draws are exact.
struct MixWeights {
  std::uint64_t w10, w01, total;
};

MixWeights mix_weights(const PreferenceMix& mix) {
  for (const Rational* q : {&mix.q10, &mix.q01, &mix.q11})
    if (q->sign() < 0) throw ValidationError("preference mix weight is negative");
  if (mix.q10 + mix.q01 + mix.q11 != Rational(1))
    throw ValidationError("preference mix must sum to 1");
  Rational::Int den = boost::multiprecision::lcm(
      boost::multiprecision::lcm(mix.q10.denominator(), mix.q01.denominator()),
      mix.q11.denominator());
  if (den > Rational::Int(std::numeric_limits<std::int64_t>::max()))
    throw ValidationError("preference mix denominators too large");
  auto weight = [&](const Rational& q) {
    return static_cast<std::uint64_t>(Rational::Int(q.numerator() * (den / q.denominator())));
  };
  return {weight(mix.q10), weight(mix.q01), static_cast<std::uint64_t>(den)};
}

Preference draw_preference(std::mt19937_64& engine, const MixWeights& w) {
  const std::uint64_t r = engine() % w.total;
  if (r < w.w10) return {1, 0};
  if (r < w.w10 + w.w01) return {0, 1};
  return {1, 1};
}

std::vector<Rational> location_support(const GeneratorConfig& config) {
  if (config.law == LocationLaw::kUniformGrid) {
    if (config.grid_m < 1) throw ValidationError("grid resolution must be >= 1");
    std::vector<Rational> support;
    support.reserve(config.grid_m + 1);
    for (int k = 0; k <= config.grid_m; ++k) support.emplace_back(k, config.grid_m);
    return support;
  }
  if (config.breakpoints.empty()) throw ValidationError("breakpoint support is empty");
  for (const Rational& b : config.breakpoints)
    if (b < Rational(0) || b > Rational(1))
      throw ValidationError("breakpoint " + b.str() + " out of [0,1]");
  return config.breakpoints;
}

// Search lattice: every point where a mechanism branch or an optimum kink
// can move, plus the grid.
std::vector<Rational> search_breakpoints(const Rational& d, int grid_m) {
  std::vector<Rational> points = {Rational(0), Rational(1, 2), Rational(1), d, Rational(1) - d};
  for (int k = 0; k <= grid_m; ++k) points.emplace_back(k, grid_m);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

const std::array<Preference, 3> kPreferenceChoices = {Preference{1, 0}, Preference{0, 1},
                                                      Preference{1, 1}};

// Shared bookkeeping for both search modes: counts evaluations, tracks the
// best (ratio, instance) with the lexicographic key tie-break, and records
// the improvement trace.
struct SearchState {
  const Mechanism& mechanism;
  std::uint64_t budget;
  SearchResult result;
  std::string best_key;

  bool exhausted() const { return result.evaluations >= budget; }

  Ratio evaluate(const Instance& instance) {
    ++result.evaluations;
    const Ratio ratio = approximation_ratio(mechanism, instance).ratio;
    const bool first = result.trace.empty();
    if (first || ratio > result.best_ratio) {
      result.best_ratio = ratio;
      result.best_instance = instance;
      best_key = instance_key(instance);
      result.trace.emplace_back(result.evaluations, ratio);
    } else if (ratio == result.best_ratio) {
      std::string key = instance_key(instance);
      if (key < best_key) {
        result.best_instance = instance;
        best_key = std::move(key);
      }
    }
    return ratio;
  }
};

void exhaustive_search(SearchState& state, const SearchOptions& options,
                       const std::vector<Rational>& lattice) {
  Instance instance;
  instance.d = options.d;
  instance.agents.resize(options.n);

  std::vector<std::size_t> pref_index(options.n, 0);
  const bool fixed_profile = options.profile.has_value();
  while (true) {
    for (int i = 0; i < options.n; ++i)
      instance.agents[i].p = fixed_profile ? (*options.profile)[i] : kPreferenceChoices[pref_index[i]];

    std::vector<std::size_t> loc_index(options.n, 0);
    while (true) {
      for (int i = 0; i < options.n; ++i) instance.agents[i].x = lattice[loc_index[i]];
      state.evaluate(instance);
      int i = options.n - 1;
      for (; i >= 0; --i) {
        if (++loc_index[i] < lattice.size()) break;
        loc_index[i] = 0;
      }
      if (i < 0) break;
    }

    if (fixed_profile) break;
    int i = options.n - 1;
    for (; i >= 0; --i) {
      if (++pref_index[i] < kPreferenceChoices.size()) break;
      pref_index[i] = 0;
    }
    if (i < 0) break;
  }
}

void local_search(SearchState& state, const SearchOptions& options,
                  const std::vector<Rational>& lattice) {
  std::mt19937_64 engine(options.seed);
  auto pick = [&engine](std::size_t size) { return engine() % size; };

  while (!state.exhausted()) {
    Instance instance;
    instance.d = options.d;
    instance.agents.resize(options.n);
    for (int i = 0; i < options.n; ++i) {
      instance.agents[i].x = lattice[pick(lattice.size())];
      instance.agents[i].p =
          options.profile ? (*options.profile)[i] : kPreferenceChoices[pick(3)];
    }
    Ratio current = state.evaluate(instance);

    // Coordinate ascent: move one agent at a time, accept strict improvement,
    // restart from a fresh random instance on stall.
    bool improved = options.n > 0;
    while (improved && !state.exhausted()) {
      improved = false;
      for (int i = 0; i < options.n && !state.exhausted(); ++i) {
        const Rational original = instance.agents[i].x;
        Rational best_move = original;
        for (const Rational& candidate : lattice) {
          if (candidate == original) continue;
          if (state.exhausted()) break;
          instance.agents[i].x = candidate;
          const Ratio ratio = state.evaluate(instance);
          if (ratio > current) {
            current = ratio;
            best_move = candidate;
          }
        }
        instance.agents[i].x = best_move;
        if (best_move != original) improved = true;
      }
    }
  }
}

std::string flag_str(CellFlag flag) {
  switch (flag) {
    case CellFlag::kYes: return "yes";
    case CellFlag::kNo: return "no";
    case CellFlag::kSkipped: return "skipped";
    case CellFlag::kNa: return "na";
  }
  return "na";
}

}  // namespace

Instance generate_instance(const GeneratorConfig& config) {
  if (config.n < 0) throw ValidationError("agent count must be >= 0");
  if (config.d < Rational(0) || config.d > Rational(1))
    throw ValidationError("minimum distance d=" + config.d.str() + " out of [0,1]");
  const MixWeights weights = mix_weights(config.mix);
  const std::vector<Rational> support = location_support(config);

  std::mt19937_64 engine(config.seed);
  Instance instance;
  instance.d = config.d;
  instance.agents.reserve(config.n);
  for (int i = 0; i < config.n; ++i) {
    Agent agent;
    agent.x = support[engine() % support.size()];
    agent.p = draw_preference(engine, weights);
    instance.agents.push_back(std::move(agent));
  }
  return instance;
}

SearchResult adversarial_search(const Mechanism& mechanism, const SearchOptions& options) {
  if (options.budget < 1) throw ValidationError("search budget must be >= 1");
  if (options.n < 0) throw ValidationError("agent count must be >= 0");
  if (options.profile && static_cast<int>(options.profile->size()) != options.n)
    throw ValidationError("preference profile size does not match n");
  if (options.exhaustive && options.n > 3)
    throw ValidationError("exhaustive search is offered for n <= 3 only");

  const std::vector<Rational> lattice = search_breakpoints(options.d, options.grid_m);
  SearchState state{mechanism, options.budget, {}, {}};

  if (options.n == 0) {
    Instance empty;
    empty.d = options.d;
    state.evaluate(empty);
  } else if (options.exhaustive) {
    state.budget = std::numeric_limits<std::uint64_t>::max();  // run to completion
    exhaustive_search(state, options, lattice);
  } else {
    local_search(state, options, lattice);
  }
  return std::move(state.result);
}

std::uint64_t child_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (index + 1);  // splitmix64
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::vector<SweepRecord> sweep(const MechanismRegistry& registry, const SweepOptions& options) {
  if (options.mechanisms.empty() || options.d_values.empty() || options.configs.empty())
    throw ValidationError("sweep needs at least one mechanism, one d and one config");
  if (options.instances_per_cell < 1)
    throw ValidationError("sweep needs at least one instance per cell");

  std::vector<SweepRecord> records;
  for (const std::string& id : options.mechanisms) {
    const Mechanism* mechanism = registry.find(id);
    if (!mechanism) throw ValidationError("unknown mechanism id '" + id + "'");
    for (const Rational& d : options.d_values) {
      for (const GeneratorConfig& base : options.configs) {
        SweepRecord record;
        record.mechanism = id;
        record.d = d;
        record.n = base.n;
        record.mix = base.mix;
        record.seed = base.seed;

        GeneratorConfig config = base;
        config.d = d;
        Instance probe_d;
        probe_d.d = d;
        if (!mechanism->applicable(probe_d)) {
          record.skipped = true;
          records.push_back(std::move(record));
          continue;
        }

        const std::optional<Rational> cap = ratio_cap(id);
        Ratio max_ratio = Ratio::finite(Rational(0));
        Rational finite_sum = 0;
        bool any_infinite = false;
        bool sp_ok = true;
        bool cap_ok = true;
        for (int k = 0; k < options.instances_per_cell; ++k) {
          config.seed = child_seed(base.seed, static_cast<std::uint64_t>(k));
          const Instance instance = generate_instance(config);
          const RatioReport report = approximation_ratio(*mechanism, instance);
          if (k == 0 || report.ratio > max_ratio) max_ratio = report.ratio;
          if (report.ratio.is_infinite())
            any_infinite = true;
          else
            finite_sum += report.ratio.value();
          if (options.run_sp_checks && sp_ok)
            sp_ok = check_strategyproof(*mechanism, instance).empty();
          if (cap && cap_ok) {
            Rational limit = *cap;
            if (id == "M3") limit = std::min(limit, mechanism3_refined_cap(instance));
            cap_ok = !report.ratio.is_infinite() && report.ratio.value() <= limit;
          }
        }
        record.max_ratio = max_ratio;
        record.mean_ratio = any_infinite
                                ? Ratio::infinity()
                                : Ratio::finite(finite_sum / Rational(options.instances_per_cell));
        record.sp_ok = options.run_sp_checks ? (sp_ok ? CellFlag::kYes : CellFlag::kNo)
                                             : CellFlag::kNa;
        record.cap_ok = cap ? (cap_ok ? CellFlag::kYes : CellFlag::kNo) : CellFlag::kNa;
        records.push_back(std::move(record));
      }
    }
  }
  return records;
}

std::string sweep_csv(const std::vector<SweepRecord>& records) {
  std::string out =
      "mechanism,d,n,q10,q01,q11,seed,max_ratio,max_ratio_dec,mean_ratio,mean_ratio_dec,"
      "sp_ok,cap_ok\n";
  for (const SweepRecord& r : records) {
    out += r.mechanism;
    out += ',' + r.d.str();
    out += ',' + std::to_string(r.n);
    out += ',' + r.mix.q10.str();
    out += ',' + r.mix.q01.str();
    out += ',' + r.mix.q11.str();
    out += ',' + std::to_string(r.seed);
    if (r.skipped) {
      out += ",,,,,skipped,skipped\n";
      continue;
    }
    out += ',' + r.max_ratio.str();
    out += ',' + r.max_ratio.decimal();
    out += ',' + r.mean_ratio.str();
    out += ',' + r.mean_ratio.decimal();
    out += ',' + flag_str(r.sp_ok);
    out += ',' + flag_str(r.cap_ok);
    out += '\n';
  }
  return out;
}

}  // namespace obfloc
