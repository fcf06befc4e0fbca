// Acceptance suite: end-to-end verification of the library's contractual
// properties, one printed PASS/FAIL line per criterion. Exits nonzero if any
// criterion fails. Pass the CLI binary path as argv[1] to include the
// command-line determinism criterion.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "obfloc/errors.hpp"
#include "obfloc/harness.hpp"
#include "obfloc/json_io.hpp"
#include "obfloc/opt.hpp"
#include "obfloc/verification.hpp"

using namespace obfloc;

namespace {

struct Suite {
  int failures = 0;

  void criterion(int number, const std::string& label, double limit_s,
                 const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      ok = body(detail);
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (ok && limit_s > 0 && elapsed >= limit_s) {
      ok = false;
      detail = "over the " + std::to_string(limit_s) + " s time limit";
    }
    if (!ok) ++failures;
    std::printf("[%s] criterion %d: %s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL", number,
                label.c_str(), elapsed, detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
  }
};

const Mechanism& mech(const std::string& id) {
  const Mechanism* m = MechanismRegistry::global().find(id);
  if (!m) throw ValidationError("missing mechanism " + id);
  return *m;
}

GeneratorConfig seeded_config(int n, Rational d, std::uint64_t seed) {
  GeneratorConfig config;
  config.n = n;
  config.d = std::move(d);
  config.seed = seed;
  return config;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) throw std::runtime_error("cannot read " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string fixture_path(const std::string& name) {
  return std::string(OBFLOC_FIXTURES_DIR) + "/" + name;
}

Rational expected_constant_welfare(const Instance& instance) {
  const PartitionCounts c = partition_counts(instance);
  return Rational(static_cast<std::int64_t>(instance.size() + c.shared), 2);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  Suite suite;

  const std::vector<Rational> d_grid = {Rational(0), Rational(1, 4), Rational(1, 2),
                                        Rational(3, 4), Rational(1)};

  // Instance pools shared across criteria; filled by criteria 1, 2 and 4.
  std::vector<Instance> welfare_pool, opt_pool, sp_pool;

  suite.criterion(1, "exact welfare identities for the constant lotteries", 5.0,
                  [&](std::string& detail) {
                    int m2_checked = 0;
                    for (int i = 0; i < 1000; ++i) {
                      const GeneratorConfig config = seeded_config(
                          i % 51, d_grid[i % d_grid.size()], child_seed(1001, i));
                      const Instance instance = generate_instance(config);
                      const Rational expected = expected_constant_welfare(instance);
                      if (social_utility(instance, mech("M4").evaluate(instance)) != expected) {
                        detail = "M4 welfare mismatch at instance " + std::to_string(i);
                        return false;
                      }
                      if (instance.d.is_zero()) {
                        ++m2_checked;
                        if (social_utility(instance, mech("M2").evaluate(instance)) != expected) {
                          detail = "M2 welfare mismatch at instance " + std::to_string(i);
                          return false;
                        }
                      }
                      welfare_pool.push_back(instance);
                    }
                    detail = "1000 instances for M4, " + std::to_string(m2_checked) + " for M2";
                    return true;
                  });

  suite.criterion(2, "vertex optimum equals the resolution-200 grid oracle", 60.0,
                  [&](std::string& detail) {
                    const std::vector<Rational> d_values = {Rational(0), Rational(1, 3),
                                                            Rational(1, 2), Rational(1)};
                    for (int i = 0; i < 500; ++i) {
                      const GeneratorConfig config = seeded_config(
                          i % 11, d_values[i % d_values.size()], child_seed(2001, i));
                      const Instance instance = generate_instance(config);
                      const OptResult exact = optimal_placement(instance);
                      const OptResult grid = brute_force_opt(instance, 200);
                      if (exact.value != grid.value) {
                        detail = "oracle mismatch at instance " + std::to_string(i) + ": " +
                                 exact.value.str() + " vs " + grid.value.str();
                        return false;
                      }
                      opt_pool.push_back(instance);
                    }
                    detail = "500 instances";
                    return true;
                  });

  suite.criterion(3, "optimum never exceeds n + (1-d)|N1 ∩ N2|", 30.0,
                  [&](std::string& detail) {
                    std::size_t checked = 0;
                    for (const std::vector<Instance>* pool : {&welfare_pool, &opt_pool}) {
                      for (const Instance& instance : *pool) {
                        if (optimal_placement(instance).value > welfare_upper_bound(instance)) {
                          detail = "bound violated on " + instance_key(instance);
                          return false;
                        }
                        ++checked;
                      }
                    }
                    detail = std::to_string(checked) + " instances";
                    return checked == 1500;
                  });

  suite.criterion(
      4, "strategyproofness suite with a sensitive negative control", 30.0,
      [&](std::string& detail) {
        for (const std::string id : {"M1", "M2", "M3", "M4"}) {
          const Mechanism& mechanism = mech(id);
          for (int i = 0; i < 200; ++i) {
            const Rational d =
                mechanism.requires_zero_d ? Rational(0) : d_grid[i % d_grid.size()];
            const Instance instance =
                generate_instance(seeded_config(i % 9, d, child_seed(3001 + i, i)));
            const auto violations = check_strategyproof(mechanism, instance);
            if (!violations.empty()) {
              detail = id + " violated on " + instance_key(instance);
              return false;
            }
            sp_pool.push_back(instance);
          }
        }
        Instance bait;
        bait.d = Rational(0);
        bait.agents.push_back({Rational(1, 2), Preference{1, 0}});
        if (check_strategyproof(mech("NC1"), bait).empty()) {
          detail = "negative control NC1 produced no violation";
          return false;
        }
        detail = "4 x 200 instances clean; NC1 caught";
        return true;
      });

  suite.criterion(
      5, "ratio caps on all pools plus adversarial search", 120.0,
      [&](std::string& detail) {
        std::size_t checked = 0;
        auto cap_holds = [&](const Mechanism& mechanism, const Instance& instance,
                             const Ratio& ratio) {
          const auto cap = ratio_cap(mechanism.id);
          if (ratio.is_infinite() || ratio.value() > *cap) return false;
          if (mechanism.id == "M3" && ratio.value() > mechanism3_refined_cap(instance))
            return false;
          return true;
        };
        for (const std::vector<Instance>* pool : {&welfare_pool, &opt_pool, &sp_pool}) {
          for (const Instance& instance : *pool) {
            for (const std::string id : {"M1", "M2", "M3", "M4"}) {
              const Mechanism& mechanism = mech(id);
              if (!mechanism.applicable(instance)) continue;
              if (!cap_holds(mechanism, instance,
                             approximation_ratio(mechanism, instance).ratio)) {
                detail = id + " cap breached on " + instance_key(instance);
                return false;
              }
              ++checked;
            }
          }
        }
        // 1e5 search evaluations per mechanism, split across d values where
        // the mechanism supports them.
        for (const std::string id : {"M1", "M2", "M3", "M4"}) {
          const Mechanism& mechanism = mech(id);
          const std::vector<Rational> ds =
              mechanism.requires_zero_d ? std::vector<Rational>{Rational(0)} : d_grid;
          const std::uint64_t budget = 100000 / ds.size();
          for (const Rational& d : ds) {
            SearchOptions options;
            options.n = 6;
            options.d = d;
            options.budget = budget;
            options.seed = child_seed(5001, checked);
            const SearchResult result = adversarial_search(mechanism, options);
            checked += result.evaluations;
            if (!cap_holds(mechanism, result.best_instance, result.best_ratio)) {
              detail = id + " cap breached by search witness " +
                       instance_key(result.best_instance) + " ratio " + result.best_ratio.str();
              return false;
            }
          }
        }
        detail = std::to_string(checked) + " observed ratios within caps";
        return true;
      });

  suite.criterion(6, "lower-bound probe replays", 1.0, [&](std::string& detail) {
    const Rational det = probe_deterministic_lower_bound(mech("M3"));
    const Rational rand = probe_randomized_lower_bound(mech("M4"));
    detail = "M3 probe " + det.str() + ", M4 probe " + rand.str();
    return det == Rational(2) && det >= deterministic_universal_bound() &&
           rand == Rational(7, 6) && rand >= randomized_universal_bound();
  });

  suite.criterion(7, "golden instance optima", 5.0, [&](std::string& detail) {
    const Instance thirds = parse_instance_json(read_file(fixture_path("det_lower_bound.json")));
    const Instance skewed = parse_instance_json(read_file(fixture_path("opt_golden.json")));
    const Rational a = optimal_placement(thirds).value;
    const Rational b = optimal_placement(skewed).value;
    detail = "OPT values " + a.str() + " and " + b.str();
    return a == Rational(1) && b == Rational(7, 6);
  });

  suite.criterion(8, "byte-identical sweeps and bit-exact JSON round-trips", 60.0,
                  [&](std::string& detail) {
                    for (const char* name : {"det_lower_bound.json", "rand_lower_bound.json",
                                             "opt_golden.json", "negative_control.json"}) {
                      const std::string raw = read_file(fixture_path(name));
                      if (instance_to_json(parse_instance_json(raw)) != raw) {
                        detail = std::string("round-trip changed ") + name;
                        return false;
                      }
                    }
                    for (const Instance& instance : sp_pool) {
                      const std::string once = instance_to_json(instance);
                      if (instance_to_json(parse_instance_json(once)) != once) {
                        detail = "round-trip changed a generated instance";
                        return false;
                      }
                    }
                    if (cli.empty()) {
                      detail = "no CLI path given";
                      return false;
                    }
                    const std::string base =
                        " sweep --mech M3,M4 --d 0,1/4,1/2 --n 4,8 --count 25 --seed 31415"
                        " --out ";
                    for (const char* out : {"acceptance_sweep_a.csv", "acceptance_sweep_b.csv"}) {
                      const std::string command = "\"" + cli + "\"" + base + out;
                      if (std::system(command.c_str()) != 0) {
                        detail = "sweep command failed";
                        return false;
                      }
                    }
                    const std::string a = read_file("acceptance_sweep_a.csv");
                    const std::string b = read_file("acceptance_sweep_b.csv");
                    std::remove("acceptance_sweep_a.csv");
                    std::remove("acceptance_sweep_b.csv");
                    if (a != b) {
                      detail = "sweep outputs differ between runs";
                      return false;
                    }
                    if (a.find("mechanism,d,n,") != 0 || a.find("skipped") != std::string::npos) {
                      detail = "unexpected sweep output";
                      return false;
                    }
                    detail = "sweeps byte-identical; round-trips exact";
                    return true;
                  });

  if (suite.failures > 0) {
    std::printf("%d criterion(s) failed\n", suite.failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
