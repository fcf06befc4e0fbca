#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "obfloc/errors.hpp"
#include "obfloc/harness.hpp"
#include "obfloc/json_io.hpp"
#include "obfloc/opt.hpp"
#include "obfloc/verification.hpp"

namespace py = pybind11;
using namespace obfloc;

namespace {

py::int_ to_py_int(const Rational::Int& value) {
  const std::string digits = value.str();
  PyObject* obj = PyLong_FromString(digits.c_str(), nullptr, 10);
  if (!obj) throw py::error_already_set();
  return py::reinterpret_steal<py::int_>(obj);
}

std::string preference_repr(const Preference& p) {
  return "Preference(" + std::to_string(p.p1) + ", " + std::to_string(p.p2) + ")";
}

}  // namespace

PYBIND11_MODULE(_obfloc, m) {
  m.doc() = "Exact mechanisms, optimal welfare and strategyproofness checks for "
            "two-obnoxious-facility location on [0,1].";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<FeasibilityError>(m, "FeasibilityError", PyExc_ValueError);
  py::register_exception<ApplicabilityError>(m, "ApplicabilityError", PyExc_RuntimeError);

  py::class_<Rational>(m, "Rational")
      .def(py::init<std::int64_t>(), py::arg("value"))
      .def(py::init<std::int64_t, std::int64_t>(), py::arg("num"), py::arg("den"))
      .def(py::init([](const std::string& text) { return Rational::parse(text); }),
           py::arg("text"))
      .def_property_readonly("numerator", [](const Rational& r) { return to_py_int(r.numerator()); })
      .def_property_readonly("denominator",
                             [](const Rational& r) { return to_py_int(r.denominator()); })
      .def("decimal", &Rational::decimal, py::arg("digits") = 12)
      .def("__str__", &Rational::str)
      .def("__repr__", [](const Rational& r) { return "Rational('" + r.str() + "')"; })
      .def("__float__",
           [](const Rational& r) {
             return r.numerator().convert_to<double>() / r.denominator().convert_to<double>();
           })
      .def("__hash__", [](const Rational& r) { return py::hash(py::str(r.str())); })
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self * py::self)
      .def(py::self / py::self)
      .def(-py::self)
      .def(py::self == py::self)
      .def(py::self != py::self)
      .def(py::self < py::self)
      .def(py::self <= py::self)
      .def(py::self > py::self)
      .def(py::self >= py::self)
      .def("__abs__", &Rational::abs);
  py::implicitly_convertible<py::str, Rational>();
  py::implicitly_convertible<py::int_, Rational>();

  py::class_<Preference>(m, "Preference")
      .def(py::init([](int p1, int p2) { return Preference{p1, p2}; }), py::arg("p1"),
           py::arg("p2"))
      .def_readwrite("p1", &Preference::p1)
      .def_readwrite("p2", &Preference::p2)
      .def("valid", &Preference::valid)
      .def(py::self == py::self)
      .def("__repr__", &preference_repr);

  py::class_<Agent>(m, "Agent")
      .def(py::init([](Rational x, Preference p) { return Agent{std::move(x), p}; }),
           py::arg("x"), py::arg("p"))
      .def_readwrite("x", &Agent::x)
      .def_readwrite("p", &Agent::p)
      .def(py::self == py::self)
      .def("__repr__", [](const Agent& a) {
        return "Agent(" + a.x.str() + ", " + preference_repr(a.p) + ")";
      });

  py::class_<Instance>(m, "Instance")
      .def(py::init([](std::vector<Agent> agents, Rational d) {
             return Instance{std::move(agents), std::move(d)};
           }),
           py::arg("agents") = std::vector<Agent>{}, py::arg("d") = Rational(0))
      .def_readwrite("agents", &Instance::agents)
      .def_readwrite("d", &Instance::d)
      .def("__len__", &Instance::size)
      .def(py::self == py::self)
      .def("__repr__", [](const Instance& c) {
        return "Instance(n=" + std::to_string(c.size()) + ", d=" + c.d.str() + ")";
      });

  py::class_<Placement>(m, "Placement")
      .def(py::init([](Rational y1, Rational y2) {
             return Placement{std::move(y1), std::move(y2)};
           }),
           py::arg("y1"), py::arg("y2"))
      .def_readwrite("y1", &Placement::y1)
      .def_readwrite("y2", &Placement::y2)
      .def("separation", &Placement::separation)
      .def("feasible_for", &Placement::feasible_for, py::arg("d"))
      .def(py::self == py::self)
      .def(py::self < py::self)
      .def("__repr__", [](const Placement& p) {
        return "Placement(" + p.y1.str() + ", " + p.y2.str() + ")";
      });

  py::class_<Lottery>(m, "Lottery")
      .def_static("make", &Lottery::make, py::arg("support"))
      .def_property_readonly("support", &Lottery::support)
      .def(py::self == py::self)
      .def("__repr__", [](const Lottery& l) {
        return "Lottery(" + std::to_string(l.support().size()) + " placements)";
      });

  py::class_<MechanismOutcome>(m, "MechanismOutcome")
      .def_static("deterministic", &MechanismOutcome::deterministic, py::arg("placement"))
      .def_static("randomized", &MechanismOutcome::randomized, py::arg("lottery"))
      .def_property_readonly("is_deterministic", &MechanismOutcome::is_deterministic)
      .def_property_readonly("placement", &MechanismOutcome::placement)
      .def_property_readonly("lottery", &MechanismOutcome::lottery)
      .def("as_lottery", &MechanismOutcome::as_lottery)
      .def(py::self == py::self);

  py::class_<PartitionCounts>(m, "PartitionCounts")
      .def_readonly("n1", &PartitionCounts::n1)
      .def_readonly("n2", &PartitionCounts::n2)
      .def_readonly("shared", &PartitionCounts::shared)
      .def_readonly("only1", &PartitionCounts::only1)
      .def_readonly("only2", &PartitionCounts::only2);

  m.def("agent_utility", &agent_utility, py::arg("agent"), py::arg("placement"));
  m.def("expected_agent_utility", &expected_agent_utility, py::arg("agent"), py::arg("outcome"));
  m.def("social_utility",
        py::overload_cast<const Instance&, const MechanismOutcome&>(&social_utility),
        py::arg("instance"), py::arg("outcome"));
  m.def("social_utility", py::overload_cast<const Instance&, const Placement&>(&social_utility),
        py::arg("instance"), py::arg("placement"));
  m.def("partition_counts", &partition_counts, py::arg("instance"));
  m.def("validate_instance", &validate_instance, py::arg("instance"));
  m.def("reflect_instance", py::overload_cast<const Instance&>(&reflect), py::arg("instance"));
  m.def("reflect_placement", py::overload_cast<const Placement&>(&reflect), py::arg("placement"));
  m.def("instance_key", &instance_key, py::arg("instance"));
  m.def("instance_digest", &instance_digest, py::arg("instance"));

  // mechanisms
  py::enum_<Mechanism3Case>(m, "Mechanism3Case")
      .value("SHARED", Mechanism3Case::kShared)
      .value("EXCLUSIVE", Mechanism3Case::kExclusive);

  py::class_<Mechanism>(m, "Mechanism")
      .def_readonly("id", &Mechanism::id)
      .def_readonly("randomized", &Mechanism::randomized)
      .def_readonly("requires_zero_d", &Mechanism::requires_zero_d)
      .def("applicable", &Mechanism::applicable, py::arg("instance"))
      .def("evaluate",
           [](const Mechanism& mech, const Instance& instance) {
             if (!mech.applicable(instance))
               throw ApplicabilityError(mech.id + " is not applicable at d = " +
                                        instance.d.str());
             return mech.evaluate(instance);
           },
           py::arg("instance"))
      .def("__repr__", [](const Mechanism& mech) { return "Mechanism('" + mech.id + "')"; });

  m.def("mechanism1", &mechanism1, py::arg("instance"));
  m.def("mechanism2", &mechanism2, py::arg("instance"));
  m.def("mechanism3", &mechanism3, py::arg("instance"));
  m.def("mechanism4", &mechanism4, py::arg("instance"));
  m.def("mechanism3_case", &mechanism3_case, py::arg("instance"));
  m.def("mechanism", [](const std::string& id) -> const Mechanism& {
          const Mechanism* mech = MechanismRegistry::global().find(id);
          if (!mech) throw ValidationError("unknown mechanism id '" + id + "'");
          return *mech;
        },
        py::arg("id"), py::return_value_policy::reference);
  m.def("mechanism_ids", []() { return MechanismRegistry::global().ids(); });
  m.def("register_mechanism",
        [](const std::string& id, bool randomized, bool requires_zero_d,
           const py::function& evaluate) {
          // The registry is a C++ singleton that outlives the interpreter, so
          // the callable is kept on the heap and never released; destroying it
          // after Py_Finalize would crash.
          auto* fn = new py::function(evaluate);
          MechanismRegistry::global().add(
              {id, randomized, requires_zero_d, [fn](const Instance& instance) {
                 py::gil_scoped_acquire gil;
                 return (*fn)(instance).cast<MechanismOutcome>();
               }});
        },
        py::arg("id"), py::arg("randomized"), py::arg("requires_zero_d"), py::arg("evaluate"));

  // opt
  py::class_<OptResult>(m, "OptResult")
      .def_readonly("placement", &OptResult::placement)
      .def_readonly("value", &OptResult::value)
      .def_readonly("candidates_evaluated", &OptResult::candidates_evaluated)
      .def("__repr__", [](const OptResult& r) {
        return "OptResult(value=" + r.value.str() + ")";
      });
  m.def("feasible_vertices", &feasible_vertices, py::arg("d"));
  m.def("optimal_placement", &optimal_placement, py::arg("instance"));
  m.def("brute_force_opt", &brute_force_opt, py::arg("instance"), py::arg("resolution"),
        py::arg("include_vertices") = true);
  m.def("welfare_upper_bound", &welfare_upper_bound, py::arg("instance"));

  // verification
  py::class_<Ratio>(m, "Ratio")
      .def_static("finite", &Ratio::finite, py::arg("value"))
      .def_static("infinity", &Ratio::infinity)
      .def_property_readonly("is_infinite", &Ratio::is_infinite)
      .def_property_readonly("value", &Ratio::value)
      .def("decimal", &Ratio::decimal, py::arg("digits") = 12)
      .def("__str__", &Ratio::str)
      .def("__repr__", [](const Ratio& r) { return "Ratio('" + r.str() + "')"; })
      .def(py::self == py::self)
      .def(py::self < py::self)
      .def(py::self <= py::self)
      .def(py::self > py::self)
      .def(py::self >= py::self);

  py::class_<RatioReport>(m, "RatioReport")
      .def_readonly("digest", &RatioReport::digest)
      .def_readonly("mechanism", &RatioReport::mechanism)
      .def_readonly("mechanism_value", &RatioReport::mechanism_value)
      .def_readonly("opt_value", &RatioReport::opt_value)
      .def_readonly("ratio", &RatioReport::ratio);

  py::class_<SpViolation>(m, "SpViolation")
      .def_readonly("agent", &SpViolation::agent)
      .def_readonly("true_location", &SpViolation::true_location)
      .def_readonly("misreport", &SpViolation::misreport)
      .def_readonly("truthful_utility", &SpViolation::truthful_utility)
      .def_readonly("misreport_utility", &SpViolation::misreport_utility)
      .def("__repr__", [](const SpViolation& v) {
        return "SpViolation(agent=" + std::to_string(v.agent) + ", misreport=" +
               v.misreport.str() + ")";
      });

  m.def("approximation_ratio", &approximation_ratio, py::arg("mechanism"), py::arg("instance"));
  m.def("default_misreports", &default_misreports, py::arg("instance"));
  m.def("check_strategyproof",
        py::overload_cast<const Mechanism&, const Instance&>(&check_strategyproof),
        py::arg("mechanism"), py::arg("instance"));
  m.def("check_strategyproof",
        py::overload_cast<const Mechanism&, const Instance&, const std::vector<Rational>&>(
            &check_strategyproof),
        py::arg("mechanism"), py::arg("instance"), py::arg("misreports"));
  m.def("check_constant_outcome", &check_constant_outcome, py::arg("mechanism"),
        py::arg("instances"));
  m.def("probe_deterministic_lower_bound", &probe_deterministic_lower_bound,
        py::arg("mechanism"));
  m.def("probe_randomized_lower_bound", &probe_randomized_lower_bound, py::arg("mechanism"),
        py::arg("wrap_deterministic") = false);
  m.def("deterministic_universal_bound", &deterministic_universal_bound);
  m.def("randomized_universal_bound", &randomized_universal_bound);
  m.def("ratio_cap", &ratio_cap, py::arg("mechanism_id"));
  m.def("mechanism3_refined_cap", &mechanism3_refined_cap, py::arg("instance"));

  // harness
  py::enum_<LocationLaw>(m, "LocationLaw")
      .value("UNIFORM_GRID", LocationLaw::kUniformGrid)
      .value("BREAKPOINT_SET", LocationLaw::kBreakpointSet);

  py::class_<PreferenceMix>(m, "PreferenceMix")
      .def(py::init([](Rational q10, Rational q01, Rational q11) {
             return PreferenceMix{std::move(q10), std::move(q01), std::move(q11)};
           }),
           py::arg("q10"), py::arg("q01"), py::arg("q11"))
      .def_readwrite("q10", &PreferenceMix::q10)
      .def_readwrite("q01", &PreferenceMix::q01)
      .def_readwrite("q11", &PreferenceMix::q11);

  py::class_<GeneratorConfig>(m, "GeneratorConfig")
      .def(py::init<>())
      .def_readwrite("n", &GeneratorConfig::n)
      .def_readwrite("d", &GeneratorConfig::d)
      .def_readwrite("mix", &GeneratorConfig::mix)
      .def_readwrite("law", &GeneratorConfig::law)
      .def_readwrite("grid_m", &GeneratorConfig::grid_m)
      .def_readwrite("breakpoints", &GeneratorConfig::breakpoints)
      .def_readwrite("seed", &GeneratorConfig::seed);
  m.def("generate_instance", &generate_instance, py::arg("config"));

  py::class_<SearchOptions>(m, "SearchOptions")
      .def(py::init<>())
      .def_readwrite("n", &SearchOptions::n)
      .def_readwrite("d", &SearchOptions::d)
      .def_readwrite("profile", &SearchOptions::profile)
      .def_readwrite("budget", &SearchOptions::budget)
      .def_readwrite("seed", &SearchOptions::seed)
      .def_readwrite("grid_m", &SearchOptions::grid_m)
      .def_readwrite("exhaustive", &SearchOptions::exhaustive);

  py::class_<SearchResult>(m, "SearchResult")
      .def_readonly("best_instance", &SearchResult::best_instance)
      .def_readonly("best_ratio", &SearchResult::best_ratio)
      .def_readonly("evaluations", &SearchResult::evaluations)
      .def_readonly("trace", &SearchResult::trace);
  m.def("adversarial_search", &adversarial_search, py::arg("mechanism"), py::arg("options"));

  py::enum_<CellFlag>(m, "CellFlag")
      .value("YES", CellFlag::kYes)
      .value("NO", CellFlag::kNo)
      .value("SKIPPED", CellFlag::kSkipped)
      .value("NA", CellFlag::kNa);

  py::class_<SweepRecord>(m, "SweepRecord")
      .def_readonly("mechanism", &SweepRecord::mechanism)
      .def_readonly("d", &SweepRecord::d)
      .def_readonly("n", &SweepRecord::n)
      .def_readonly("mix", &SweepRecord::mix)
      .def_readonly("seed", &SweepRecord::seed)
      .def_readonly("skipped", &SweepRecord::skipped)
      .def_readonly("max_ratio", &SweepRecord::max_ratio)
      .def_readonly("mean_ratio", &SweepRecord::mean_ratio)
      .def_readonly("sp_ok", &SweepRecord::sp_ok)
      .def_readonly("cap_ok", &SweepRecord::cap_ok);

  py::class_<SweepOptions>(m, "SweepOptions")
      .def(py::init<>())
      .def_readwrite("mechanisms", &SweepOptions::mechanisms)
      .def_readwrite("d_values", &SweepOptions::d_values)
      .def_readwrite("configs", &SweepOptions::configs)
      .def_readwrite("instances_per_cell", &SweepOptions::instances_per_cell)
      .def_readwrite("run_sp_checks", &SweepOptions::run_sp_checks);
  m.def("sweep", [](const SweepOptions& options) {
          return sweep(MechanismRegistry::global(), options);
        },
        py::arg("options"));
  m.def("sweep_csv", &sweep_csv, py::arg("records"));
  m.def("child_seed", &child_seed, py::arg("base"), py::arg("index"));

  // io
  m.def("parse_instance_json", &parse_instance_json, py::arg("text"));
  m.def("instance_to_json", &instance_to_json, py::arg("instance"));
  m.def("outcome_to_json", &outcome_to_json, py::arg("outcome"));
  m.def("opt_result_to_json", &opt_result_to_json, py::arg("result"));
  m.def("ratio_report_to_json", &ratio_report_to_json, py::arg("report"));
  m.def("violations_to_json", &violations_to_json, py::arg("violations"));
  m.def("search_result_to_json", &search_result_to_json, py::arg("result"));
}
