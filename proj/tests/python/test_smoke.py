"""Smoke tests for the python bindings."""

from fractions import Fraction
from pathlib import Path

import pytest

import obfloc

FIXTURES = Path(__file__).resolve().parents[2] / "fixtures"


def load(name):
    return obfloc.parse_instance_json((FIXTURES / name).read_text())


def test_rational_roundtrip_and_arithmetic():
    r = obfloc.Rational("2/4")
    assert str(r) == "1/2"
    assert r.numerator == 1 and r.denominator == 2
    assert float(r) == 0.5
    assert str(obfloc.Rational("1/3") + obfloc.Rational("1/6")) == "1/2"
    # cross-check a chain of operations against fractions.Fraction
    ops = [("7/6", "1/3"), ("-2/5", "1/10"), ("14/13", "13/14")]
    for a, b in ops:
        assert str(obfloc.Rational(a) * obfloc.Rational(b)) == str(Fraction(a) * Fraction(b))
    with pytest.raises(ValueError):
        obfloc.Rational("1/0")


def test_golden_optima():
    thirds = load("det_lower_bound.json")
    assert str(obfloc.optimal_placement(thirds).value) == "1"
    skewed = load("opt_golden.json")
    assert str(obfloc.optimal_placement(skewed).value) == "7/6"
    assert str(obfloc.brute_force_opt(skewed, 60).value) == "7/6"


def test_mechanism_evaluation_and_welfare():
    thirds = load("det_lower_bound.json")
    out = obfloc.mechanism("M3").evaluate(thirds)
    assert out.is_deterministic
    assert out.placement == obfloc.Placement("1", "0")
    assert str(obfloc.social_utility(thirds, out)) == "1"

    counts = obfloc.partition_counts(thirds)
    expected = Fraction(len(thirds) + counts.shared, 2)
    m4 = obfloc.mechanism("M4").evaluate(thirds)
    assert Fraction(str(obfloc.social_utility(thirds, m4))) == expected


def test_applicability():
    inst = obfloc.Instance([obfloc.Agent("0", obfloc.Preference(1, 0))], "1/2")
    with pytest.raises(RuntimeError):
        obfloc.mechanism("M1").evaluate(inst)
    assert obfloc.mechanism("M4").applicable(inst)


def test_probes_meet_bounds():
    det = obfloc.probe_deterministic_lower_bound(obfloc.mechanism("M3"))
    rand = obfloc.probe_randomized_lower_bound(obfloc.mechanism("M4"))
    assert str(det) == "2"
    assert str(rand) == "7/6"
    assert det >= obfloc.deterministic_universal_bound()
    assert rand >= obfloc.randomized_universal_bound()


def test_strategyproofness_checks():
    rand = load("rand_lower_bound.json")
    for mid in ("M1", "M2", "M3", "M4"):
        assert obfloc.check_strategyproof(obfloc.mechanism(mid), rand) == []
    control = load("negative_control.json")
    violations = obfloc.check_strategyproof(obfloc.mechanism("NC1"), control)
    assert violations
    assert violations[0].misreport_utility > violations[0].truthful_utility


def test_json_roundtrip_is_bit_exact():
    for name in ("det_lower_bound.json", "rand_lower_bound.json", "opt_golden.json"):
        raw = (FIXTURES / name).read_text()
        assert obfloc.instance_to_json(obfloc.parse_instance_json(raw)) == raw


def test_generator_and_search():
    config = obfloc.GeneratorConfig()
    config.n = 12
    config.d = obfloc.Rational("1/4")
    config.seed = 7
    a = obfloc.generate_instance(config)
    b = obfloc.generate_instance(config)
    assert a == b
    assert len(a) == 12
    assert obfloc.validate_instance(a) == []

    options = obfloc.SearchOptions()
    options.n = 1
    options.d = obfloc.Rational("1/2")
    options.profile = [obfloc.Preference(1, 1)]
    options.budget = 200
    result = obfloc.adversarial_search(obfloc.mechanism("M3"), options)
    assert str(result.best_ratio) == "2"
    assert result.evaluations == 200


def test_sweep_csv_is_deterministic():
    options = obfloc.SweepOptions()
    options.mechanisms = ["M4"]
    options.d_values = [obfloc.Rational(0), obfloc.Rational("1/2")]
    config = obfloc.GeneratorConfig()
    config.n = 5
    config.seed = 3
    options.configs = [config]
    options.instances_per_cell = 10
    csv1 = obfloc.sweep_csv(obfloc.sweep(options))
    csv2 = obfloc.sweep_csv(obfloc.sweep(options))
    assert csv1 == csv2
    assert csv1.startswith("mechanism,d,n,")
    for line in csv1.strip().splitlines()[1:]:
        assert line.endswith(",yes,yes")


def test_python_registered_mechanism():
    def rigged(instance):
        return obfloc.MechanismOutcome.deterministic(obfloc.Placement("0", "1"))

    obfloc.register_mechanism("PYCONST", False, False, rigged)
    assert "PYCONST" in obfloc.mechanism_ids()
    probe = obfloc.probe_deterministic_lower_bound(obfloc.mechanism("PYCONST"))
    assert str(probe) == "2"
