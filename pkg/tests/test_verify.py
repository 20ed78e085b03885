import json
import time

import pytest

from moyal_lie import UnknownSuite, verify_suite
from moyal_lie.verify import SUITES


@pytest.mark.parametrize("suite", SUITES)
def test_suite_is_fast_and_deterministic(suite):
    t0 = time.perf_counter()
    first = verify_suite(suite, 11)
    assert time.perf_counter() - t0 < 60
    second = verify_suite(suite, 11)
    assert json.dumps(first.to_json(), sort_keys=True) == json.dumps(second.to_json(), sort_keys=True)
    assert all(c.count > 0 for c in first.cases)


@pytest.mark.parametrize("suite", ["algebra", "covariance", "starexp"])
@pytest.mark.parametrize("seed", [0, 1, 2**63])
def test_suites_pass(suite, seed):
    report = verify_suite(suite, seed)
    assert report.passed, report.to_text()


def test_kick_suite_only_fails_the_stated_formula():
    report = verify_suite("kick", 3)
    failing = [c.name for c in report.cases if not c.passed]
    assert failing == ["p3q_defect_stated_form"]
    names = {c.name for c in report.cases}
    assert {"p3q_defect_closed_form", "gauge_defect_closed_form", "kappa_not_sufficient"} <= names


def test_seed_changes_random_cases():
    a = verify_suite("algebra", 1).to_json()
    b = verify_suite("algebra", 2).to_json()
    assert a["seed"] != b["seed"]
    assert [c["name"] for c in a["cases"]] == [c["name"] for c in b["cases"]]


def test_all_suite_prefixes_names():
    report = verify_suite("all", 0)
    assert report.suite == "all"
    assert {c.name.split(".")[0] for c in report.cases} == set(SUITES)


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        verify_suite("nosuch", 0)


def test_counterexample_rendering():
    report = verify_suite("kick", 0)
    bad = next(c for c in report.cases if not c.passed)
    assert bad.counterexample["V"] == "(1/3)*q^3"
    assert "hbar^2" in bad.counterexample["defect"]
    text = report.to_text()
    assert "[FAIL] p3q_defect_stated_form" in text and text.endswith("FAILED")
