"""Tests for the check-suite runner: registry, determinism, report
shapes, and a couple of cheap suites run end to end."""

import csv
import io
import json

import pytest

from bfslab import (
    SuiteConfig,
    registered_suites,
    report_to_csv,
    report_to_json,
    run_all,
    run_suite,
)


def _strip_timestamp(report) -> dict:
    data = report_to_json(report)
    data.pop("timestamp")
    return data


def test_registry_is_nonempty_and_sorted_names_are_stable():
    names = registered_suites()
    assert len(names) >= 15
    assert "holder_rogers" in names
    assert "reverse_chebyshev" in names
    assert "hardy_identity" in names


def test_unknown_suite_lists_the_registry():
    with pytest.raises(ValueError) as err:
        run_suite("no_such_suite")
    msg = str(err.value)
    assert "no_such_suite" in msg
    assert "holder_rogers" in msg


def test_empty_suite_refuses_a_vacuous_pass():
    with pytest.raises(RuntimeError, match="vacuous"):
        run_suite("reverse_chebyshev", instances=0)


def test_same_seed_same_report():
    a = run_suite("reverse_chebyshev", seed=7, instances=40)
    b = run_suite("reverse_chebyshev", seed=7, instances=40)
    assert _strip_timestamp(a) == _strip_timestamp(b)


def test_different_seed_changes_the_data_not_the_verdict():
    a = run_suite("holder_rogers", seed=7)
    b = run_suite("holder_rogers", seed=8)
    assert a.passed and b.passed
    assert _strip_timestamp(a) != _strip_timestamp(b)


def test_cheap_suites_pass_end_to_end():
    for name in ("holder_rogers", "reverse_chebyshev", "hardy_identity"):
        rep = run_suite(name, seed=7)
        assert rep.passed, rep.summary
        assert rep.summary["failed"] == 0
        assert rep.summary["total"] == len(rep.instances)


def test_instance_and_config_shapes():
    rep = run_suite("holder_rogers", seed=11)
    data = report_to_json(rep)
    assert data["suite"] == "holder_rogers"
    assert data["config"]["seed"] == 11
    assert isinstance(data["timestamp"], str)
    for inst in data["instances"]:
        assert set(inst) == {"inputs", "lhs", "rhs", "constant", "tolerance", "pass"}
        assert isinstance(inst["pass"], bool)
        # Everything in inputs must already be JSON-serializable.
        json.dumps(inst["inputs"])


def test_config_overrides_are_recorded():
    rep = run_suite("reverse_chebyshev", seed=3, instances=10, grid_n=12)
    assert rep.config["instances"] == 10
    assert rep.config["grid_n"] == 12
    assert len(rep.instances) == 10


def test_explicit_config_object_wins_over_kwargs():
    cfg = SuiteConfig(suite="reverse_chebyshev", seed=5, instances=7)
    rep = run_suite("reverse_chebyshev", config=cfg)
    assert rep.config["seed"] == 5
    assert len(rep.instances) == 7


def test_config_renamed_to_requested_suite():
    cfg = SuiteConfig(suite="something_else", seed=5, instances=7)
    rep = run_suite("reverse_chebyshev", config=cfg)
    assert rep.suite == "reverse_chebyshev"
    assert rep.config["suite"] == "reverse_chebyshev"


def test_csv_rows_match_instances():
    reports = [run_suite("holder_rogers", seed=7), run_suite("reverse_chebyshev", seed=7, instances=5)]
    text = report_to_csv(reports)
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["suite", "index", "lhs", "rhs", "constant", "tolerance", "pass", "inputs"]
    body = rows[1:]
    assert len(body) == sum(len(r.instances) for r in reports)
    suites = {row[0] for row in body}
    assert suites == {"holder_rogers", "reverse_chebyshev"}
    # The inputs column must parse back as JSON.
    for row in body:
        json.loads(row[7])


def test_run_all_honours_the_name_filter():
    reports = run_all(seed=7, names=["holder_rogers", "reverse_chebyshev"], instances=10)
    assert [r.suite for r in reports] == ["holder_rogers", "reverse_chebyshev"]
    assert all(r.passed for r in reports)
