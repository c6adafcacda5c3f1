import json

from polydet.engines import ENGINES, PolydetResult
from polydet.verify import (
    PROPERTY_NAMES,
    report_json,
    report_lines,
    run_property_suite,
)


def test_suite_passes_on_small_run():
    results = run_property_suite(seed=3, trials=4, n_values=(2, 3))
    assert results
    assert all(r.passed for r in results)
    assert {r.name for r in results} == set(PROPERTY_NAMES)


def test_suite_threaded_matches_sequential():
    seq = run_property_suite(seed=9, trials=3, n_values=(2, 3), threads=0)
    par = run_property_suite(seed=9, trials=3, n_values=(2, 3), threads=4)
    assert seq == par


def test_suite_detects_corrupted_engine():
    broken = dict(ENGINES)
    good = broken["volume"]
    broken["volume"] = lambda mats: PolydetResult(good(mats).value + 0.5, "volume", len(mats))
    results = run_property_suite(seed=1, trials=2, n_values=(2,), engines=broken)
    failing = {r.name for r in results if not r.passed}
    assert "volume_form" in failing
    assert "cross_engine" in failing


def test_report_lines_format():
    results = run_property_suite(seed=5, trials=2, n_values=(2,))
    lines = report_lines(results)
    assert len(lines) == len(results)
    assert all(line.startswith("PASS") for line in lines)


def test_report_json_shape():
    results = run_property_suite(seed=5, trials=2, n_values=(2, 3))
    payload = json.loads(report_json(results))
    assert payload["passed"] is True
    assert len(payload["properties"]) == len(PROPERTY_NAMES) * 2
    entry = payload["properties"][0]
    assert set(entry) == {"name", "n", "trials", "max_dev", "tol", "passed"}
