import math

import pytest

import localmotion as lm

SMALL = """
n = 16
init_radius = 200
max_time = 400
seed = 3
"""


def test_closed_forms():
    assert lm.kl_exact_1d(0, 1, 0, 1) == pytest.approx(math.log(math.pi) - 2 + math.pi / 2, abs=1e-12)
    assert lm.completion_potential_bound(0.1) == pytest.approx(1.24245, abs=1e-5)
    assert lm.evolver_potential_bound(0.1, 0.2, 1) == pytest.approx(1.8715, abs=1e-4)
    assert lm.object_potential(0, 1, 100) == pytest.approx(math.log(10))
    assert lm.adversary_push_count(0.1) == 8


def test_run_returns_summary_and_rows():
    summary, rows = lm.run(SMALL)
    assert summary["final_time"] == 400
    assert summary["invariants"]["total_violations"] == 0
    assert len(rows) == 401
    assert rows[0]["t"] == 0
    assert rows[-1]["tracker_queries"] == 8 * 400
    assert rows[1]["d_estimate_nats"] is None
    assert rows[16]["d_estimate_nats"] is not None


def test_runs_are_deterministic():
    assert lm.run(SMALL, seed=5)[1] == lm.run(SMALL, seed=5)[1]


def test_verify_passes():
    report = lm.verify(SMALL, max_time=2000)
    assert report["passed"]
    assert {c["name"] for c in report["checks"]} >= {"expansion_containment", "completion_bound"}


def test_config_errors_surface():
    with pytest.raises(ValueError):
        lm.load_config(SMALL + "wobble = 1\n")
    assert "n = 16" in lm.load_config(SMALL)
