import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schneider_lab.errors import EmptyGrid
from schneider_lab.report import ExperimentReport
from schneider_lab.stats import (
    birkhoff_experiment,
    birkhoff_limit,
    convergence_exponent,
    digit_law_experiment,
    independence_experiment,
    limsup_max_cdf,
    limsup_max_median,
    limsup_scaling_experiment,
    orbit_precision,
    sample_orbits,
    tau_class_experiment,
)
from schneider_lab.streams import block_rng, blocks, run_blocks, worker_count

GRID = list(np.linspace(0.0, 4.0, 41))


# --- streams ---------------------------------------------------------------------

def test_blocks_cover_samples():
    assert list(blocks(10, 4)) == [(0, 4), (1, 4), (2, 2)]
    assert list(blocks(0, 4)) == []


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv("SCHNEIDER_LAB_THREADS", "3")
    assert worker_count() == 3
    assert worker_count(1) == 1
    monkeypatch.delenv("SCHNEIDER_LAB_THREADS")
    assert worker_count() >= 1


def _square(x):
    return x * x


def test_run_blocks_keeps_order():
    tasks = [(i,) for i in range(7)]
    assert run_blocks(_square, tasks, 1) == run_blocks(_square, tasks, 2) == [i * i for i in range(7)]


def test_block_streams_differ():
    a = block_rng(1, 0).integers(0, 2**62, 4)
    b = block_rng(1, 1).integers(0, 2**62, 4)
    assert not np.array_equal(a, b)


# --- digit law ---------------------------------------------------------------------

@pytest.mark.parametrize("p", [2, 3, 5])
def test_digit_law_small(p):
    r = digit_law_experiment(p, 50_000, seed=1)
    assert r.passed, r.criteria


def test_digit_law_examples_at_scale():
    r = digit_law_experiment(3, 200_000, seed=2)
    q = 2 / 9
    sigma = math.sqrt(q * (1 - q) / 200_000)
    assert abs(r.statistics["P(a1=2)"] - q) <= 3 * sigma


def test_digit_law_deterministic_across_workers():
    a = digit_law_experiment(2, 3 * 4096 + 5, seed=7, workers=1)
    b = digit_law_experiment(2, 3 * 4096 + 5, seed=7, workers=2)
    assert a.to_json() == b.to_json()


def test_report_shape():
    r = digit_law_experiment(2, 2000, seed=0)
    d = r.to_dict()
    assert set(d) == {"name", "p", "samples", "seed", "parameters", "statistics", "criteria", "pass"}
    assert d["pass"] == all(d["criteria"].values())


# --- independence ------------------------------------------------------------------

@pytest.mark.parametrize("p, lag", [(2, 1), (3, 2)])
def test_independence(p, lag):
    r = independence_experiment(p, 100_000, lag, seed=3)
    assert r.passed, r.statistics


def test_independence_lag_zero_skipped():
    r = independence_experiment(2, 100, 0, seed=0)
    assert r.statistics["skipped"] == 1 and r.criteria == {}


# --- Birkhoff ---------------------------------------------------------------------

def test_birkhoff_limits():
    assert abs(birkhoff_limit(2)[0] - 2.0) < 1e-12
    assert abs(birkhoff_limit(3)[0] - 1.5) < 1e-12
    assert abs(birkhoff_limit(2, "inverse_power", 1.0)[0] - math.log(2)) < 1e-12
    # sum_k (p-1) p^-k / k = -(p-1) log(1 - 1/p)
    assert abs(birkhoff_limit(5, "inverse_power", 1.0)[0] + 4 * math.log(0.8)) < 1e-12


@pytest.mark.parametrize("p, kind, target", [(2, "mean_a", 2.0), (3, "mean_a", 1.5),
                                             (2, "inverse_power", math.log(2))])
def test_birkhoff(p, kind, target):
    r = birkhoff_experiment(p, kind, n=100, samples=2000, seed=4)
    assert r.passed
    assert abs(r.statistics["mean"] - target) / target <= 0.01


def test_birkhoff_rejects_bad_observable():
    with pytest.raises(ValueError):
        birkhoff_experiment(2, "median", n=10, samples=10, seed=0)
    with pytest.raises(ValueError):
        birkhoff_experiment(2, "inverse_power", n=10, samples=10, seed=0, t=0)


def test_orbit_precision_is_enough():
    short = 0
    for a, _, _ in sample_orbits(2, 300, 200, seed=5):
        short += len(a) < 200
    assert short == 0
    assert orbit_precision(3, 100) > 150


# --- limsup scaling -----------------------------------------------------------------

def test_limsup_cdf_is_a_distribution():
    ms = np.linspace(0.5, 20, 60)
    f = [limsup_max_cdf(2, 500, m) for m in ms]
    assert all(b >= a for a, b in zip(f, f[1:]))
    assert f[0] == 0.0 and f[-1] > 0.99


def test_limsup_cdf_matches_simulation():
    # i.i.d. geometric digits with P(a = k) = (p-1) p^-k
    p, n_max, draws = 3, 200, 20_000
    rng = np.random.default_rng(0)
    a = rng.geometric(1 - 1 / p, size=(draws, n_max - 1))
    m = (a / np.log(np.arange(2, n_max + 1))).max(axis=1)
    for level in (1.5, 2.5, 4.0):
        f = limsup_max_cdf(p, n_max, level)
        emp = np.mean(m <= level)
        assert abs(emp - f) <= 4 * math.sqrt(f * (1 - f) / draws) + 1e-9


def test_limsup_exact_median():
    med = limsup_max_median(2, 10_000)
    assert limsup_max_cdf(2, 10_000, med) >= 0.5
    assert limsup_max_cdf(2, 10_000, med * (1 - 1e-9)) < 0.5
    # the median at this horizon sits well above 1.6 / log 2
    assert med > 1.6 / math.log(2)


def test_limsup_small():
    r = limsup_scaling_experiment(2, horizon=2000, samples=64, seed=1)
    assert all(v for k, v in r.criteria.items() if k.startswith("count"))
    assert r.criteria["empirical cdf at exact median within 3 sigma"]
    assert r.statistics["short orbits"] == 0


def test_limsup_deterministic_across_workers():
    a = limsup_scaling_experiment(3, horizon=300, samples=40, seed=2, workers=1)
    b = limsup_scaling_experiment(3, horizon=300, samples=40, seed=2, workers=2)
    assert a.to_json() == b.to_json()


# --- convergence exponent -------------------------------------------------------------

def test_tau_constant_digits_infinite():
    est = convergence_exponent([1] * 1024, GRID)
    assert est.is_infinite and est.alpha is None


def test_tau_linear_digits():
    est = convergence_exponent(list(range(1, 4097)), GRID)
    assert est.classified == "Finite" and abs(est.alpha - 1) <= 0.1


def test_tau_exponential_digits():
    est = convergence_exponent([2**n for n in range(1, 1025)], GRID)
    assert est.classified == "Finite" and abs(est.alpha) <= 0.05


@pytest.mark.parametrize("gamma", [0.5, 2.0])
def test_tau_power_digits(gamma):
    digits = [math.ceil(n**gamma) for n in range(1, 8193)]
    est = convergence_exponent(digits, GRID)
    assert abs(est.alpha - 1 / gamma) <= 0.15


@settings(max_examples=30)
@given(st.lists(st.integers(1, 50), min_size=8, max_size=200))
def test_partial_sums_non_increasing_in_s(digits):
    est = convergence_exponent(digits, GRID)
    ps = est.partial_sums
    assert all(b <= a + 1e-9 for a, b in zip(ps, ps[1:]))


def test_tau_errors():
    with pytest.raises(EmptyGrid):
        convergence_exponent([1, 2, 3], [])
    with pytest.raises(ValueError):
        convergence_exponent([1, 2, 3], GRID, horizon=10)


def test_tau_class_small():
    r = tau_class_experiment(2, samples=100, horizon=512, seed=3)
    assert r.statistics["fraction infinite"] >= 0.99


# --- reports ---------------------------------------------------------------------

def test_report_serialization():
    r = ExperimentReport("x", 2, 1, 0, {"k": 1}, {"nan": math.nan, "v": 1.5}, {"ok": True},
                         {"t": [{"a": 1, "b": 0.5}]})
    assert '"nan": null' in r.to_json()
    assert r.to_csv() == "a,b\n1,0.5\n"
    assert r.passed
