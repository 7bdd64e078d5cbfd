import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schneider_lab.cantor import (
    CantorSpec,
    constraint_at,
    cover_report,
    enumerate_cylinders,
    enumerate_digit_sequences,
    holder_check,
    holder_k0,
    holder_map,
    min_log_diameter,
    sample_point,
)
from schneider_lab.cf import DigitPair, cylinder_contains, expand_padic
from schneider_lab.dimension import partition_dimension
from schneider_lab.errors import BudgetExceeded, TooLarge
from schneider_lab.psi import PsiSpec
from schneider_lab.streams import block_rng

SQRT = PsiSpec.sqrt()


# --- construction ----------------------------------------------------------------

def test_constraint_examples():
    spec = CantorSpec.empsi(2, 3, SQRT, 64)
    assert constraint_at(spec, 4) == (3,)
    assert constraint_at(spec, 5) == (1, 2, 3)
    fnk = CantorSpec.fnk(2, 2, 1.0, 720)
    assert constraint_at(fnk, 2) == (3,)
    assert constraint_at(CantorSpec.bounded(3, 4), 2**5) == (1, 2, 3, 4)


def test_constraint_position_one():
    # m_k starts at k = 1, n_k at k = 0
    assert constraint_at(CantorSpec.empsi(2, 2, SQRT, 8), 1) == (1, 2)
    assert constraint_at(CantorSpec.fnk(2, 2, 1.5, 8), 1) == (2,)
    with pytest.raises(ValueError):
        constraint_at(CantorSpec.bounded(2, 2), 0)


def test_marked_positions():
    assert CantorSpec.empsi(2, 2, SQRT, 100).marked_positions() == [2, 4, 8, 16, 32, 64]
    assert CantorSpec.fnk(2, 2, 1.0, 720).marked_positions() == [1, 2, 6, 24, 120, 720]
    assert CantorSpec.bounded(2, 2, 50).marked_positions() == []


def test_custom_nk():
    spec = CantorSpec.fnk(3, 2, 0.5, 100, nk=[1, 3, 10, 50])
    assert spec.marked_positions() == [1, 3, 10, 50]
    assert spec.to_json()["nk_rule"] == "custom"
    with pytest.raises(ValueError):
        CantorSpec.fnk(3, 2, 0.5, 100, nk=[1, 2, 5])  # 5 < 3 * 2
    with pytest.raises(ValueError):
        CantorSpec.fnk(3, 2, 0.5, 1000, nk=[1, 3])  # cannot fix positions up to 1000


@pytest.mark.parametrize("kwargs", [
    dict(p=2, kind="empsi", M=1, depth=5, psi=SQRT),
    dict(p=2, kind="fnk", M=2, depth=5, alpha=0.0),
    dict(p=2, kind="empsi", M=2, depth=5),
    dict(p=4, kind="em", M=2, depth=5),
    dict(p=2, kind="other", M=2, depth=5),
])
def test_spec_validation(kwargs):
    p = kwargs.pop("p")
    with pytest.raises(ValueError):
        CantorSpec(p, **kwargs)


def test_spec_json():
    j = CantorSpec.fnk(2, 2, 1.0, 720).to_json()
    assert j == {"kind": "fnk", "p": 2, "M": 2, "psi": None, "alpha": 1.0,
                 "nk_rule": "factorial", "depth": 720}


# --- sampling ---------------------------------------------------------------------

def test_bounded_samples():
    spec = CantorSpec.bounded(2, 2, 30)
    pairs, _ = sample_point(spec, 30, block_rng(0, 0))
    assert all(q.a in (1, 2) for q in pairs)


def test_empsi_forced_digits():
    spec = CantorSpec.empsi(2, 2, SQRT, 64)
    pairs, _ = sample_point(spec, 64, block_rng(1, 0))
    a = [q.a for q in pairs]
    assert (a[3], a[7], a[15], a[31], a[63]) == (3, 3, 5, 6, 9)


def test_sample_budget():
    with pytest.raises(BudgetExceeded):
        sample_point(CantorSpec.bounded(2, 2, 10), 11, block_rng(0, 0))


@settings(max_examples=60)
@given(st.sampled_from([2, 3, 5]), st.sampled_from(["em", "empsi", "fnk"]), st.integers(1, 60),
       st.integers(0, 2**32))
def test_sample_roundtrip(p, kind, depth, seed):
    spec = {"em": CantorSpec.bounded(p, 3, 60), "empsi": CantorSpec.empsi(p, 2, SQRT, 60),
            "fnk": CantorSpec.fnk(p, 2, 0.7, 60)}[kind]
    pairs, x = sample_point(spec, depth, block_rng(seed, 0))
    assert x.precision == 1 + sum(q.a for q in pairs)
    assert expand_padic(x, depth).pairs == pairs
    for n, q in enumerate(pairs, 1):
        assert q.a in constraint_at(spec, n) and 1 <= q.b < p


def test_fnk_realizes_alpha():
    alpha, m = 1.0, 2
    spec = CantorSpec.fnk(2, m, alpha, 720)
    nk = spec.marked_positions()[-1]
    for seed in range(5):
        pairs, _ = sample_point(spec, 720, block_rng(seed, 0))
        tail = max(q.a / n for n, q in enumerate(pairs, 1) if n >= nk)
        assert alpha <= tail <= alpha + 2 / nk


# --- enumeration -----------------------------------------------------------------

def test_enumeration_counts():
    assert sum(1 for _ in enumerate_cylinders(CantorSpec.bounded(2, 2), 3)) == 8
    assert sum(1 for _ in enumerate_cylinders(CantorSpec.empsi(2, 2, SQRT, 8), 4)) == 4
    assert sum(1 for _ in enumerate_cylinders(CantorSpec.bounded(3, 2), 3)) == 64


@pytest.mark.parametrize("p, m, n", [(2, 2, 3), (3, 2, 4), (5, 3, 2), (2, 4, 5)])
def test_cover_measure_identity(p, m, n):
    total = sum(c.measure for c in enumerate_cylinders(CantorSpec.bounded(p, m), n))
    assert total == ((p - 1) * sum(Fraction(1, p**i) for i in range(1, m + 1))) ** n


def test_cover_measure_example():
    total = sum(c.measure for c in enumerate_cylinders(CantorSpec.bounded(2, 2), 3))
    assert total == Fraction(27, 64)


def test_enumerated_cylinders_are_distinct_and_contain_their_centers():
    from schneider_lab.padic import from_rational

    cyl = list(enumerate_cylinders(CantorSpec.bounded(3, 2), 3))
    assert len(set(cyl)) == len(cyl)
    for c in cyl:
        assert cylinder_contains(c, from_rational(3, c.center, c.radius_exp + 2))


def test_enumeration_guard():
    with pytest.raises(TooLarge) as e:
        next(iter(enumerate_cylinders(CantorSpec.bounded(2, 2), 30)))
    assert e.value.guard == 10**7
    with pytest.raises(TooLarge):
        enumerate_digit_sequences(CantorSpec.bounded(3, 3), 5, guard=100)


def test_cover_report_modes_agree():
    spec = CantorSpec.empsi(2, 2, SQRT, 12)
    a = cover_report(spec, range(1, 13), mode="closed")
    b = cover_report(spec, range(1, 13), mode="enumerate")
    for ra, rb in zip(a, b):
        assert ra["count"] == rb["count"]
        assert ra["total_measure_exact"] == rb["total_measure_exact"]
        assert math.isclose(ra["s_n"], rb["s_n"], rel_tol=1e-12, abs_tol=1e-15)


def test_cover_report_em_matches_partition():
    rows = cover_report(CantorSpec.bounded(2, 2, 10), range(1, 11))
    for r in rows:
        assert math.isclose(r["s_n"], partition_dimension(2, 2, r["n"], mode="closed").s, abs_tol=1e-14)
    s = [r["s_n"] for r in rows]
    assert all(b > a for a, b in zip(s, s[1:]))


# --- Hölder map -------------------------------------------------------------------

def test_holder_map_examples():
    pairs = [DigitPair(i, 1) for i in range(1, 6)]
    assert [q.a for q in holder_map(pairs, {2, 4})] == [1, 3, 5]
    assert holder_map(pairs, set()) == tuple(pairs)


@settings(max_examples=30)
@given(st.integers(0, 2**32))
def test_holder_image_lies_in_em(seed):
    spec = CantorSpec.empsi(3, 2, SQRT, 128)
    pairs, _ = sample_point(spec, 128, block_rng(seed, 0))
    image = holder_map(pairs, spec.marked_positions())
    assert len(image) == 128 - 7  # 2, 4, ..., 128
    assert all(1 <= q.a <= 2 for q in image)


@pytest.mark.parametrize("psi", [PsiSpec.sqrt(), PsiSpec.log(), PsiSpec.power(0.3)])
def test_min_diameter_matches_enumeration(psi):
    spec = CantorSpec.empsi(2, 2, psi, 16)
    for n in (1, 4, 9, 12):
        brute = min(-c.radius_exp for c in enumerate_cylinders(spec, n))
        assert min_log_diameter(spec, n) == brute


def test_holder_k0():
    spec = CantorSpec.empsi(2, 2, SQRT, 128)
    k0 = holder_k0(spec, 0.5)
    assert k0 == 8

    def lhs(k):
        acc = sum(math.floor(math.sqrt(2**i)) for i in range(1, k + 1))
        return 1 - (acc + 2 + k + math.floor(math.sqrt(2**k))) / 2**k

    assert lhs(k0 - 1) < 1 / 1.5 <= lhs(k0)


def test_holder_check_small():
    spec = CantorSpec.empsi(2, 2, SQRT, 64)
    r = holder_check(spec, 0.5, pairs_count=150, depth=64, seed=3)
    assert r.statistics["violations"] == 0 and r.passed
    assert r.statistics["tested pairs"] + r.statistics["skipped identical"] == 150


def test_holder_check_skips_identical_pairs():
    # one free binary digit: half the pairs coincide
    spec = CantorSpec.empsi(2, 2, SQRT, 2)
    r = holder_check(spec, 0.5, pairs_count=200, depth=2, seed=0)
    assert 50 < r.statistics["skipped identical"] < 150


def test_holder_check_needs_sublinear_psi():
    with pytest.raises(ValueError):
        holder_check(CantorSpec.empsi(2, 2, PsiSpec.linear(1), 32), 0.5, 10, 32)
    with pytest.raises(ValueError):
        holder_check(CantorSpec.bounded(2, 2, 32), 0.5, 10, 32)
