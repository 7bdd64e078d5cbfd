import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import brentq

from schneider_lab.dimension import (
    DimResult,
    dim_E_inf,
    dim_E_inf_sup,
    dim_E_sup,
    dim_level_set,
    dim_limsup_infinite,
    dim_tau,
    dim_uniform_lower_bound,
    partition_dimension,
    partition_function,
    solve_s,
    solve_sM,
)
from schneider_lab.errors import BadAlpha, BadLevel, BadLevels, TooLarge, UnspecifiedCase
from schneider_lab.psi import PsiSpec

from spectrum_cases import CASES

LOG2_PHI = math.log2((1 + math.sqrt(5)) / 2)
LOG3_2 = math.log(2, 3)


def oracle_s(p, alpha):
    """Root of the raw series form, by Brent's method on a truncated sum."""
    def f(s):
        n = np.arange(1, 4000)
        return (p - 1) * np.sum(float(p) ** (-(n + alpha) * s)) - 1
    return brentq(f, 1e-3, 1.0, xtol=1e-15)


def run_case(fn, p, psi, args):
    if fn == "e_sup":
        return dim_E_sup(p, psi)
    if fn == "e_inf":
        return dim_E_inf(p, psi)
    if fn == "inf_sup":
        return dim_E_inf_sup(p, psi, *args)
    if fn == "level":
        return dim_level_set(p, psi, *args)
    if fn == "tau":
        return dim_tau(*args)
    if fn == "limsup_inf":
        return dim_limsup_infinite(p)
    return dim_uniform_lower_bound(p, psi)


# --- s(alpha) -----------------------------------------------------------------

def test_solve_s_closed_forms():
    assert abs(solve_s(2, 1).value - LOG2_PHI) <= 1e-12
    assert abs(solve_s(3, 1).value - LOG3_2) <= 1e-12


def test_solve_s_alpha_two():
    # root of 2^(2s)(2^s - 1) = 1, i.e. t^3 - t^2 - 1 = 0 with t = 2^s
    t = max(r.real for r in np.roots([1, -1, 0, -1]) if abs(r.imag) < 1e-12)
    r = solve_s(2, 2)
    assert abs(r.value - math.log2(t)) <= 1e-12
    assert abs(r.value - 0.5514630897455957) <= 1e-12
    assert r.formula == "SAlpha" and r.alpha == 2


@pytest.mark.parametrize("p", [2, 3, 5, 7, 13])
@pytest.mark.parametrize("alpha", [0.1, 0.5, 1.0, 2.0, 7.5])
def test_solve_s_matches_series_oracle(p, alpha):
    r = solve_s(p, alpha)
    assert abs(r.value - oracle_s(p, alpha)) <= 1e-10
    assert r.residual < 1e-10


def test_solve_s_limits():
    assert abs(solve_s(2, 1e-9).value - 1) <= 1e-6
    assert abs(solve_s(2, 1e-6).value - 1) <= 1e-3
    assert solve_s(2, 1e6).value <= 1e-3


@pytest.mark.parametrize("bad", [0, -1, math.inf, math.nan])
def test_solve_s_rejects(bad):
    with pytest.raises(BadAlpha):
        solve_s(2, bad)


def test_solve_s_strictly_decreasing():
    grid = np.geomspace(1e-3, 1e3, 100)
    vals = [solve_s(3, a).value for a in grid]
    assert all(0 < v < 1 for v in vals)
    assert all(b < a for a, b in zip(vals, vals[1:]))


@given(st.sampled_from([2, 3, 5, 7]), st.floats(1e-4, 1e4))
def test_solve_s_residual(p, alpha):
    r = solve_s(p, alpha)
    assert r.residual < 1e-10


# --- s_M ---------------------------------------------------------------------

def test_solve_sM_examples():
    assert solve_sM(2, 1).value == 0.0
    assert abs(solve_sM(2, 2).value - LOG2_PHI) <= 1e-12
    assert abs(solve_sM(3, 1).value - LOG3_2) <= 1e-12
    assert abs(solve_s(2, 1).value - solve_sM(2, 2).value) <= 1e-10


@pytest.mark.parametrize("p", [2, 3, 5])
def test_solve_sM_increases_to_one(p):
    vals = [solve_sM(p, m).value for m in range(1, 12)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1
    for m in (2, 5):
        r = solve_sM(p, m)
        assert r.residual < 1e-10


# --- spectrum ------------------------------------------------------------------

@pytest.mark.parametrize("case", CASES, ids=[f"{c[0]}-{i}" for i, c in enumerate(CASES)])
def test_spectrum_table(case):
    fn, p, psi, args, tag, alpha_eff = case
    r = run_case(fn, p, psi, args)
    assert isinstance(r, DimResult) and r.formula == tag
    if tag == "One":
        assert r.value == 1.0
    elif tag == "Zero":
        assert r.value == 0.0
    else:
        assert abs(r.value - oracle_s(p, alpha_eff)) <= 1e-10


def test_spectrum_fixture_size():
    assert len(CASES) == 30
    assert {c[4] for c in CASES} == {"One", "Zero", "SAlpha"}


def test_unspecified_case():
    with pytest.raises(UnspecifiedCase):
        dim_E_inf_sup(2, PsiSpec.linear(1), 0, math.inf)


@pytest.mark.parametrize("a1, a2", [(1, 1), (2, 1), (-1, 2)])
def test_bad_levels(a1, a2):
    with pytest.raises(BadLevels):
        dim_E_inf_sup(2, PsiSpec.log(), a1, a2)


@pytest.mark.parametrize("a2", [0, -1, math.inf])
def test_bad_level(a2):
    with pytest.raises(BadLevel):
        dim_level_set(2, PsiSpec.log(), a2)


@pytest.mark.parametrize("psi", [PsiSpec.log(), PsiSpec.linear(1), PsiSpec.linear(0.3), PsiSpec.nlogn()])
def test_sup_dominates_inf_sup(psi):
    top = dim_E_sup(3, psi).value
    for a2 in (1.0, 1.5, 2.0, 4.0):
        assert top >= dim_E_inf_sup(3, psi, 0, a2).value
    assert top == dim_E_inf_sup(3, psi, 0, 1.0).value


def test_level_set_matches_inf_sup():
    psi = PsiSpec.linear(1.5)
    for a2 in (0.5, 1.0, 3.0):
        assert dim_level_set(5, psi, a2) == dim_E_inf_sup(5, psi, 0, a2)


def test_dim_tau_rejects_negative():
    with pytest.raises(BadAlpha):
        dim_tau(-1)


def test_dimresult_range_enforced():
    with pytest.raises(ValueError):
        DimResult(1.5, "One")


# --- partition function ---------------------------------------------------------

@pytest.mark.parametrize("p, m, n", [(p, m, n) for p in (2, 3) for m in (1, 2, 3) for n in (1, 3, 5, 8)
                                     if ((p - 1) * m) ** n <= 2 * 10**5])
def test_partition_enumeration_matches_closed_form(p, m, n):
    grid = [0.1, 0.3, 0.5, 0.7, 0.9]
    a = partition_function(p, m, n, grid, mode="enumerate")
    b = partition_function(p, m, n, grid, mode="closed")
    assert np.allclose(a, b, rtol=1e-12, atol=0)


def test_partition_exact_at_rational_point():
    # at s = 1, Z_n = p^-1 * total measure, an exact rational
    p, m, n = 3, 2, 4
    z = partition_function(p, m, n, [1.0], mode="enumerate")[0]
    exact = Fraction(1, p) * ((p - 1) * sum(Fraction(1, p**i) for i in range(1, m + 1))) ** n
    assert abs(z - float(exact)) <= 1e-15


def test_partition_first_orders():
    # s_1: u^2 + u^3 = 1 with u = 2^-s
    u = brentq(lambda u: u**2 + u**3 - 1, 0.5, 1, xtol=1e-16)
    s1 = partition_dimension(2, 2, 1)
    assert abs(s1.s - (-math.log2(u))) <= 1e-12 and s1.count == 2
    s2 = partition_dimension(2, 2, 2)
    assert abs(s2.s - 0.5113) <= 1e-3 and s2.count == 4


def test_partition_converges_to_sM():
    sm = solve_sM(2, 2).value
    vals = [partition_dimension(2, 2, n, mode="closed").s for n in range(1, 21)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert abs(vals[-1] - sm) <= 0.05
    assert all(v < sm for v in vals)


def test_partition_single_cylinder():
    r = partition_dimension(2, 1, 5)
    assert r == (0.0, 1)


def test_partition_guard():
    with pytest.raises(TooLarge) as e:
        partition_dimension(3, 3, 12, guard=10**6)
    assert e.value.guard == 10**6 and e.value.count == 6**12
