"""Hausdorff dimensions of digit-growth level sets.

Closed forms rest on two monotone equations solved by bisection on [0, 1]:

* ``s(alpha)``: root of ``p^(alpha s) (p^s - 1) = p - 1``, the summed form of
  ``sum_{n>=1} (p-1) p^(-(n+alpha) s) = 1``;
* ``s_M``: root of ``(p-1) sum_{i=1}^M p^(-i s) = 1``, the similarity
  dimension of the bounded-digit set E_M.

Bisection runs until the bracket cannot shrink in floating point, which is far
below the 1e-12 target and keeps residuals small even for steep equations
(large alpha).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Callable, NamedTuple

from .errors import BadAlpha, BadLevel, BadLevels, TooLarge, UnspecifiedCase
from .padic import Prime
from .psi import GrowthClass, PsiSpec

__all__ = [
    "DimResult",
    "PartitionDimension",
    "dim_E_inf",
    "dim_E_inf_sup",
    "dim_E_sup",
    "dim_level_set",
    "dim_limsup_infinite",
    "dim_tau",
    "dim_uniform_lower_bound",
    "partition_dimension",
    "partition_function",
    "solve_s",
    "solve_sM",
]

ENUMERATION_GUARD = 10**7


@dataclass(frozen=True)
class DimResult:
    value: float
    formula: str  # "One", "Zero", "SAlpha" or "SM"
    alpha: float | None = None
    residual: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"dimension {self.value} outside [0, 1]")


ONE = DimResult(1.0, "One")
ZERO = DimResult(0.0, "Zero")


def _bisect(f: Callable[[float], float], lo: float, hi: float) -> float:
    """Root of an increasing ``f`` with ``f(lo) < 0 < f(hi)``."""
    for _ in range(2000):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return lo if abs(f(lo)) < abs(f(hi)) else hi


def _s_alpha_log_gap(p: int, alpha: float, s: float) -> float:
    # log(p^(alpha s) (p^s - 1)) - log(p - 1): increasing, -inf at s = 0
    if s <= 0:
        return -math.inf
    lp = math.log(p)
    return alpha * s * lp + math.log(math.expm1(s * lp)) - math.log(p - 1)


def s_alpha_residual(p: int, alpha: float, s: float) -> float:
    """Relative residual ``|p^(alpha s)(p^s - 1)/(p - 1) - 1|``."""
    return abs(math.expm1(_s_alpha_log_gap(p, alpha, s)))


def solve_s(p, alpha: float) -> DimResult:
    p = Prime(p)
    if not alpha > 0 or math.isinf(alpha):
        raise BadAlpha(f"alpha must be in (0, inf), got {alpha}")
    s = _bisect(lambda t: _s_alpha_log_gap(p, alpha, t), 0.0, 1.0)
    return DimResult(s, "SAlpha", float(alpha), s_alpha_residual(p, alpha, s))


def _sM_gap(p: int, m: int, s: float) -> float:
    return (p - 1) * math.fsum(p ** (-i * s) for i in range(1, m + 1)) - 1


def solve_sM(p, m: int) -> DimResult:
    p = Prime(p)
    if m < 1:
        raise ValueError("M must be >= 1")
    if _sM_gap(p, m, 0.0) == 0:  # p = 2, M = 1: the single map x -> 2/(x+1)
        return DimResult(0.0, "SM", None, 0.0)
    s = _bisect(lambda t: -_sM_gap(p, m, t), 0.0, 1.0)
    return DimResult(s, "SM", None, abs(_sM_gap(p, m, s)))


def _by_class(p: int, psi: PsiSpec, scale: float = 1.0) -> DimResult:
    g = psi.growth
    if g is GrowthClass.SUBLINEAR_ZERO:
        return ONE
    if g is GrowthClass.LINEAR_LIMIT:
        return solve_s(p, psi.alpha * scale)
    return ZERO


def dim_E_sup(p, psi: PsiSpec) -> DimResult:
    """dim of ``{x : limsup a_n/psi(n) = 1}``: 1, s(alpha) or 0 by growth class."""
    return _by_class(Prime(p), psi)


def dim_E_inf(p, psi: PsiSpec) -> DimResult:
    """dim of ``{liminf a_n/psi(n) = 1}`` and of ``{lim a_n/psi(n) = 1}``: always 0."""
    Prime(p)
    return ZERO


def dim_E_inf_sup(p, psi: PsiSpec, alpha1: float, alpha2: float) -> DimResult:
    """dim of ``{liminf a_n/psi(n) = alpha1, limsup a_n/psi(n) = alpha2}``."""
    p = Prime(p)
    if not 0 <= alpha1 < alpha2:
        raise BadLevels(f"need 0 <= alpha1 < alpha2, got {alpha1}, {alpha2}")
    if alpha1 > 0:
        return ZERO
    if math.isinf(alpha2):
        raise UnspecifiedCase("alpha1 = 0, alpha2 = inf is not covered by the known results")
    return _by_class(p, psi, alpha2)


def dim_level_set(p, psi: PsiSpec, alpha2: float) -> DimResult:
    """dim of ``{limsup a_n/psi(n) = alpha2}`` for ``0 < alpha2 < inf``."""
    p = Prime(p)
    if not 0 < alpha2 < math.inf:
        raise BadLevel(f"level must be in (0, inf), got {alpha2}")
    return _by_class(p, psi, alpha2)


def dim_tau(alpha: float) -> DimResult:
    """dim of ``{x : convergence exponent of (a_n) equals alpha}``."""
    if alpha < 0 or math.isnan(alpha):
        raise BadAlpha(f"alpha must be in [0, inf], got {alpha}")
    return ONE if math.isinf(alpha) else ZERO


def dim_limsup_infinite(p) -> DimResult:
    """dim of ``{limsup a_n = inf}``."""
    Prime(p)
    return ONE


def dim_uniform_lower_bound(p, psi: PsiSpec) -> DimResult:
    """dim of ``{a_n >= psi(n) for all n}``."""
    Prime(p)
    return ZERO


# --- partition function --------------------------------------------------

class PartitionDimension(NamedTuple):
    s: float
    count: int


def _closed_Z(p: int, m: int, n: int, s: float) -> float:
    inner = (p - 1) * math.fsum(p ** (-i * s) for i in range(1, m + 1))
    return p ** (-s) * inner**n


def _exponent_histogram(p: int, m: int, n: int, guard: int) -> Counter:
    from .cantor import CantorSpec, enumerate_digit_sequences

    # diam of an order-n cylinder is p^-(1 + sum a), so the centers are not needed
    spec = CantorSpec.bounded(p, m, depth=n)
    return Counter(sum(q.a for q in seq)
                   for seq in enumerate_digit_sequences(spec, n, guard=guard))


def _hist_Z(p: int, hist: Counter, s: float) -> float:
    return math.fsum(cnt * p ** (-(1 + e) * s) for e, cnt in hist.items())


def partition_function(p, m: int, n: int, s_values, mode: str = "closed",
                       guard: int = ENUMERATION_GUARD) -> list[float]:
    """``Z_n(s) = sum diam(I)^s`` over order-n cylinders with digits in [1, M].

    ``mode="enumerate"`` sums over every cylinder; ``mode="closed"`` uses
    ``p^-s ((p-1) sum_{i<=M} p^(-i s))^n``.
    """
    p = Prime(p)
    if mode == "closed":
        return [_closed_Z(p, m, n, s) for s in s_values]
    if mode == "enumerate":
        hist = _exponent_histogram(p, m, n, guard)
        return [_hist_Z(p, hist, s) for s in s_values]
    raise ValueError(f"unknown mode {mode!r}")


def partition_dimension(p, m: int, n: int, mode: str = "enumerate",
                        guard: int = ENUMERATION_GUARD) -> PartitionDimension:
    """Root ``s_n`` of ``Z_n(s) = 1`` and the number of order-n cylinders."""
    p = Prime(p)
    if m < 1 or n < 1:
        raise ValueError("M and n must be >= 1")
    count = ((p - 1) * m) ** n
    if mode == "enumerate":
        if count > guard:
            raise TooLarge(count, guard)
        hist = _exponent_histogram(p, m, n, guard)
        count = sum(hist.values())

        def z(s):
            return _hist_Z(p, hist, s)
    elif mode == "closed":
        def z(s):
            return _closed_Z(p, m, n, s)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if z(0.0) <= 1.0:  # a single cylinder: Z = p^(-(1+n)s) <= 1 everywhere
        return PartitionDimension(0.0, count)
    s = _bisect(lambda t: 1.0 - z(t), 0.0, 1.0)
    return PartitionDimension(s, count)
