"""Cantor subsets of pZ_p defined by digit constraints.

Three constructions are supported, each a product set of allowed ``a``-digits
per position (``b`` is always free in ``[1, p-1]``):

* ``em``: ``1 <= a_n <= M`` everywhere (the bounded-digit set E_M);
* ``empsi``: ``a_n = floor(psi(n)) + 1`` at ``n = 2^k`` (k >= 1), bounded by M elsewhere;
* ``fnk``: ``a_n = floor(alpha n) + 1`` at ``n = n_k`` (k >= 0), bounded by M elsewhere,
  where ``n_0 = 1`` and ``n_{k+1} >= (k+2) n_k``; the default is ``n_k = (k+1)!``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cf import Cylinder, DigitPair, convergents
from .errors import BudgetExceeded, PrecisionExhaustedError, TooLarge
from .padic import Indeterminate, PAdicInt, Prime, from_rational, int_valuation, padic_abs_distance
from .psi import GrowthClass, PsiSpec
from .report import ExperimentReport
from .streams import block_rng

__all__ = [
    "CantorSpec",
    "constraint_at",
    "cover_report",
    "enumerate_cylinders",
    "enumerate_digit_sequences",
    "holder_check",
    "holder_k0",
    "holder_map",
    "min_log_diameter",
    "sample_point",
]

GUARD = 10**7


def _factorial_nk(upto: int) -> list[int]:
    out, k = [], 0
    while True:
        n = math.factorial(k + 1)
        if n > upto:
            return out
        out.append(n)
        k += 1


@dataclass(frozen=True)
class CantorSpec:
    prime: int
    kind: str  # "em", "empsi" or "fnk"
    M: int
    depth: int
    psi: PsiSpec | None = None
    alpha: float | None = None
    nk: tuple[int, ...] | None = None  # custom n_k; None means (k+1)!

    def __post_init__(self):
        object.__setattr__(self, "prime", Prime(self.prime))
        if self.kind not in ("em", "empsi", "fnk"):
            raise ValueError(f"unknown construction {self.kind!r}")
        if self.M < 1 or (self.kind != "em" and self.M < 2):
            raise ValueError("M must be >= 2 (>= 1 for the plain bounded set)")
        if self.depth < 0:
            raise ValueError("depth must be non-negative")
        if self.kind == "empsi" and self.psi is None:
            raise ValueError("empsi needs psi")
        if self.kind == "fnk":
            if self.alpha is None or self.alpha <= 0:
                raise ValueError("fnk needs alpha > 0")
            if self.nk is not None:
                _check_nk(self.nk, self.depth)

    @classmethod
    def bounded(cls, p, m: int, depth: int = 64):
        return cls(p, "em", m, depth)

    @classmethod
    def empsi(cls, p, m: int, psi: PsiSpec, depth: int = 128):
        return cls(p, "empsi", m, depth, psi=psi)

    @classmethod
    def fnk(cls, p, m: int, alpha: float, depth: int = 720, nk=None):
        return cls(p, "fnk", m, depth, alpha=float(alpha),
                   nk=None if nk is None else tuple(int(v) for v in nk))

    def marked_positions(self, upto: int | None = None) -> list[int]:
        """Positions with a forced digit, up to ``upto`` (default: the depth)."""
        upto = self.depth if upto is None else upto
        if self.kind == "em":
            return []
        if self.kind == "empsi":
            return [2**k for k in range(1, upto.bit_length()) if 2**k <= upto]
        if self.nk is None:
            return _factorial_nk(upto)
        _check_nk(self.nk, upto)
        return [n for n in self.nk if n <= upto]

    def forced_digit(self, n: int) -> int:
        if self.kind == "empsi":
            return math.floor(self.psi(n)) + 1
        return math.floor(self.alpha * n) + 1

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "p": int(self.prime),
            "M": self.M,
            "psi": self.psi.to_json() if self.psi else None,
            "alpha": self.alpha,
            "nk_rule": ("factorial" if self.nk is None else "custom") if self.kind == "fnk" else None,
            "depth": self.depth,
        }


def _check_nk(nk, upto: int):
    if not nk or nk[0] != 1:
        raise ValueError("n_k must start with n_0 = 1")
    for k in range(len(nk) - 1):
        if nk[k + 1] < (k + 2) * nk[k]:
            raise ValueError(f"n_{k + 1} = {nk[k + 1]} < {k + 2} * n_{k}")
    # the next term is at least (K+2) n_K; it must lie beyond the depth
    if (len(nk) + 1) * nk[-1] <= upto and nk[-1] <= upto:
        raise ValueError(f"n_k sequence too short to fix the profile up to {upto}")


def _is_marked(spec: CantorSpec, n: int) -> bool:
    if spec.kind == "empsi":
        return n >= 2 and n & (n - 1) == 0
    if spec.kind == "fnk":
        return n in spec.marked_positions(n)
    return False


def constraint_at(spec: CantorSpec, n: int) -> tuple[int, ...]:
    """Allowed values of ``a_n`` (1-based index)."""
    if n < 1:
        raise ValueError("positions start at 1")
    if _is_marked(spec, n):
        return (spec.forced_digit(n),)
    return tuple(range(1, spec.M + 1))


def _profile(spec: CantorSpec, depth: int) -> list[tuple[int, ...]]:
    marked = set(spec.marked_positions(depth))
    free = tuple(range(1, spec.M + 1))
    return [(spec.forced_digit(n),) if n in marked else free for n in range(1, depth + 1)]


def sample_point(spec: CantorSpec, depth: int, rng: np.random.Generator):
    """Draw digits uniformly from the profile; return the pairs and the point.

    The point is the convergent ``P_n/Q_n`` embedded at precision
    ``1 + sum a``, which pins down exactly the sampled order-n cylinder.
    """
    if depth > spec.depth:
        raise BudgetExceeded(f"depth {depth} exceeds the budget {spec.depth}")
    p = spec.prime
    pairs = []
    for allowed in _profile(spec, depth):
        a = allowed[0] if len(allowed) == 1 else allowed[int(rng.integers(len(allowed)))]
        b = int(rng.integers(1, p))
        pairs.append(DigitPair(a, b))
    return tuple(pairs), _embed(p, pairs)


def _embed(p: int, pairs) -> PAdicInt:
    if not pairs:
        return PAdicInt(p, 0, 1)
    c = convergents(p, pairs)[-1]
    return from_rational(p, Fraction(c.P, c.Q), 1 + c.exponent_sum)


def _count(spec: CantorSpec, depth: int) -> int:
    return math.prod(len(a) for a in _profile(spec, depth)) * (spec.prime - 1) ** depth


def enumerate_digit_sequences(spec: CantorSpec, depth: int, guard: int = GUARD):
    """Every admissible ``((a_1, b_1), ..., (a_n, b_n))``, lexicographically."""
    count = _count(spec, depth)
    if count > guard:
        raise TooLarge(count, guard)
    bs = range(1, spec.prime)
    choices = [[DigitPair(a, b) for a in allowed for b in bs]
               for allowed in _profile(spec, depth)]
    return itertools.product(*choices)


def enumerate_cylinders(spec: CantorSpec, depth: int, guard: int = GUARD):
    """Stream the order-``depth`` cylinders consistent with the profile."""
    p = spec.prime
    for pairs in enumerate_digit_sequences(spec, depth, guard):
        P0, Q0, P1, Q1 = 1, 0, 0, 1
        s = 0
        for a, b in pairs:
            pa = p**a
            P0, Q0, P1, Q1 = P1, Q1, b * P1 + pa * P0, b * Q1 + pa * Q0
            s += a
        yield Cylinder(p, pairs, P1, Q1, s)


def _root(z) -> float:
    if z(0.0) <= 1.0:
        return 0.0
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if z(mid) > 1.0:
            lo = mid
        else:
            hi = mid
    return hi


def cover_report(spec: CantorSpec, depths, grid=(0.25, 0.5, 0.75), mode: str = "closed",
                 guard: int = GUARD) -> list[dict]:
    """Per-depth cover statistics: count, total measure, ``Z_n(s)`` on a grid, root ``s_n``.

    ``closed`` mode uses the product structure of the profile; ``enumerate``
    sums over every cylinder and raises :class:`TooLarge` past ``guard``.
    """
    p = spec.prime
    depths = list(depths)
    if mode == "enumerate":
        # fail before doing any work if some depth is out of reach
        for n in depths:
            count = _count(spec, n)
            if count > guard:
                raise TooLarge(count, guard)
    rows = []
    for n in depths:
        if mode == "enumerate":
            hist: dict[int, int] = {}
            for seq in enumerate_digit_sequences(spec, n, guard):
                e = sum(q.a for q in seq)
                hist[e] = hist.get(e, 0) + 1
            count = sum(hist.values())
            measure = sum(Fraction(c, p**e) for e, c in hist.items())

            def z(s, hist=hist):
                return math.fsum(c * p ** (-(1 + e) * s) for e, c in hist.items())
        elif mode == "closed":
            prof = _profile(spec, n)
            count = math.prod(len(a) for a in prof) * (p - 1) ** n
            measure = math.prod((Fraction((p - 1) * sum(Fraction(1, p**a) for a in al))
                                 for al in prof), start=Fraction(1))

            def z(s, prof=prof):
                logz = -s * math.log(p)
                for al in prof:
                    logz += math.log((p - 1) * math.fsum(p ** (-a * s) for a in al))
                return math.exp(logz) if logz < 700 else math.inf
        else:
            raise ValueError(f"unknown mode {mode!r}")
        row = {"n": n, "count": count, "total_measure": float(measure),
               "total_measure_exact": f"{measure.numerator}/{measure.denominator}"}
        for s in grid:
            row[f"Z({s})"] = z(s)
        row["s_n"] = _root(z)
        rows.append(row)
    return rows


# --- the digit-deleting map ------------------------------------------------

def holder_map(pairs, marked) -> tuple[DigitPair, ...]:
    """Drop the pairs at the (1-based) ``marked`` positions, keeping order."""
    marked = set(marked)
    return tuple(DigitPair(*q) for i, q in enumerate(pairs, 1) if i not in marked)


def min_log_diameter(spec: CantorSpec, n: int) -> int:
    """``log_p`` of the smallest diameter among admissible order-n cylinders.

    A cylinder has diameter ``p^-(1 + sum a)``, and the profile is a product
    of per-position choices, so the minimum takes the largest allowed digit at
    every position. This avoids enumerating the ``2^n``-sized family.
    """
    return -(1 + sum(max(constraint_at(spec, i)) for i in range(1, n + 1)))


def holder_k0(spec: CantorSpec, epsilon: float, kmax: int = 256) -> int:
    """Smallest k0 with the exponent condition holding for every k in [k0, kmax].

    The condition is ``1 - (sum_{i<=k} floor psi(2^i) + M + k + floor psi(2^k)) / 2^k
    >= 1/(1+epsilon)``.
    """
    target = 1 / (1 + epsilon)
    acc = 0
    ok = []
    for k in range(1, kmax + 1):
        fk = math.floor(spec.psi(2**k))
        acc += fk
        ok.append(1 - (acc + spec.M + k + fk) / 2**k >= target)
    if not ok[-1]:
        raise ValueError("exponent condition fails at the scan limit; is psi sublinear?")
    k0 = kmax
    while k0 > 1 and ok[k0 - 2]:
        k0 -= 1
    return k0


def holder_check(spec: CantorSpec, epsilon: float, pairs_count: int = 1000,
                 depth: int = 128, seed: int = 0) -> ExperimentReport:
    """Test ``|f(x) - f(y)|_p <= c |x - y|_p^(1/(1+eps))`` on sampled pairs.

    ``f`` deletes the digits at positions ``2^k``. With ``n0 = 2^k0`` and
    ``delta`` the smallest diameter of an admissible order-n0 cylinder,
    ``c = max(1, delta^(-1/(1+eps)))``. Distances are powers of p, so the test
    compares valuations: ``v_f >= v_xy/(1+eps) - log_p c``.
    """
    if spec.kind != "empsi":
        raise ValueError("holder_check applies to the empsi construction")
    if spec.psi.growth is not GrowthClass.SUBLINEAR_ZERO:
        raise ValueError("holder_check needs a sublinear psi")
    p = spec.prime
    k0 = holder_k0(spec, epsilon)
    n0 = 2**k0
    log_delta = min_log_diameter(spec, n0)
    log_c = max(0.0, -log_delta / (1 + epsilon))
    marked = spec.marked_positions(depth)

    violations = skipped = close = plain_ok = 0
    exps = []
    for i in range(pairs_count):
        rng = block_rng(seed, i)
        xp, x = sample_point(spec, depth, rng)
        yp, y = sample_point(spec, depth, rng)
        if xp == yp:
            skipped += 1
            continue
        dxy = padic_abs_distance(x, y)
        fx, fy = (_embed(p, holder_map(q, marked)) for q in (xp, yp))
        dfx = padic_abs_distance(fx, fy)
        if dxy is Indeterminate or dfx is Indeterminate:
            raise PrecisionExhaustedError("embedding precision cannot resolve the distance")
        v_xy = int_valuation(p, dxy.denominator)
        v_f = int_valuation(p, dfx.denominator)
        close += v_xy > -log_delta
        if -v_f > log_c - v_xy / (1 + epsilon) + 1e-9:
            violations += 1
        if -v_f <= -v_xy / (1 + epsilon) + 1e-9:
            plain_ok += 1
        exps.append(v_f / v_xy)
    tested = pairs_count - skipped
    mean_exp = float(np.mean(exps)) if exps else 0.0
    bound = 1 / (1 + epsilon)
    return ExperimentReport(
        "holder", p, pairs_count, seed,
        {"M": spec.M, "psi": spec.psi.to_json().get("kind"), "epsilon": epsilon, "depth": depth},
        {"tested pairs": tested, "skipped identical": skipped, "violations": violations,
         "k0": k0, "n0": n0, "log_p delta": log_delta, "log_p c": log_c,
         "pairs closer than delta": close, "pairs within c=1 bound": plain_ok,
         "mean exponent": mean_exp, "min exponent": float(min(exps)) if exps else 0.0,
         "exponent bound": bound},
        {"zero violations": violations == 0,
         "mean exponent >= 1/(1+eps) - 0.05": mean_exp >= bound - 0.05})
