"""Schneider's p-adic continued fraction map and derived objects.

For ``x`` in pZ_p the map is ``T(x) = p**a / x - b`` where ``a = v_p(x)`` and
``b`` in ``[1, p-1]`` is the residue of ``p**a / x`` modulo p. Iterating it
produces digit pairs ``(a_n, b_n)`` and the expansion

    x = p^a1 / (b1 + p^a2 / (b2 + ...))

Two iteration routes are provided. :func:`step_padic` is the literal map on a
truncated p-adic integer (one modular inversion per step). :func:`expand_padic`
instead tracks the pair ``A = N_{n-1} / p^S``, ``B = N_n / p^S`` where
``N_n = P_n - Q_n x`` obeys the same three-term recurrence as the convergents,
so each step costs a shift and a small multiple instead of an inversion.
Both routes yield identical digits; the tests check one against the other.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .errors import EmptyInput, InsufficientPrecision, NotInDomain, NotInPZp
from .padic import (
    Indeterminate,
    PAdicInt,
    Prime,
    int_valuation,
    invert_unit,
    valuation,
)

__all__ = [
    "Convergent",
    "Cylinder",
    "DigitPair",
    "Expansion",
    "Status",
    "convergents",
    "cylinder",
    "cylinder_contains",
    "evaluate",
    "evaluate_nested",
    "expand_padic",
    "expand_rational",
    "padic_pairs",
    "prefix_cylinders",
    "step_padic",
    "step_rational",
]


class Status(enum.Enum):
    TERMINATED = "Terminated"
    TAIL_DETECTED = "TailDetected"
    HORIZON_REACHED = "HorizonReached"
    PRECISION_EXHAUSTED = "PrecisionExhausted"
    ZERO_REMAINDER = "ZeroRemainder"

    def __str__(self):
        return self.value


class DigitPair(NamedTuple):
    a: int
    b: int


def _check_pairs(p: int, pairs) -> tuple[DigitPair, ...]:
    out = []
    for a, b in pairs:
        if a < 1 or not 1 <= b <= p - 1:
            raise ValueError(f"invalid digit pair ({a}, {b}) for p={p}")
        out.append(DigitPair(a, b))
    return tuple(out)


@dataclass(frozen=True)
class Expansion:
    prime: int
    pairs: tuple[DigitPair, ...]
    status: Status
    tail_start: int | None = None

    def __post_init__(self):
        if self.status is Status.TAIL_DETECTED:
            tail = (1, self.prime - 1)
            if self.tail_start is None or any(
                    tuple(q) != tail for q in self.pairs[self.tail_start:]):
                raise ValueError("tail pairs must all equal (1, p-1)")

    @property
    def a_digits(self) -> list[int]:
        return [q.a for q in self.pairs]

    def to_json(self) -> dict:
        return {
            "p": int(self.prime),
            "pairs": [[q.a, q.b] for q in self.pairs],
            "status": self.status.value,
            "tail_start": self.tail_start,
        }


class Convergent(NamedTuple):
    P: int
    Q: int
    n: int
    exponent_sum: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.P, self.Q)


@dataclass(frozen=True, eq=False)
class Cylinder:
    """Order-n cylinder: the ball ``P/Q + p**(1 + sum a) Z_p``."""

    prime: int
    pairs: tuple[DigitPair, ...]
    P: int
    Q: int
    exponent_sum: int

    @property
    def order(self) -> int:
        return len(self.pairs)

    @property
    def center(self) -> Fraction:
        return Fraction(self.P, self.Q)

    @property
    def radius_exp(self) -> int:
        return 1 + self.exponent_sum

    @property
    def measure_exp(self) -> int:
        return self.exponent_sum

    @property
    def radius(self) -> Fraction:
        return Fraction(1, self.prime**self.radius_exp)

    @property
    def measure(self) -> Fraction:
        return Fraction(1, self.prime**self.measure_exp)

    def __eq__(self, other):
        if not isinstance(other, Cylinder):
            return NotImplemented
        return self.prime == other.prime and self.pairs == other.pairs

    def __hash__(self):
        return hash((self.prime, self.pairs))

    def to_json(self) -> dict:
        c = self.center
        return {
            "pairs": [[q.a, q.b] for q in self.pairs],
            "center": f"{c.numerator}/{c.denominator}",
            "radius_exp": self.radius_exp,
            "measure_exp": self.measure_exp,
        }


# --- rational route -------------------------------------------------------

def step_rational(p, x):
    """One application of the map to an exact rational in pZ_p.

    Returns ``(DigitPair, remainder)`` or ``Status.TERMINATED`` when ``x == 0``.
    """
    p = Prime(p)
    x = Fraction(x)
    if x == 0:
        return Status.TERMINATED
    num, den = x.numerator, x.denominator
    if den % p == 0:
        raise NotInDomain(f"{p} divides the denominator of {x}")
    a = int_valuation(p, num)
    if a < 1:
        raise NotInDomain(f"v_{p}({x}) = {a} < 1")
    unit_num = num // p**a
    # p**a / x = den / unit_num
    b = den * pow(unit_num % p, -1, p) % p
    remainder = Fraction(den, unit_num) - b
    return DigitPair(a, b), remainder


def expand_rational(p, x, max_steps: int = 100, tail_window: int = 20) -> Expansion:
    """Iterate :func:`step_rational` until termination, a detected tail, or the horizon.

    A tail is reported once the last ``tail_window`` pairs all equal
    ``(1, p-1)``; ``tail_start`` is the first index of that run. The check is
    heuristic: every infinite expansion of a rational ends in this tail, but
    no bound on where it starts is known.
    """
    p = Prime(p)
    x = Fraction(x)
    tail = DigitPair(1, p - 1)
    pairs: list[DigitPair] = []
    run = 0
    while len(pairs) < max_steps:
        out = step_rational(p, x)
        if out is Status.TERMINATED:
            return Expansion(p, tuple(pairs), Status.TERMINATED)
        pair, x = out
        pairs.append(pair)
        run = run + 1 if pair == tail else 0
        if tail_window > 0 and run >= tail_window:
            return Expansion(p, tuple(pairs), Status.TAIL_DETECTED, len(pairs) - run)
    if x == 0:
        return Expansion(p, tuple(pairs), Status.TERMINATED)
    return Expansion(p, tuple(pairs), Status.HORIZON_REACHED)


# --- truncated p-adic route ----------------------------------------------

def step_padic(x: PAdicInt):
    """One application of the map at finite precision.

    Returns ``(DigitPair, remainder)`` with ``remainder.precision ==
    x.precision - a``, or a :class:`Status`:

    * ``PRECISION_EXHAUSTED`` if ``x.precision <= 1`` (only the forced zero
      digit ``c_0`` is known, so nothing can be read);
    * ``ZERO_REMAINDER`` if every known digit is zero.
    """
    if not x.in_pzp():
        raise NotInPZp(f"constant digit of x is {x.value % x.prime}, not 0")
    p, n = x.prime, x.precision
    if n <= 1:
        return Status.PRECISION_EXHAUSTED
    a = valuation(x)
    if a is Indeterminate:
        return Status.ZERO_REMAINDER
    k = n - a
    u = x.value // p**a
    inv = invert_unit(p, u, k)
    b = inv % p
    return DigitPair(a, b), PAdicInt(p, (inv - b) % p**k, k)


def padic_pairs(p: int, value: int, precision: int, max_steps: int):
    """Digit pairs of the residue ``value`` (mod ``p**precision``) of a point of pZ_p.

    Fast core shared by :func:`expand_padic` and the experiments. Returns
    ``(a_list, b_list, status)``.
    """
    a_out: list[int] = []
    b_out: list[int] = []
    prec = precision
    mod = p**prec
    A, B = 1, (-value) % mod
    if p == 2:
        while len(a_out) < max_steps:
            if prec <= 1:
                return a_out, b_out, Status.PRECISION_EXHAUSTED
            if B == 0:
                return a_out, b_out, Status.ZERO_REMAINDER
            a = (B & -B).bit_length() - 1
            Ap = B >> a
            prec -= a
            B = (Ap + A) & ((1 << prec) - 1)
            A = Ap
            a_out.append(a)
            b_out.append(1)
        return a_out, b_out, Status.HORIZON_REACHED
    inverses = [0] + [pow(i, -1, p) for i in range(1, p)]
    window = max(1, 60 // p.bit_length())
    pw = p**window
    while len(a_out) < max_steps:
        if prec <= 1:
            return a_out, b_out, Status.PRECISION_EXHAUSTED
        if B == 0:
            return a_out, b_out, Status.ZERO_REMAINDER
        a = 0
        t = B
        while t % pw == 0:
            t //= pw
            a += window
        while t % p == 0:
            t //= p
            a += 1
        # t = B / p^a; the remainder is -(B/A), its unit part -t/A
        b = (-(A % p) * inverses[t % p]) % p
        prec -= a
        mod //= p**a
        A, B = t, (b * t + A) % mod
        a_out.append(a)
        b_out.append(b)
    return a_out, b_out, Status.HORIZON_REACHED


def expand_padic(x: PAdicInt, max_steps: int = 10**9) -> Expansion:
    """Expand a truncated p-adic integer until its precision runs out.

    Precision ``N`` yields at most ``N - 1`` pairs; the status is
    ``ZERO_REMAINDER``, ``PRECISION_EXHAUSTED`` or ``HORIZON_REACHED``.
    """
    if not x.in_pzp():
        raise NotInPZp(f"constant digit of x is {x.value % x.prime}, not 0")
    a, b, status = padic_pairs(x.prime, x.value, x.precision, max_steps)
    return Expansion(x.prime, tuple(map(DigitPair, a, b)), status)


# --- convergents and cylinders -------------------------------------------

def convergents(p, pairs: Sequence) -> list[Convergent]:
    """``P_n / Q_n`` via ``P_n = b_n P_{n-1} + p^{a_n} P_{n-2}`` (same for Q)."""
    p = Prime(p)
    pairs = _check_pairs(p, pairs)
    if not pairs:
        raise EmptyInput("convergents of an empty digit sequence")
    out = []
    P0, Q0, P1, Q1 = 1, 0, 0, 1  # (P_{-1}, Q_{-1}, P_0, Q_0)
    s = 0
    for n, (a, b) in enumerate(pairs, 1):
        pa = p**a
        P0, Q0, P1, Q1 = P1, Q1, b * P1 + pa * P0, b * Q1 + pa * Q0
        s += a
        out.append(Convergent(P1, Q1, n, s))
    return out


def evaluate(p, pairs: Sequence) -> Fraction:
    last = convergents(p, pairs)[-1]
    return Fraction(last.P, last.Q)


def evaluate_nested(p, pairs: Sequence) -> Fraction:
    """Bottom-up evaluation of the nested fraction; oracle for :func:`evaluate`."""
    p = Prime(p)
    pairs = _check_pairs(p, pairs)
    if not pairs:
        raise EmptyInput("evaluate of an empty digit sequence")
    acc = Fraction(0)
    for a, b in reversed(pairs):
        acc = Fraction(p**a) / (b + acc)
    return acc


def cylinder(p, pairs: Sequence = ()) -> Cylinder:
    p = Prime(p)
    pairs = _check_pairs(p, pairs)
    if not pairs:
        return Cylinder(p, (), 0, 1, 0)
    last = convergents(p, pairs)[-1]
    return Cylinder(p, pairs, last.P, last.Q, last.exponent_sum)


def prefix_cylinders(p, pairs: Sequence) -> list[Cylinder]:
    """Cylinders of orders ``0..n`` along one digit sequence, in one recurrence pass."""
    p = Prime(p)
    pairs = _check_pairs(p, pairs)
    out = [Cylinder(p, (), 0, 1, 0)]
    if pairs:
        out += [Cylinder(p, pairs[:c.n], c.P, c.Q, c.exponent_sum) for c in convergents(p, pairs)]
    return out


def cylinder_contains(c: Cylinder, x: PAdicInt) -> bool:
    """``|x - center|_p <= radius``, decided on the first ``1 + sum a`` digits.

    ``Q`` is a p-adic unit, so ``x = P/Q (mod p^k)`` is tested as
    ``x Q = P (mod p^k)`` without inverting ``Q``.
    """
    if x.prime != c.prime:
        raise ValueError("prime mismatch")
    need = c.radius_exp
    if x.precision < need:
        raise InsufficientPrecision(f"need {need} digits, have {x.precision}")
    return (x.value * c.Q - c.P) % c.prime**need == 0
