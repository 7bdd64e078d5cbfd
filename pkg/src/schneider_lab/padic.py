"""Truncated p-adic integers.

A :class:`PAdicInt` is an element of Z_p known modulo ``p**precision``. It is
stored as the residue ``value`` in ``[0, p**precision)``; the digit sequence
``c_0, c_1, ...`` (least significant first) is derived from it on demand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import (
    DenominatorDivisible,
    NotAUnit,
    NotPrime,
    PrimeMismatch,
    ZeroArgument,
)

__all__ = [
    "Indeterminate",
    "PAdicInt",
    "Prime",
    "from_rational",
    "haar_residue",
    "haar_sample",
    "int_valuation",
    "invert_unit",
    "padic_abs_distance",
    "rational_valuation",
    "valuation",
]


class _IndeterminateType:
    """Result of a query that the available precision cannot decide."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Indeterminate"

    def __bool__(self):
        return False

    def __reduce__(self):
        return (_IndeterminateType, ())


Indeterminate = _IndeterminateType()


@lru_cache(maxsize=256)
def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    # deterministic Miller-Rabin for n < 3.3e24
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Prime(int):
    """An ``int`` that is known to be prime.

    >>> Prime(7) + 1
    8
    >>> Prime(8)
    Traceback (most recent call last):
    ...
    schneider_lab.errors.NotPrime: 8 is not prime
    """

    def __new__(cls, p):
        if isinstance(p, Prime):
            return p
        if isinstance(p, bool) or int(p) != p:
            raise NotPrime(f"{p!r} is not an integer")
        p = int(p)
        if p > 3 * 10**24 or not _is_prime(p):
            raise NotPrime(f"{p} is not prime")
        return super().__new__(cls, p)


@dataclass(frozen=True)
class PAdicInt:
    """An element of Z_p known modulo ``p**precision``."""

    prime: int
    value: int
    precision: int

    def __post_init__(self):
        object.__setattr__(self, "prime", Prime(self.prime))
        if self.precision < 0:
            raise ValueError("precision must be non-negative")
        if not 0 <= self.value < self.prime**self.precision:
            raise ValueError(
                f"residue {self.value} outside [0, {self.prime}^{self.precision})")

    @classmethod
    def from_digits(cls, p, digits):
        p = Prime(p)
        value = 0
        for c in reversed(list(digits)):
            if not 0 <= c < p:
                raise ValueError(f"digit {c} outside [0, {p})")
            value = value * p + c
        return cls(p, value, len(digits))

    @property
    def digits(self) -> tuple[int, ...]:
        out = []
        v, p = self.value, self.prime
        for _ in range(self.precision):
            v, c = divmod(v, p)
            out.append(c)
        return tuple(out)

    @property
    def modulus(self) -> int:
        return self.prime**self.precision

    def in_pzp(self) -> bool:
        return self.precision == 0 or self.value % self.prime == 0

    def truncate(self, m: int) -> PAdicInt:
        if m > self.precision:
            raise ValueError(f"cannot truncate precision {self.precision} up to {m}")
        return PAdicInt(self.prime, self.value % self.prime**m, m)

    def to_json(self) -> dict:
        return {"p": int(self.prime), "digits": list(self.digits),
                "precision": self.precision}

    @classmethod
    def from_json(cls, obj) -> PAdicInt:
        if len(obj["digits"]) != obj["precision"]:
            raise ValueError("digit count does not match precision")
        return cls.from_digits(obj["p"], obj["digits"])


def int_valuation(p: int, n: int) -> int:
    """v_p of a nonzero integer by repeated division."""
    if n == 0:
        raise ZeroArgument("valuation of 0 is infinite")
    n = abs(n)
    if p == 2:
        return (n & -n).bit_length() - 1
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(x: PAdicInt):
    """Index of the first nonzero digit, or ``Indeterminate`` if none is known."""
    if x.value == 0:
        return Indeterminate
    return int_valuation(x.prime, x.value)


def rational_valuation(p, r) -> int:
    p = Prime(p)
    r = Fraction(r)
    if r == 0:
        raise ZeroArgument("rational_valuation of 0")
    return int_valuation(p, r.numerator) - int_valuation(p, r.denominator)


def invert_unit(p, u: int, k: int) -> int:
    """Inverse of ``u`` modulo ``p**k`` by quadratic (Newton) lifting.

    Starts from the inverse modulo p and doubles the number of correct digits
    per round: if ``u*w = 1 (mod p^j)`` then ``w*(2 - u*w)`` is correct mod
    ``p^(2j)``.
    """
    p = Prime(p)
    if k < 1:
        raise ValueError("exponent k must be >= 1")
    if u % p == 0:
        raise NotAUnit(f"{u} is divisible by {p}")
    w = pow(u % p, p - 2, p) if p > 2 else 1
    j = 1
    while j < k:
        j = min(2 * j, k)
        m = p**j
        w = w * (2 - u * w) % m
    return w % p**k


def from_rational(p, r, n: int) -> PAdicInt:
    """Embed a p-integral rational into Z_p at precision ``n``."""
    p = Prime(p)
    r = Fraction(r)
    if r.denominator % p == 0:
        raise DenominatorDivisible(
            f"{p} divides the denominator of {r} (v_{p} = {rational_valuation(p, r)} < 0)")
    if n == 0:
        return PAdicInt(p, 0, 0)
    m = p**n
    if r.denominator == 1:
        return PAdicInt(p, r.numerator % m, n)
    inv = invert_unit(p, r.denominator, n)
    return PAdicInt(p, r.numerator * inv % m, n)


def padic_abs_distance(x: PAdicInt, y: PAdicInt):
    """|x - y|_p as an exact ``Fraction``, or ``Indeterminate``.

    Only the first ``min(x.precision, y.precision)`` digits are compared.
    """
    if x.prime != y.prime:
        raise PrimeMismatch(f"primes differ: {x.prime} vs {y.prime}")
    n = min(x.precision, y.precision)
    diff = (x.value - y.value) % x.prime**n
    if diff == 0:
        return Indeterminate
    return Fraction(1, x.prime ** int_valuation(x.prime, diff))


def _chunk_digits(p: int) -> int:
    # largest k with p**k <= 2**62, so draws fit in int64
    return max(1, int(62 / math.log2(p)))


def haar_residue(p: int, n: int, rng: np.random.Generator, size: int = 1) -> list[int]:
    """Residues mod ``p**n`` of ``size`` independent Haar points of pZ_p.

    Digit 0 is zero and digits 1..n-1 are i.i.d. uniform, drawn in blocks of
    ``k`` digits as uniform integers below ``p**k``.
    """
    free = n - 1
    if free <= 0:
        return [0] * size
    k = _chunk_digits(p)
    full, rest = divmod(free, k)
    widths = [k] * full + ([rest] if rest else [])
    cols = [rng.integers(0, p**w, size=size, dtype=np.int64) for w in widths]
    scales = []
    s = p
    for w in widths:
        scales.append(s)
        s *= p**w
    out = []
    if len(cols) == 1:
        c0, s0 = cols[0], scales[0]
        return [int(v) * s0 for v in c0.tolist()]
    rows = np.stack(cols, axis=1).tolist()
    for row in rows:
        out.append(sum(c * sc for c, sc in zip(row, scales)))
    return out


def haar_sample(p, n: int, rng: np.random.Generator) -> PAdicInt:
    """One Haar-distributed point of pZ_p at precision ``n``."""
    p = Prime(p)
    if n < 1:
        raise ValueError("precision must be >= 1")
    return PAdicInt(p, haar_residue(p, n, rng, 1)[0], n)
