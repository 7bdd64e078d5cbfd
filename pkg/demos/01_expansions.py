"""Schneider expansions of rationals and of random p-adic integers.

Run: python demos/01_expansions.py
"""

from fractions import Fraction

from schneider_lab import (
    convergents,
    cylinder,
    expand_padic,
    expand_rational,
    from_rational,
    haar_sample,
)
from schneider_lab.streams import block_rng

# A terminating expansion.
e = expand_rational(2, Fraction(2, 3))
print("2/3 at p=2:", e.pairs, e.status)

# Rationals that do not terminate fall into the constant tail (1, p-1).
e = expand_rational(2, 6, max_steps=40)
print("6 at p=2: first pairs", e.pairs[:5], "->", e.status, "from index", e.tail_start)

# Convergents and the cylinders they center.
pairs = [(1, 2), (2, 1), (1, 1)]
for c in convergents(3, pairs):
    cyl = cylinder(3, pairs[:c.n])
    print(f"  n={c.n}: P/Q = {c.P}/{c.Q}, radius 3^-{cyl.radius_exp}, measure 3^-{cyl.measure_exp}")

# The same algorithm on a truncated p-adic integer known to 30 places.
x = from_rational(5, Fraction(-5, 7), 30)
print("-5/7 at p=5, 30 digits:", expand_padic(x).pairs[:6], "...")

# A Haar-random point of 3Z_3: digits a_n are i.i.d. with P(a = k) = 2 * 3^-k.
y = haar_sample(3, 200, block_rng(0, 0))
ex = expand_padic(y)
print("Haar sample at p=3:", len(ex.pairs), "pairs from 200 digits; first a_n:", ex.a_digits[:15])
