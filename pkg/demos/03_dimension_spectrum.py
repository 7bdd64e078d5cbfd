"""The dimension spectrum and the partition-function approach to s_M.

Run: python demos/03_dimension_spectrum.py
"""

from schneider_lab import PsiSpec, dim_E_sup, dim_level_set, partition_dimension, solve_s, solve_sM

print("s(alpha) at p=2, the root of 2^(alpha s)(2^s - 1) = 1:")
for alpha in (0.01, 0.5, 1, 2, 10, 100):
    print(f"  alpha={alpha:<6} s={solve_s(2, alpha).value:.6f}")

print("limsup a_n/psi(n) = 1 at p=3:")
for name in ("log", "sqrt", "linear:1", "linear:2", "nlogn"):
    r = dim_E_sup(3, PsiSpec.parse(name))
    print(f"  psi={name:<9} dim={r.value:.6f} ({r.formula})")

print("level sets limsup a_n/n = alpha at p=2, alpha in (0.5, 1, 2, 4):",
      [round(dim_level_set(2, PsiSpec.linear(1), a).value, 4) for a in (0.5, 1, 2, 4)])

sm = solve_sM(2, 2).value
print(f"bounded digits a_n <= 2 at p=2: s_M = {sm:.6f}")
for n in (1, 2, 4, 8, 16, 64, 256):
    mode = "enumerate" if n <= 16 else "closed"
    r = partition_dimension(2, 2, n, mode=mode)
    print(f"  n={n:<4} s_n={r.s:.6f}  ({mode}, {r.count} cylinders)")
