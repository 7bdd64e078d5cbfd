"""Metric laws of the digits under Haar measure, at demonstration scale.

Run: python demos/02_metric_laws.py
"""

import math

from schneider_lab.stats import (
    birkhoff_experiment,
    digit_law_experiment,
    limsup_max_median,
    limsup_scaling_experiment,
    tau_class_experiment,
)

r = digit_law_experiment(3, 100_000, seed=1)
print("first digit law at p=3:")
for k in range(1, 5):
    print(f"  P(a1={k}) = {r.statistics[f'P(a1={k})']:.4f}  expected {r.statistics[f'expected P(a1={k})']:.4f}")
print("  chi-square p-value", round(r.statistics["chi2 p-value"], 3))

r = birkhoff_experiment(2, "inverse_power", n=100, samples=2000, seed=2)
print(f"orbit average of 1/a_n at p=2: {r.statistics['mean']:.4f} (ln 2 = {math.log(2):.4f})")

# limsup a_n / log n = 1/log p almost surely, but the finite-horizon maximum
# has its own exact law, and its median is far above the limit at N = 10^4.
N = 2000
r = limsup_scaling_experiment(2, horizon=N, samples=100, seed=3)
print(f"max a_n/log n up to N={N}: median {r.statistics['median max a_n/log n']:.3f}, "
      f"exact median {limsup_max_median(2, N):.3f}, limit {1 / math.log(2):.3f}")
for c in (0.5, 1.2, 2.0):
    print(f"  #(n <= N: a_n >= {c} log2 n): mean {r.statistics[f'mean count c={c}']:.2f}, "
          f"expected {r.statistics[f'expected count c={c}']:.2f}")

r = tau_class_experiment(2, samples=100, horizon=512, seed=4)
print("fraction of Haar points with divergent sum a_n^-s at every s:", r.statistics["fraction infinite"])
