"""Monte Carlo checks of the metric laws of the Schneider map under Haar measure.

Each experiment draws Haar points of pZ_p block by block (see
:mod:`schneider_lab.streams`), expands them with the exact p-adic routine,
and reduces per-block summaries in block order. Reports are therefore a pure
function of the experiment name, its parameters and the seed.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as sps
from scipy.special import logsumexp

from .cf import padic_pairs
from .errors import EmptyGrid
from .padic import Prime, haar_residue
from .report import ExperimentReport
from .streams import block_rng, blocks, run_blocks

__all__ = [
    "ConvergenceExponentEstimate",
    "birkhoff_experiment",
    "birkhoff_limit",
    "convergence_exponent",
    "digit_law_experiment",
    "independence_experiment",
    "limsup_max_cdf",
    "limsup_max_median",
    "limsup_scaling_experiment",
    "orbit_precision",
    "sample_orbits",
    "tau_class_experiment",
]

BLOCK = 4096


def orbit_precision(p: int, steps: int, safety: float = 12.0) -> int:
    """Digits needed so ``steps`` pairs are almost surely extractable.

    ``a`` has mean p/(p-1) and variance p/(p-1)^2 under Haar measure; the
    budget is the mean total plus ``safety`` standard deviations plus slack.
    """
    mean = steps * p / (p - 1)
    sd = math.sqrt(steps * p) / (p - 1)
    return int(math.ceil(mean + safety * sd)) + 64


def sample_orbits(p: int, samples: int, steps: int, seed: int,
                  precision: int | None = None, block_size: int = BLOCK):
    """Yield ``(a_digits, b_digits, status)`` for Haar samples, in index order."""
    p = Prime(p)
    precision = precision or orbit_precision(p, steps)
    for j, count in blocks(samples, block_size):
        rng = block_rng(seed, j)
        for v in haar_residue(p, precision, rng, count):
            yield padic_pairs(p, v, precision, steps)


# --- digit law -------------------------------------------------------------

def _digit_law_block(p, precision, seed, block, count):
    a_hist: Counter = Counter()
    b_hist: Counter = Counter()
    censored = 0
    rng = block_rng(seed, block)
    for v in haar_residue(p, precision, rng, count):
        a, b, _ = padic_pairs(p, v, precision, 1)
        if a:
            a_hist[a[0]] += 1
            b_hist[b[0]] += 1
        else:
            censored += 1
    return a_hist, b_hist, censored


def _within(emp, q, n, k=3.0):
    sigma = math.sqrt(q * (1 - q) / n)
    return abs(emp - q) <= k * sigma, sigma


def digit_law_experiment(p, samples: int, seed: int, precision: int = 64,
                         kmax: int = 10, workers: int | None = None) -> ExperimentReport:
    """Empirical law of the first digit pair against ``P(a_1 = k) = (p-1) p^-k``.

    ``b_1`` is checked against the uniform law on ``[1, p-1]`` and the tail
    ``P(a_1 >= k)`` against ``p^(1-k)``.
    """
    p = Prime(p)
    tasks = [(p, precision, seed, j, c) for j, c in blocks(samples, BLOCK)]
    a_hist: Counter = Counter()
    b_hist: Counter = Counter()
    censored = 0
    for ah, bh, cen in run_blocks(_digit_law_block, tasks, workers):
        a_hist.update(ah)
        b_hist.update(bh)
        censored += cen

    st: dict = {"censored": censored}
    crit: dict = {}
    rows = []
    for k in range(1, kmax + 1):
        q = (p - 1) * float(p) ** -k
        emp = a_hist[k] / samples
        ok, sigma = _within(emp, q, samples)
        st[f"P(a1={k})"] = emp
        st[f"expected P(a1={k})"] = q
        crit[f"a1={k} within 3 sigma"] = ok
        rows.append({"k": k, "count": a_hist[k], "empirical": emp,
                     "expected": q, "sigma": sigma})

    # chi-square over bins with expected count >= 5, plus a merged tail
    kcut = 1
    while samples * (p - 1) * float(p) ** -(kcut + 1) >= 5:
        kcut += 1
    obs = [a_hist[k] for k in range(1, kcut + 1)]
    obs.append(samples - sum(obs))
    exp = [samples * (p - 1) * float(p) ** -k for k in range(1, kcut + 1)]
    exp.append(samples * float(p) ** -kcut)
    chi = sps.chisquare(obs, exp)
    st["chi2"] = float(chi.statistic)
    st["chi2 p-value"] = float(chi.pvalue)
    st["chi2 bins"] = len(obs)
    crit["chi2 p-value > 0.01"] = chi.pvalue > 0.01

    n_b = sum(b_hist.values())
    for b in range(1, p):
        emp = b_hist[b] / n_b
        st[f"P(b1={b})"] = emp
        crit[f"b1={b} uniform within 3 sigma"] = _within(emp, 1 / (p - 1), n_b)[0]

    ktail = max(1, int(math.log(samples, p) / 2))
    for k in range(1, ktail + 1):
        q = float(p) ** (1 - k)
        emp = (sum(c for a, c in a_hist.items() if a >= k) + censored) / samples
        st[f"P(a1>={k})"] = emp
        crit[f"a1>={k} within 3 sigma"] = _within(emp, q, samples)[0] if q < 1 else emp == 1

    return ExperimentReport(
        "digit_law", p, samples, seed,
        {"precision": precision, "kmax": kmax},
        st, crit, {"a1": rows})


# --- independence ----------------------------------------------------------

def _pairs_block(p, precision, seed, block, count, steps):
    rng = block_rng(seed, block)
    out = []
    for v in haar_residue(p, precision, rng, count):
        a, b, _ = padic_pairs(p, v, precision, steps)
        out.append((a, b))
    return out


def independence_experiment(p, samples: int, lag: int, seed: int,
                            precision: int | None = None,
                            workers: int | None = None) -> ExperimentReport:
    """Chi-square test that ``a_1`` and ``a_{1+lag}`` (and the b-digits) are independent."""
    p = Prime(p)
    params = {"lag": lag}
    if lag == 0:
        # the joint law of (a_1, a_1) is the diagonal; nothing to test
        return ExperimentReport("independence", p, samples, seed, params,
                                {"skipped": 1}, {})
    steps = 1 + lag
    precision = precision or orbit_precision(p, steps)
    params["precision"] = precision
    # cap so that the smallest expected cell, (p^(1-K))^2 * samples, is >= 5
    cap = 2
    while samples * float(p) ** (2 * (1 - (cap + 1))) >= 5:
        cap += 1
    tasks = [(p, precision, seed, j, c, steps) for j, c in blocks(samples, BLOCK)]
    ta = np.zeros((cap, cap), dtype=np.int64)
    tb = np.zeros((p - 1, p - 1), dtype=np.int64)
    short = 0
    for res in run_blocks(_pairs_block, tasks, workers):
        for a, b in res:
            if len(a) < steps:
                short += 1
                continue
            ta[min(a[0], cap) - 1, min(a[lag], cap) - 1] += 1
            tb[b[0] - 1, b[lag] - 1] += 1
    st = {"short orbits": short, "cap": cap}
    crit = {}
    chi = sps.chi2_contingency(ta, correction=False)
    st["a chi2"] = float(chi.statistic)
    st["a chi2 p-value"] = float(chi.pvalue)
    crit["a-digits independent (p-value > 0.01)"] = chi.pvalue > 0.01
    if p > 2:
        chi = sps.chi2_contingency(tb, correction=False)
        st["b chi2"] = float(chi.statistic)
        st["b chi2 p-value"] = float(chi.pvalue)
        crit["b-digits independent (p-value > 0.01)"] = chi.pvalue > 0.01
    else:
        st["b test skipped"] = 1
    rows = [{"a_1": i + 1, "a_lag": j + 1, "count": int(ta[i, j])}
            for i in range(cap) for j in range(cap)]
    return ExperimentReport("independence", p, samples, seed, params, st, crit,
                            {"joint_a": rows})


# --- Birkhoff averages -----------------------------------------------------

def _observable(kind: str, t: float):
    if kind == "mean_a":
        return lambda k: float(k)
    if kind == "inverse_power":
        if t <= 0:
            raise ValueError("inverse_power needs t > 0")
        return lambda k: float(k) ** -t
    raise ValueError(f"unknown observable {kind!r}")


def birkhoff_limit(p, kind: str = "mean_a", t: float = 1.0, tol: float = 1e-13):
    """``sum_k f(k) (p-1) p^-k`` truncated where the tail bound drops below ``tol``.

    Both observables satisfy ``0 < f(k) <= k``, so the tail after ``K`` is at
    most ``(p-1) sum_{k>K} k x^k`` with ``x = 1/p``, which has a closed form.
    Returns ``(value, tail_bound)``.
    """
    f = _observable(kind, t)
    x = 1.0 / p
    total = 0.0
    k = 0
    while True:
        k += 1
        total += f(k) * (p - 1) * x**k
        bound = (p - 1) * x ** (k + 1) * ((k + 1) - k * x) / (1 - x) ** 2
        if bound < tol:
            return total, bound


def _birkhoff_block(p, precision, seed, block, count, steps, kind, t):
    f = _observable(kind, t)
    rng = block_rng(seed, block)
    total = 0.0
    n = 0
    short = 0
    for v in haar_residue(p, precision, rng, count):
        a, _, _ = padic_pairs(p, v, precision, steps)
        if len(a) < steps:
            short += 1
        total += math.fsum(f(k) for k in a)
        n += len(a)
    return total, n, short


def birkhoff_experiment(p, kind: str = "mean_a", n: int = 100, samples: int = 10_000,
                        seed: int = 0, t: float = 1.0, precision: int | None = None,
                        workers: int | None = None) -> ExperimentReport:
    """Orbit average of ``f(a_k)`` over ``n`` steps per Haar sample.

    Compared with the integral of ``f(a_1)`` against Haar measure; passes
    within 1% relative error.
    """
    p = Prime(p)
    precision = precision or orbit_precision(p, n)
    tasks = [(p, precision, seed, j, c, n, kind, t)
             for j, c in blocks(samples, BLOCK // 4)]
    total, steps, short = 0.0, 0, 0
    for tot, m, sh in run_blocks(_birkhoff_block, tasks, workers):
        total += tot
        steps += m
        short += sh
    mean = total / steps
    exact, bound = birkhoff_limit(p, kind, t)
    rel = abs(mean - exact) / exact
    params = {"kind": kind, "orbit_length": n, "precision": precision}
    if kind == "inverse_power":
        params["t"] = t
    return ExperimentReport(
        "birkhoff", p, samples, seed, params,
        {"mean": mean, "exact": exact, "exact tail bound": bound,
         "relative error": rel, "orbit steps": steps, "short orbits": short},
        {"within 1%": rel <= 0.01})


# --- limsup scaling ----------------------------------------------------------

def _limsup_block(p, precision, seed, block, count, horizon, thresholds):
    rng = block_rng(seed, block)
    logn = np.log(np.arange(2, horizon + 1))
    logp_n = logn / math.log(p)
    maxima, counts, lengths = [], [], []
    for v in haar_residue(p, precision, rng, count):
        a, _, _ = padic_pairs(p, v, precision, horizon)
        arr = np.asarray(a[1:], dtype=np.float64)
        m = len(arr)
        lengths.append(m + 1)
        maxima.append(float(np.max(arr / logn[:m])) if m else 0.0)
        counts.append([int(np.count_nonzero(arr >= c * logp_n[:m])) for c in thresholds])
    return maxima, counts, lengths


def limsup_max_cdf(p, horizon: int, m: float, strict: bool = False) -> float:
    """``P(max_{2<=n<=N} a_n / log n <= m)`` for i.i.d. Haar digits.

    ``a_n / log n <= m`` iff ``a_n <= floor(m log n)``, and
    ``P(a <= k) = 1 - p^-k``, so the law is a finite product. With
    ``strict=True`` the probability of ``< m`` is returned instead.
    """
    logn = np.log(np.arange(2, horizon + 1))
    x = m * logn
    k = np.ceil(x) - 1 if strict else np.floor(x)
    if k.min() < 1:
        return 0.0
    return float(np.exp(np.sum(np.log1p(-float(p) ** -k))))


def limsup_max_median(p, horizon: int) -> float:
    """Smallest m with ``limsup_max_cdf(p, horizon, m) >= 1/2``."""
    lo, hi = 0.0, 1.0
    while limsup_max_cdf(p, horizon, hi) < 0.5:
        lo, hi = hi, 2 * hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if limsup_max_cdf(p, horizon, mid) >= 0.5:
            hi = mid
        else:
            lo = mid
    return hi


def limsup_scaling_experiment(p, horizon: int = 10_000, samples: int = 1000,
                              seed: int = 0, epsilons=(0.2, 0.5),
                              precision: int | None = None,
                              workers: int | None = None) -> ExperimentReport:
    """Finite-horizon view of ``limsup a_n / log n = 1 / log p``.

    Reports the quartiles of ``max_{2<=n<=N} a_n / log n`` and, for each
    threshold ``c``, the number of ``n`` with ``a_n >= c log_p n``. Since the
    digits are i.i.d. with ``P(a >= k) = p^(1-k)``, the expected count and its
    variance are exact sums, and each mean count is checked within 3 sigma.
    """
    p = Prime(p)
    thresholds = sorted({round(1 + s * e, 12) for e in epsilons for s in (-1, 1)} | {2.0})
    precision = precision or orbit_precision(p, horizon)
    tasks = [(p, precision, seed, j, c, horizon, thresholds)
             for j, c in blocks(samples, 16)]
    maxima, counts, lengths = [], [], []
    for mx, ct, ln in run_blocks(_limsup_block, tasks, workers):
        maxima += mx
        counts += ct
        lengths += ln
    maxima = np.array(maxima)
    counts = np.array(counts, dtype=np.float64)
    q1, med, q3 = np.percentile(maxima, [25, 50, 75])
    target = 1 / math.log(p)
    st = {
        "median max a_n/log n": med, "q1": q1, "q3": q3,
        "1/log p": target, "median * log p": med * math.log(p),
        "short orbits": int(np.sum(np.array(lengths) < horizon)),
    }
    crit = {"median in [0.8, 1.6]/log p": 0.8 * target <= med <= 1.6 * target}
    # the finite-N law of the maximum is explicit, so check against it as well
    exact_med = limsup_max_median(p, horizon)
    f_med = limsup_max_cdf(p, horizon, exact_med)
    below = float(np.mean(maxima <= exact_med))
    sd = math.sqrt(f_med * (1 - f_med) / samples)
    st.update({"exact median": exact_med, "exact cdf at median": f_med,
               "empirical cdf at exact median": below,
               "exact P(max <= 1.6/log p)": limsup_max_cdf(p, horizon, 1.6 * target),
               "exact P(max < 0.8/log p)": limsup_max_cdf(p, horizon, 0.8 * target, strict=True)})
    crit["empirical cdf at exact median within 3 sigma"] = abs(below - f_med) <= 3 * sd
    logp_n = np.log(np.arange(2, horizon + 1)) / math.log(p)
    rows = []
    for i, c in enumerate(thresholds):
        need = np.maximum(np.ceil(c * logp_n), 1.0)
        q = float(p) ** (1 - need)
        expected = float(q.sum())
        var = float((q * (1 - q)).sum())
        sigma = math.sqrt(var / samples)
        mean = float(counts[:, i].mean())
        st[f"mean count c={c}"] = mean
        st[f"expected count c={c}"] = expected
        crit[f"count c={c} within 3 sigma"] = abs(mean - expected) <= 3 * sigma
        rows.append({"c": c, "mean_count": mean, "expected": expected, "sigma_of_mean": sigma})
    return ExperimentReport(
        "limsup_scaling", p, samples, seed,
        {"horizon": horizon, "precision": precision, "epsilons": list(epsilons)},
        st, crit, {"counts": rows})


# --- convergence exponent ----------------------------------------------------

@dataclass
class ConvergenceExponentEstimate:
    grid: list[float]
    partial_sums: list[float]
    slopes: list[float]
    classified: str  # "Finite" or "Infinite"
    alpha: float | None = None
    details: dict = field(default_factory=dict)

    @property
    def is_infinite(self) -> bool:
        return self.classified == "Infinite"


def convergence_exponent(a_digits, grid, horizon: int | None = None,
                         tol: float = 1e-6, fit_blocks: int = 4) -> ConvergenceExponentEstimate:
    """Estimate ``inf{s >= 0 : sum a_n^-s < inf}`` from the first ``horizon`` digits.

    The terms are grouped into dyadic blocks ``[2^j, 2^(j+1))``. For each grid
    value of s the growth rate of the log block sums is fitted over the last
    ``fit_blocks`` complete blocks: a series whose block sums do not decay
    (slope >= -tol) is treated as divergent at that s. The estimate is
    ``Infinite`` when the series still diverges at the largest grid value,
    otherwise the zero crossing of the slope, interpolated between grid points.
    """
    grid = sorted(float(s) for s in grid)
    if not grid:
        raise EmptyGrid("convergence_exponent needs at least one s value")
    digits = list(a_digits)
    horizon = len(digits) if horizon is None else horizon
    if horizon > len(digits):
        raise ValueError(f"horizon {horizon} exceeds {len(digits)} available digits")
    if horizon < 3:
        raise ValueError("horizon must be at least 3")
    la = np.array([math.log(a) for a in digits[:horizon]])
    nblocks = int(math.log2(horizon + 1))
    js = list(range(max(0, nblocks - fit_blocks), nblocks))
    partial, slopes = [], []
    for s in grid:
        terms = -s * la
        partial.append(float(np.exp(terms).sum()))
        logs = [logsumexp(terms[2**j - 1:2**(j + 1) - 1]) for j in js]
        if len(js) >= 2:
            slopes.append(float(np.polyfit(js, logs, 1)[0]))
        else:
            slopes.append(math.log(2))
    divergent = [sl >= -tol for sl in slopes]
    if divergent[-1]:
        return ConvergenceExponentEstimate(grid, partial, slopes, "Infinite", None,
                                           {"blocks": js})
    i = divergent.index(False)
    if i == 0:
        alpha = grid[0]
    else:
        s0, s1, y0, y1 = grid[i - 1], grid[i], slopes[i - 1], slopes[i]
        alpha = s0 + (s1 - s0) * y0 / (y0 - y1)
    return ConvergenceExponentEstimate(grid, partial, slopes, "Finite", alpha,
                                       {"blocks": js})


def _tau_block(p, precision, seed, block, count, horizon, grid):
    rng = block_rng(seed, block)
    out = []
    for v in haar_residue(p, precision, rng, count):
        a, _, _ = padic_pairs(p, v, precision, horizon)
        est = convergence_exponent(a, grid, min(horizon, len(a)))
        out.append(est.is_infinite)
    return out


def tau_class_experiment(p, samples: int = 1000, horizon: int = 1024, seed: int = 0,
                         grid=None, precision: int | None = None,
                         workers: int | None = None) -> ExperimentReport:
    """Fraction of Haar samples whose digit series is classified ``Infinite``."""
    p = Prime(p)
    grid = list(np.linspace(0.0, 4.0, 41)) if grid is None else list(grid)
    precision = precision or orbit_precision(p, horizon)
    tasks = [(p, precision, seed, j, c, horizon, grid) for j, c in blocks(samples, 256)]
    flags = [f for res in run_blocks(_tau_block, tasks, workers) for f in res]
    frac = sum(flags) / len(flags)
    return ExperimentReport(
        "tau_class", p, samples, seed,
        {"horizon": horizon, "precision": precision, "grid_max": max(grid)},
        {"fraction infinite": frac},
        {"fraction infinite >= 0.99": frac >= 0.99})
