"""Command-line front end.

Subcommands: ``expand`` (digits of a rational), ``dim`` (dimension queries),
``experiment`` (Monte Carlo checks) and ``cantor`` (cover reports for the
Cantor constructions). Exit codes: 0 success, 2 usage or domain error,
3 an experiment criterion failed.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .cantor import CantorSpec, cover_report, holder_check, sample_point
from .cf import convergents, cylinder, expand_rational
from .dimension import (
    dim_E_inf,
    dim_E_inf_sup,
    dim_E_sup,
    dim_level_set,
    dim_tau,
    partition_dimension,
    solve_s,
    solve_sM,
)
from .errors import SchneiderError
from .psi import GrowthClass, PsiSpec
from .report import rows_to_csv
from .stats import (
    birkhoff_experiment,
    digit_law_experiment,
    independence_experiment,
    limsup_scaling_experiment,
    tau_class_experiment,
)
from .streams import block_rng

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 2, 3

EXPERIMENTS = ("digit_law", "independence", "birkhoff", "limsup_scaling", "tau_class", "holder")
DIM_QUERIES = ("s_alpha", "s_M", "e_sup", "e_inf", "inf_sup", "level", "tau", "partition")
DEFAULT_SAMPLES = {"digit_law": 100_000, "independence": 100_000, "birkhoff": 10_000,
                   "limsup_scaling": 1000, "tau_class": 1000, "holder": 1000}


@dataclass
class RunConfig:
    """Everything that determines a run; equal configs give byte-equal output."""

    command: str
    prime: int | None = None
    seed: int = 0
    precision: int | None = None
    samples: int | None = None
    fmt: str | None = "json"
    output: str | None = None
    params: dict = field(default_factory=dict)

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> RunConfig:
        common = {"command", "prime", "seed", "precision", "samples", "fmt", "output", "func"}
        params = {k: v for k, v in vars(ns).items() if k not in common}
        return cls(ns.command, getattr(ns, "prime", None), getattr(ns, "seed", 0) or 0,
                   getattr(ns, "precision", None), getattr(ns, "samples", None),
                   getattr(ns, "fmt", None), getattr(ns, "output", None), params)


class UsageError(SchneiderError):
    pass


# --- helpers -----------------------------------------------------------------

def _real(text: str) -> float:
    """Float parser that also takes ``inf``/``infinity``."""
    t = text.strip().lower()
    if t in ("inf", "+inf", "infinity", "oo"):
        return math.inf
    try:
        return float(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}") from None


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational 'num/den', got {text!r}") from None


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(",") if v.strip())


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(",") if v.strip())


def _psi(ns) -> PsiSpec:
    if getattr(ns, "psi_file", None):
        if not ns.psi_class:
            raise UsageError("--psi-file needs --class (SublinearZero, LinearLimit or SuperlinearInfinity)")
        values = [float(v) for v in Path(ns.psi_file).read_text().split()]
        return PsiSpec.table(values, GrowthClass(ns.psi_class), ns.psi_alpha)
    if not ns.psi:
        raise UsageError("this query needs --psi (or --psi-file with --class)")
    return PsiSpec.parse(ns.psi)


def _need(ns, name: str, flag: str):
    v = getattr(ns, name, None)
    if v is None:
        raise UsageError(f"this query needs {flag}")
    return v


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _json_float(x: float):
    return x if math.isfinite(x) else ("inf" if x > 0 else "-inf")


def _emit(cfg: RunConfig, text: str, out) -> None:
    if cfg.output:
        Path(cfg.output).write_text(text, encoding="utf-8", newline="\n")
    else:
        out.write(text)


# --- subcommands ---------------------------------------------------------------

def cmd_expand(cfg: RunConfig, out) -> int:
    p, x = cfg.prime, cfg.params["x"]
    exp = expand_rational(p, x, max_steps=cfg.params["max_steps"],
                          tail_window=cfg.params["tail_window"])
    doc = {"x": f"{x.numerator}/{x.denominator}", **exp.to_json()}
    if cfg.params["convergents"]:
        doc["convergents"] = [{"n": c.n, "P": str(c.P), "Q": str(c.Q), "exponent_sum": c.exponent_sum}
                              for c in convergents(p, exp.pairs)]
    if cfg.params["cylinders"]:
        doc["cylinders"] = [cylinder(p, exp.pairs[:n]).to_json() for n in range(1, len(exp.pairs) + 1)]
    if cfg.fmt == "csv":
        rows = [{"n": i, "a": q.a, "b": q.b} for i, q in enumerate(exp.pairs, 1)]
        _emit(cfg, rows_to_csv(rows), out)
    else:
        _emit(cfg, _dumps(doc), out)
    return EXIT_OK


def cmd_dim(cfg: RunConfig, out, ns) -> int:
    q, p = ns.query, cfg.prime
    doc: dict = {"query": q}
    if q == "tau":
        r = dim_tau(_need(ns, "alpha", "--alpha"))
    elif q == "partition":
        m, n = _need(ns, "M", "--M"), _need(ns, "depth", "--depth")
        part = partition_dimension(_need(ns, "prime", "-p"), m, n, mode=ns.mode, guard=ns.guard)
        doc.update({"p": p, "M": m, "n": n, "mode": ns.mode, "value": part.s,
                    "formula": "Partition", "count": part.count, "residual": None, "alpha": None})
        _emit(cfg, rows_to_csv([doc]) if cfg.fmt == "csv" else _dumps(doc), out)
        return EXIT_OK
    else:
        _need(ns, "prime", "-p")
        if q == "s_alpha":
            r = solve_s(p, _need(ns, "alpha", "--alpha"))
        elif q == "s_M":
            r = solve_sM(p, _need(ns, "M", "--M"))
        elif q == "e_sup":
            r = dim_E_sup(p, _psi(ns))
        elif q == "e_inf":
            r = dim_E_inf(p, _psi(ns))
        elif q == "inf_sup":
            r = dim_E_inf_sup(p, _psi(ns), _need(ns, "a1", "--a1"), _need(ns, "a2", "--a2"))
        else:
            r = dim_level_set(p, _psi(ns), _need(ns, "a2", "--a2"))
    doc.update({"p": p, "value": r.value, "formula": r.formula,
                "alpha": None if r.alpha is None else _json_float(r.alpha), "residual": r.residual})
    _emit(cfg, rows_to_csv([doc]) if cfg.fmt == "csv" else _dumps(doc), out)
    return EXIT_OK


def _run_experiment(cfg: RunConfig, ns):
    name, p, seed = ns.experiment, cfg.prime, cfg.seed
    n = cfg.samples if cfg.samples is not None else DEFAULT_SAMPLES[name]
    prec = cfg.precision
    if name == "digit_law":
        return digit_law_experiment(p, n, seed, precision=prec or 64)
    if name == "independence":
        return independence_experiment(p, n, ns.lag, seed, precision=prec)
    if name == "birkhoff":
        return birkhoff_experiment(p, ns.kind, n=ns.steps, samples=n, seed=seed, t=ns.t, precision=prec)
    if name == "limsup_scaling":
        return limsup_scaling_experiment(p, ns.horizon, n, seed, precision=prec)
    if name == "tau_class":
        return tau_class_experiment(p, n, ns.horizon, seed, precision=prec)
    spec = CantorSpec.empsi(p, ns.M, _psi(ns), ns.depth)
    pairs = ns.pairs if ns.pairs is not None else n
    return holder_check(spec, ns.eps, pairs, ns.depth, seed)


def cmd_experiment(cfg: RunConfig, out, ns) -> int:
    rep = _run_experiment(cfg, ns)
    _emit(cfg, rep.to_csv() if cfg.fmt == "csv" else rep.to_json(), out)
    if ns.csv_out:
        Path(ns.csv_out).write_text(rep.to_csv(), encoding="utf-8", newline="\n")
    return EXIT_OK if rep.passed else EXIT_FAILED


def _cantor_spec(ns) -> CantorSpec:
    p = ns.prime
    if ns.kind == "em":
        return CantorSpec.bounded(p, ns.M, ns.depth)
    if ns.kind == "empsi":
        return CantorSpec.empsi(p, ns.M, _psi(ns), ns.depth)
    return CantorSpec.fnk(p, ns.M, _need(ns, "alpha", "--alpha"), ns.depth, ns.nk)


def cmd_cantor(cfg: RunConfig, out, ns, err) -> int:
    spec = _cantor_spec(ns)
    depths = range(1, spec.depth + 1)
    rows = cover_report(spec, depths, ns.grid, mode=ns.mode, guard=ns.guard)
    points = []
    for i in range(ns.sample):
        pairs, x = sample_point(spec, spec.depth, block_rng(cfg.seed, i))
        points.append({"index": i, "pairs": [[q.a, q.b] for q in pairs], "x": x.to_json()})
    fmt = cfg.fmt
    if fmt is None:
        fmt = "json" if points and not ns.points_out else "csv"
    if fmt == "csv":
        _emit(cfg, rows_to_csv(rows), out)
    else:
        doc = {"spec": spec.to_json(), "mode": ns.mode,
               "rows": [{k: (str(v) if k == "count" else v) for k, v in r.items()} for r in rows]}
        if points and not ns.points_out:
            doc["points"] = points
        _emit(cfg, _dumps(doc), out)
    if points and ns.points_out:
        text = "".join(json.dumps(pt, sort_keys=True) + "\n" for pt in points)
        Path(ns.points_out).write_text(text, encoding="utf-8", newline="\n")
        err.write(f"wrote {len(points)} points to {ns.points_out}\n")
    return EXIT_OK


# --- parser ------------------------------------------------------------------------

def _common(sp, *, prime_required=True, fmt_default="json"):
    sp.add_argument("-p", "--prime", type=int, required=prime_required, help="the prime p")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--precision", type=int, default=None, help="p-adic digits per sample")
    sp.add_argument("-n", "--samples", type=int, default=None)
    sp.add_argument("--format", dest="fmt", choices=("json", "csv"), default=fmt_default)
    sp.add_argument("-o", "--output", default=None, help="write to this file instead of stdout")


def _psi_args(sp):
    sp.add_argument("--psi", default=None,
                    help="log | sqrt | pow:G | linear:A | nlogn | quadratic")
    sp.add_argument("--psi-file", default=None, help="whitespace-separated table psi(1), psi(2), ...")
    sp.add_argument("--class", dest="psi_class", default=None,
                    choices=[g.value for g in GrowthClass], help="growth class of a --psi-file table")
    sp.add_argument("--psi-alpha", type=_real, default=None, help="limit psi(n)/n of a LinearLimit table")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="schneider-lab", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("expand", help="Schneider expansion of a rational")
    _common(sp)
    sp.add_argument("-x", type=_fraction, required=True, help="rational 'num/den' in pZ_p")
    sp.add_argument("--max-steps", type=int, default=100)
    sp.add_argument("--tail-window", type=int, default=20)
    sp.add_argument("--convergents", action="store_true")
    sp.add_argument("--cylinders", action="store_true")

    sp = sub.add_parser("dim", help="Hausdorff dimension queries")
    sp.add_argument("query", choices=DIM_QUERIES)
    _common(sp, prime_required=False)
    sp.add_argument("--alpha", type=_real, default=None)
    sp.add_argument("--M", type=int, default=None)
    sp.add_argument("--a1", type=_real, default=None)
    sp.add_argument("--a2", type=_real, default=None)
    sp.add_argument("--depth", type=int, default=None, help="order n for the partition query")
    sp.add_argument("--mode", choices=("enumerate", "closed"), default="enumerate")
    sp.add_argument("--guard", type=int, default=10**7)
    _psi_args(sp)

    sp = sub.add_parser("experiment", help="Monte Carlo experiments")
    sp.add_argument("experiment", choices=EXPERIMENTS)
    _common(sp)
    sp.add_argument("--kind", choices=("mean_a", "inverse_power"), default="mean_a")
    sp.add_argument("--t", type=float, default=1.0)
    sp.add_argument("--steps", type=int, default=100, help="orbit length for birkhoff")
    sp.add_argument("--lag", type=int, default=1)
    sp.add_argument("--horizon", type=int, default=None)
    sp.add_argument("--M", type=int, default=2)
    sp.add_argument("--eps", type=float, default=0.5)
    sp.add_argument("--pairs", type=int, default=None)
    sp.add_argument("--depth", type=int, default=128)
    sp.add_argument("--csv-out", default=None, help="also write the report table as CSV")
    _psi_args(sp)

    sp = sub.add_parser("cantor", help="cover reports for the Cantor constructions")
    sp.add_argument("kind", choices=("em", "empsi", "fnk"))
    _common(sp, fmt_default=None)
    sp.add_argument("--M", type=int, required=True)
    sp.add_argument("--alpha", type=_real, default=None)
    sp.add_argument("--nk", type=_int_list, default=None, help="custom n_k, comma separated")
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--mode", choices=("closed", "enumerate"), default="closed")
    sp.add_argument("--guard", type=int, default=10**7)
    sp.add_argument("--grid", type=_float_list, default=(0.25, 0.5, 0.75))
    sp.add_argument("--sample", type=int, default=0, help="number of points to sample")
    sp.add_argument("--points-out", default=None, help="JSON-lines file for sampled points")
    _psi_args(sp)
    return ap


_NEG_FRACTION = re.compile(r"^-\d+/\d+$")


def _normalize(argv: list[str]) -> list[str]:
    # argparse reads "-2/3" as an option; glue it to the preceding flag
    out: list[str] = []
    for tok in argv:
        if out and _NEG_FRACTION.match(tok) and out[-1].startswith("-") and "=" not in out[-1]:
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = _normalize(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if ns.command == "experiment" and ns.horizon is None:
        ns.horizon = 10_000 if ns.experiment == "limsup_scaling" else 1024
    cfg = RunConfig.from_args(ns)
    try:
        if ns.command == "expand":
            return cmd_expand(cfg, out)
        if ns.command == "dim":
            return cmd_dim(cfg, out, ns)
        if ns.command == "experiment":
            return cmd_experiment(cfg, out, ns)
        return cmd_cantor(cfg, out, ns, err)
    except (SchneiderError, ValueError, OSError) as e:
        err.write(f"error: {type(e).__name__}: {e}\n")
        return EXIT_USAGE


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_entry()
