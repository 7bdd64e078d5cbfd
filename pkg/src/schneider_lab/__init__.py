"""Schneider's p-adic continued fractions: digits, metric laws and dimensions."""

from .cantor import CantorSpec, constraint_at, enumerate_cylinders, holder_check, holder_map, sample_point
from .cf import (
    Convergent,
    Cylinder,
    DigitPair,
    Expansion,
    Status,
    convergents,
    cylinder,
    cylinder_contains,
    evaluate,
    expand_padic,
    expand_rational,
    step_padic,
    step_rational,
)
from .dimension import (
    DimResult,
    dim_E_inf,
    dim_E_inf_sup,
    dim_E_sup,
    dim_level_set,
    dim_limsup_infinite,
    dim_tau,
    dim_uniform_lower_bound,
    partition_dimension,
    solve_s,
    solve_sM,
)
from .errors import SchneiderError
from .padic import Indeterminate, PAdicInt, Prime, from_rational, haar_sample, padic_abs_distance, valuation
from .psi import GrowthClass, PsiSpec
from .report import ExperimentReport

__version__ = "0.1.0"

__all__ = [
    "CantorSpec",
    "Convergent",
    "Cylinder",
    "DigitPair",
    "DimResult",
    "Expansion",
    "ExperimentReport",
    "GrowthClass",
    "Indeterminate",
    "PAdicInt",
    "Prime",
    "PsiSpec",
    "SchneiderError",
    "Status",
    "constraint_at",
    "convergents",
    "cylinder",
    "cylinder_contains",
    "dim_E_inf",
    "dim_E_inf_sup",
    "dim_E_sup",
    "dim_level_set",
    "dim_limsup_infinite",
    "dim_tau",
    "dim_uniform_lower_bound",
    "enumerate_cylinders",
    "evaluate",
    "expand_padic",
    "expand_rational",
    "from_rational",
    "haar_sample",
    "holder_check",
    "holder_map",
    "padic_abs_distance",
    "partition_dimension",
    "sample_point",
    "solve_s",
    "solve_sM",
    "step_padic",
    "step_rational",
    "valuation",
]
