"""Growth functions psi(n) -> infinity and their asymptotic class.

The dimension formulas depend on psi only through the limit of psi(n)/n, which
a finite table cannot reveal. Built-in families therefore carry their class;
tables must declare one.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import UnclassifiedPsi


class GrowthClass(enum.Enum):
    SUBLINEAR_ZERO = "SublinearZero"       # psi(n)/n -> 0
    LINEAR_LIMIT = "LinearLimit"           # psi(n)/n -> alpha in (0, inf)
    SUPERLINEAR_INFINITY = "SuperlinearInfinity"  # psi(n)/n -> inf


_KINDS = {"log", "power", "linear", "superlinear", "nlogn", "table"}


@dataclass(frozen=True)
class PsiSpec:
    kind: str
    param: float | None = None
    values: tuple[float, ...] | None = None
    declared: GrowthClass | None = None
    declared_alpha: float | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown psi kind {self.kind!r}")
        if self.kind == "power" and not 0 < self.param < 1:
            raise ValueError("power growth needs 0 < gamma < 1")
        if self.kind == "superlinear" and not self.param > 1:
            raise ValueError("superlinear growth needs gamma > 1")
        if self.kind == "linear" and not self.param > 0:
            raise ValueError("linear growth needs alpha > 0")
        if self.kind == "table":
            if not self.values:
                raise ValueError("table psi needs values")
            if self.declared is GrowthClass.LINEAR_LIMIT and not (self.declared_alpha or 0) > 0:
                raise ValueError("a LinearLimit table needs declared_alpha > 0")

    # constructors ----------------------------------------------------------
    @classmethod
    def log(cls):
        return cls("log")

    @classmethod
    def power(cls, gamma: float):
        return cls("power", float(gamma))

    @classmethod
    def sqrt(cls):
        return cls("power", 0.5)

    @classmethod
    def linear(cls, alpha: float):
        return cls("linear", float(alpha))

    @classmethod
    def superlinear(cls, gamma: float = 2.0):
        return cls("superlinear", float(gamma))

    @classmethod
    def nlogn(cls):
        return cls("nlogn")

    @classmethod
    def table(cls, values, growth: GrowthClass | str | None = None, alpha: float | None = None):
        if isinstance(growth, str):
            growth = GrowthClass(growth)
        return cls("table", None, tuple(float(v) for v in values), growth,
                   None if alpha is None else float(alpha))

    @classmethod
    def parse(cls, text: str) -> PsiSpec:
        """Parse the CLI form: ``log``, ``sqrt``, ``pow:G``, ``linear:A``, ``nlogn``, ``quadratic``."""
        name, _, arg = text.partition(":")
        if name == "log":
            return cls.log()
        if name == "sqrt":
            return cls.sqrt()
        if name == "pow":
            g = float(arg)
            if g == 1:
                return cls.linear(1.0)
            return cls.power(g) if g < 1 else cls.superlinear(g)
        if name == "linear":
            return cls.linear(float(arg or 1))
        if name == "nlogn":
            return cls.nlogn()
        if name == "quadratic":
            return cls.superlinear(2.0)
        raise ValueError(f"cannot parse psi {text!r}")

    # behaviour ---------------------------------------------------------------
    def __call__(self, n: int) -> float:
        if self.kind == "log":
            return math.log(n) if n > 1 else 0.0
        if self.kind in ("power", "superlinear"):
            return float(n) ** self.param
        if self.kind == "linear":
            return self.param * n
        if self.kind == "nlogn":
            return n * math.log(n) if n > 1 else 0.0
        if n > len(self.values):
            raise IndexError(f"table psi has only {len(self.values)} values")
        return self.values[n - 1]

    @property
    def growth(self) -> GrowthClass:
        if self.kind in ("log", "power"):
            return GrowthClass.SUBLINEAR_ZERO
        if self.kind == "linear":
            return GrowthClass.LINEAR_LIMIT
        if self.kind in ("superlinear", "nlogn"):
            return GrowthClass.SUPERLINEAR_INFINITY
        if self.declared is None:
            raise UnclassifiedPsi("table psi has no declared growth class")
        return self.declared

    @property
    def alpha(self) -> float | None:
        """``lim psi(n)/n`` for the LinearLimit class, else None."""
        if self.growth is not GrowthClass.LINEAR_LIMIT:
            return None
        return self.param if self.kind == "linear" else self.declared_alpha

    def ratio_estimate(self) -> float | None:
        """Advisory ``psi(n)/n`` at the last tabulated n (tables only)."""
        if self.kind != "table":
            return None
        return self.values[-1] / len(self.values)

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.param is not None:
            out["param"] = self.param
        if self.kind == "table":
            out["values"] = list(self.values)
            out["class"] = self.declared.value if self.declared else None
            if self.declared_alpha is not None:
                out["alpha"] = self.declared_alpha
        return out
