from __future__ import annotations

import math
from dataclasses import dataclass

METHODS = ("series", "asymptotic", "quadrature", "closed-form")


@dataclass(frozen=True)
class EvalResult:
    """A numerical value with an absolute error estimate.

    ``method`` names the code path that produced ``value``; ``terms_used``
    counts series terms or quadrature nodes.
    """

    value: float
    abs_err: float
    terms_used: int = 0
    method: str = "series"

    def __post_init__(self):
        if not isinstance(self.value, complex):
            object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "abs_err", float(self.abs_err))
        object.__setattr__(self, "terms_used", int(self.terms_used))
        if self.method not in METHODS:
            raise ValueError(f"unknown method tag {self.method!r}")
        if not (self.abs_err >= 0.0) or math.isinf(self.abs_err):
            raise ValueError(f"abs_err must be finite and non-negative, got {self.abs_err}")

    def __float__(self):
        return float(self.value)

    def scaled(self, factor: float) -> "EvalResult":
        return EvalResult(self.value * factor, self.abs_err * abs(factor), self.terms_used, self.method)
