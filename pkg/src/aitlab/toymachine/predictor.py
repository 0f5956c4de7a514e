"""Sequence prediction from prefix printer mass.

Prediction uses prefix semantics: a program supports ``x`` when its output
starts with ``x``. The mass of programs whose output is exactly ``x`` is
reported as ``leak``, so ``P0 + P1 + leak == 1`` exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional

from .complexity import Unresolved
from .enumeration import DEFAULT_BUDGET, DEFAULT_MAX_LEN, program_census
from .machine import as_bits


@dataclass(frozen=True)
class Prediction:
    x: str
    pu_prefix: Fraction
    p0: Fraction
    p1: Fraction
    leak: Fraction

    def prob(self, bit: str) -> Fraction:
        return self.p0 if bit == "0" else self.p1


def predict_next(x, max_len: int = DEFAULT_MAX_LEN,
                 step_budget: int = DEFAULT_BUDGET) -> Prediction:
    x = as_bits(x)
    census = program_census(max_len, step_budget)
    total = census.prefix_mass(x)
    if total == 0:
        raise Unresolved(f"prefix {x!r} unresolved at max_len={max_len}, budget={step_budget}")
    p0 = census.prefix_mass(x + "0") / total
    p1 = census.prefix_mass(x + "1") / total
    return Prediction(x, total, p0, p1, 1 - p0 - p1)


# -- reference measures ---------------------------------------------------

@dataclass(frozen=True)
class Measure:
    """A computable measure on binary sequences.

    ``kind`` is ``"dirac"`` (a fixed periodic sequence given by ``pattern``)
    or ``"bernoulli"`` (i.i.d. with P(1) = ``r``).
    """
    kind: str
    pattern: str = ""
    r: Fraction = Fraction(0)

    @classmethod
    def zeros(cls) -> "Measure":
        return cls("dirac", pattern="0")

    @classmethod
    def alternating(cls) -> "Measure":
        return cls("dirac", pattern="01")

    @classmethod
    def bernoulli(cls, r) -> "Measure":
        r = Fraction(r)
        if not 0 <= r <= 1:
            raise ValueError("r must lie in [0, 1]")
        return cls("bernoulli", r=r)

    @classmethod
    def parse(cls, text: str) -> "Measure":
        if text == "zeros":
            return cls.zeros()
        if text == "alternating":
            return cls.alternating()
        if text.startswith("bernoulli:"):
            return cls.bernoulli(Fraction(text.split(":", 1)[1]))
        raise ValueError(f"unknown measure {text!r}")

    @property
    def name(self) -> str:
        if self.kind == "bernoulli":
            return f"bernoulli:{self.r}"
        return "zeros" if self.pattern == "0" else "alternating"

    def support(self, length: int):
        """(prefix, mu(prefix)) over prefixes with positive measure."""
        if self.kind == "dirac":
            reps = length // len(self.pattern) + 1
            yield (self.pattern * reps)[:length], Fraction(1)
            return
        for bits in product("01", repeat=length):
            x = "".join(bits)
            ones = x.count("1")
            w = self.r ** ones * (1 - self.r) ** (length - ones)
            if w:
                yield x, w

    def conditional(self, bit: str, x: str) -> Fraction:
        if self.kind == "dirac":
            nxt = self.pattern[len(x) % len(self.pattern)]
            return Fraction(1 if bit == nxt else 0)
        return self.r if bit == "1" else 1 - self.r


@dataclass
class ErrorSeries:
    measure: str
    horizon: int
    s: list = field(default_factory=list)  # S_1, S_2, ...
    truncated_at: Optional[int] = None

    @property
    def total(self) -> float:
        return math.fsum(self.s)

    def to_json(self) -> dict:
        return {"measure": self.measure, "horizon": self.horizon,
                "series": [{"n": i + 1, "S_n": v} for i, v in enumerate(self.s)],
                "sum": self.total, "truncated_at": self.truncated_at}


def prediction_error_series(mu: Measure, horizon: int, max_len: int = DEFAULT_MAX_LEN,
                            step_budget: int = DEFAULT_BUDGET) -> ErrorSeries:
    """Expected squared Hellinger-style error of the predictor at each step.

    ``S_n = sum_a sum_{|x|=n-1} mu(x) (sqrt P(a|x) - sqrt mu(a|x))^2`` over
    prefixes in the support of ``mu``. Stops at the first step where some
    support prefix has no printer mass, recording it in ``truncated_at``.
    """
    series = ErrorSeries(mu.name, horizon)
    for n in range(1, horizon + 1):
        total = 0.0
        try:
            for x, weight in mu.support(n - 1):
                pred = predict_next(x, max_len, step_budget)
                for a in "01":
                    diff = math.sqrt(pred.prob(a)) - math.sqrt(mu.conditional(a, x))
                    total += float(weight) * diff * diff
        except Unresolved:
            series.truncated_at = n
            break
        series.s.append(total)
    return series
