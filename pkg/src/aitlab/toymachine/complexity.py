"""Bound-relative Kolmogorov complexity and universal probability.

Everything here is exact up to the declared ``(max_len, budget)`` bounds:
sums are dyadic ``Fraction`` values and logarithms are taken only when a
result is reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional

from .enumeration import DEFAULT_BUDGET, DEFAULT_MAX_LEN, program_census
from .machine import as_bits

EXACT = "exact_output"
PREFIX = "prefix"


class Unresolved(LookupError):
    """No answer is certified within the declared enumeration bounds."""


def log2_fraction(q: Fraction) -> float:
    if q <= 0:
        return -math.inf
    return math.log2(q.numerator) - math.log2(q.denominator)


@dataclass(frozen=True)
class ComplexityRecord:
    x: str
    k_upper: Optional[int]
    program: Optional[str]
    exhaustive: bool
    pu_lower: Fraction
    max_len: int
    budget: int

    @property
    def minus_log2_pu(self) -> float:
        return -log2_fraction(self.pu_lower)

    @property
    def resolved(self) -> bool:
        return self.k_upper is not None and self.exhaustive

    def to_json(self) -> dict:
        return {
            "x": self.x,
            "k_upper": self.k_upper,
            "program": self.program,
            "exhaustive": self.exhaustive,
            "pu_lower": {"num": self.pu_lower.numerator, "den": self.pu_lower.denominator},
            "minus_log2_pu": None if self.pu_lower == 0 else self.minus_log2_pu,
        }


def k_exact(x, max_len: int = DEFAULT_MAX_LEN, step_budget: int = DEFAULT_BUDGET,
            workers: int = 1) -> ComplexityRecord:
    """Shortest printer of ``x`` within the bounds.

    ``exhaustive`` is true when no string shorter than the printer (or, with
    no printer found, no string up to ``max_len``) ran out of budget, so
    the length is certified minimal for this machine.
    """
    x = as_bits(x)
    census = program_census(max_len, step_budget, workers)
    program = census.shortest_printer(x)
    k = len(program) if program is not None else None
    bound = k if k is not None else max_len + 1
    return ComplexityRecord(x, k, program, not census.oob_below(bound),
                            census.exact_mass(x), max_len, step_budget)


def universal_probability(x, max_len: int = DEFAULT_MAX_LEN,
                          step_budget: int = DEFAULT_BUDGET, mode: str = EXACT,
                          workers: int = 1) -> Fraction:
    """Dyadic lower bound on the printer mass of ``x``.

    ``exact_output`` sums programs whose output is exactly ``x``; ``prefix``
    sums programs whose output starts with ``x``.
    """
    x = as_bits(x)
    census = program_census(max_len, step_budget, workers)
    if mode == EXACT:
        return census.exact_mass(x)
    if mode == PREFIX:
        return census.prefix_mass(x)
    raise ValueError(f"unknown mode {mode!r}")


def kraft_sum(max_len: int = DEFAULT_MAX_LEN, step_budget: int = DEFAULT_BUDGET,
              workers: int = 1) -> Fraction:
    return program_census(max_len, step_budget, workers).kraft_sum()


def coding_gap(x, max_len: int = DEFAULT_MAX_LEN, step_budget: int = DEFAULT_BUDGET) -> float:
    """``K(x) + log2 P(x)``: how far the shortest printer's share falls
    short of the whole printer mass. Never negative."""
    rec = k_exact(x, max_len, step_budget)
    if not rec.resolved:
        raise Unresolved(f"x={rec.x!r} unresolved within bounds "
                         f"(max_len={max_len}, budget={step_budget})")
    return rec.k_upper + log2_fraction(rec.pu_lower)


def all_strings(length: int):
    for bits in product("01", repeat=length):
        yield "".join(bits)


def coding_gap_table(max_string_len: int, max_len: int = DEFAULT_MAX_LEN,
                     step_budget: int = DEFAULT_BUDGET) -> dict[str, float]:
    """Gap for every resolved string up to ``max_string_len`` bits."""
    table = {}
    for length in range(max_string_len + 1):
        for x in all_strings(length):
            rec = k_exact(x, max_len, step_budget)
            if rec.resolved:
                table[x] = rec.k_upper + log2_fraction(rec.pu_lower)
    return table


@dataclass
class IncompressibilityCensus:
    L: int
    max_len: int
    budget: int
    counts: dict  # k -> number of length-L strings with K < L - k
    partial: bool

    def bound_holds(self) -> bool:
        return all(c < 2 ** (self.L - k) for k, c in self.counts.items())

    def to_json(self) -> dict:
        return {"L": self.L, "partial": self.partial,
                "rows": [{"k": k, "count": c, "bound": 2 ** (self.L - k)}
                         for k, c in sorted(self.counts.items())]}


def incompressibility_census(L: int, max_len: Optional[int] = None,
                             step_budget: int = DEFAULT_BUDGET) -> IncompressibilityCensus:
    """Count length-``L`` strings compressible by more than ``k`` bits.

    Only programs shorter than ``L - 1`` can matter (k >= 1), so the census
    is partial exactly when one of those ran out of budget.
    """
    if L > 12:
        raise ValueError("census limited to L <= 12")
    if max_len is None:
        max_len = max(L - 1, 2)
    if max_len < L - 1:
        raise ValueError("max_len must be at least L - 1")
    census = program_census(max_len, step_budget)
    best: dict[str, int] = {}
    for p in census.programs:
        if len(p.output) == L and p.output not in best:
            best[p.output] = p.length  # programs are sorted shortest first
    counts = {k: sum(1 for v in best.values() if v < L - k) for k in range(1, L + 1)}
    return IncompressibilityCensus(L, max_len, step_budget, counts,
                                   partial=census.oob_below(L - 1))
