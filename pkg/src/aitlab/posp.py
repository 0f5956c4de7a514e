"""Threshold decisions on output density and the reductions built on them.

Every density comparison is exact: thresholds are ``Fraction`` values and
the oracle answers ``k / 2**n > t`` with strict inequality.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .formula import DEFAULT_VAR_CAP, Formula
from .truthtable import count_ones

PospOracle = Callable[[Formula, Fraction], bool]


class OracleFault(RuntimeError):
    """The oracle gave answers no single ones-count could produce."""


class PromiseViolation(RuntimeError):
    """A formula's density is neither of the promised values."""


class BDAnswer(enum.Enum):
    IS_G0 = "IsG0"
    IS_G1 = "IsG1"


@dataclass(frozen=True)
class Threshold:
    value: Fraction

    def __post_init__(self):
        v = Fraction(self.value)
        if not 0 <= v < 1:
            raise ValueError(f"threshold {v} outside [0, 1)")
        object.__setattr__(self, "value", v)


@dataclass
class ReductionTrace:
    queries: list = field(default_factory=list)  # (threshold, answer)
    result: object = None

    @property
    def query_count(self) -> int:
        return len(self.queries)

    def to_json(self) -> dict:
        return {
            "queries": [{"threshold": {"num": t.numerator, "den": t.denominator},
                         "answer": a} for t, a in self.queries],
            "query_count": self.query_count,
            "result": self.result.value if isinstance(self.result, enum.Enum) else self.result,
        }


def _as_threshold(t) -> Fraction:
    return t.value if isinstance(t, Threshold) else Threshold(Fraction(t)).value


def posp_decide(f: Formula, t, *, cap: int = DEFAULT_VAR_CAP) -> bool:
    """True iff the fraction of ones in the truth table is strictly above ``t``."""
    t = _as_threshold(t)
    k = count_ones(f, cap=cap)
    # k / 2^n > p / q  <=>  k * q > p * 2^n
    return k * t.denominator > t.numerator * (1 << f.num_vars)


def sat_decide(f: Formula, *, cap: int = DEFAULT_VAR_CAP) -> bool:
    return posp_decide(f, 0, cap=cap)


def _ask(oracle: PospOracle, f: Formula, t: Fraction, trace: ReductionTrace) -> bool:
    answer = oracle(f, t)
    if not isinstance(answer, bool):
        raise OracleFault(f"oracle returned non-boolean {answer!r} at t={t}")
    trace.queries.append((t, answer))
    return answer


def check_monotone(queries) -> None:
    """Raise if some answer is True at a threshold above a False one."""
    highest_true = max((t for t, a in queries if a), default=None)
    lowest_false = min((t for t, a in queries if not a), default=None)
    if highest_true is not None and lowest_false is not None and highest_true >= lowest_false:
        raise OracleFault(
            f"oracle says density > {highest_true} but not > {lowest_false}")


def sharp_sat_via_posp(f: Formula, oracle: PospOracle = posp_decide, *,
                       verify: bool = False) -> tuple[int, ReductionTrace]:
    """Recover the ones-count of ``f`` by bisection on threshold queries.

    Keeps ``lo <= k <= hi`` from ``(0, 2**n)``; asking ``k > mid`` halves
    the ``hi - lo + 1`` candidates, so at most ``n + 1`` queries are made.
    With ``verify``, two extra queries at half-steps ``(2k -+ 1) / 2**(n+1)``
    must agree with the result. Grid thresholds alone cannot expose an
    oracle whose answers happen to be monotone on the grid.
    """
    n = f.num_vars
    size = 1 << n
    lo, hi = 0, size
    trace = ReductionTrace()
    while lo < hi:
        mid = (lo + hi) // 2
        if _ask(oracle, f, Fraction(mid, size), trace):
            lo = mid + 1
        else:
            hi = mid
    check_monotone(trace.queries)
    if verify:
        if lo > 0 and not _ask(oracle, f, Fraction(2 * lo - 1, 2 * size), trace):
            raise OracleFault(f"count {lo} contradicted just below")
        if lo < size and _ask(oracle, f, Fraction(2 * lo + 1, 2 * size), trace):
            raise OracleFault(f"count {lo} contradicted just above")
        check_monotone(trace.queries)
    trace.result = lo
    return lo, trace


def bd_via_posp(f: Formula, g0, g1, oracle: PospOracle = posp_decide, *,
                check_promise: bool = False) -> tuple[BDAnswer, ReductionTrace]:
    """Decide which promised density ``f`` has using one query at ``t = g0``.

    Under the promise, density > g0 holds exactly when the density is g1.
    ``check_promise`` counts the table in full and raises on a violation.
    """
    g0, g1 = Fraction(g0), Fraction(g1)
    if not 0 <= g0 < g1 <= 1:
        raise ValueError(f"need 0 <= g0 < g1 <= 1, got {g0}, {g1}")
    trace = ReductionTrace()
    answer = BDAnswer.IS_G1 if _ask(oracle, f, g0, trace) else BDAnswer.IS_G0
    if check_promise:
        gamma = Fraction(count_ones(f), 1 << f.num_vars)
        if gamma not in (g0, g1):
            raise PromiseViolation(f"density {gamma} is neither {g0} nor {g1}")
    trace.result = answer
    return answer, trace


def bd_search(f: Formula, g0, g1, oracle: PospOracle = posp_decide,
              max_queries: int = 64) -> tuple[BDAnswer, ReductionTrace]:
    """Bisection form of the BD reduction, kept for debugging.

    Queries dyadic midpoints of [0, 1] starting at 1/2, moving toward the
    gap between the two promised densities, until a threshold separating
    them is reached. Every answer is checked against the promise.
    """
    g0, g1 = Fraction(g0), Fraction(g1)
    if not 0 <= g0 < g1 <= 1:
        raise ValueError(f"need 0 <= g0 < g1 <= 1, got {g0}, {g1}")
    trace = ReductionTrace()
    lo, hi = Fraction(0), Fraction(1)
    for _ in range(max_queries):
        t = (lo + hi) / 2
        above = _ask(oracle, f, t, trace)
        # densities consistent with this answer
        alive = [g for g in (g0, g1) if (g > t) == above]
        if not alive:
            raise PromiseViolation(f"answer {above} at t={t} fits neither {g0} nor {g1}")
        if g0 <= t < g1:
            trace.result = BDAnswer.IS_G1 if above else BDAnswer.IS_G0
            return trace.result, trace
        if t < g0:
            lo = t
        else:
            hi = t
    raise RuntimeError(f"no separating dyadic threshold within {max_queries} queries")
