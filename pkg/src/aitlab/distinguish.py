"""Distinguishability of Bernoulli preparations in a finite number of trials.

Two probabilities are distinguishable in ``m`` trials when their gap is at
least the sum of their one-sigma fluctuations. Counting how many mutually
distinguishable points fit between ``p1`` and ``p2`` and scaling by
``1/sqrt(m)`` recovers the angle ``arccos(sqrt(p1 p2) + sqrt(q1 q2))``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy import integrate, stats

ROOT_TOL = 1e-12
_SIN_ZERO = 1e-12
MC_BLOCK = 1024


@dataclass(frozen=True)
class PolarizationModel:
    theta: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError("theta must lie in [0, pi]")

    @property
    def p(self) -> float:
        return math.cos(self.theta) ** 2


@dataclass(frozen=True)
class DistinguishabilityReport:
    p1: float
    p2: float
    m: int
    dp1: float
    dp2: float
    distinguishable: bool
    distance: float
    packing_count: int
    min_trials: Optional[int]

    def to_json(self) -> dict:
        return dict(self.__dict__)


def _check_prob(p: float, name: str = "p") -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{name}={p} outside [0, 1]")


def uncertainty(p: float, m: int) -> float:
    """One-sigma fluctuation of an ``m``-trial frequency estimate."""
    _check_prob(p)
    if m < 1:
        raise ValueError("m must be >= 1")
    return math.sqrt(p * (1.0 - p) / m)


def theta_uncertainty(theta: float, m: int) -> float:
    """Angular fluctuation for ``p = cos(theta)**2``; ``inf`` where
    ``dp/dtheta`` vanishes."""
    s = abs(math.sin(2.0 * theta))
    if s < _SIN_ZERO:
        return math.inf
    return uncertainty(math.cos(theta) ** 2, m) / s


def distinguishable(p: float, p_prime: float, m: int) -> bool:
    return abs(p - p_prime) >= uncertainty(p, m) + uncertainty(p_prime, m)


def stat_distance(p1: float, p2: float) -> float:
    _check_prob(p1, "p1")
    _check_prob(p2, "p2")
    # sorted so the float sum is order independent (exact symmetry)
    a, b = sorted((p1, p2))
    overlap = math.sqrt(a * b) + math.sqrt((1.0 - a) * (1.0 - b))
    return math.acos(min(1.0, max(0.0, overlap)))


def _theta_integrand(theta: float) -> float:
    p = math.cos(theta) ** 2
    dp = abs(math.sin(2.0 * theta))
    denom = 2.0 * math.sqrt(p * (1.0 - p))
    if denom == 0.0:
        return 1.0  # removable singularity at the endpoints
    return dp / denom


def stat_distance_theta(theta1: float, theta2: float) -> float:
    """Integrate ``|dp/dtheta| / (2 sqrt(p(1-p)))`` from ``theta1`` to ``theta2``."""
    for t in (theta1, theta2):
        if not 0.0 <= t <= math.pi / 2:
            raise ValueError("theta must lie in [0, pi/2]")
    if theta1 > theta2:
        raise ValueError("need theta1 <= theta2")
    if theta1 == theta2:
        return 0.0
    value, _ = integrate.quad(_theta_integrand, theta1, theta2,
                              epsabs=1e-11, epsrel=1e-11, limit=200)
    return value


def stat_distance_integral(p1: float, p2: float) -> float:
    """``int_{p1}^{p2} dp / (2 sqrt(p(1-p)))`` by adaptive quadrature.

    A singular endpoint (0 or 1) is moved into an algebraic weight.
    """
    _check_prob(p1, "p1")
    _check_prob(p2, "p2")
    a, b = sorted((p1, p2))
    if a == b:
        return 0.0
    mid = 0.5 * (a + b)
    opts = dict(epsabs=1e-14, epsrel=1e-13, limit=200)
    if a == 0.0:
        left, _ = integrate.quad(lambda p: 0.5 / math.sqrt(1.0 - p), a, mid,
                                 weight="alg", wvar=(-0.5, 0.0), **opts)
    else:
        left, _ = integrate.quad(lambda p: 0.5 / math.sqrt(p * (1.0 - p)), a, mid, **opts)
    if b == 1.0:
        right, _ = integrate.quad(lambda p: 0.5 / math.sqrt(p), mid, b,
                                  weight="alg", wvar=(0.0, -0.5), **opts)
    else:
        right, _ = integrate.quad(lambda p: 0.5 / math.sqrt(p * (1.0 - p)), mid, b, **opts)
    return left + right


def _next_point(current: float, upper: float, m: int) -> Optional[float]:
    """Smallest p'' in (current, upper] with p'' - current = dp(current) + dp(p'')."""
    if current >= upper:
        return None
    base = current + uncertainty(current, m)

    def residual(p):
        return p - base - uncertainty(p, m)

    if residual(upper) < 0.0:
        return None
    # residual is convex with residual(current) <= 0, so {residual >= 0}
    # meets (current, upper] in an interval ending at upper
    lo, hi = current, upper
    while hi - lo > ROOT_TOL:
        mid = 0.5 * (lo + hi)
        if residual(mid) >= 0.0:
            hi = mid
        else:
            lo = mid
    return hi


def packing_points(p1: float, p2: float, m: int) -> list[float]:
    """Greedy left-to-right chain of neighbour-distinguishable points."""
    if not 0.0 <= p1 < p2 <= 1.0:
        raise ValueError("need 0 <= p1 < p2 <= 1")
    if m < 1:
        raise ValueError("m must be >= 1")
    points = [p1]
    while True:
        nxt = _next_point(points[-1], p2, m)
        if nxt is None:
            return points
        points.append(nxt)


def packing_count(p1: float, p2: float, m: int) -> int:
    """Number of greedy steps from ``p1`` that stay within ``p2``."""
    return len(packing_points(p1, p2, m)) - 1


def packing_curve(p1: float, p2: float, ms) -> list[tuple[int, int, float]]:
    return [(m, c, c / math.sqrt(m)) for m in ms for c in [packing_count(p1, p2, m)]]


def min_trials_from_zero(p2) -> int:
    """Smallest m with m >= (1 - p2) / p2, computed exactly."""
    q = Fraction(p2)
    if not 0 < q <= 1:
        raise ValueError("need 0 < p2 <= 1")
    return math.ceil((1 - q) / q)


def report(p1: float, p2: float, m: int) -> DistinguishabilityReport:
    lo, hi = sorted((p1, p2))
    return DistinguishabilityReport(
        p1=p1, p2=p2, m=m,
        dp1=uncertainty(p1, m), dp2=uncertainty(p2, m),
        distinguishable=distinguishable(p1, p2, m),
        distance=stat_distance(p1, p2),
        packing_count=packing_count(lo, hi, m) if lo < hi else 0,
        min_trials=min_trials_from_zero(hi) if lo == 0.0 and hi > 0.0 else None,
    )


# -- Monte Carlo ----------------------------------------------------------

@dataclass
class MCResult:
    p_true: float
    p1: float
    p2: float
    m: int
    runs: int
    seed: int
    decisions: dict
    detections: int
    total_ones: int

    @property
    def error_rate(self) -> float:
        wrong = "p2" if self.p_true == self.p1 else "p1"
        return self.decisions[wrong] / self.runs

    @property
    def detection_rate(self) -> float:
        """Fraction of runs that observed at least one 1."""
        return self.detections / self.runs

    @property
    def mean_ones(self) -> float:
        return self.total_ones / self.runs

    def to_json(self) -> dict:
        return {"decisions": self.decisions, "error_rate": self.error_rate,
                "detection_rate": self.detection_rate, "mean_ones": self.mean_ones}


def _ml_decide(ones: np.ndarray, m: int, p1: float, p2: float) -> np.ndarray:
    """True where p2 is strictly more likely than p1 (ties go to p1)."""
    l1 = stats.binom.logpmf(ones, m, p1)
    l2 = stats.binom.logpmf(ones, m, p2)
    return l2 > l1


def _mc_block(args):
    seed, block, size, p_true, p1, p2, m = args
    # each block has its own stream, so the split is independent of threads
    rng = np.random.default_rng([seed, block])
    ones = rng.binomial(m, p_true, size=size)
    pick2 = _ml_decide(ones, m, p1, p2)
    return int(pick2.sum()), int((ones > 0).sum()), int(ones.sum())


def mc_distinguish(p_true: float, p1: float, p2: float, m: int, runs: int,
                   seed: int, threads: int = 1) -> MCResult:
    """Repeat an ``m``-trial experiment ``runs`` times and decide p1 vs p2
    by maximum likelihood each time.

    The ones count of each run is drawn as Binomial(m, p_true), which has the
    same law as summing m Bernoulli draws. Runs are split into blocks of
    ``MC_BLOCK`` seeded by ``(seed, block index)``.
    """
    if p_true not in (p1, p2):
        raise ValueError("p_true must equal p1 or p2")
    if m < 1 or runs < 1:
        raise ValueError("m and runs must be >= 1")
    tasks = [(seed, b, min(MC_BLOCK, runs - b * MC_BLOCK), p_true, p1, p2, m)
             for b in range((runs + MC_BLOCK - 1) // MC_BLOCK)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_mc_block, tasks))
    else:
        parts = [_mc_block(t) for t in tasks]
    n2 = sum(p[0] for p in parts)
    return MCResult(p_true, p1, p2, m, runs, seed,
                    decisions={"p1": runs - n2, "p2": n2},
                    detections=sum(p[1] for p in parts),
                    total_ones=sum(p[2] for p in parts))
