"""Exhaustive enumeration of toy-machine programs.

Two routes produce the same facts:

* :func:`enumerate_programs` walks bit strings in length-then-lex order and
  runs each through :func:`decode_run`. Simple, and slow beyond ~16 bits.
* :func:`program_census` generates only syntactically valid instruction
  sequences. Every valid program is an instruction sequence followed by
  HALT, so this visits a tiny fraction of the 2^L strings while reaching the
  same halting programs and the same out-of-budget verdicts.
"""

from __future__ import annotations

import bisect
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional

from .machine import (EMIT0, EMIT1, HALT, LOOP, RunResult, Status, decode_run,
                      gamma_encode)

DEFAULT_MAX_LEN = 18
DEFAULT_BUDGET = 100_000
MAX_LEN_WARN = 30


def enumerate_programs(max_len: int, step_budget: int = DEFAULT_BUDGET,
                       prune: bool = True) -> Iterator[tuple[str, RunResult]]:
    """Yield ``(bits, RunResult)`` for bit strings of length 1..max_len.

    With ``prune`` the proper extensions of halted programs are skipped
    without being run (they are invalid by the self-delimiting rule).
    """
    halted: set[str] = set()
    for length in range(1, max_len + 1):
        for i in range(1 << length):
            bits = format(i, f"0{length}b")
            # valid programs all have even length
            if prune and any(bits[:j] in halted for j in range(2, length, 2)):
                continue
            res = decode_run(bits, step_budget)
            if res.status is Status.HALTED:
                halted.add(bits)
            yield bits, res


@dataclass(frozen=True)
class Program:
    bits: str
    output: str
    steps: int

    @property
    def length(self) -> int:
        return len(self.bits)

    @property
    def weight(self) -> Fraction:
        return Fraction(1, 1 << len(self.bits))


# An instruction entry is (bits, output or None when over budget, steps).

@lru_cache(maxsize=None)
def _instructions(length: int, budget: int) -> tuple:
    """Single non-HALT instructions of exactly ``length`` bits."""
    if length < 2:
        return ()
    if length == 2:
        return ((EMIT0, "0", 2), (EMIT1, "1", 2))
    found = []
    # LOOP: 2 + |gamma(count)| + |gamma(body_len)| + body_len == length
    for gc in range(1, length - 2, 2):
        for gl in range(1, length - 2 - gc + 1, 2):
            body_len = length - 2 - gc - gl
            if body_len < 2:
                continue
            if 2 * body_len.bit_length() - 1 != gl:
                continue
            bodies = _bodies(body_len, budget)
            if not bodies:
                continue
            lo, hi = 1 << (gc // 2), (1 << (gc // 2 + 1)) - 1
            for count in range(lo, hi + 1):
                head = LOOP + gamma_encode(count) + gamma_encode(body_len)
                for bbits, bout, bsteps in bodies:
                    steps = 1 + count * bsteps
                    out = bout * count if bout is not None and steps <= budget else None
                    found.append((head + bbits, out, steps))
    return tuple(found)


@lru_cache(maxsize=None)
def _bodies(length: int, budget: int) -> tuple:
    """Instruction sequences (no HALT) filling exactly ``length`` bits."""
    if length == 0:
        return (("", "", 0),)
    found = []
    for first in range(2, length + 1, 2):
        rest = _bodies(length - first, budget)
        if not rest:
            continue
        for ibits, iout, isteps in _instructions(first, budget):
            for rbits, rout, rsteps in rest:
                steps = isteps + rsteps
                out = (iout + rout if iout is not None and rout is not None
                       and steps <= budget else None)
                found.append((ibits + rbits, out, steps))
    return tuple(found)


@dataclass
class Census:
    """Every halting program up to ``max_len`` bits under ``budget`` steps.

    ``oob_lengths`` counts the shortest out-of-budget strings (those with
    no out-of-budget proper prefix) by length; any longer string starting
    with one of them is also out of budget.
    """
    max_len: int
    budget: int
    programs: tuple
    oob_lengths: Counter = field(default_factory=Counter)

    def __post_init__(self):
        self._by_output: Optional[dict] = None
        self._sorted: Optional[tuple] = None

    @property
    def min_oob_len(self) -> Optional[int]:
        return min(self.oob_lengths) if self.oob_lengths else None

    def oob_below(self, length: int) -> bool:
        """Whether some string shorter than ``length`` ran out of budget."""
        m = self.min_oob_len
        return m is not None and m < length

    def restrict(self, max_len: int) -> "Census":
        if max_len > self.max_len:
            raise ValueError("cannot restrict to a larger bound")
        return Census(max_len, self.budget,
                      tuple(p for p in self.programs if p.length <= max_len),
                      Counter({l: c for l, c in self.oob_lengths.items() if l <= max_len}))

    # masses are integers in units of 2^-max_len
    def _unit(self, p: Program) -> int:
        return 1 << (self.max_len - p.length)

    def by_output(self) -> dict:
        """output -> (mass units, shortest program bits)."""
        if self._by_output is None:
            table: dict[str, list] = {}
            for p in self.programs:
                entry = table.get(p.output)
                if entry is None:
                    table[p.output] = [self._unit(p), p.bits]
                else:
                    entry[0] += self._unit(p)
                    if (p.length, p.bits) < (len(entry[1]), entry[1]):
                        entry[1] = p.bits
            self._by_output = {k: (v[0], v[1]) for k, v in table.items()}
        return self._by_output

    def _prefix_index(self):
        if self._sorted is None:
            pairs = sorted((p.output, self._unit(p)) for p in self.programs)
            outputs = [o for o, _ in pairs]
            cum = [0]
            for _, u in pairs:
                cum.append(cum[-1] + u)
            self._sorted = (outputs, cum)
        return self._sorted

    def exact_mass(self, x: str) -> Fraction:
        units = self.by_output().get(x, (0, None))[0]
        return Fraction(units, 1 << self.max_len)

    def prefix_mass(self, x: str) -> Fraction:
        outputs, cum = self._prefix_index()
        # '2' sorts after both bit characters, closing the prefix range
        lo = bisect.bisect_left(outputs, x)
        hi = bisect.bisect_left(outputs, x + "2")
        return Fraction(cum[hi] - cum[lo], 1 << self.max_len)

    def kraft_sum(self) -> Fraction:
        return Fraction(sum(self._unit(p) for p in self.programs), 1 << self.max_len)

    def shortest_printer(self, x: str) -> Optional[str]:
        entry = self.by_output().get(x)
        return entry[1] if entry else None


def _walk(prefix: str, out: str, steps: int, max_len: int, budget: int,
          programs: list, oob: Counter) -> None:
    n = len(prefix)
    if n + 2 > max_len:
        return
    if steps + 1 > budget:
        # reading the next opcode already exceeds the budget, whichever it is
        oob[n + 2] += 4
        return
    programs.append(Program(prefix + HALT, out, steps + 1))
    for length in range(2, max_len - n + 1, 2):
        for ibits, iout, isteps in _instructions(length, budget):
            if iout is None or steps + isteps > budget:
                oob[n + length] += 1
                continue
            _walk(prefix + ibits, out + iout, steps + isteps, max_len, budget,
                  programs, oob)


def _walk_task(args) -> tuple[list, Counter]:
    first, max_len, budget = args
    ibits, iout, isteps = first
    programs: list = []
    oob: Counter = Counter()
    _walk(ibits, iout, isteps, max_len, budget, programs, oob)
    return programs, oob


def _build_census(max_len: int, budget: int, workers: int = 1) -> Census:
    if budget < 1:
        raise ValueError("budget must be >= 1")
    programs: list = []
    oob: Counter = Counter()
    if max_len >= 2:
        programs.append(Program(HALT, "", 1))
    firsts = []
    for length in range(2, max_len + 1, 2):
        for ins in _instructions(length, budget):
            if ins[1] is None or ins[2] > budget:
                oob[length] += 1
            else:
                firsts.append(ins)
    tasks = [(ins, max_len, budget) for ins in firsts]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_walk_task, tasks, chunksize=8))
    else:
        results = [_walk_task(t) for t in tasks]
    for progs, o in results:
        programs.extend(progs)
        oob.update(o)
    programs.sort(key=lambda p: (p.length, p.bits))
    return Census(max_len, budget, tuple(programs), oob)


_CACHE: dict[tuple[int, int], Census] = {}


def program_census(max_len: int = DEFAULT_MAX_LEN, budget: int = DEFAULT_BUDGET,
                   workers: int = 1) -> Census:
    """Cached census; a cached larger bound is restricted rather than redone."""
    if max_len > MAX_LEN_WARN:
        import warnings
        warnings.warn(f"max_len={max_len} enumeration may be very slow", stacklevel=2)
    hit = _CACHE.get((max_len, budget))
    if hit is not None:
        return hit
    larger = [m for (m, b) in _CACHE if b == budget and m > max_len]
    if larger:
        census = _CACHE[(min(larger), budget)].restrict(max_len)
    else:
        census = _build_census(max_len, budget, workers)
    _CACHE[(max_len, budget)] = census
    return census


def clear_cache() -> None:
    _CACHE.clear()
