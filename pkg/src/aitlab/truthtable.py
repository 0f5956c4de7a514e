"""Program p: emit a formula's 2^n output bits and summarise them.

Assignment ``i`` sets ``xj`` to bit ``(i >> (j-1)) & 1`` (LSB is x1). The
fast path evaluates the AST over numpy ``uint64`` words, 64 assignments
per bit lane; bit ``b`` of word ``w`` is assignment ``64*w + b``. Viewing
the little-endian words as bytes therefore gives the packed on-disk
format directly (LSB-first within each byte).
"""

from __future__ import annotations

import enum
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterator, Optional

import numpy as np

from .formula import (DEFAULT_VAR_CAP, And, Const, Formula, Node, Not, Or,
                      Var, check_cap, cnf, evaluate, iter_nodes)

WORD_BITS = 64
DEFAULT_CHUNK_WORDS = 1 << 16
_ONES = np.uint64(0xFFFFFFFFFFFFFFFF)
_WORD = np.dtype("<u8")

# bit b of _LOW_PATTERNS[j] is bit j of b, for the six in-word variables
_LOW_PATTERNS = [
    np.uint64(sum(1 << b for b in range(64) if (b >> j) & 1)) for j in range(6)
]


@dataclass(frozen=True)
class TableSummary:
    n: int
    ones: int

    def __post_init__(self):
        if not 0 <= self.ones <= self.length:
            raise ValueError(f"ones={self.ones} outside 0..{self.length}")

    @property
    def length(self) -> int:
        return 1 << self.n

    @property
    def k(self) -> int:
        return self.ones

    @property
    def gamma(self) -> Fraction:
        return Fraction(self.ones, self.length)

    def to_json(self) -> dict:
        g = self.gamma
        return {"n": self.n, "k": self.ones, "gamma_num": g.numerator,
                "gamma_den": g.denominator}


@dataclass
class EnsembleBucket:
    gamma: Fraction
    members: list


class StringType(enum.Enum):
    TYPE1 = "Type1"
    TYPE2 = "Type2"
    OTHER = "Other"


# -- word-parallel evaluation ---------------------------------------------

def _var_words(j: int, w0: int, count: int) -> np.ndarray:
    if j <= 6:
        return np.full(count, _LOW_PATTERNS[j - 1], dtype=_WORD)
    idx = np.arange(w0, w0 + count, dtype=_WORD)
    bit = (idx >> np.uint64(j - 7)) & np.uint64(1)
    return (np.uint64(0) - bit).astype(_WORD)  # 0 -> 0, 1 -> all ones


def _eval_words(node: Node, w0: int, count: int, cache: dict) -> np.ndarray:
    if isinstance(node, Var):
        arr = cache.get(node.index)
        if arr is None:
            arr = cache[node.index] = _var_words(node.index, w0, count)
        return arr
    if isinstance(node, Const):
        return np.full(count, _ONES if node.value else 0, dtype=_WORD)
    if isinstance(node, Not):
        return ~_eval_words(node.child, w0, count, cache)
    children = node.children
    acc = _eval_words(children[0], w0, count, cache).copy()
    if isinstance(node, And):
        for c in children[1:]:
            acc &= _eval_words(c, w0, count, cache)
    else:
        for c in children[1:]:
            acc |= _eval_words(c, w0, count, cache)
    return acc


def table_words(f: Formula, w0: int = 0, count: Optional[int] = None) -> np.ndarray:
    """Truth-table words ``w0 .. w0+count-1``; unused high bits are zero."""
    n = f.num_vars
    total = max(1, (1 << n) // WORD_BITS)
    if count is None:
        count = total - w0
    words = _eval_words(f.root, w0, count, {}).astype(_WORD, copy=True)
    if n < 6:
        words &= np.uint64((1 << (1 << n)) - 1)
    return words


def _chunks(n: int, chunk_words: int) -> list[tuple[int, int]]:
    total = max(1, (1 << n) // WORD_BITS)
    return [(w, min(chunk_words, total - w)) for w in range(0, total, chunk_words)]


def _popcount(words: np.ndarray) -> int:
    return int(np.bitwise_count(words).sum())


BitSink = Callable[[bytes, int], None]


def emit_table(f: Formula, sink: Optional[BitSink] = None, *, cap: int = DEFAULT_VAR_CAP,
               threads: int = 1, chunk_words: int = DEFAULT_CHUNK_WORDS) -> TableSummary:
    """Stream the 2^n output bits of ``f`` to ``sink`` in assignment order.

    ``sink(data, nbits)`` receives packed bytes (LSB-first) holding the
    next ``nbits`` bits; chunks arrive strictly in index order even when
    ``threads > 1``.
    """
    check_cap(f, cap)
    n = f.num_vars
    chunks = _chunks(n, chunk_words)

    def work(chunk):
        return table_words(f, *chunk)

    ones = 0
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = pool.map(work, chunks)
            ones = _drain(results, n, sink)
    else:
        ones = _drain(map(work, chunks), n, sink)
    return TableSummary(n, ones)


def _drain(results: Iterator[np.ndarray], n: int, sink: Optional[BitSink]) -> int:
    ones = 0
    for words in results:
        ones += _popcount(words)
        if sink is not None:
            if n < 6:
                nbits = 1 << n
                sink(words.tobytes()[: (nbits + 7) // 8], nbits)
            else:
                sink(words.tobytes(), len(words) * WORD_BITS)
    return ones


def count_ones(f: Formula, *, cap: int = DEFAULT_VAR_CAP, threads: int = 1) -> int:
    return emit_table(f, None, cap=cap, threads=threads).ones


def table_bits(f: Formula, *, cap: int = DEFAULT_VAR_CAP) -> np.ndarray:
    """All 2^n bits as a uint8 array (index i is assignment i)."""
    parts: list[bytes] = []
    emit_table(f, lambda data, nbits: parts.append(data), cap=cap)
    bits = np.unpackbits(np.frombuffer(b"".join(parts), dtype=np.uint8),
                         bitorder="little")
    return bits[: 1 << f.num_vars]


def assignment(i: int, n: int) -> tuple[int, ...]:
    return tuple((i >> j) & 1 for j in range(n))


def emit_table_naive(f: Formula) -> Iterator[int]:
    """One evaluation per assignment; the reference the word path must match."""
    for i in range(1 << f.num_vars):
        yield evaluate(f, assignment(i, f.num_vars))


def count_ones_naive(f: Formula) -> int:
    return sum(emit_table_naive(f))


def write_table(f: Formula, out: Path, *, threads: int = 1,
                cap: int = DEFAULT_VAR_CAP) -> TableSummary:
    """Write packed bits to ``out`` and a JSON summary to ``out.json``."""
    out = Path(out)
    with open(out, "wb") as fh:
        summary = emit_table(f, lambda data, nbits: fh.write(data),
                             cap=cap, threads=threads)
    sidecar = out.with_name(out.name + ".json")
    sidecar.write_text(json.dumps(summary.to_json(), sort_keys=True) + "\n")
    return summary


# -- summary statistics ---------------------------------------------------

def binary_entropy(gamma) -> float:
    g = float(gamma)
    if not 0.0 <= g <= 1.0 or math.isnan(g):
        raise ValueError(f"gamma={gamma} outside [0, 1]")
    if g == 0.0 or g == 1.0:
        return 0.0
    return -g * math.log2(g) - (1.0 - g) * math.log2(1.0 - g)


def elias_gamma_length(value: int) -> int:
    return 2 * value.bit_length() - 1


# Per-build interpreter constant added to every description bound. Only
# meaningful relative to this serialization.
DESCRIPTION_CONSTANT = 32


def encoded_length(node: Node) -> int:
    """Bits in a self-delimiting prefix serialization of the AST.

    Tags are 3 bits (Const0, Const1, Var, Not, And, Or); Var carries an
    Elias-gamma index and And/Or an Elias-gamma child count.
    """
    total = 0
    for nd in iter_nodes(node):
        total += 3
        if isinstance(nd, Var):
            total += elias_gamma_length(nd.index)
        elif isinstance(nd, (And, Or)):
            total += elias_gamma_length(len(nd.children))
    return total


def description_upper_bound(f: Formula, c0: int = DESCRIPTION_CONSTANT) -> int:
    """c0 + bits to write n + bits to write the formula."""
    return c0 + f.num_vars.bit_length() + encoded_length(f.root)


def default_poly(n: int) -> float:
    return n * n


def classify(ts: TableSummary, poly: Callable[[int], float] = default_poly,
             band: float = 1.0) -> StringType:
    """Type1 when ones (or zeros) are polynomially rare; Type2 when the
    ones count sits within ``band * 2**(n/2)`` of half; otherwise Other."""
    if is_type1(ts, poly):
        return StringType.TYPE1
    if is_type2(ts, band):
        return StringType.TYPE2
    return StringType.OTHER


def is_type1(ts: TableSummary, poly: Callable[[int], float] = default_poly) -> bool:
    return min(ts.ones, ts.length - ts.ones) <= poly(ts.n)


def is_type2(ts: TableSummary, band: float = 1.0) -> bool:
    # compare squares so the half-integer power of two stays exact
    dev = abs(2 * ts.ones - ts.length)  # 2 * |k - 2^(n-1)|
    return Fraction(dev, 2) ** 2 <= Fraction(band) ** 2 * (1 << ts.n)


# -- random ensembles -----------------------------------------------------

def random_cnf(n: int, num_clauses: int, width: int, rng: np.random.Generator) -> Formula:
    variables = rng.integers(1, n + 1, size=(num_clauses, width))
    signs = rng.integers(0, 2, size=(num_clauses, width))
    clauses = [[int(v) if s else -int(v) for v, s in zip(vr, sr)]
               for vr, sr in zip(variables, signs)]
    return cnf(clauses, n)


def sample_ensemble(n: int, count: int, clause_density: float = 4.0, seed: int = 0,
                    *, width: int = 3, cap: int = DEFAULT_VAR_CAP) -> list[EnsembleBucket]:
    """Bucket ``count`` random ``width``-CNF formulas by their exact gamma.

    ``round(clause_density * n)`` clauses per formula (at least one). Member
    identifiers are sample indices.
    """
    if n > cap:
        raise ValueError(f"n={n} exceeds the exhaustive cap {cap}")
    rng = np.random.default_rng(seed)
    num_clauses = max(1, round(clause_density * n))
    buckets: dict[Fraction, list[int]] = {}
    for i in range(count):
        f = random_cnf(n, num_clauses, width, rng)
        buckets.setdefault(TableSummary(n, count_ones(f, cap=cap)).gamma, []).append(i)
    return [EnsembleBucket(g, buckets[g]) for g in sorted(buckets)]

