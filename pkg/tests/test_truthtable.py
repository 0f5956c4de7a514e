import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aitlab.formula import And, Const, Formula, FormulaError, Not, Or, Var, cnf, parse_expr
from aitlab.truthtable import (DESCRIPTION_CONSTANT, StringType, TableSummary, binary_entropy,
                               classify, count_ones, count_ones_naive, description_upper_bound,
                               emit_table, emit_table_naive, encoded_length, is_type1,
                               is_type2, sample_ensemble, table_bits, write_table)

from conftest import formulas, random_cnfs


def collected(f, **kw):
    chunks = []
    ts = emit_table(f, lambda data, nbits: chunks.append((data, nbits)), **kw)
    return ts, chunks


@pytest.mark.parametrize("expr, n, bits", [
    ("x1 & x2", 2, [0, 0, 0, 1]),
    ("x1 | x2", 2, [0, 1, 1, 1]),
    ("x1", 3, [0, 1, 0, 1, 0, 1, 0, 1]),
    ("x3", 3, [0, 0, 0, 0, 1, 1, 1, 1]),
])
def test_emit_table_bit_order(expr, n, bits):
    f = parse_expr(expr, n)
    assert table_bits(f).tolist() == bits
    assert list(emit_table_naive(f)) == bits


def test_const_zero_table():
    ts = emit_table(Formula(Const(False), 3))
    assert ts == TableSummary(3, 0)
    assert ts.gamma == 0
    assert table_bits(Formula(Const(False), 3)).tolist() == [0] * 8


def test_summary_fields():
    ts = emit_table(parse_expr("x1 & x2"))
    assert (ts.ones, ts.gamma) == (1, Fraction(1, 4))
    assert ts.to_json() == {"n": 2, "k": 1, "gamma_num": 1, "gamma_den": 4}
    ts = emit_table(parse_expr("x1 | x2"))
    assert (ts.ones, ts.gamma) == (3, Fraction(3, 4))


@pytest.mark.parametrize("f, k", [
    (parse_expr("x1 | x2"), 3),
    (parse_expr("x1 & !x1"), 0),
    (parse_expr("x1 | !x1", 5), 32),
])
def test_count_ones_examples(f, k):
    assert count_ones(f) == k


def test_word_path_matches_naive_on_200_random_formulas():
    for f in random_cnfs(200, seed=3, n_range=(1, 12)):
        assert count_ones(f) == count_ones_naive(f)
        assert table_bits(f).tolist() == list(emit_table_naive(f))


@settings(max_examples=150)
@given(formulas(max_vars=9, max_leaves=14))
def test_word_path_matches_naive_on_arbitrary_formulas(f):
    assert table_bits(f).tolist() == list(emit_table_naive(f))


@pytest.mark.parametrize("n", [0, 1, 3, 5, 6, 7, 10])
def test_stream_length_and_popcount(n):
    f = Formula(Or(Var(1), Not(Var(n))) if n else Const(True), n)
    ts, chunks = collected(f)
    assert sum(nbits for _, nbits in chunks) == 2 ** n
    stream = np.unpackbits(np.frombuffer(b"".join(d for d, _ in chunks), np.uint8),
                           bitorder="little")[: 2 ** n]
    assert int(stream.sum()) == ts.ones


def test_chunked_and_threaded_emission_is_identical():
    f = random_cnfs(1, seed=9, n_range=(16, 16), density=(2.0, 2.0))[0]
    ts1, c1 = collected(f)
    ts2, c2 = collected(f, threads=4, chunk_words=64)
    assert ts1 == ts2
    assert b"".join(d for d, _ in c1) == b"".join(d for d, _ in c2)


def test_cap_enforced():
    f = Formula(Var(1), 31)
    with pytest.raises(FormulaError):
        count_ones(f)
    assert count_ones(Formula(Var(1), 8), cap=8) == 128


def test_write_table(tmp_path):
    f = parse_expr("x1 & x2 | x3", 3)
    ts = write_table(f, tmp_path / "t.bin")
    data = (tmp_path / "t.bin").read_bytes()
    assert data == bytes([0b11111000])  # assignments 3..7 true, LSB first
    side = json.loads((tmp_path / "t.bin.json").read_text())
    assert side == {"n": 3, "k": 5, "gamma_num": 5, "gamma_den": 8}
    assert ts.ones == 5


# -- entropy --------------------------------------------------------------

def test_entropy_values():
    assert binary_entropy(0) == 0.0
    assert binary_entropy(1) == 0.0
    assert binary_entropy(Fraction(1, 2)) == 1.0
    # 40-digit closed form evaluated with mpmath
    assert binary_entropy(Fraction(1, 4)) == pytest.approx(0.8112781244591328639, abs=1e-13)


@pytest.mark.parametrize("bad", [-0.1, 1.5, float("nan")])
def test_entropy_rejects_out_of_range(bad):
    with pytest.raises(ValueError):
        binary_entropy(bad)


def test_entropy_symmetry_1000_samples():
    rng = np.random.default_rng(5)
    for g in rng.uniform(0, 1, 1000):
        assert abs(binary_entropy(g) - binary_entropy(1 - g)) <= 1e-12


# -- description bound ----------------------------------------------------

def test_description_bound_const():
    f = Formula(Const(False), 3)
    assert description_upper_bound(f) == DESCRIPTION_CONSTANT + 2 + encoded_length(Const(False))
    assert encoded_length(Const(False)) == 3


def test_description_bound_at_least_constant():
    assert description_upper_bound(parse_expr("x1 & x2")) >= DESCRIPTION_CONSTANT


def test_description_bound_monotone_under_added_clause():
    rng = np.random.default_rng(21)
    for _ in range(1000):
        n = int(rng.integers(1, 12))
        clauses = [[int(v) * (1 if s else -1) for v, s in
                    zip(rng.integers(1, n + 1, 3), rng.integers(0, 2, 3))]
                   for _ in range(int(rng.integers(1, 8)))]
        extra = [int(rng.integers(1, n + 1))]
        assert (description_upper_bound(cnf(clauses + [extra], n))
                >= description_upper_bound(cnf(clauses, n)))


# -- classification -------------------------------------------------------

def test_classify_examples():
    quad = lambda n: n * n
    assert classify(TableSummary(10, 0), quad) is StringType.TYPE1
    assert classify(TableSummary(10, 512), quad) is StringType.TYPE2
    # min(300, 724) > 100 and |300 - 512| = 212 > 2^5
    assert classify(TableSummary(10, 300), quad) is StringType.OTHER


@given(st.integers(4, 24).flatmap(lambda n: st.tuples(
    st.just(n), st.integers(0, 2 ** n),
    st.integers(0, max(0, math.ceil(2 ** (n / 2 - 1)) - 1)))))
def test_type1_type2_disjoint_below_threshold(args):
    n, k, p = args
    ts = TableSummary(n, k)
    assert not (is_type1(ts, lambda _: p) and is_type2(ts))


def test_classify_pi_digits():
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.prec = 1100
    frac = mpmath.mpf(mpmath.pi) - 3
    bits = []
    for _ in range(1024):
        frac *= 2
        bit = int(frac)
        bits.append(bit)
        frac -= bit
    ts = TableSummary(10, sum(bits))
    assert classify(ts) is StringType.TYPE2


# -- ensembles ------------------------------------------------------------

def test_sample_single_formula():
    buckets = sample_ensemble(2, 1, seed=0)
    assert len(buckets) == 1 and len(buckets[0].members) == 1


def test_sample_buckets_hold_their_gamma():
    from aitlab.truthtable import random_cnf
    buckets = sample_ensemble(5, 200, 3.0, seed=4)
    rng = np.random.default_rng(4)
    gammas = [TableSummary(5, count_ones(random_cnf(5, 15, 3, rng))).gamma for _ in range(200)]
    for b in buckets:
        assert all(gammas[i] == b.gamma for i in b.members)
    assert sum(len(b.members) for b in buckets) == 200
    assert len({b.gamma for b in buckets}) == len(buckets)


def test_sample_reproducible():
    a = sample_ensemble(8, 1000, 4.0, seed=42)
    b = sample_ensemble(8, 1000, 4.0, seed=42)
    assert [(x.gamma, x.members) for x in a] == [(y.gamma, y.members) for y in b]
