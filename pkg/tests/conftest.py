from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

from aitlab.formula import And, Const, Formula, Not, Or, Var, cnf, parse_dimacs, parse_expr
from aitlab.truthtable import random_cnf

FIXTURES = Path(__file__).parent / "fixtures"


def formulas(max_vars=6, max_leaves=12):
    """Hypothesis strategy for arbitrary (non-CNF) formulas."""

    @st.composite
    def build(draw):
        n = draw(st.integers(min_value=1, max_value=max_vars))
        leaves = st.one_of(
            st.integers(min_value=1, max_value=n).map(Var),
            st.booleans().map(Const),
        )
        tree = st.recursive(
            leaves,
            lambda kids: st.one_of(
                kids.map(Not),
                st.lists(kids, min_size=2, max_size=3).map(lambda cs: And(*cs)),
                st.lists(kids, min_size=2, max_size=3).map(lambda cs: Or(*cs)),
            ),
            max_leaves=max_leaves,
        )
        return Formula(draw(tree), n)

    return build()


def random_cnfs(count, seed, n_range=(1, 12), density=(1.0, 6.0), width=3):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        clauses = max(1, int(round(rng.uniform(*density) * n)))
        out.append(random_cnf(n, clauses, width, rng))
    return out


def crafted_corpus():
    """Hand-made formulas with known counts, plus the DIMACS fixtures."""
    corpus = [
        parse_expr("x1 & x2"),
        parse_expr("x1 | x2"),
        parse_expr("x1 & !x1"),
        parse_expr("x1 | !x1", 5),
        parse_expr("(x1 | x2) & (!x1 | x3) & (x2 | !x3)"),
        parse_expr("!(x1 & x2) | x3 & x4"),
        Formula(Const(False), 3),
        Formula(Const(True), 4),
        cnf([[1, -1], [2, -2]], 2),
        cnf([[1], [-1]], 1),
    ]
    for path in sorted(FIXTURES.glob("*.cnf")):
        corpus.append(parse_dimacs(path.read_text()))
    return corpus


@pytest.fixture(scope="session")
def corpus():
    return crafted_corpus() + random_cnfs(60, seed=11)
