"""Boolean formula AST, DIMACS/infix parsers and evaluation.

Formulas are immutable trees over variables ``x1..xn``. The variable count
``num_vars`` is carried separately from the tree so that a formula may
ignore some of its variables (the truth table length is still ``2**n``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

DEFAULT_VAR_CAP = 30


class FormulaError(ValueError):
    """Raised for malformed formula input."""


class DimacsError(FormulaError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ExprSyntaxError(FormulaError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"syntax error at offset {offset}: {message}")
        self.offset = offset


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Not:
    child: "Node"


@dataclass(frozen=True)
class And:
    children: tuple

    def __init__(self, *children: "Node"):
        if len(children) == 1 and isinstance(children[0], (list, tuple)):
            children = tuple(children[0])
        if not children:
            raise FormulaError("And needs at least one child")
        object.__setattr__(self, "children", tuple(children))


@dataclass(frozen=True)
class Or:
    children: tuple

    def __init__(self, *children: "Node"):
        if len(children) == 1 and isinstance(children[0], (list, tuple)):
            children = tuple(children[0])
        if not children:
            raise FormulaError("Or needs at least one child")
        object.__setattr__(self, "children", tuple(children))


Node = Union[Const, Var, Not, And, Or]


def iter_nodes(node: Node) -> Iterable[Node]:
    stack = [node]
    while stack:
        cur = stack.pop()
        yield cur
        if isinstance(cur, Not):
            stack.append(cur.child)
        elif isinstance(cur, (And, Or)):
            stack.extend(reversed(cur.children))


def max_var(node: Node) -> int:
    return max((nd.index for nd in iter_nodes(node) if isinstance(nd, Var)), default=0)


@dataclass(frozen=True)
class Formula:
    root: Node
    num_vars: int

    def __post_init__(self):
        if self.num_vars < 0:
            raise FormulaError("num_vars must be non-negative")
        for nd in iter_nodes(self.root):
            if isinstance(nd, Var) and not 1 <= nd.index <= self.num_vars:
                raise FormulaError(
                    f"variable x{nd.index} outside 1..{self.num_vars}")

    @classmethod
    def of(cls, root: Node, num_vars: int | None = None) -> "Formula":
        """Wrap ``root``, inferring ``num_vars`` from the largest index used."""
        return cls(root, max_var(root) if num_vars is None else num_vars)

    @property
    def n(self) -> int:
        return self.num_vars

    def eval(self, assignment: Sequence[int]) -> int:
        return evaluate(self, assignment)

    def render(self) -> str:
        return render(self.root)

    def is_cnf(self) -> bool:
        root = self.root
        if not isinstance(root, And):
            return False
        for clause in root.children:
            if not isinstance(clause, Or):
                return False
            for lit in clause.children:
                if isinstance(lit, Not):
                    lit = lit.child
                if not isinstance(lit, Var):
                    return False
        return True


def check_cap(f: Formula, cap: int = DEFAULT_VAR_CAP) -> None:
    if f.num_vars > cap:
        raise FormulaError(f"n={f.num_vars} exceeds the exhaustive cap {cap}")


# -- construction helpers -------------------------------------------------

def literal(lit: int) -> Node:
    return Var(lit) if lit > 0 else Not(Var(-lit))


def cnf(clauses: Sequence[Sequence[int]], num_vars: int | None = None) -> Formula:
    """Build a formula from integer clauses.

    An empty clause list is ``Const(True)``; an empty clause inside the
    list is ``Const(False)``.
    """
    if num_vars is None:
        num_vars = max((abs(l) for c in clauses for l in c), default=0)
    if not clauses:
        return Formula(Const(True), num_vars)
    parts = [Or(*[literal(l) for l in c]) if c else Const(False) for c in clauses]
    return Formula(And(*parts), num_vars)


# -- evaluation -----------------------------------------------------------

def _eval_node(node: Node, a: Sequence[int]) -> bool:
    if isinstance(node, Var):
        return bool(a[node.index - 1])
    if isinstance(node, Not):
        return not _eval_node(node.child, a)
    if isinstance(node, And):
        return all(_eval_node(c, a) for c in node.children)
    if isinstance(node, Or):
        return any(_eval_node(c, a) for c in node.children)
    return bool(node.value)


def evaluate(f: Formula, assignment: Sequence[int]) -> int:
    """Evaluate ``f`` where ``assignment[j-1]`` is the value of ``xj``."""
    if len(assignment) != f.num_vars:
        raise FormulaError(
            f"assignment has length {len(assignment)}, formula has {f.num_vars} variables")
    return int(_eval_node(f.root, assignment))


# -- DIMACS ---------------------------------------------------------------

def parse_dimacs(text: str) -> Formula:
    """Parse DIMACS CNF into an And of Ors of literals."""
    header = None
    clauses: list[list[int]] = []
    current: list[int] = []
    current_line = 0
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            if header is not None:
                raise DimacsError("duplicate problem header", lineno)
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"malformed header {line!r}", lineno)
            try:
                nvars, ncl = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"malformed header {line!r}", lineno) from None
            if nvars < 0 or ncl < 0:
                raise DimacsError(f"malformed header {line!r}", lineno)
            header = (nvars, ncl)
            continue
        if header is None:
            raise DimacsError("clause before problem header", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"bad literal {tok!r}", lineno) from None
            if lit == 0:
                if not current:
                    raise DimacsError("zero-length clause", lineno)
                clauses.append(current)
                current = []
                continue
            if abs(lit) > header[0]:
                raise DimacsError(
                    f"literal out of range: {lit} (n={header[0]})", lineno)
            if not current:
                current_line = lineno
            current.append(lit)
    if header is None:
        raise DimacsError("missing problem header", max(lineno, 1))
    if current:
        raise DimacsError("unterminated clause", current_line)
    if len(clauses) != header[1]:
        raise DimacsError(
            f"clause count mismatch: header says {header[1]}, found {len(clauses)}",
            lineno)
    return cnf(clauses, header[0])


def to_dimacs(f: Formula) -> str:
    if not f.is_cnf():
        raise FormulaError("formula is not in CNF shape")
    lines = [f"p cnf {f.num_vars} {len(f.root.children)}"]
    for clause in f.root.children:
        lits = [f"-{l.child.index}" if isinstance(l, Not) else str(l.index)
                for l in clause.children]
        lines.append(" ".join(lits) + " 0")
    return "\n".join(lines) + "\n"


# -- infix expressions ----------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(x[0-9]+)|([!&|()01]))")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = text[pos:]
            if not rest.strip():
                break
            off = pos + len(rest) - len(rest.lstrip())
            raise ExprSyntaxError(f"unknown token {text[off]!r}", off)
        tok = m.group(1) or m.group(2)
        tokens.append((tok, m.start(1) if m.group(1) else m.start(2)))
        pos = m.end()
    tokens.append(("", len(text)))
    return tokens


class _ExprParser:
    # or_expr := and_expr ('|' and_expr)* ; and_expr := unary ('&' unary)*
    # unary := '!' unary | primary ; primary := var | 0 | 1 | '(' or_expr ')'

    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> Node:
        node = self.or_expr()
        tok, off = self.peek()
        if tok:
            raise ExprSyntaxError(f"unexpected {tok!r}", off)
        return node

    def or_expr(self) -> Node:
        parts = [self.and_expr()]
        while self.peek()[0] == "|":
            self.take()
            parts.append(self.and_expr())
        return parts[0] if len(parts) == 1 else Or(*parts)

    def and_expr(self) -> Node:
        parts = [self.unary()]
        while self.peek()[0] == "&":
            self.take()
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(*parts)

    def unary(self) -> Node:
        if self.peek()[0] == "!":
            self.take()
            return Not(self.unary())
        return self.primary()

    def primary(self) -> Node:
        tok, off = self.take()
        if tok.startswith("x"):
            idx = int(tok[1:])
            if idx < 1:
                raise ExprSyntaxError("variable indices start at 1", off)
            return Var(idx)
        if tok in ("0", "1"):
            return Const(tok == "1")
        if tok == "(":
            node = self.or_expr()
            close, coff = self.take()
            if close != ")":
                raise ExprSyntaxError("expected ')'", coff)
            return node
        if not tok:
            raise ExprSyntaxError("unexpected end of input", off)
        raise ExprSyntaxError(f"unexpected {tok!r}", off)


def parse_expr(text: str, num_vars: int | None = None) -> Formula:
    """Parse an infix formula: ``!`` binds tighter than ``&``, which binds
    tighter than ``|``. ``num_vars`` defaults to the largest index used."""
    root = _ExprParser(text).parse()
    return Formula.of(root, num_vars)


def render(node: Node) -> str:
    """Infix text that parses back to the same tree."""
    if isinstance(node, Const):
        return "1" if node.value else "0"
    if isinstance(node, Var):
        return f"x{node.index}"
    if isinstance(node, Not):
        inner = render(node.child)
        if isinstance(node.child, (And, Or)):
            inner = f"({inner})"
        return "!" + inner
    op = " & " if isinstance(node, And) else " | "
    parts = []
    for c in node.children:
        s = render(c)
        # nested n-ary nodes would otherwise flatten on re-parse
        if isinstance(c, (And, Or)):
            s = f"({s})"
        parts.append(s)
    return op.join(parts)
