"""Boolean formulas: parsing, rendering, truth tables and local monotonicity.

Truth tables are bit-packed into a Python ``int``: bit ``encode(x)`` holds
``f(x)``, with ``encode(x) = sum(x_i << i)`` (little-endian, ``x_0`` is bit 0).
All table operations are therefore plain integer bit algebra.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

MAX_TABLE_ARITY = 24


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    index: int

    def evaluate(self, x: int) -> int:
        return (x >> self.index) & 1


@dataclass(frozen=True)
class Const:
    value: int

    def evaluate(self, x: int) -> int:
        return self.value


@dataclass(frozen=True)
class Not:
    child: "Formula"

    def evaluate(self, x: int) -> int:
        return 1 - self.child.evaluate(x)


class _Nary:
    children: tuple

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError(f"{type(self).__name__} needs at least 2 children")


@dataclass(frozen=True)
class And(_Nary):
    children: tuple

    def evaluate(self, x: int) -> int:
        return int(all(c.evaluate(x) for c in self.children))


@dataclass(frozen=True)
class Or(_Nary):
    children: tuple

    def evaluate(self, x: int) -> int:
        return int(any(c.evaluate(x) for c in self.children))


@dataclass(frozen=True)
class Xor(_Nary):
    children: tuple

    def evaluate(self, x: int) -> int:
        v = 0
        for c in self.children:
            v ^= c.evaluate(x)
        return v


Formula = Union[Var, Const, Not, And, Or, Xor]


def max_var(ast: Formula) -> int:
    """Largest variable index in ``ast``, or -1 if it has none."""
    if isinstance(ast, Var):
        return ast.index
    if isinstance(ast, Const):
        return -1
    if isinstance(ast, Not):
        return max_var(ast.child)
    return max(max_var(c) for c in ast.children)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

class FormulaSyntaxError(ValueError):
    """Raised on malformed formula text; carries the offending position."""

    def __init__(self, message: str, position: int, expected: tuple[str, ...] = ()):
        self.position = position
        self.expected = expected
        detail = f" (expected {', '.join(expected)})" if expected else ""
        super().__init__(f"{message} at position {position}{detail}")


class _Parser:
    _UNARY_START = ("'!'", "'('", "variable", "'0'", "'1'")

    def __init__(self, text: str, arity: int):
        self.text = text
        self.arity = arity
        self.pos = 0

    def _skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> Formula:
        ast = self._binary(0)
        if self._peek():
            raise FormulaSyntaxError(
                f"unexpected {self._peek()!r}", self.pos, ("'|'", "'^'", "'&'", "')'", "end of input")
            )
        return ast

    # precedence levels, loosest first
    _LEVELS = (("|", Or), ("^", Xor), ("&", And))

    def _binary(self, level: int) -> Formula:
        if level == len(self._LEVELS):
            return self._unary()
        op, node = self._LEVELS[level]
        items = [self._binary(level + 1)]
        while self._peek() == op:
            self.pos += 1
            items.append(self._binary(level + 1))
        return items[0] if len(items) == 1 else node(tuple(items))

    def _unary(self) -> Formula:
        ch = self._peek()
        start = self.pos
        if ch == "!":
            self.pos += 1
            return Not(self._unary())
        if ch == "(":
            self.pos += 1
            inner = self._binary(0)
            if self._peek() != ")":
                raise FormulaSyntaxError("unclosed parenthesis", self.pos, ("')'",))
            self.pos += 1
            return inner
        if ch in ("0", "1"):
            self.pos += 1
            return Const(int(ch))
        if ch == "x":
            self.pos += 1
            end = self.pos
            while end < len(self.text) and self.text[end].isdigit():
                end += 1
            if end == self.pos:
                raise FormulaSyntaxError("missing variable index", self.pos, ("digits",))
            index = int(self.text[self.pos:end])
            if index >= self.arity:
                raise FormulaSyntaxError(
                    f"variable index x{index} out of range for arity {self.arity}", start
                )
            self.pos = end
            return Var(index)
        found = repr(ch) if ch else "end of input"
        raise FormulaSyntaxError(f"unexpected {found}", self.pos, self._UNARY_START)


def parse_formula(text: str, arity: int) -> Formula:
    """Parse ``text`` into an AST whose variables are all below ``arity``.

    Precedence is ``!`` > ``&`` > ``^`` > ``|``; whitespace is ignored.
    """
    if arity < 1:
        raise ValueError("arity must be >= 1")
    return _Parser(text, arity).parse()


_PRECEDENCE = {Or: 0, Xor: 1, And: 2}
_SYMBOL = {Or: " | ", Xor: " ^ ", And: " & "}


def render(ast: Formula) -> str:
    """Render ``ast`` in the grammar accepted by :func:`parse_formula`."""
    if isinstance(ast, Var):
        return f"x{ast.index}"
    if isinstance(ast, Const):
        return str(ast.value)
    if isinstance(ast, Not):
        inner = render(ast.child)
        if isinstance(ast.child, (Var, Const, Not)):
            return "!" + inner
        return f"!({inner})"
    prec = _PRECEDENCE[type(ast)]
    parts = []
    for child in ast.children:
        text = render(child)
        # same-level children must be wrapped too: the parser flattens chains
        if type(child) in _PRECEDENCE and _PRECEDENCE[type(child)] <= prec:
            text = f"({text})"
        parts.append(text)
    return _SYMBOL[type(ast)].join(parts)


# ---------------------------------------------------------------------------
# Truth tables
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def full_mask(n: int) -> int:
    return (1 << (1 << n)) - 1


@lru_cache(maxsize=None)
def low_mask(n: int, j: int) -> int:
    """Table of the predicate ``x_j == 0`` over ``n`` inputs."""
    half = 1 << j
    block = (1 << half) - 1
    period = half << 1
    return block * (full_mask(n) // ((1 << period) - 1))


def projection(n: int, j: int) -> int:
    """Table of ``x -> x_j`` over ``n`` inputs."""
    return full_mask(n) ^ low_mask(n, j)


@dataclass(frozen=True)
class TruthTable:
    arity: int
    bits: int

    def __post_init__(self):
        if not 0 <= self.arity <= MAX_TABLE_ARITY:
            raise ValueError(f"arity {self.arity} outside [0, {MAX_TABLE_ARITY}]")
        if self.bits < 0 or self.bits >> (1 << self.arity):
            raise ValueError("bits do not fit a table of this arity")

    def __call__(self, x: int) -> int:
        return (self.bits >> x) & 1

    def __len__(self) -> int:
        return 1 << self.arity

    def values(self) -> list[int]:
        return [(self.bits >> x) & 1 for x in range(1 << self.arity)]

    @classmethod
    def from_values(cls, values) -> "TruthTable":
        values = list(values)
        arity = len(values).bit_length() - 1
        if 1 << arity != len(values):
            raise ValueError("table length must be a power of two")
        bits = 0
        for x, v in enumerate(values):
            if v:
                bits |= 1 << x
        return cls(arity, bits)


def compile(ast: Formula, n: int) -> TruthTable:  # noqa: A001
    """Compile ``ast`` to the truth table of a function of ``n`` inputs."""
    if max_var(ast) >= n:
        raise ValueError(f"formula uses x{max_var(ast)} but n = {n}")
    return TruthTable(n, _compile_bits(ast, n))


def _compile_bits(ast: Formula, n: int) -> int:
    if isinstance(ast, Var):
        return projection(n, ast.index)
    if isinstance(ast, Const):
        return full_mask(n) if ast.value else 0
    if isinstance(ast, Not):
        return full_mask(n) ^ _compile_bits(ast.child, n)
    bits = [_compile_bits(c, n) for c in ast.children]
    acc = bits[0]
    for b in bits[1:]:
        if isinstance(ast, And):
            acc &= b
        elif isinstance(ast, Or):
            acc |= b
        else:
            acc ^= b
    return acc


def _split(f: TruthTable, j: int) -> tuple[int, int]:
    """Return (f restricted to x_j=0, f restricted to x_j=1), aligned on x_j=0 slots."""
    m = low_mask(f.arity, j)
    return f.bits & m, (f.bits >> (1 << j)) & m


def effectively_influences(f: TruthTable, j: int) -> bool:
    """True iff flipping input ``j`` changes ``f`` somewhere."""
    if not 0 <= j < f.arity:
        raise ValueError(f"input {j} out of range for arity {f.arity}")
    lo, hi = _split(f, j)
    return lo != hi


class Verdict(enum.Enum):
    INCREASING = "Increasing"
    DECREASING = "Decreasing"
    INDEPENDENT = "Independent"
    NON_MONOTONE = "NonMonotone"


class Monotony(enum.Enum):
    MONOTONE = "Monotone"
    PARTIALLY_NON_MONOTONE = "PartiallyNonMonotone"
    TOTALLY_NON_MONOTONE = "TotallyNonMonotone"


def local_monotonicity(f: TruthTable, j: int) -> Verdict:
    if not 0 <= j < f.arity:
        raise ValueError(f"input {j} out of range for arity {f.arity}")
    lo, hi = _split(f, j)
    rises = hi & ~lo
    falls = lo & ~hi
    if not rises and not falls:
        return Verdict.INDEPENDENT
    if not falls:
        return Verdict.INCREASING
    if not rises:
        return Verdict.DECREASING
    return Verdict.NON_MONOTONE


def is_monotone(f: TruthTable) -> bool:
    return all(local_monotonicity(f, j) is not Verdict.NON_MONOTONE for j in range(f.arity))


@dataclass(frozen=True)
class MonotonicityReport:
    verdicts: tuple[tuple[Verdict, ...], ...]  # verdicts[i][j]: f_i in input j
    network: Monotony


def monotonicity_report(tables) -> MonotonicityReport:
    verdicts = tuple(
        tuple(local_monotonicity(f, j) for j in range(f.arity)) for f in tables
    )
    non_mono = [any(v is Verdict.NON_MONOTONE for v in row) for row in verdicts]
    if not any(non_mono):
        kind = Monotony.MONOTONE
    elif all(non_mono):
        kind = Monotony.TOTALLY_NON_MONOTONE
    else:
        kind = Monotony.PARTIALLY_NON_MONOTONE
    return MonotonicityReport(verdicts, kind)


def classify_monotony(net) -> Monotony:
    """Monotony class of a network (anything exposing ``tables``)."""
    return monotonicity_report(net.tables).network


def table_formula(f: TruthTable) -> Formula:
    """A readable formula for ``f``.

    Constants, literals and (negated) XORs of inputs are recognised; anything
    else falls back to the disjunction of its minterms.
    """
    n, full = f.arity, full_mask(f.arity)
    if f.bits == 0 or f.bits == full:
        return Const(int(f.bits == full))
    inputs = [j for j in range(n) if effectively_influences(f, j)]
    parity = 0
    for j in inputs:
        parity ^= projection(n, j)
    if f.bits in (parity, full ^ parity):
        core: Formula = Var(inputs[0]) if len(inputs) == 1 else Xor(tuple(Var(j) for j in inputs))
        return core if f.bits == parity else Not(core)
    terms = []
    for x in range(1 << n):
        if f(x):
            lits = tuple(Var(j) if (x >> j) & 1 else Not(Var(j)) for j in range(n))
            terms.append(lits[0] if n == 1 else And(lits))
    return terms[0] if len(terms) == 1 else Or(tuple(terms))
