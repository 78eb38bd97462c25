"""Boolean automata networks, configurations and update functions.

A configuration of ``n`` automata is an ``int`` whose bit ``i`` is the state
of automaton ``i`` (the same little-endian encoding as truth-table indices).
Its textual form lists ``x_0 x_1 ... x_{n-1}`` left to right, so the string
``"01"`` is the integer 2.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .formula import (
    Formula,
    TruthTable,
    compile,
    effectively_influences,
    parse_formula,
)

Config = int

EXHAUSTIVE_LIMIT = 24
TRAJECTORY_LIMIT = 4096


class SizeGuardError(RuntimeError):
    """An operation would enumerate more states than the configured guard allows."""


def exhaustive_limit() -> int:
    """State-bit guard for 2^n operations; ``BAN_MAX_STATE_BITS`` overrides it."""
    value = os.environ.get("BAN_MAX_STATE_BITS")
    return int(value) if value else EXHAUSTIVE_LIMIT


def check_exhaustive(n: int, limit: int | None = None, what: str = "state space") -> None:
    cap = exhaustive_limit() if limit is None else min(limit, exhaustive_limit())
    if n > cap:
        raise SizeGuardError(f"{what} of size 2^{n} exceeds the guard n <= {cap}")


# ---------------------------------------------------------------------------
# Configurations
# ---------------------------------------------------------------------------

def parse_config(text: str, n: int | None = None) -> Config:
    text = text.strip()
    if not text or set(text) - {"0", "1"}:
        raise ValueError(f"configuration {text!r} is not a binary string")
    if n is not None and len(text) != n:
        raise ValueError(f"configuration {text!r} has length {len(text)}, expected {n}")
    x = 0
    for i, ch in enumerate(text):
        if ch == "1":
            x |= 1 << i
    return x


def format_config(x: Config, n: int) -> str:
    return "".join("1" if (x >> i) & 1 else "0" for i in range(n))


def to_bits(x: Config, n: int) -> list[int]:
    return [(x >> i) & 1 for i in range(n)]


def from_bits(bits: Iterable[int]) -> Config:
    x = 0
    for i, b in enumerate(bits):
        if b:
            x |= 1 << i
    return x


def set_mask(W: Iterable[int], n: int) -> int:
    mask = 0
    for i in W:
        if not 0 <= i < n:
            raise ValueError(f"automaton {i} out of range for n = {n}")
        mask |= 1 << i
    return mask


def mask_members(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def flip(x: Config, W: Iterable[int], n: int) -> Config:
    """Negate the states of the automata in ``W``."""
    return x ^ set_mask(W, n)


def unit(i: int, n: int) -> Config:
    """The configuration where ``i`` is the only automaton at state 1."""
    if not 0 <= i < n:
        raise ValueError(f"automaton {i} out of range for n = {n}")
    return 1 << i


def density(x: Config, n: int) -> Fraction:
    if n < 1:
        raise ValueError("n must be >= 1")
    return Fraction(bin(x).count("1"), n)


# ---------------------------------------------------------------------------
# Networks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Network:
    """``n`` automata, each with a local function given as an arity-``n`` truth table."""

    n: int
    tables: tuple[TruthTable, ...]
    formulas: tuple[Formula, ...] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a network needs at least one automaton")
        if len(self.tables) != self.n:
            raise ValueError(f"expected {self.n} local functions, got {len(self.tables)}")
        for i, t in enumerate(self.tables):
            if t.arity != self.n:
                raise ValueError(f"f_{i} has arity {t.arity}, expected {self.n}")

    @classmethod
    def from_formulas(cls, formulas: Sequence[str | Formula]) -> "Network":
        n = len(formulas)
        asts = tuple(parse_formula(f, n) if isinstance(f, str) else f for f in formulas)
        return cls(n, tuple(compile(a, n) for a in asts), asts)

    @classmethod
    def from_bits(cls, n: int, bits: Sequence[int]) -> "Network":
        return cls(n, tuple(TruthTable(n, b) for b in bits))

    def local(self, i: int, x: Config) -> int:
        return self.tables[i](x)

    def step(self, x: Config) -> Config:
        """Parallel update: every automaton reads ``x`` and updates at once."""
        y = 0
        for i, t in enumerate(self.tables):
            if (t.bits >> x) & 1:
                y |= 1 << i
        return y

    @cached_property
    def images(self) -> np.ndarray:
        """Parallel image of every configuration, indexed by encoding."""
        check_exhaustive(self.n)
        size = 1 << self.n
        out = np.zeros(size, dtype=np.int64)
        nbytes = max(1, size // 8)
        for i, t in enumerate(self.tables):
            raw = np.frombuffer(t.bits.to_bytes(nbytes, "little"), dtype=np.uint8)
            col = np.unpackbits(raw, bitorder="little")[:size].astype(np.int64)
            out |= col << i
        out.flags.writeable = False
        return out


def update(net: Network, x: Config, W: Iterable[int]) -> Config:
    """Apply ``F_W``: automata in ``W`` take ``f_i(x)``, the others keep their state."""
    w = set_mask(W, net.n)
    return update_mask(net, x, w)


def update_mask(net: Network, x: Config, w: int) -> Config:
    return (x & ~w) | (net.step(x) & w)


def parallel_step(net: Network, x: Config) -> Config:
    return net.step(x)


@dataclass(frozen=True)
class InteractionGraph:
    n: int
    arcs: frozenset[tuple[int, int]]  # (j, i): j effectively influences i

    def in_neighbours(self, i: int) -> list[int]:
        return sorted(j for j, k in self.arcs if k == i)


def interaction_graph(net: Network) -> InteractionGraph:
    arcs = frozenset(
        (j, i)
        for i, f in enumerate(net.tables)
        for j in range(net.n)
        if effectively_influences(f, j)
    )
    return InteractionGraph(net.n, arcs)
