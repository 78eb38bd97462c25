"""Text format for networks.

Either an explicit network::

    net 2
    0: x1
    1: (!x0 & !x1) | (x0 & x1)

or the circulant shorthand ``circulant <n> <c_0...c_{n-1}>``.  ``#`` starts
a comment; blank lines are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass

from .circulant import CirculantError, CirculantSpec
from .formula import FormulaSyntaxError, compile, parse_formula, render, table_formula
from .network import Network, SizeGuardError


class NetworkFileError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


@dataclass(frozen=True)
class LoadedNetwork:
    n: int
    network: Network | None  # None when a circulant is too large for truth tables
    circulant: CirculantSpec | None = None

    def require_network(self) -> Network:
        if self.network is None:
            raise SizeGuardError(f"n = {self.n} is too large for truth tables")
        return self.network


def _content_lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if line.strip():
            yield number, line


def parse_network(text: str) -> LoadedNetwork:
    lines = list(_content_lines(text))
    if not lines:
        raise NetworkFileError("empty network file", 1)
    number, header = lines[0]
    words = header.split()
    if words[0] == "circulant":
        return _parse_circulant(words, number, lines[1:])
    if words[0] != "net" or len(words) != 2 or not words[1].isdigit():
        raise NetworkFileError("expected 'net <n>' or 'circulant <n> <row>'", number)
    n = int(words[1])
    if n < 1:
        raise NetworkFileError("network size must be >= 1", number)
    formulas: dict[int, object] = {}
    for number, line in lines[1:]:
        head, sep, body = line.partition(":")
        if not sep or not head.strip().isdigit():
            raise NetworkFileError("expected '<i>: <formula>'", number)
        i = int(head)
        if i >= n:
            raise NetworkFileError(f"automaton {i} out of range for n = {n}", number)
        if i in formulas:
            raise NetworkFileError(f"automaton {i} defined twice", number)
        offset = len(head) + 1
        try:
            formulas[i] = parse_formula(body, n)
        except FormulaSyntaxError as exc:
            raise NetworkFileError(str(exc), number, offset + exc.position + 1) from exc
    missing = sorted(set(range(n)) - set(formulas))
    if missing:
        raise NetworkFileError(f"no formula for automata {missing}", lines[-1][0])
    asts = tuple(formulas[i] for i in range(n))
    net = Network(n, tuple(compile(a, n) for a in asts), asts)
    return LoadedNetwork(n, net)


def _parse_circulant(words, number, rest) -> LoadedNetwork:
    if len(words) != 3 or not words[1].isdigit():
        raise NetworkFileError("expected 'circulant <n> <row-bits>'", number)
    if rest:
        raise NetworkFileError("unexpected content after circulant header", rest[0][0])
    n, row = int(words[1]), words[2]
    if len(row) != n or set(row) - {"0", "1"}:
        raise NetworkFileError(f"row must be {n} binary digits", number)
    try:
        spec = CirculantSpec.from_string(row)
    except CirculantError as exc:
        raise NetworkFileError(str(exc), number) from exc
    try:
        net = spec.network()
    except SizeGuardError:
        net = None
    return LoadedNetwork(n, net, spec)


def load_network(path) -> LoadedNetwork:
    with open(path, encoding="utf-8") as fh:
        return parse_network(fh.read())


def dump_network(net: Network) -> str:
    asts = net.formulas or tuple(table_formula(t) for t in net.tables)
    lines = [f"net {net.n}"] + [f"{i}: {render(a)}" for i, a in enumerate(asts)]
    return "\n".join(lines) + "\n"
