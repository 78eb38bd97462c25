"""Transition graphs under the general, asynchronous and parallel modes.

Every update ``F_W(x)`` equals ``x`` with the bits of ``W & D(x)`` flipped,
where ``D(x) = x ^ F_V(x)`` is the set of automata whose local function
disagrees with their state.  Graphs therefore store only the parallel image
table and derive successors and arc labels from ``D(x)`` on demand; labels of
the general graph are never materialised wholesale.
"""

from __future__ import annotations

import csv
import enum
import io
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator

from .network import (
    Config,
    Network,
    SizeGuardError,
    TRAJECTORY_LIMIT,
    check_exhaustive,
    format_config,
    mask_members,
)

GENERAL_LIMIT = 16


class Mode(enum.Enum):
    GENERAL = "general"
    ASYNCHRONOUS = "asynchronous"
    PARALLEL = "parallel"

    @classmethod
    def parse(cls, value: "str | Mode") -> "Mode":
        if isinstance(value, Mode):
            return value
        short = {"g": cls.GENERAL, "a": cls.ASYNCHRONOUS, "p": cls.PARALLEL}
        if value in short:
            return short[value]
        return cls(value)


def label_key(w: int) -> tuple[int, tuple[int, ...]]:
    """Sort key for update sets: smaller sets first, then by members."""
    return bin(w).count("1"), mask_members(w)


def _subsets(mask: int) -> Iterator[int]:
    """All subsets of ``mask``, including 0 and ``mask`` itself."""
    s = mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask


class TransitionGraph:
    """Labelled transition graph on all ``2^n`` configurations of a network."""

    def __init__(self, net: Network, mode: "Mode | str"):
        self.mode = Mode.parse(mode)
        self.n = net.n
        check_exhaustive(self.n)
        if self.mode is Mode.GENERAL:
            check_exhaustive(self.n, GENERAL_LIMIT, "general transition graph")
        self.net = net
        self.full = (1 << self.n) - 1
        self.images: list[int] = net.images.tolist()
        self._succ: list[tuple[int, ...]] | None = None

    @property
    def size(self) -> int:
        return 1 << self.n

    def disagreement(self, x: Config) -> int:
        return x ^ self.images[x]

    def _compute_successors(self, x: Config) -> tuple[int, ...]:
        if self.mode is Mode.PARALLEL:
            return (self.images[x],)
        d = x ^ self.images[x]
        if self.mode is Mode.ASYNCHRONOUS:
            targets = {x ^ (1 << i) for i in mask_members(d)}
        else:
            targets = {x ^ s for s in _subsets(d) if s}
        if d != self.full:
            targets.add(x)
        return tuple(sorted(targets))

    def successors(self, x: Config) -> tuple[int, ...]:
        """Distinct targets of ``x`` in ascending encoding order, self-loop included."""
        if self._succ is None:
            self._succ = [self._compute_successors(v) for v in range(self.size)]
        return self._succ[x]

    def labels(self, x: Config, y: Config) -> tuple[int, ...]:
        """Update sets ``W`` (as bit masks) with ``F_W(x) = y`` permitted by the mode."""
        d = x ^ self.images[x]
        s = x ^ y
        if self.mode is Mode.PARALLEL:
            return (self.full,) if y == self.images[x] else ()
        if s & ~d:
            return ()
        if self.mode is Mode.ASYNCHRONOUS:
            if s == 0:
                return tuple(1 << i for i in range(self.n) if not (d >> i) & 1)
            return (s,) if s & (s - 1) == 0 else ()
        out = [s | t for t in _subsets(self.full & ~d) if s | t]
        return tuple(sorted(out, key=label_key))

    def arcs(self) -> Iterator[tuple[Config, Config, tuple[int, ...]]]:
        for x in range(self.size):
            for y in self.successors(x):
                yield x, y, self.labels(x, y)

    def has_arc(self, x: Config, y: Config) -> bool:
        return bool(self.labels(x, y))


def build_graph(net: Network, mode: "Mode | str") -> TransitionGraph:
    return TransitionGraph(net, mode)


# ---------------------------------------------------------------------------
# Strongly connected components
# ---------------------------------------------------------------------------

def strongly_connected_components(size: int, successors) -> list[list[int]]:
    """Iterative Tarjan over vertices ``0..size-1``.

    Components come out in reverse topological order of the condensation:
    every component is emitted after all components reachable from it.
    Vertices are visited in ascending order, so the output is deterministic.
    """
    index = [-1] * size
    low = [0] * size
    on_stack = [False] * size
    stack: list[int] = []
    out: list[list[int]] = []
    counter = 0
    for root in range(size):
        if index[root] != -1:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        work = [(root, iter(successors(root)))]
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(successors(w))))
                    advanced = True
                    break
                if on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comp.sort()
                out.append(comp)
    return out


# ---------------------------------------------------------------------------
# Attractors
# ---------------------------------------------------------------------------

class AttractorKind(enum.Enum):
    STABLE_CONFIGURATION = "StableConfiguration"
    STABLE_OSCILLATION = "StableOscillation"


@dataclass(frozen=True)
class Attractor:
    id: Config  # member whose rendered string is lexicographically smallest
    members: tuple[Config, ...]
    kind: AttractorKind
    period: int | None = None

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass
class AttractorSet:
    mode: Mode
    n: int
    attractors: list[Attractor]
    component: list[int] = field(repr=False)  # vertex -> component index
    components: list[list[int]] = field(repr=False)
    terminal: list[int] = field(repr=False)  # component index -> attractor index or -1

    def __iter__(self):
        return iter(self.attractors)

    def __len__(self) -> int:
        return len(self.attractors)

    def attractor_of(self, x: Config) -> int:
        """Attractor index containing ``x``, or -1 for a transient configuration."""
        return self.terminal[self.component[x]]

    def recurrent(self) -> frozenset[Config]:
        return frozenset(x for a in self.attractors for x in a.members)

    def stable_configurations(self) -> frozenset[Config]:
        return frozenset(a.members[0] for a in self.attractors if a.size == 1)


def _string_key(n: int):
    return lambda x: format_config(x, n)


def attractors(tg: TransitionGraph) -> AttractorSet:
    comps = strongly_connected_components(tg.size, tg.successors)
    component = [0] * tg.size
    for ci, comp in enumerate(comps):
        for v in comp:
            component[v] = ci
    key = _string_key(tg.n)
    found = []
    for ci, comp in enumerate(comps):
        if any(component[w] != ci for v in comp for w in tg.successors(v)):
            continue
        kind = (
            AttractorKind.STABLE_CONFIGURATION if len(comp) == 1
            else AttractorKind.STABLE_OSCILLATION
        )
        period = len(comp) if tg.mode is Mode.PARALLEL else None
        found.append((ci, Attractor(min(comp, key=key), tuple(comp), kind, period)))
    found.sort(key=lambda item: key(item[1].id))
    terminal = [-1] * len(comps)
    for ai, (ci, _) in enumerate(found):
        terminal[ci] = ai
    return AttractorSet(tg.mode, tg.n, [a for _, a in found], component, comps, terminal)


def recurrent_set(tg: TransitionGraph) -> frozenset[Config]:
    return attractors(tg).recurrent()


def reachable_attractors(
    tg: TransitionGraph, x: Config, attrs: AttractorSet | None = None
) -> frozenset[Config]:
    """Ids of the attractors reachable from ``x`` (its own included)."""
    attrs = attractors(tg) if attrs is None else attrs
    seen = {x}
    queue = deque([x])
    found = set()
    while queue:
        v = queue.popleft()
        a = attrs.attractor_of(v)
        if a >= 0:
            found.add(attrs.attractors[a].id)
            continue
        for w in tg.successors(v):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return frozenset(found)


def attractor_reach(tg: TransitionGraph, attrs: AttractorSet) -> list[int]:
    """For every configuration, a bit mask over attractor indices it can reach."""
    per_comp = [0] * len(attrs.components)
    for ci, comp in enumerate(attrs.components):  # reverse topological order
        a = attrs.terminal[ci]
        if a >= 0:
            per_comp[ci] = 1 << a
            continue
        acc = 0
        for v in comp:
            for w in tg.successors(v):
                cw = attrs.component[w]
                if cw != ci:
                    acc |= per_comp[cw]
        per_comp[ci] = acc
    return [per_comp[attrs.component[x]] for x in range(tg.size)]


def reach_closure(tg: TransitionGraph, attrs: AttractorSet) -> list[int]:
    """For every configuration, a bit mask over all configurations it can reach."""
    per_comp = [0] * len(attrs.components)
    for ci, comp in enumerate(attrs.components):
        acc = 0
        for v in comp:
            acc |= 1 << v
            for w in tg.successors(v):
                cw = attrs.component[w]
                if cw != ci:
                    acc |= per_comp[cw]
        per_comp[ci] = acc
    return [per_comp[attrs.component[x]] for x in range(tg.size)]


# ---------------------------------------------------------------------------
# Trajectories (parallel mode)
# ---------------------------------------------------------------------------

class StepBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class TrajectoryStats:
    transient: int
    period: int
    orbit: tuple[Config, ...]  # x(0) .. x(transient + period - 1)


def trajectory(net, x: Config, max_steps: int = 1 << 20) -> TrajectoryStats:
    """Iterate the parallel update from ``x`` until a configuration repeats.

    ``net`` is anything with ``n`` and ``step``.
    """
    if net.n > TRAJECTORY_LIMIT:
        raise SizeGuardError(f"trajectories are limited to n <= {TRAJECTORY_LIMIT}")
    first_seen = {x: 0}
    orbit = [x]
    t = 0
    while True:
        if t >= max_steps:
            raise StepBudgetExceeded(f"no repetition within {max_steps} steps")
        x = net.step(x)
        t += 1
        if x in first_seen:
            t1 = first_seen[x]
            return TrajectoryStats(t1, t - t1, tuple(orbit))
        first_seen[x] = t
        orbit.append(x)


# ---------------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------------

def format_label(w: int) -> str:
    members = mask_members(w)
    if len(members) == 1:
        return str(members[0])
    return "{" + ",".join(map(str, members)) + "}"


def to_dot(tg: TransitionGraph, attrs: AttractorSet | None = None, name: str = "G") -> str:
    attrs = attractors(tg) if attrs is None else attrs
    recurrent = attrs.recurrent()
    lines = [f"digraph {name} {{"]
    for x in range(tg.size):
        s = format_config(x, tg.n)
        extra = ", peripheries=2" if x in recurrent else ""
        lines.append(f'  "{s}" [label="{s}"{extra}];')
    for x, y, labels in tg.arcs():
        text = ", ".join(format_label(w) for w in labels)
        lines.append(
            f'  "{format_config(x, tg.n)}" -> "{format_config(y, tg.n)}" [label="{text}"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def attractor_rows(attrs: AttractorSet) -> list[dict]:
    return [
        {
            "mode": attrs.mode.value,
            "attractor_id": format_config(a.id, attrs.n),
            "size": a.size,
            "kind": a.kind.value,
            "period": "" if a.period is None else a.period,
        }
        for a in attrs
    ]


def attractors_csv(*attr_sets: AttractorSet) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(
        buf, ["mode", "attractor_id", "size", "kind", "period"], lineterminator="\n"
    )
    writer.writeheader()
    for attrs in attr_sets:
        writer.writerows(attractor_rows(attrs))
    return buf.getvalue()
