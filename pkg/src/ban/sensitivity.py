"""Synchronism sensitivity: comparing the asynchronous and general graphs.

A network's level is decided globally from both graphs:

* ``L2``: some asynchronously recurrent configuration becomes transient, or
  asynchronous attractors fuse into one general attractor;
* ``L1bullet``: otherwise, some asynchronously transient configuration
  becomes recurrent (an attractor grows);
* ``L1circ``: otherwise, some transient configuration reaches more
  attractors once synchronous transitions are allowed;
* ``L0``: none of the above.
"""

from __future__ import annotations

import enum
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

from .dynamics import (
    AttractorSet,
    Mode,
    TransitionGraph,
    attractor_reach,
    attractors,
    reach_closure,
)
from .formula import TruthTable, classify_monotony
from .network import Config, Network, SizeGuardError, format_config, mask_members

CLASSIFY_LIMIT = 12
ENUMERATE_LIMIT = 3
ISOMORPHISM_LIMIT = 8


class Level(enum.Enum):
    L0 = "0"
    L1CIRC = "1°"
    L1BULLET = "1•"
    L2 = "2"


@dataclass(frozen=True)
class Witness:
    source: Config
    target: Config
    labels: tuple[int, ...]  # synchronous update sets producing the transition


@dataclass
class SensitivityReport:
    n: int
    level: Level
    witnesses: list[Witness]
    non_sequentialisable: int
    lost_recurrent: frozenset[Config]
    gained_recurrent: frozenset[Config]
    growth_witnesses: frozenset[Config]
    merged: bool  # two asynchronous attractors fused in the general graph
    async_attractors: AttractorSet = field(repr=False)
    general_attractors: AttractorSet = field(repr=False)

    @property
    def flags(self) -> dict[str, bool]:
        return {
            "destroys_attractors": bool(self.lost_recurrent) or self.merged,
            "grows_attractors": bool(self.gained_recurrent),
            "reaches_more_attractors": bool(self.growth_witnesses),
            "attractor_merge_anomaly": self.merged,
        }

    def to_json(self) -> dict:
        fmt = lambda x: format_config(x, self.n)  # noqa: E731

        def summary(attrs: AttractorSet) -> list[dict]:
            return [
                {"id": fmt(a.id), "size": a.size, "kind": a.kind.value,
                 "members": [fmt(x) for x in a.members]}
                for a in attrs
            ]

        return {
            "level": self.level.value,
            "flags": self.flags,
            "non_sequentialisable": self.non_sequentialisable,
            "witnesses": [
                {"from": fmt(w.source), "to": fmt(w.target),
                 "W": [list(mask_members(m)) for m in w.labels]}
                for w in self.witnesses
            ],
            "lost_recurrent": sorted(fmt(x) for x in self.lost_recurrent),
            "gained_recurrent": sorted(fmt(x) for x in self.gained_recurrent),
            "growth_witnesses": sorted(fmt(x) for x in self.growth_witnesses),
            "attractors": {
                "asynchronous": summary(self.async_attractors),
                "general": summary(self.general_attractors),
            },
        }


class NotATransition(ValueError):
    pass


def is_sequentialisable(net: Network, x: Config, y: Config) -> bool:
    """Whether the general-graph transition ``x -> y`` has an asynchronous path."""
    general = TransitionGraph(net, Mode.GENERAL)
    if not general.has_arc(x, y):
        raise NotATransition(
            f"{format_config(x, net.n)} -> {format_config(y, net.n)} is not a transition"
        )
    tg = TransitionGraph(net, Mode.ASYNCHRONOUS)
    seen = {x}
    stack = [x]
    while stack:
        v = stack.pop()
        if v == y:
            return True
        for w in tg.successors(v):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return False


def classify_sensitivity(net: Network, max_witnesses: int = 64) -> SensitivityReport:
    if net.n > CLASSIFY_LIMIT:
        raise SizeGuardError(f"classification is limited to n <= {CLASSIFY_LIMIT}")
    ga = TransitionGraph(net, Mode.ASYNCHRONOUS)
    gg = TransitionGraph(net, Mode.GENERAL)
    aa = attractors(ga)
    ag = attractors(gg)

    # non-sequentialisable synchronous transitions
    closure = reach_closure(ga, aa)
    witnesses = []
    count = 0
    for x in range(ga.size):
        for y in gg.successors(x):
            if y == x or (closure[x] >> y) & 1:
                continue
            count += 1
            if len(witnesses) < max_witnesses:
                sync = tuple(w for w in gg.labels(x, y) if w & (w - 1))
                witnesses.append(Witness(x, y, sync))

    rec_a = aa.recurrent()
    rec_g = ag.recurrent()
    lost = rec_a - rec_g
    gained = rec_g - rec_a

    # general attractors that absorb configurations of several asynchronous ones
    merged = False
    for a in ag:
        sources = {aa.attractor_of(x) for x in a.members if x in rec_a}
        if len(sources) > 1:
            merged = True
            break

    reach_a = attractor_reach(ga, aa)
    reach_g = attractor_reach(gg, ag)
    growth = frozenset(
        z for z in range(ga.size)
        if aa.attractor_of(z) < 0 and ag.attractor_of(z) < 0
        and bin(reach_g[z]).count("1") > bin(reach_a[z]).count("1")
    )

    if lost or merged:
        level = Level.L2
    elif gained:
        level = Level.L1BULLET
    elif growth:
        level = Level.L1CIRC
    else:
        level = Level.L0
    return SensitivityReport(
        net.n, level, witnesses, count, frozenset(lost), frozenset(gained), growth,
        merged, aa, ag,
    )


# ---------------------------------------------------------------------------
# Exhaustive search for minimal level-2 networks
# ---------------------------------------------------------------------------

def network_count(n: int) -> int:
    return (1 << (1 << n)) ** n


def network_from_index(n: int, index: int) -> Network:
    """Decode ``index`` (mixed radix ``2^(2^n)``, ``f_0`` least significant)."""
    width = 1 << n
    mask = (1 << width) - 1
    return Network(
        n, tuple(TruthTable(n, (index >> (i * width)) & mask) for i in range(n))
    )


def network_index(net: Network) -> int:
    width = 1 << net.n
    return sum(t.bits << (i * width) for i, t in enumerate(net.tables))


def enumerate_networks(n: int, start: int = 0, stop: int | None = None) -> Iterator[Network]:
    """Every network of size ``n``, in index order."""
    if not 1 <= n <= ENUMERATE_LIMIT:
        raise SizeGuardError(f"network enumeration is limited to 1 <= n <= {ENUMERATE_LIMIT}")
    stop = network_count(n) if stop is None else stop
    for index in range(start, stop):
        yield network_from_index(n, index)


def _level2_indices(args: tuple[int, int, int]) -> list[int]:
    n, start, stop = args
    return [
        network_index(net) for net in enumerate_networks(n, start, stop)
        if classify_sensitivity(net, max_witnesses=0).level is Level.L2
    ]


def find_minimal_level2(max_n: int, jobs: int = 1) -> list[tuple[int, Network]]:
    """All level-2 networks at the smallest size ``<= max_n`` where any exist."""
    if max_n > ENUMERATE_LIMIT:
        raise SizeGuardError(f"exhaustive search is limited to max_n <= {ENUMERATE_LIMIT}")
    for n in range(1, max_n + 1):
        total = network_count(n)
        if jobs > 1 and total > 4096:
            chunk = -(-total // (jobs * 16))
            ranges = [(n, s, min(s + chunk, total)) for s in range(0, total, chunk)]
            with ProcessPoolExecutor(jobs) as pool:
                indices = [i for part in pool.map(_level2_indices, ranges) for i in part]
        else:
            indices = _level2_indices((n, 0, total))
        if indices:
            return [(n, network_from_index(n, i)) for i in indices]
    return []


def sweep_rows(n: int) -> Iterator[dict]:
    """One row per network of size ``n``: id, level, monotony class."""
    for index, net in enumerate(enumerate_networks(n)):
        yield {
            "network_id": index,
            "level": classify_sensitivity(net, max_witnesses=0).level.value,
            "monotony": classify_monotony(net).value,
        }


# ---------------------------------------------------------------------------
# Isomorphism
# ---------------------------------------------------------------------------

def permute_config(x: Config, perm: tuple[int, ...]) -> Config:
    """Relabel automaton ``i`` as ``perm[i]``."""
    y = 0
    for i, p in enumerate(perm):
        if (x >> i) & 1:
            y |= 1 << p
    return y


def relabel(net: Network, perm: tuple[int, ...]) -> Network:
    """The network obtained by renaming automaton ``i`` to ``perm[i]``."""
    n = net.n
    # new f_{perm(i)}(y) = old f_i(x) where y = permute(x)
    bits = [0] * n
    for x in range(1 << n):
        y = permute_config(x, perm)
        for i in range(n):
            if net.tables[i](x):
                bits[perm[i]] |= 1 << y
    return Network.from_bits(n, bits)


def networks_isomorphic(a: Network, b: Network) -> bool:
    if a.n != b.n:
        raise ValueError(f"sizes differ: {a.n} vs {b.n}")
    if a.n > ISOMORPHISM_LIMIT:
        raise SizeGuardError(f"isomorphism search is limited to n <= {ISOMORPHISM_LIMIT}")
    target = b.tables
    return any(
        relabel(a, perm).tables == target
        for perm in itertools.permutations(range(a.n))
    )
