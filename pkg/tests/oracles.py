"""Definition-level reference implementations used only by the tests.

Nothing here reuses the bit tricks of the package: update functions are
applied automaton by automaton, reachability is plain BFS, and circulant
steps are explicit matrix-vector products.
"""

from __future__ import annotations

import itertools
import math
from collections import deque

import numpy as np


def bits_of(x, n):
    return [(x >> i) & 1 for i in range(n)]


def int_of(bits):
    return sum(b << i for i, b in enumerate(bits))


def local(net, i, x):
    return (net.tables[i].bits >> x) & 1


def apply_update(net, x, W):
    """F_W(x), one automaton at a time, reading the pre-state only."""
    state = bits_of(x, net.n)
    new = list(state)
    for i in W:
        new[i] = local(net, i, x)
    return int_of(new)


def update_sets(n, mode):
    if mode == "asynchronous":
        return [(i,) for i in range(n)]
    if mode == "parallel":
        return [tuple(range(n))]
    return [W for r in range(1, n + 1) for W in itertools.combinations(range(n), r)]


def labelled_arcs(net, mode):
    """{(x, y): sorted list of W} built by enumerating every update set."""
    arcs = {}
    for x in range(1 << net.n):
        for W in update_sets(net.n, mode):
            y = apply_update(net, x, W)
            arcs.setdefault((x, y), []).append(W)
    return arcs


def successor_sets(net, mode):
    succ = [set() for _ in range(1 << net.n)]
    for (x, y) in labelled_arcs(net, mode):
        succ[x].add(y)
    return succ


def reachable(succ, x):
    seen = {x}
    queue = deque([x])
    while queue:
        v = queue.popleft()
        for w in succ[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def attractors_oracle(net, mode):
    """x is recurrent iff x is reachable from every y reachable from x."""
    succ = successor_sets(net, mode)
    reach = [reachable(succ, x) for x in range(1 << net.n)]
    recurrent = [x for x in range(1 << net.n) if all(x in reach[y] for y in reach[x])]
    classes = {frozenset(y for y in reach[x]) for x in recurrent}
    return {c for c in classes}, reach


def circulant_matrix(row_bits):
    """Rows are right-cyclic shifts of the first row."""
    row0 = np.array(row_bits, dtype=np.int64)
    return np.array([np.roll(row0, i) for i in range(len(row0))])


def matrix_step(C, x, n):
    v = np.array(bits_of(x, n), dtype=np.int64)
    return int_of((C @ v % 2).tolist())


def pascal_mod2(t, j):
    return math.comb(t, j) % 2 if 0 <= j <= t else 0


def repetition_degree_oracle(s: str) -> int:
    """Directly from the recursive definition, on strings."""
    if len(s) % 2 or len(s) < 2:
        return 0
    a, b = s[: len(s) // 2], s[len(s) // 2:]
    if a != b:
        return 0
    return 1 + repetition_degree_oracle(a)
