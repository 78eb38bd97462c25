"""XOR circulant networks as linear maps over GF(2).

A spec is the first row ``c`` of a circulant matrix ``C`` with
``C[i][j] = c[(j - i) % n]``, so automaton ``i`` computes the XOR of
``x[(i + d) % n]`` over every offset ``d`` with ``c[d] = 1``.  States are
packed into Python ints, which makes one parallel step ``k`` word-level
rotations of the configuration regardless of ``n``.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Callable, Iterable, Iterator

import numpy as np

from .dynamics import StepBudgetExceeded, TrajectoryStats, trajectory
from .formula import TruthTable, projection
from .network import (
    Config,
    Network,
    SizeGuardError,
    TRAJECTORY_LIMIT,
    check_exhaustive,
    format_config,
    mask_members,
    parse_config,
)

SWEEP_LIMIT = 16


class CirculantError(ValueError):
    pass


def rotate(x: Config, d: int, n: int) -> Config:
    """``y`` with ``y_i = x_{(i + d) % n}``."""
    d %= n
    if d == 0:
        return x
    full = (1 << n) - 1
    return ((x >> d) | (x << (n - d))) & full


def popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True)
class CirculantSpec:
    n: int
    row: int  # bit j holds c_j
    # reflections are exempt from the c_{n-1} = 1 numbering convention
    reflected: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.n < 2:
            raise CirculantError("a circulant network needs n >= 2")
        if self.n > TRAJECTORY_LIMIT:
            raise SizeGuardError(f"circulant networks are limited to n <= {TRAJECTORY_LIMIT}")
        if self.row < 0 or self.row >> self.n:
            raise CirculantError("first row does not fit n bits")
        if not self.reflected and not (self.row >> (self.n - 1)) & 1:
            raise CirculantError("the last coefficient c_{n-1} must be 1")
        if self.k < 2:
            raise CirculantError(f"first row has weight {self.k}, need at least 2")

    @classmethod
    def from_string(cls, bits: str, reflected: bool = False) -> "CirculantSpec":
        return cls(len(bits.strip()), parse_config(bits), reflected)

    @classmethod
    def from_positions(cls, n: int, positions: Iterable[int]) -> "CirculantSpec":
        row = 0
        for p in positions:
            row |= 1 << p
        return cls(n, row)

    @property
    def k(self) -> int:
        return popcount(self.row)

    @property
    def offsets(self) -> tuple[int, ...]:
        return mask_members(self.row)

    def row_string(self) -> str:
        return format_config(self.row, self.n)

    def coefficient(self, i: int, j: int) -> int:
        return (self.row >> ((j - i) % self.n)) & 1

    def matrix(self) -> list[list[int]]:
        return [[self.coefficient(i, j) for j in range(self.n)] for i in range(self.n)]

    @cached_property
    def _rotations(self) -> tuple[tuple[int, int], ...]:
        return tuple((d, self.n - d) for d in self.offsets)

    def step(self, x: Config) -> Config:
        full = (1 << self.n) - 1
        y = 0
        for right, left in self._rotations:
            y ^= ((x >> right) | (x << left)) & full
        return y

    def iterate(self, x: Config, t: int) -> Config:
        for _ in range(t):
            x = self.step(x)
        return x

    def network(self) -> Network:
        """The induced network with explicit truth tables."""
        check_exhaustive(self.n)
        tables = []
        for i in range(self.n):
            bits = 0
            for d in self.offsets:
                bits ^= projection(self.n, (i + d) % self.n)
            tables.append(TruthTable(self.n, bits))
        return Network(self.n, tuple(tables))

    def images(self) -> np.ndarray:
        """Parallel image of all ``2^n`` configurations, built by linearity."""
        check_exhaustive(self.n, SWEEP_LIMIT, "circulant sweep")
        img = np.zeros(1 << self.n, dtype=np.int64)
        for i in range(self.n):
            half = 1 << i
            img[half:2 * half] = img[:half] ^ self.step(1 << i)
        return img


def make_circulant(n: int, first_row: "str | int", k: int | None = None):
    """Validate a first row and return ``(spec, network)``.

    The network carries truth tables when ``n`` is within the exhaustive
    guard; beyond it the spec itself is returned as an on-the-fly stepper.
    """
    row = parse_config(first_row, n) if isinstance(first_row, str) else first_row
    spec = CirculantSpec(n, row)
    if k is not None and spec.k != k:
        raise CirculantError(f"first row has weight {spec.k}, expected k = {k}")
    try:
        net = spec.network()
    except SizeGuardError:
        net = spec
    return spec, net


def circulant_rows(n: int, k: int) -> Iterator[int]:
    """Every valid first row of a ``k``-XOR circulant network of size ``n``."""
    if not 2 <= k <= n:
        raise CirculantError(f"need 2 <= k <= n, got k={k}, n={n}")
    top = 1 << (n - 1)
    for rest in itertools.combinations(range(n - 1), k - 1):
        yield top | sum(1 << p for p in rest)


def count_circulant(n: int, k: int) -> int:
    if not 2 <= k <= n:
        raise CirculantError(f"need 2 <= k <= n, got k={k}, n={n}")
    return math.comb(n - 1, k - 1)


def reflect_network(spec: CirculantSpec) -> CirculantSpec:
    """The network whose interaction matrix is the transpose of ``spec``'s."""
    n = spec.n
    row = 0
    for d in spec.offsets:
        row |= 1 << ((n - d) % n)
    return CirculantSpec(n, row, reflected=not spec.reflected)


def reflect_config(x: Config, i: int, n: int) -> Config:
    """``R_i(x)`` with ``R_i(x)_j = x_{(2i - j) % n}``."""
    if not 0 <= i < n:
        raise ValueError(f"automaton {i} out of range for n = {n}")
    # full bit reversal gives r_j = x_{n-1-j}; rotating it lines up x_{2i-j}
    reversed_bits = int(format(x, f"0{n}b")[::-1], 2)
    return rotate(reversed_bits, -(2 * i + 1), n)


def two_xor(n: int, s: int) -> CirculantSpec:
    """The 2-XOR circulant network of size ``n`` with interaction-step ``s``."""
    if s == 1 or not 0 <= s < n:
        raise CirculantError(f"interaction-step must be in [0, n) and != 1, got {s}")
    return CirculantSpec.from_positions(n, {n - 1, (n - s) % n})


def interaction_step(spec: CirculantSpec) -> int:
    """Smallest ``s != 1`` such that every ``i`` influences ``i + s``."""
    if spec.k != 2:
        raise CirculantError("interaction-step is only defined for 2-XOR networks")
    for s in range(spec.n):
        if s != 1 and (spec.row >> ((spec.n - s) % spec.n)) & 1:
            return s
    raise CirculantError("no interaction-step: the row has no arc besides i -> i+1")


# ---------------------------------------------------------------------------
# Masks, space-time diagrams, traces
# ---------------------------------------------------------------------------

def mask(spec: CirculantSpec, i: int, t: int) -> frozenset[int]:
    """Automata whose initial states XOR to ``x_i(t)``."""
    if not 0 <= i < spec.n:
        raise ValueError(f"automaton {i} out of range for n = {spec.n}")
    x = reflect_network(spec).iterate(1 << i, t)
    return frozenset(mask_members(x))


def mask_reconstruct(spec: CirculantSpec, x0: Config, i: int, t: int) -> int:
    support = reflect_network(spec).iterate(1 << i, t)
    return popcount(x0 & support) & 1


@dataclass(frozen=True)
class SpaceTimeDiagram:
    n: int
    rows: tuple[Config, ...]

    def cell(self, t: int, i: int) -> int:
        return (self.rows[t] >> i) & 1

    def to_pbm(self) -> str:
        lines = ["P1", f"{self.n} {len(self.rows)}"]
        for x in self.rows:
            lines.append(" ".join(format_config(x, self.n)))
        return "\n".join(lines) + "\n"

    def to_ascii(self) -> str:
        table = str.maketrans("01", ".#")
        return "".join(format_config(x, self.n).translate(table) + "\n" for x in self.rows)


def space_time(spec: CirculantSpec, x0: Config, t_max: int) -> SpaceTimeDiagram:
    if t_max < 0:
        raise ValueError("t_max must be >= 0")
    rows = [x0]
    for _ in range(t_max):
        rows.append(spec.step(rows[-1]))
    return SpaceTimeDiagram(spec.n, tuple(rows))


def trace(diagram: SpaceTimeDiagram, i: int) -> tuple[int, ...]:
    if not 0 <= i < diagram.n:
        raise ValueError(f"automaton {i} out of range for n = {diagram.n}")
    return tuple((x >> i) & 1 for x in diagram.rows)


def repetition_degree(x: Config, n: int) -> int:
    """How many times ``x`` splits into two equal halves, recursively."""
    degree = 0
    while n % 2 == 0 and n >= 2:
        half = n // 2
        low = x & ((1 << half) - 1)
        if x >> half != low:
            break
        degree += 1
        x, n = low, half
    return degree


# ---------------------------------------------------------------------------
# Convergence
# ---------------------------------------------------------------------------

def convergence(spec: CirculantSpec, x0: Config, max_steps: int = 1 << 20) -> TrajectoryStats:
    return trajectory(spec, x0, max_steps)


def functional_stats(images) -> tuple[list[int], list[int]]:
    """Transient length and period of every node of a functional graph."""
    images = list(images)
    size = len(images)
    transient = [-1] * size
    period = [0] * size
    state = [0] * size  # 0 unseen, 1 on current path, 2 done
    for start in range(size):
        if state[start]:
            continue
        path = []
        v = start
        while state[v] == 0:
            state[v] = 1
            path.append(v)
            v = images[v]
        if state[v] == 1:
            k = path.index(v)
            cycle = path[k:]
            for u in cycle:
                transient[u], period[u], state[u] = 0, len(cycle), 2
            path = path[:k]
            base_t, base_p = 0, len(cycle)
        else:
            base_t, base_p = transient[v], period[v]
        for dist, u in enumerate(reversed(path), start=1):
            transient[u], period[u], state[u] = base_t + dist, base_p, 2
    return transient, period


class LawViolation(AssertionError):
    def __init__(self, law: str, counterexample: dict):
        self.law = law
        self.counterexample = counterexample
        super().__init__(f"{law} violated: {counterexample}")


def max_convergence_stats(spec: CirculantSpec, exhaustive: bool = False) -> tuple[int, int]:
    """``(t*, p*)`` from the unit configuration; optionally confirmed on every config."""
    ref = convergence(spec, 1)
    t_star, p_star = ref.transient, ref.period
    if exhaustive:
        check_exhaustive(spec.n, SWEEP_LIMIT, "exhaustive convergence sweep")
        transient, period = functional_stats(spec.images().tolist())
        for x in range(1 << spec.n):
            if transient[x] > t_star or p_star % period[x]:
                raise LawViolation("density-max", {
                    "row": spec.row_string(), "x": format_config(x, spec.n),
                    "transient": transient[x], "period": period[x],
                    "t_star": t_star, "p_star": p_star,
                })
    return t_star, p_star


# ---------------------------------------------------------------------------
# Laws
# ---------------------------------------------------------------------------

class LawPreconditionError(ValueError):
    pass


@dataclass
class LawReport:
    law: str
    row: str
    passed: bool
    checked: int
    domain: str  # "exhaustive" or "sampled"
    counterexample: dict | None = None

    def to_json(self) -> dict:
        return {
            "law": self.law, "row": self.row, "passed": self.passed,
            "checked": self.checked, "domain": self.domain,
            "counterexample": self.counterexample,
        }


def _log2_exact(n: int) -> int | None:
    return n.bit_length() - 1 if n & (n - 1) == 0 else None


def _require_power_of_two_s0(spec: CirculantSpec, law: str) -> int:
    p = _log2_exact(spec.n)
    if p is None or p < 1:
        raise LawPreconditionError(f"{law} needs n = 2^p, got n = {spec.n}")
    if spec.k != 2 or interaction_step(spec) != 0:
        raise LawPreconditionError(f"{law} needs a 2-XOR network with interaction-step 0")
    return p


def _steps_to_zero(spec: CirculantSpec, x: Config, cap: int) -> int:
    """First ``t <= cap`` with ``F^t(x) = 0``, or ``cap + 1`` if none."""
    for t in range(cap + 1):
        if x == 0:
            return t
        x = spec.step(x)
    return cap + 1


class _Checker:
    """Runs a per-configuration predicate over an exhaustive or sampled domain."""

    def __init__(self, spec: CirculantSpec, exhaustive: bool | None, samples: int, seed: int):
        self.spec = spec
        self.rng = random.Random(seed)
        if exhaustive is None:
            exhaustive = spec.n <= 12
        if exhaustive:
            check_exhaustive(spec.n, SWEEP_LIMIT, "exhaustive law check")
        self.exhaustive = exhaustive
        self.samples = samples

    @property
    def domain(self) -> str:
        return "exhaustive" if self.exhaustive else "sampled"

    def configs(self) -> Iterator[Config]:
        if self.exhaustive:
            yield from range(1 << self.spec.n)
        else:
            for _ in range(self.samples):
                yield self.rng.getrandbits(self.spec.n)


def _run(law: str, spec: CirculantSpec, configs: Iterable, check: Callable, domain: str) -> LawReport:
    checked = 0
    for item in configs:
        checked += 1
        failure = check(item)
        if failure is not None:
            return LawReport(law, spec.row_string(), False, checked, domain, failure)
    return LawReport(law, spec.row_string(), True, checked, domain)


def _law_zero_fixed(spec, ck, opts):
    def check(_):
        y = spec.step(0)
        return None if y == 0 else {"image": format_config(y, spec.n)}
    return _run("zero-fixed", spec, [0], check, "exhaustive")


def _law_all_ones(spec, ck, opts):
    ones = (1 << spec.n) - 1
    expected = ones if spec.k % 2 else 0

    def check(_):
        y = spec.step(ones)
        if y != expected:
            return {"k": spec.k, "image": format_config(y, spec.n)}
        return None
    return _run("all-ones", spec, [ones], check, "exhaustive")


def _law_rotation(spec, ck, opts):
    n = spec.n

    def check(x):
        r = ck.rng.randrange(1, n)
        a = convergence(spec, x)
        b = convergence(spec, rotate(x, r, n))
        if (a.transient, a.period) != (b.transient, b.period):
            return {"x": format_config(x, n), "rotation": r,
                    "stats": [a.transient, a.period], "rotated": [b.transient, b.period]}
        return None
    return _run("rotation", spec, ck.configs(), check, ck.domain)


def _law_mask(spec, ck, opts):
    n, t_max = spec.n, opts.t_max
    rspec = reflect_network(spec)
    supports = [[1 << i] for i in range(n)]
    for i in range(n):
        for _ in range(t_max):
            supports[i].append(rspec.step(supports[i][-1]))

    def check(x0):
        x = x0
        for t in range(t_max + 1):
            for i in range(n):
                if (x >> i) & 1 != popcount(x0 & supports[i][t]) & 1:
                    return {"x0": format_config(x0, n), "i": i, "t": t}
            x = spec.step(x)
        return None
    return _run("mask", spec, ck.configs(), check, ck.domain)


def _law_reflection(spec, ck, opts):
    n = spec.n
    rspec = reflect_network(spec)

    def check(x):
        for i in range(n):
            if rspec.step(reflect_config(x, i, n)) != reflect_config(spec.step(x), i, n):
                return {"x": format_config(x, n), "i": i}
        return None
    return _run("reflection", spec, ck.configs(), check, ck.domain)


def _law_reflected_diagram(spec, ck, opts):
    n, t_max = spec.n, opts.t_max
    rspec = reflect_network(spec)

    def check(i):
        x = y = 1 << i
        for t in range(t_max + 1):
            if y != reflect_config(x, i, n):
                return {"i": i, "t": t}
            x, y = spec.step(x), rspec.step(y)
        return None
    return _run("reflected-diagram", spec, range(n), check, "exhaustive")


def _law_density_max(spec, ck, opts):
    n = spec.n
    ref = convergence(spec, 1)
    t_star, p_star = ref.transient, ref.period
    if ck.exhaustive:
        transient, period = functional_stats(spec.images().tolist())

    def check(x):
        if ck.exhaustive:
            t, p = transient[x], period[x]
        else:
            st = convergence(spec, x)
            t, p = st.transient, st.period
        if t > t_star or p_star % p:
            return {"x": format_config(x, n), "transient": t, "period": p,
                    "t_star": t_star, "p_star": p_star}
        return None
    return _run("density-max", spec, ck.configs(), check, ck.domain)


def _law_doubling_step(spec, ck, opts):
    n = spec.n
    if spec.k != 2 or interaction_step(spec) != 0:
        raise LawPreconditionError("doubling-step needs a 2-XOR network with interaction-step 0")
    q_max = opts.q_max

    def check(x0):
        x, t = x0, 0
        for q in range(q_max + 1):
            x = spec.iterate(x, (1 << q) - t)
            t = 1 << q
            expected = rotate(x0, -t, n) ^ x0
            if x != expected:
                return {"x0": format_config(x0, n), "q": q}
        return None
    return _run("doubling-step", spec, ck.configs(), check, ck.domain)


def _law_repeated_fast(spec, ck, opts):
    p = _log2_exact(spec.n)
    if p is None or p < 1 or spec.k != 2:
        raise LawPreconditionError("repeated-fast needs a 2-XOR network of size n = 2^p")
    n = spec.n
    configs = _repeated_configs(n, p - 1)

    def check(x):
        steps = _steps_to_zero(spec, x, 2)
        if steps > 2:
            return {"x": format_config(x, n), "degree": repetition_degree(x, n)}
        return None
    return _run("repeated-fast", spec, configs, check, "exhaustive")


def _repeated_configs(n: int, degree: int) -> list[Config]:
    """All configurations of size ``n`` with repetition degree at least ``degree``."""
    width = n >> degree
    out = []
    for block in range(1 << width):
        x = 0
        for r in range(1 << degree):
            x |= block << (r * width)
        out.append(x)
    return out


def _steps_to_zero_all(spec: CirculantSpec, cap: int) -> np.ndarray:
    """Vectorised :func:`_steps_to_zero` over every configuration."""
    img = spec.images()
    steps = np.full(img.shape, cap + 1, dtype=np.int64)
    cur = np.arange(img.size, dtype=np.int64)
    for t in range(cap + 1):
        steps[(cur == 0) & (steps > cap)] = t
        cur = img[cur]
    return steps


def _zero_steps(spec: CirculantSpec, ck: _Checker, cap: int) -> Callable[[Config], int]:
    if ck.exhaustive:
        table = _steps_to_zero_all(spec, cap).tolist()
        return table.__getitem__
    return lambda x: _steps_to_zero(spec, x, cap)


def _law_nilpotent(spec, ck, opts):
    _require_power_of_two_s0(spec, "nilpotent")
    n = spec.n
    steps = _zero_steps(spec, ck, n)

    def check(x):
        return None if steps(x) <= n else {"x": format_config(x, n)}
    return _run("nilpotent", spec, ck.configs(), check, ck.domain)


def _law_odd_exact(spec, ck, opts):
    _require_power_of_two_s0(spec, "odd-exact")
    n = spec.n
    steps = _zero_steps(spec, ck, n)

    def check(x):
        t = steps(x)
        odd = popcount(x) % 2 == 1
        # odd weight: exactly n steps; even weight: strictly fewer
        if (odd and t != n) or (not odd and t >= n):
            return {"x": format_config(x, n), "weight": popcount(x), "steps": t}
        return None
    return _run("odd-exact", spec, ck.configs(), check, ck.domain)


def _law_repeated_halving(spec, ck, opts):
    p = _require_power_of_two_s0(spec, "repeated-halving")
    if p < 2:
        raise LawPreconditionError("repeated-halving needs n = 2^(p+1) with p >= 1")
    n, half = spec.n, spec.n // 2
    small = two_xor(half, 0)
    if ck.exhaustive:
        inputs: Iterable[int] = range(1 << half)
    else:
        inputs = (ck.rng.getrandbits(half) for _ in range(ck.samples))

    def check(xp):
        x, y = xp | (xp << half), xp
        for t in range(n + 1):
            if x != y | (y << half):
                return {"x_half": format_config(xp, half), "t": t}
            x, y = spec.step(x), small.step(y)
        return None
    return _run("repeated-halving", spec, inputs, check, ck.domain)


LAWS: dict[str, Callable] = {
    "zero-fixed": _law_zero_fixed,
    "all-ones": _law_all_ones,
    "rotation": _law_rotation,
    "mask": _law_mask,
    "reflection": _law_reflection,
    "reflected-diagram": _law_reflected_diagram,
    "density-max": _law_density_max,
    "doubling-step": _law_doubling_step,
    "repeated-fast": _law_repeated_fast,
    "nilpotent": _law_nilpotent,
    "odd-exact": _law_odd_exact,
    "repeated-halving": _law_repeated_halving,
}

# short names accepted by the CLI
LAW_ALIASES = {
    "thm1": "nilpotent",
    "thm2": "odd-exact",
    "lem_repeated": "repeated-halving",
    "lem_local": "doubling-step",
}


@dataclass(frozen=True)
class LawOptions:
    exhaustive: bool | None = None  # None: exhaustive when n <= 12
    samples: int = 1000
    seed: int = 0
    t_max: int = 32  # horizon for mask and reflected-diagram
    q_max: int = 6  # largest q in the doubling-step identity


def verify_law(
    spec: CirculantSpec, law: str, options: LawOptions | None = None, **overrides
) -> LawReport:
    """Check one convergence or symmetry law on ``spec``.

    Keyword overrides replace fields of ``options``.  Unknown law ids raise
    ``KeyError``; unmet preconditions raise :class:`LawPreconditionError`.
    A failing check returns a report with ``passed=False`` and a
    serialisable counterexample.
    """
    opts = replace(options or LawOptions(), **overrides)
    name = LAW_ALIASES.get(law, law)
    if name not in LAWS:
        raise KeyError(f"unknown law {law!r}; known: {', '.join(sorted(LAWS))}")
    checker = _Checker(spec, opts.exhaustive, opts.samples, opts.seed)
    return LAWS[name](spec, checker, opts)


__all__ = [
    "CirculantError", "CirculantSpec", "LawOptions", "LawPreconditionError", "LawReport",
    "LawViolation",
    "SpaceTimeDiagram", "StepBudgetExceeded", "circulant_rows", "convergence",
    "count_circulant", "functional_stats", "interaction_step", "make_circulant", "mask",
    "mask_reconstruct", "max_convergence_stats", "reflect_config", "reflect_network",
    "repetition_degree", "rotate", "space_time", "trace", "two_xor", "verify_law",
]
