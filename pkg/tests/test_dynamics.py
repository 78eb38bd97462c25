import pytest
from hypothesis import given, settings, strategies as st

from ban.dynamics import (
    AttractorKind,
    Mode,
    StepBudgetExceeded,
    attractors,
    attractors_csv,
    build_graph,
    reachable_attractors,
    recurrent_set,
    strongly_connected_components,
    to_dot,
    trajectory,
)
from ban.network import Network, SizeGuardError, format_config, parse_config

import golden
import oracles
from conftest import networks

MODES = ("general", "asynchronous", "parallel")


def c(s):
    return parse_config(s)


def strings(xs, n=2):
    return {format_config(x, n) for x in xs}


# --- golden graphs ---------------------------------------------------------

@pytest.mark.parametrize("mode, expected", [
    ("g", golden.GENERAL), ("a", golden.ASYNCHRONOUS), ("p", golden.PARALLEL),
])
def test_copy_xnor_graphs(copy_xnor, mode, expected):
    assert golden.rendered(build_graph(copy_xnor, mode)) == expected


def test_asynchronous_copy_xnor_has_eight_labelled_transitions(copy_xnor):
    assert golden.label_count(golden.rendered(build_graph(copy_xnor, "a"))) == 8


def test_general_copy_xnor_synchronous_arc(copy_xnor):
    tg = build_graph(copy_xnor, Mode.GENERAL)
    assert tg.labels(c("01"), c("10")) == (0b11,)
    assert not tg.has_arc(c("01"), c("01"))


# --- structural invariants -------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(networks(1, 5))
def test_labels_match_enumeration_oracle(net):
    for mode in MODES:
        tg = build_graph(net, mode)
        expected = oracles.labelled_arcs(net, mode)
        got = {
            (x, y): sorted(tuple(i for i in range(net.n) if (w >> i) & 1) for w in labels)
            for x, y, labels in tg.arcs()
        }
        assert got == {k: sorted(v) for k, v in expected.items()}


@settings(max_examples=60, deadline=None)
@given(networks(1, 6))
def test_mode_inclusions_and_degrees(net):
    g, a, p = (build_graph(net, m) for m in MODES)
    for x in range(1 << net.n):
        sg, sa, sp = set(g.successors(x)), set(a.successors(x)), set(p.successors(x))
        assert sa <= sg and sp <= sg
        assert len(sp) == 1
        assert len(sa) <= net.n
        assert sum(len(g.labels(x, y)) for y in sg) == (1 << net.n) - 1
        assert sum(len(a.labels(x, y)) for y in sa) == net.n


@settings(max_examples=60, deadline=None)
@given(networks(1, 6))
def test_stable_configurations_agree_across_modes(net):
    fixed = {x for x in range(1 << net.n) if net.step(x) == x}
    for mode in MODES:
        assert attractors(build_graph(net, mode)).stable_configurations() == fixed


@settings(max_examples=60, deadline=None)
@given(networks(1, 6))
def test_attractors_match_mutual_reachability_oracle(net):
    for mode in MODES:
        attrs = attractors(build_graph(net, mode))
        expected, _ = oracles.attractors_oracle(net, mode)
        assert {frozenset(a.members) for a in attrs} == expected
        for a in attrs:
            assert a.kind is (AttractorKind.STABLE_CONFIGURATION if a.size == 1
                              else AttractorKind.STABLE_OSCILLATION)
            assert format_config(a.id, net.n) == min(format_config(x, net.n) for x in a.members)


@settings(max_examples=40, deadline=None)
@given(networks(1, 5), st.data())
def test_reachable_attractors_match_bfs(net, data):
    mode = data.draw(st.sampled_from(MODES))
    tg = build_graph(net, mode)
    attrs = attractors(tg)
    x = data.draw(st.integers(0, (1 << net.n) - 1))
    _, reach = oracles.attractors_oracle(net, mode)
    expected = {a.id for a in attrs if set(a.members) & reach[x]}
    assert reachable_attractors(tg, x, attrs) == expected


def test_scc_order_is_reverse_topological():
    succ = {0: [1], 1: [2], 2: [1, 3], 3: []}
    comps = strongly_connected_components(4, lambda v: succ[v])
    assert [sorted(comp) for comp in comps] == [[3], [1, 2], [0]]


def test_scc_handles_long_paths_without_recursion():
    size = 50_000
    comps = strongly_connected_components(size, lambda v: (v + 1,) if v + 1 < size else ())
    assert len(comps) == size and comps[0] == [size - 1]


# --- attractor examples ----------------------------------------------------

def test_copy_xnor_parallel_attractors(copy_xnor):
    attrs = attractors(build_graph(copy_xnor, "p"))
    by_id = {format_config(a.id, 2): a for a in attrs}
    assert set(by_id) == {"00", "11"}
    assert strings(by_id["00"].members) == {"00", "01", "10"}
    assert by_id["00"].period == 3
    assert by_id["11"].kind is AttractorKind.STABLE_CONFIGURATION and by_id["11"].period == 1


def test_copy_xnor_asynchronous_attractors(copy_xnor):
    attrs = attractors(build_graph(copy_xnor, "a"))
    assert [strings(a.members) for a in attrs] == [{"11"}]


def test_xor_xnor_general_graph_has_single_fixed_point(xor_xnor):
    tg = build_graph(xor_xnor, "g")
    attrs = attractors(tg)
    assert len(attrs) == 1
    (a,) = attrs
    assert a.kind is AttractorKind.STABLE_CONFIGURATION
    assert format_config(a.id, 2) == "10"
    for x in range(4):
        assert reachable_attractors(tg, x, attrs) == {a.id}


def test_recurrent_sets(copy_xnor):
    assert strings(recurrent_set(build_graph(copy_xnor, "p"))) == {"00", "01", "10", "11"}
    assert strings(recurrent_set(build_graph(copy_xnor, "a"))) == {"11"}


def test_reachable_attractors_examples(copy_xnor):
    tg = build_graph(copy_xnor, "a")
    assert strings(reachable_attractors(tg, c("01"))) == {"11"}
    p = build_graph(copy_xnor, "p")
    assert strings(reachable_attractors(p, c("01"))) == {"00"}


# --- trajectories ----------------------------------------------------------

def test_trajectory_examples(copy_xnor):
    t = trajectory(copy_xnor, c("00"))
    assert (t.transient, t.period) == (0, 3)
    assert strings(t.orbit) == {"00", "01", "10"}
    t = trajectory(copy_xnor, c("11"))
    assert (t.transient, t.period) == (0, 1)


def test_trajectory_budget(copy_xnor):
    with pytest.raises(StepBudgetExceeded):
        trajectory(copy_xnor, c("00"), max_steps=2)


@settings(max_examples=40, deadline=None)
@given(networks(1, 8), st.data())
def test_trajectory_period_matches_parallel_attractor(net, data):
    x = data.draw(st.integers(0, (1 << net.n) - 1))
    attrs = attractors(build_graph(net, "p"))
    t = trajectory(net, x)
    cycle_start = t.orbit[t.transient]
    a = attrs.attractors[attrs.attractor_of(cycle_start)]
    assert a.period == t.period
    assert all(attrs.attractor_of(y) < 0 for y in t.orbit[: t.transient])


# --- guards and export -----------------------------------------------------

def test_general_graph_guard():
    with pytest.raises(SizeGuardError):
        build_graph(Network.from_bits(17, [0] * 17), "g")


def test_mode_parse():
    assert Mode.parse("g") is Mode.GENERAL
    assert Mode.parse("asynchronous") is Mode.ASYNCHRONOUS
    with pytest.raises(ValueError):
        Mode.parse("x")


def test_dot_export(copy_xnor):
    dot = to_dot(build_graph(copy_xnor, "g"))
    assert dot.startswith("digraph G {\n")
    assert '"01" -> "10" [label="{0,1}"];' in dot
    assert '"11" -> "11" [label="0, 1, {0,1}"];' in dot
    assert '"11" [label="11", peripheries=2];' in dot
    assert '"00" [label="00"];' in dot


def test_csv_export(copy_xnor):
    p = attractors(build_graph(copy_xnor, "p"))
    a = attractors(build_graph(copy_xnor, "a"))
    assert attractors_csv(p, a) == (
        "mode,attractor_id,size,kind,period\n"
        "parallel,00,3,StableOscillation,3\n"
        "parallel,11,1,StableConfiguration,1\n"
        "asynchronous,11,1,StableConfiguration,\n"
    )
