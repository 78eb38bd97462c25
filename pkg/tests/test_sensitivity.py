import itertools

import pytest
from hypothesis import given, settings, strategies as st

from ban.dynamics import AttractorKind, build_graph
from ban.formula import Monotony, classify_monotony
from ban.network import Network, SizeGuardError, format_config, parse_config
from ban.sensitivity import (
    Level,
    NotATransition,
    classify_sensitivity,
    enumerate_networks,
    find_minimal_level2,
    is_sequentialisable,
    network_count,
    network_from_index,
    network_index,
    networks_isomorphic,
    relabel,
    sweep_rows,
)

import oracles
from conftest import networks


def c(s):
    return parse_config(s)


XOR, XNOR = "x0 ^ x1", "!(x0 ^ x1)"


def net2(f0, f1):
    return Network.from_formulas([f0, f1])


# --- sequentialisability ---------------------------------------------------

def test_sequentialisable_examples(copy_xnor, xor_xnor):
    assert not is_sequentialisable(copy_xnor, c("01"), c("10"))
    assert is_sequentialisable(copy_xnor, c("00"), c("01"))
    assert not is_sequentialisable(xor_xnor, c("01"), c("10"))


def test_sequentialisable_rejects_non_transition(copy_xnor):
    with pytest.raises(NotATransition):
        is_sequentialisable(copy_xnor, c("11"), c("00"))


# --- levels ----------------------------------------------------------------

def test_xor_xnor_is_level_two(xor_xnor):
    r = classify_sensitivity(xor_xnor)
    assert r.level is Level.L2
    assert {format_config(x, 2) for x in r.lost_recurrent} == {"00", "01", "11"}
    assert r.flags["destroys_attractors"]
    assert [(format_config(w.source, 2), format_config(w.target, 2), w.labels)
            for w in r.witnesses] == [("01", "10", (0b11,))]


def test_copy_xnor_network_is_level_zero(copy_xnor):
    r = classify_sensitivity(copy_xnor)
    assert r.level is Level.L0
    assert r.non_sequentialisable == 1
    assert not any(r.flags.values())


def test_monotone_swap(copy_xnor):
    r = classify_sensitivity(net2("x1", "x0"))
    assert r.level is Level.L0
    fixed = {c("00"), c("11")}
    assert r.async_attractors.stable_configurations() == fixed
    assert r.general_attractors.stable_configurations() == fixed


def test_report_json_shape(xor_xnor):
    doc = classify_sensitivity(xor_xnor).to_json()
    assert doc["level"] == "2"
    assert doc["witnesses"] == [{"from": "01", "to": "10", "W": [[0, 1]]}]
    assert doc["attractors"]["general"] == [
        {"id": "10", "size": 1, "kind": "StableConfiguration", "members": ["10"]}
    ]


def test_witness_cap(xor_xnor):
    r = classify_sensitivity(xor_xnor, max_witnesses=0)
    assert r.witnesses == [] and r.non_sequentialisable == 1


def test_classification_guard():
    with pytest.raises(SizeGuardError):
        classify_sensitivity(Network.from_bits(13, [0] * 13))


def reference_level(net):
    """Level from the mutual-reachability oracle, independent of Tarjan."""
    cls_a, reach_a = oracles.attractors_oracle(net, "asynchronous")
    cls_g, reach_g = oracles.attractors_oracle(net, "general")
    rec_a = set().union(*cls_a)
    rec_g = set().union(*cls_g)
    merged = any(sum(1 for A in cls_a if A & G) > 1 for G in cls_g)
    if rec_a - rec_g or merged:
        return Level.L2
    if rec_g - rec_a:
        return Level.L1BULLET
    for z in range(1 << net.n):
        if z in rec_a or z in rec_g:
            continue
        ka = sum(1 for A in cls_a if A & reach_a[z])
        kg = sum(1 for G in cls_g if G & reach_g[z])
        if kg > ka:
            return Level.L1CIRC
    return Level.L0


@settings(max_examples=150, deadline=None)
@given(networks(1, 4))
def test_level_matches_oracle(net):
    assert classify_sensitivity(net).level is reference_level(net)


@settings(max_examples=80, deadline=None)
@given(networks(1, 6))
def test_fully_sequentialisable_networks_are_level_zero(net):
    r = classify_sensitivity(net)
    if r.non_sequentialisable == 0:
        assert r.level is Level.L0


@settings(max_examples=80, deadline=None)
@given(networks(1, 6))
def test_lost_and_gained_are_disjoint(net):
    r = classify_sensitivity(net)
    assert not (r.lost_recurrent & r.gained_recurrent)


@settings(max_examples=60, deadline=None)
@given(networks(1, 5), st.data())
def test_level_invariant_under_relabelling(net, data):
    perm = tuple(data.draw(st.permutations(range(net.n))))
    assert classify_sensitivity(relabel(net, perm)).level is classify_sensitivity(net).level


# --- enumeration and minimal level-2 networks ------------------------------

def test_enumeration_counts(copy_xnor):
    assert network_count(1) == 4 and len(list(enumerate_networks(1))) == 4
    nets = list(enumerate_networks(2))
    assert len(nets) == 256 and len(set(nets)) == 256
    assert nets.count(copy_xnor) == 1
    assert network_from_index(2, network_index(copy_xnor)) == copy_xnor


def test_enumeration_guard():
    with pytest.raises(SizeGuardError):
        next(enumerate_networks(4))


def test_minimal_level_two_networks():
    found = find_minimal_level2(2)
    assert {n for n, _ in found} == {2}
    expected = {net2(a, b) for a in (XOR, XNOR) for b in (XOR, XNOR)}
    assert {net for _, net in found} == expected
    for _, net in found:
        assert classify_monotony(net) is Monotony.TOTALLY_NON_MONOTONE
        general = classify_sensitivity(net).general_attractors
        assert len(general) == 1
        assert general.attractors[0].kind is AttractorKind.STABLE_CONFIGURATION


def test_size_one_has_no_level_two():
    assert find_minimal_level2(1) == []
    for net in enumerate_networks(1):
        r = classify_sensitivity(net)
        assert r.level is Level.L0 and r.non_sequentialisable == 0


def test_size_two_level_distribution():
    levels = [row["level"] for row in sweep_rows(2)]
    assert {lvl: levels.count(lvl) for lvl in set(levels)} == {
        "0": 228, "1•": 12, "1°": 12, "2": 4,
    }


def test_minimal_search_guard():
    with pytest.raises(SizeGuardError):
        find_minimal_level2(4)


# --- isomorphism -----------------------------------------------------------

def test_isomorphism_examples(copy_xnor):
    assert networks_isomorphic(net2(XOR, XNOR), net2(XNOR, XOR))
    assert networks_isomorphic(copy_xnor, copy_xnor)
    # both functions are symmetric, so swapping automata leaves each network unchanged
    assert not networks_isomorphic(net2(XOR, XOR), net2(XNOR, XNOR))


@settings(max_examples=60)
@given(networks(1, 4), st.data())
def test_relabelling_is_an_isomorphism(net, data):
    perm = tuple(data.draw(st.permutations(range(net.n))))
    other = relabel(net, perm)
    assert networks_isomorphic(net, other)
    inverse = tuple(sorted(range(net.n), key=lambda i: perm[i]))
    assert relabel(other, inverse) == net


def test_relabel_conjugates_dynamics(copy_xnor):
    swapped = relabel(copy_xnor, (1, 0))
    for x, y in itertools.product(range(4), repeat=2):
        xs, ys = ((x & 1) << 1) | (x >> 1), ((y & 1) << 1) | (y >> 1)
        assert build_graph(copy_xnor, "g").has_arc(x, y) == build_graph(swapped, "g").has_arc(xs, ys)
