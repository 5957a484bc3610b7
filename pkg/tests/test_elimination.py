import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from hatguess import graph as G
from hatguess.elimination import (
    EliminationOrder,
    ObstructionWitness,
    StuckSubgraph,
    degeneracy,
    extract_obstruction,
    is_d_removable,
    strong_degeneracy,
    strong_elimination,
    validate_witness,
)
from strategies import graphs


def replay(g, order: EliminationOrder) -> bool:
    """Check each recorded step really was d-removable in the residual graph."""
    adj = oracles.adjacency(g)
    alive = set(range(g.n))
    for step in order.steps:
        v = step.vertex
        if v not in alive:
            return False
        nb = adj[v] & alive
        if set(step.neighbors) != nb:
            return False
        deg = {w: len(adj[w] & alive) for w in nb}
        if len(nb) > order.d or sum(k > order.d for k in deg.values()) > 1:
            return False
        if tuple(deg[w] for w in step.neighbors) != step.neighbor_degrees:
            return False
        alive.discard(v)
    return not alive


def test_removable_definition():
    g = G.star(4)
    assert is_d_removable(g, 1, 1)  # leaf next to one high-degree centre
    assert not is_d_removable(g, 0, 1)
    assert is_d_removable(g, 0, 4)
    with pytest.raises(ValueError):
        is_d_removable(g, 0, 0)


def test_leaf_between_two_hubs_is_not_removable():
    # vertex 0 sees two vertices of degree 3 > d = 2
    g = G.Graph(7, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)])
    assert not is_d_removable(g, 0, 2)
    assert is_d_removable(g, 0, 3)


@pytest.mark.parametrize(
    "g,d",
    [(G.path(7), 1), (G.cycle(9), 2), (G.complete(5), 4), (G.complete_bipartite(2, 4), 4), (G.Graph(3), 1)],
)
def test_known_values(g, d):
    value, order = strong_degeneracy(g)
    assert value == d
    assert replay(g, order)


@settings(max_examples=150, deadline=None)
@given(graphs(max_n=8), st.integers(1, 7))
def test_matches_subgraph_oracle(g, d):
    res = strong_elimination(g, d)
    assert isinstance(res, EliminationOrder) == oracles.strongly_degenerate(g, d)
    if isinstance(res, EliminationOrder):
        assert replay(g, res)
    else:
        assert res.vertices and res.d == d


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=9), st.integers(1, 5), st.integers(0, 2**32))
def test_random_tie_breaking_same_verdict(g, d, seed):
    a = strong_elimination(g, d)
    b = strong_elimination(g, d, seed=seed)
    assert type(a) is type(b)
    if isinstance(a, StuckSubgraph):
        assert set(a.vertices) == set(b.vertices)


@settings(max_examples=100, deadline=None)
@given(graphs(max_n=9))
def test_degeneracy_oracle_and_ordering(g):
    k = degeneracy(g)
    assert k == oracles.degeneracy(g)
    d, _ = strong_degeneracy(g)
    assert d == oracles.strong_degeneracy(g)
    assert k <= d


def test_order_json_roundtrip():
    _, order = strong_degeneracy(G.fan(8))
    assert EliminationOrder.from_json(order.to_json()) == order


def test_bipartite_obstruction():
    w = extract_obstruction(G.complete_bipartite(2, 3), 2)
    assert w.variant == "bipartite"
    assert w.centers == (0, 1) and set(w.common) == {2, 3, 4}
    assert validate_witness(G.complete_bipartite(2, 3), w) == []


def test_subdivision_obstruction():
    g = G.one_subdivision(G.complete(4))
    w = extract_obstruction(g, 2)
    assert w.variant == "subdivision" and w.delta == 3
    assert validate_witness(g, w) == []
    assert ObstructionWitness.from_json(w.to_json()) == w


def test_direct_edges_witness():
    # K_5 at d=3: everything has degree 4, so F is the stuck part itself
    w = extract_obstruction(G.complete(5), 3)
    assert w.variant == "subdivision" and all(m is None for m in w.middles)
    assert w.delta == 4 and validate_witness(G.complete(5), w) == []


def test_extract_on_degenerate_graph_raises():
    with pytest.raises(ValueError):
        extract_obstruction(G.cycle(6), 2)


def test_tampered_witness_rejected():
    g = G.complete_bipartite(2, 3)
    w = extract_obstruction(g, 2)
    bad = ObstructionWitness("bipartite", 2, centers=(0, 2), common=w.common)
    assert validate_witness(g, bad)
    short = ObstructionWitness("bipartite", 3, centers=w.centers, common=w.common)
    assert validate_witness(g, short)


@settings(max_examples=120, deadline=None)
@given(graphs(min_n=4, max_n=10), st.integers(1, 4))
def test_every_stuck_graph_yields_valid_witness(g, d):
    if oracles.strongly_degenerate(g, d):
        return
    w = extract_obstruction(g, d)
    assert validate_witness(g, w) == []
    if w.variant == "subdivision":
        assert w.delta >= 1 and w.f.m > 0
        if all(m is None for m in w.middles):
            assert w.delta > d
