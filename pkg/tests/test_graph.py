import networkx as nx
import pytest
from hypothesis import given, settings

import oracles
from hatguess import graph as G
from strategies import graphs


def test_basic_queries():
    g = G.Graph(4, [(2, 0), (0, 1), (1, 2), (2, 3)])
    assert g.m == 4
    assert g.adj[2] == (0, 1, 3)
    assert g.degrees() == [2, 2, 3, 1]
    assert g.has_edge(0, 2) and not g.has_edge(0, 3)
    assert list(g.edges()) == [(0, 1), (0, 2), (1, 2), (2, 3)]
    h, keep = g.induced([3, 2, 1])
    assert keep == [1, 2, 3] and list(h.edges()) == [(0, 1), (1, 2)]


@pytest.mark.parametrize("edges", [[(0, 0)], [(0, 1), (1, 0)], [(0, 5)]])
def test_bad_constructor(edges):
    with pytest.raises(G.GraphError):
        G.Graph(3, edges)


def test_parse_with_comments():
    g = G.parse_edge_list("# a path\n3 2\n0 1\n\n# middle\n1 2\n")
    assert g == G.path(3)


@pytest.mark.parametrize(
    "text,kind",
    [
        ("3 1\n0 3\n", "range"),
        ("3 2\n0 1\n1 0\n", "duplicate"),
        ("3 1\n1 1\n", "loop"),
        ("3 2\n0 1\n", "count"),
        ("3 1\n0 1\n1 2\n", "count"),
        ("3\n", "malformed"),
        ("a b\n", "malformed"),
        ("# only comments\n", "malformed"),
    ],
)
def test_parse_errors(text, kind):
    with pytest.raises(G.ParseError) as info:
        G.parse_edge_list(text)
    assert info.value.kind == kind


@given(graphs())
def test_format_roundtrip(g):
    assert G.parse_edge_list(G.format_edge_list(g, comment="x")) == g


def test_family_sizes():
    assert (G.path(5).m, G.cycle(5).m, G.complete(5).m) == (4, 5, 10)
    assert G.complete_bipartite(2, 3).m == 6 and G.star(4).n == 5
    assert G.fan(6).m == 9
    h = G.one_subdivision(G.complete(4))
    assert (h.n, h.m) == (10, 12)
    with pytest.raises(G.GraphError):
        G.cycle(2)


def test_seeded_families_reproduce():
    for fam, prm in [("random-tree", (30,)), ("maximal-outerplanar", (30,)), ("gnp", (30, 0.2))]:
        a = G.generate(G.FamilySpec(fam, prm, seed=7))
        b = G.generate(G.FamilySpec(fam, prm, seed=7))
        c = G.generate(G.FamilySpec(fam, prm, seed=8))
        assert a == b and a != c


def test_random_tree_is_tree():
    for seed in range(5):
        t = G.random_tree(40, G.SeededRng(seed))
        assert nx.is_tree(nx.Graph(list(t.edges())))


def test_spec_json_roundtrip():
    spec = G.FamilySpec("one-subdivision-of", (), 3, G.FamilySpec("gnp", (10, 0.5), 3))
    again = G.FamilySpec.from_json(spec.to_json())
    assert again == spec
    assert G.generate(again) == G.generate(spec)


def test_generate_rejects():
    with pytest.raises(G.GraphError):
        G.generate(G.FamilySpec("nope", (3,)))
    with pytest.raises(G.GraphError):
        G.generate(G.FamilySpec("path", ()))
    with pytest.raises(G.GraphError):
        G.generate(G.FamilySpec("gnp", (5, 2.0)))


@settings(max_examples=60)
@given(graphs())
def test_max_common_matches_oracle(g):
    s, pair = G.max_common_neighbors(g)
    assert s == oracles.max_common(g)
    if s:
        u, v = pair
        assert len(g.neighbors(u) & g.neighbors(v)) == s


def test_maximal_outerplanar_generator_recognised():
    for seed in range(20):
        g = G.maximal_outerplanar(3 + seed * 7, G.SeededRng(seed))
        assert G.is_maximal_outerplanar(g)
        assert g.m == 2 * g.n - 3


@pytest.mark.parametrize(
    "g",
    [G.complete(4), G.cycle(5), G.complete_bipartite(2, 3), G.path(3),
     G.Graph(5, [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)])],
)
def test_not_maximal_outerplanar(g):
    assert not G.is_maximal_outerplanar(g)


def test_fans_are_maximal_outerplanar():
    assert all(G.is_maximal_outerplanar(G.fan(n)) for n in range(3, 12))


def test_rng_below_uniformish():
    r = G.SeededRng(1)
    counts = [0] * 5
    for _ in range(5000):
        counts[r.below(5)] += 1
    assert min(counts) > 850
