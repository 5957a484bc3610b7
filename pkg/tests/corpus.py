"""Fixed graph corpus shared by the unit and acceptance tests."""
from __future__ import annotations

import networkx as nx

from hatguess import graph as G


def _from_nx(h) -> G.Graph:
    h = nx.convert_node_labels_to_integers(h)
    return G.Graph(h.number_of_nodes(), h.edges())


def build_corpus() -> list[tuple[str, G.Graph]]:
    out: list[tuple[str, G.Graph]] = []
    out += [(f"empty{n}", G.Graph(n)) for n in (1, 2, 4)]
    out += [(f"P{n}", G.path(n)) for n in range(2, 9)]
    out += [(f"C{n}", G.cycle(n)) for n in range(3, 11)]
    out += [(f"K{n}", G.complete(n)) for n in range(1, 7)]
    out += [(f"K{a},{b}", G.complete_bipartite(a, b)) for a, b in [(1, 3), (2, 2), (2, 3), (2, 4), (3, 3)]]
    out += [(f"star{k}", G.star(k)) for k in (3, 5)]
    out += [(f"fan{n}", G.fan(n)) for n in (4, 5, 6, 7)]
    out += [("petersen", _from_nx(nx.petersen_graph()))]
    out += [("sub(K4)", G.one_subdivision(G.complete(4)))]
    out += [("sub(C4)", G.one_subdivision(G.cycle(4)))]
    for seed in range(4):
        out.append((f"tree9/s{seed}", G.random_tree(9, G.SeededRng(seed))))
        out.append((f"mop{6 + seed}/s{seed}", G.maximal_outerplanar(6 + seed, G.SeededRng(seed))))
        out.append((f"gnp9/s{seed}", G.gnp(9, 0.35, G.SeededRng(seed))))
        out.append((f"gnp10/s{seed}", G.gnp(10, 0.25, G.SeededRng(100 + seed))))
    return out


CORPUS = build_corpus()


def atlas(max_n: int) -> list[tuple[str, G.Graph]]:
    """Every graph on 1..max_n vertices up to isomorphism."""
    return [
        (f"atlas{i}", _from_nx(h))
        for i, h in enumerate(nx.graph_atlas_g())
        if 1 <= h.number_of_nodes() <= max_n
    ]
