"""Strong degeneracy by greedy elimination, ordinary degeneracy, and obstructions.

A vertex is *d-removable* when its degree is at most ``d`` and at most one of
its neighbours has degree above ``d``. Removability survives deleting other
vertices (degrees only drop), so greedy elimination decides strong
d-degeneracy regardless of the order in which candidates are taken.
"""
from __future__ import annotations

import heapq
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph


@dataclass(frozen=True)
class EliminationStep:
    vertex: int
    neighbors: tuple[int, ...]
    neighbor_degrees: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.neighbors)


@dataclass(frozen=True)
class EliminationOrder:
    d: int
    steps: tuple[EliminationStep, ...]

    @property
    def vertices(self) -> list[int]:
        return [s.vertex for s in self.steps]

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "steps": [
                {"v": s.vertex, "neighbors": list(s.neighbors), "neighbor_degrees": list(s.neighbor_degrees)}
                for s in self.steps
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "EliminationOrder":
        steps = tuple(
            EliminationStep(int(s["v"]), tuple(s["neighbors"]), tuple(s["neighbor_degrees"]))
            for s in data["steps"]
        )
        return cls(int(data["d"]), steps)


@dataclass(frozen=True)
class StuckSubgraph:
    """Vertices left when no remaining vertex is d-removable."""

    d: int
    vertices: tuple[int, ...]
    removed: tuple[EliminationStep, ...] = ()


def is_d_removable(g: Graph, v: int, d: int) -> bool:
    if not 0 <= v < g.n:
        raise IndexError(f"vertex {v} out of range for n={g.n}")
    if d < 1:
        raise ValueError("d must be >= 1")
    if g.degree(v) > d:
        return False
    return sum(1 for w in g.adj[v] if g.degree(w) > d) <= 1


def strong_elimination(g: Graph, d: int, seed: int | None = None) -> EliminationOrder | StuckSubgraph:
    """Greedily delete d-removable vertices until the graph is empty or stuck.

    Candidates are taken lowest index first; with ``seed`` a uniformly random
    candidate is taken instead (used to exercise order independence).
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    n = g.n
    deg = g.degrees()
    high = [sum(1 for w in g.adj[v] if deg[w] > d) for v in range(n)]
    alive = [True] * n

    def removable(v: int) -> bool:
        return deg[v] <= d and high[v] <= 1

    rng = np.random.default_rng(seed) if seed is not None else None
    heap = [v for v in range(n) if removable(v)]
    pool = set(heap)
    heapq.heapify(heap)
    steps: list[EliminationStep] = []

    while heap if rng is None else pool:
        if rng is None:
            v = heapq.heappop(heap)
        else:
            cands = sorted(pool)
            v = cands[int(rng.integers(len(cands)))]
            pool.discard(v)
        nbrs = tuple(w for w in g.adj[v] if alive[w])
        steps.append(EliminationStep(v, nbrs, tuple(deg[w] for w in nbrs)))
        alive[v] = False
        for w in nbrs:
            deg[w] -= 1
            if deg[w] == d:
                # w just stopped being high for its live neighbours
                for x in g.adj[w]:
                    if alive[x]:
                        high[x] -= 1
                        if x not in pool and removable(x):
                            pool.add(x)
                            heapq.heappush(heap, x)
            if w not in pool and removable(w):
                pool.add(w)
                heapq.heappush(heap, w)
    if len(steps) == n:
        return EliminationOrder(d, tuple(steps))
    return StuckSubgraph(d, tuple(v for v in range(n) if alive[v]), tuple(steps))


def strong_degeneracy(g: Graph) -> tuple[int, EliminationOrder]:
    """Least ``d >= 1`` for which elimination succeeds, with its order."""
    for d in range(1, max(g.max_degree(), 1) + 1):
        res = strong_elimination(g, d)
        if isinstance(res, EliminationOrder):
            return d, res
    raise AssertionError("elimination at d = max degree cannot get stuck")


def degeneracy(g: Graph) -> int:
    """Classical degeneracy via repeated minimum-degree removal (bucket queue)."""
    n = g.n
    deg = g.degrees()
    maxd = max(deg, default=0)
    buckets: list[set[int]] = [set() for _ in range(maxd + 1)]
    for v, k in enumerate(deg):
        buckets[k].add(v)
    alive = [True] * n
    best = 0
    cur = 0
    for _ in range(n):
        cur = max(cur - 1, 0)
        while not buckets[cur]:
            cur += 1
        v = min(buckets[cur])
        buckets[cur].discard(v)
        alive[v] = False
        best = max(best, cur)
        for w in g.adj[v]:
            if alive[w]:
                buckets[deg[w]].discard(w)
                deg[w] -= 1
                buckets[deg[w]].add(w)
    return best


# ---------------------------------------------------------------------------
# obstructions

@dataclass(frozen=True)
class ObstructionWitness:
    """Certificate that a graph is not strongly d-degenerate.

    ``bipartite``: ``centers`` share the ``common`` neighbours (a K_{2,s},
    s = len(common) >= d+1).

    ``subdivision``: ``f`` is a graph of minimum degree ``delta`` on
    ``0..k-1``; ``branch[i]`` is the host vertex for F-vertex ``i`` and
    ``middles[j]`` the host vertex subdividing the j-th edge of ``f.edges()``,
    or ``None`` when that edge is realised directly by a host edge.
    """

    variant: str
    d: int
    centers: tuple[int, int] | None = None
    common: tuple[int, ...] = ()
    f: Graph | None = None
    delta: int = 0
    branch: tuple[int, ...] = ()
    middles: tuple[int | None, ...] = field(default=())

    def to_json(self) -> dict:
        if self.variant == "bipartite":
            return {"variant": "bipartite", "d": self.d, "centers": list(self.centers), "common": list(self.common)}
        return {
            "variant": "subdivision",
            "d": self.d,
            "delta": self.delta,
            "f_n": self.f.n,
            "f_edges": [list(e) for e in self.f.edges()],
            "branch": list(self.branch),
            "middles": list(self.middles),
        }

    @classmethod
    def from_json(cls, data: dict) -> "ObstructionWitness":
        if data["variant"] == "bipartite":
            return cls("bipartite", int(data["d"]), tuple(data["centers"]), tuple(data["common"]))
        f = Graph(int(data["f_n"]), [tuple(e) for e in data["f_edges"]])
        return cls(
            "subdivision", int(data["d"]), f=f, delta=int(data["delta"]),
            branch=tuple(data["branch"]), middles=tuple(data["middles"]),
        )


def _core(n: int, adj: list[set[int]]) -> tuple[int, set[int]]:
    """Largest k with a non-empty k-core, and that core."""
    best_k, best = 0, set(range(n))
    k = 1
    while True:
        alive = set(range(n))
        deg = {v: len(adj[v]) for v in alive}
        queue = [v for v in alive if deg[v] < k]
        while queue:
            v = queue.pop()
            if v not in alive:
                continue
            alive.discard(v)
            for w in adj[v]:
                if w in alive:
                    deg[w] -= 1
                    if deg[w] < k:
                        queue.append(w)
        if not alive:
            return best_k, best
        best_k, best = k, alive
        k += 1


def extract_obstruction(g: Graph, d: int) -> ObstructionWitness:
    """Turn a stuck elimination into a K_{2,d+1} or a 1-subdivision witness.

    On the stuck part S: A = {deg_S <= d}, B = {deg_S > d}. Each a in A has
    two B-neighbours; its two smallest are its chosen pair. A pair chosen
    d+1 times gives K_{2,d+1}. Otherwise the chosen pairs form a graph H on B
    (first chooser is the subdividing middle), and its densest k-core is F.
    With A empty, H is S itself and every F-edge is a direct host edge.
    """
    res = strong_elimination(g, d)
    if isinstance(res, EliminationOrder):
        raise ValueError(f"graph is strongly {d}-degenerate; nothing to extract")
    stuck = set(res.vertices)
    sdeg = {v: sum(1 for w in g.adj[v] if w in stuck) for v in stuck}
    A = sorted(v for v in stuck if sdeg[v] <= d)
    B = sorted(v for v in stuck if sdeg[v] > d)

    choosers: dict[tuple[int, int], list[int]] = {}
    for a in A:
        bn = [w for w in g.adj[a] if w in stuck and sdeg[w] > d]
        if len(bn) < 2:
            raise AssertionError(f"vertex {a} would be {d}-removable")
        choosers.setdefault((bn[0], bn[1]), []).append(a)

    for pair in sorted(choosers):
        if len(choosers[pair]) >= d + 1:
            return ObstructionWitness("bipartite", d, centers=pair, common=tuple(choosers[pair]))

    index = {b: i for i, b in enumerate(B)}
    hadj: list[set[int]] = [set() for _ in B]
    middle_of: dict[tuple[int, int], int | None] = {}
    if A:
        for (x, y), who in choosers.items():
            i, j = index[x], index[y]
            hadj[i].add(j)
            hadj[j].add(i)
            middle_of[(min(i, j), max(i, j))] = who[0]
    else:
        for x in B:
            for y in g.adj[x]:
                if y in stuck and x < y:
                    i, j = index[x], index[y]
                    hadj[i].add(j)
                    hadj[j].add(i)
                    middle_of[(i, j)] = None

    delta, core = _core(len(B), hadj)
    keep = sorted(core)
    fidx = {i: k for k, i in enumerate(keep)}
    f_edges = [(fidx[i], fidx[j]) for i in keep for j in hadj[i] if j in fidx and i < j]
    f = Graph(len(keep), f_edges)
    branch = tuple(B[i] for i in keep)
    middles = tuple(middle_of[(keep[u], keep[v])] for u, v in f.edges())
    return ObstructionWitness("subdivision", d, f=f, delta=delta, branch=branch, middles=middles)


def validate_witness(host: Graph, w: ObstructionWitness) -> list[str]:
    """Re-check a witness against the host edges; returns the list of problems."""
    problems: list[str] = []
    if w.variant == "bipartite":
        if w.centers is None or w.centers[0] == w.centers[1]:
            return ["centers must be two distinct vertices"]
        if len(set(w.common)) != len(w.common):
            problems.append("common neighbours not distinct")
        if set(w.common) & set(w.centers):
            problems.append("a centre is listed as a common neighbour")
        if len(w.common) < w.d + 1:
            problems.append(f"only {len(w.common)} common neighbours, need {w.d + 1}")
        for c in w.centers:
            for x in w.common:
                if not (0 <= x < host.n and 0 <= c < host.n and host.has_edge(c, x)):
                    problems.append(f"missing host edge ({c}, {x})")
        return problems
    if w.variant != "subdivision" or w.f is None:
        return [f"unknown witness variant {w.variant!r}"]
    f = w.f
    if min(f.degrees(), default=0) != w.delta:
        problems.append(f"delta {w.delta} is not the minimum degree of F")
    if len(w.branch) != f.n or len(set(w.branch)) != f.n:
        problems.append("branch map is not injective")
    f_edges = list(f.edges())
    if len(w.middles) != len(f_edges):
        return problems + ["middle map does not cover F's edges"]
    used = [m for m in w.middles if m is not None]
    if len(set(used)) != len(used):
        problems.append("middle vertices are not distinct")
    if set(used) & set(w.branch):
        problems.append("a middle vertex is also a branch vertex")
    for (i, j), m in zip(f_edges, w.middles):
        x, y = w.branch[i], w.branch[j]
        if m is None:
            if not host.has_edge(x, y):
                problems.append(f"missing host edge ({x}, {y})")
        elif not (host.has_edge(x, m) and host.has_edge(m, y)):
            problems.append(f"missing host path {x}-{m}-{y}")
    return problems
