"""Exact densities of shallow (topological) minors and the strong-degeneracy bounds built on them.

* depth 0: densest subgraph by max-flow, exact rationals throughout;
* depth 1/2 (topological): branch sets plus length-2 paths through distinct middles;
* depth 1: contraction of disjoint radius-1 sets.

The last two are brute force and guarded to desk-scale inputs.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .graph import Graph

HALF_GUARD = 14
ONE_GUARD = 10


class ScaleError(ValueError):
    pass


def _frac_json(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator}


# ---------------------------------------------------------------------------
# witnesses

@dataclass(frozen=True)
class MinorModel:
    """A shallow minor of a host graph.

    ``depth == "half"``: ``branch`` vertices, ``direct`` host edges inside the
    branch set and ``paths`` ``(x, m, y)`` through distinct middles ``m``.

    ``depth == "1"``: disjoint ``blocks``, each dominated by ``centers[i]``.
    """

    depth: str
    branch: tuple[int, ...] = ()
    direct: tuple[tuple[int, int], ...] = ()
    paths: tuple[tuple[int, int, int], ...] = ()
    blocks: tuple[tuple[int, ...], ...] = ()
    centers: tuple[int, ...] = ()

    def minor(self, host: Graph | None = None) -> Graph:
        """The graph H the model realises (vertices indexed as branch / blocks)."""
        if self.depth == "half":
            idx = {b: i for i, b in enumerate(self.branch)}
            pairs = [(idx[x], idx[y]) for x, y in self.direct] + [(idx[x], idx[y]) for x, _, y in self.paths]
            return Graph(len(self.branch), pairs)
        if host is None:
            raise ValueError("depth-1 models need the host to find minor edges")
        owner = {v: i for i, blk in enumerate(self.blocks) for v in blk}
        pairs = {
            (min(owner[u], owner[v]), max(owner[u], owner[v]))
            for u, v in host.edges()
            if u in owner and v in owner and owner[u] != owner[v]
        }
        return Graph(len(self.blocks), sorted(pairs))

    def to_json(self) -> dict:
        if self.depth == "half":
            return {
                "depth": "half",
                "branch": list(self.branch),
                "direct": [list(e) for e in self.direct],
                "paths": [list(p) for p in self.paths],
            }
        return {"depth": "1", "blocks": [list(b) for b in self.blocks], "centers": list(self.centers)}

    @classmethod
    def from_json(cls, data: dict) -> "MinorModel":
        if data["depth"] == "half":
            return cls(
                "half",
                branch=tuple(data["branch"]),
                direct=tuple(tuple(e) for e in data["direct"]),
                paths=tuple(tuple(p) for p in data["paths"]),
            )
        return cls("1", blocks=tuple(tuple(b) for b in data["blocks"]), centers=tuple(data["centers"]))


@dataclass(frozen=True)
class Density:
    value: Fraction
    depth: str                                  # "0", "half" or "1"
    vertices: tuple[int, ...] = ()              # depth-0 witness
    model: MinorModel | None = field(default=None)

    def to_json(self) -> dict:
        out = {"depth": self.depth, "value": _frac_json(self.value)}
        if self.model is not None:
            out["witness"] = self.model.to_json()
        else:
            out["witness"] = {"vertices": list(self.vertices)}
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Density":
        value = Fraction(int(data["value"]["num"]), int(data["value"]["den"]))
        wit = data["witness"]
        if "vertices" in wit:
            return cls(value, data["depth"], tuple(wit["vertices"]))
        return cls(value, data["depth"], model=MinorModel.from_json(wit))


# ---------------------------------------------------------------------------
# depth 0

class _Dinic:
    def __init__(self, n: int):
        self.n = n
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add(self, u: int, v: int, c: int) -> None:
        self.adj[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(c)
        self.adj[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)

    def _levels(self, s: int) -> list[int]:
        level = [-1] * self.n
        level[s] = 0
        dq = deque([s])
        while dq:
            u = dq.popleft()
            for e in self.adj[u]:
                if self.cap[e] > 0 and level[self.to[e]] < 0:
                    level[self.to[e]] = level[u] + 1
                    dq.append(self.to[e])
        return level

    def maxflow(self, s: int, t: int) -> int:
        total = 0
        while True:
            level = self._levels(s)
            if level[t] < 0:
                return total
            it = [0] * self.n

            def push(u: int, f: int) -> int:
                if u == t:
                    return f
                while it[u] < len(self.adj[u]):
                    e = self.adj[u][it[u]]
                    v = self.to[e]
                    if self.cap[e] > 0 and level[v] == level[u] + 1:
                        got = push(v, min(f, self.cap[e]))
                        if got:
                            self.cap[e] -= got
                            self.cap[e ^ 1] += got
                            return got
                    it[u] += 1
                return 0

            while True:
                f = push(s, 1 << 62)
                if not f:
                    break
                total += f

    def source_side(self, s: int) -> list[bool]:
        return [lv >= 0 for lv in self._levels(s)]


def _denser_than(g: Graph, a: int, b: int) -> tuple[int, list[int]]:
    """Max of ``b*e(S) - a*|S|`` over vertex sets S, with the minimal maximiser."""
    edges = list(g.edges())
    m, n = len(edges), g.n
    src, sink = m + n, m + n + 1
    net = _Dinic(m + n + 2)
    inf = b * m + a * n + 1
    for i, (u, v) in enumerate(edges):
        net.add(src, i, b)
        net.add(i, m + u, inf)
        net.add(i, m + v, inf)
    for v in range(n):
        net.add(m + v, sink, a)
    cut = net.maxflow(src, sink)
    side = net.source_side(src)
    return b * m - cut, [v for v in range(n) if side[m + v]]


def _edges_within(g: Graph, vs) -> int:
    s = set(vs)
    return sum(1 for v in s for w in g.adj[v] if w in s and v < w)


def max_subgraph_density(g: Graph) -> Density:
    """Exact ``max e(H)/v(H)`` over subgraphs, with a witness vertex set.

    Starts from the whole graph and repeatedly asks the flow network for a
    strictly denser set at the current witness's exact ratio, until none
    exists.
    """
    if g.n == 0:
        return Density(Fraction(0), "0", ())
    best = tuple(range(g.n))
    value = Fraction(g.m, g.n)
    while True:
        gain, S = _denser_than(g, value.numerator, value.denominator)
        if gain <= 0:
            return Density(value, "0", best)
        best = tuple(S)
        value = Fraction(_edges_within(g, S), len(S))


# ---------------------------------------------------------------------------
# depth 1/2

def _matching(middles: list[int], options: dict[int, list[tuple[int, int]]]) -> dict[int, tuple[int, int]]:
    """Maximum matching middles -> pairs (Kuhn), deterministic in input order."""
    owner: dict[tuple[int, int], int] = {}

    def augment(m: int, seen: set) -> bool:
        for p in options[m]:
            if p in seen:
                continue
            seen.add(p)
            if p not in owner or augment(owner[p], seen):
                owner[p] = m
                return True
        return False

    for m in middles:
        augment(m, set())
    return {m: p for p, m in owner.items()}


def topgrad_half(g: Graph, guard: int | None = HALF_GUARD) -> Density:
    """Exact top-grad at depth 1/2 by enumerating branch sets.

    Ties keep the lexicographically smallest branch set.
    """
    if guard is not None and g.n > guard:
        raise ScaleError(f"topgrad_half is brute force; n = {g.n} exceeds the guard {guard}")
    if g.n == 0:
        return Density(Fraction(0), "half", model=MinorModel("half"))
    nbr = [set(a) for a in g.adj]
    best_val = Fraction(-1)
    best: MinorModel | None = None
    for k in range(1, g.n + 1):
        for B in combinations(range(g.n), k):
            bset = set(B)
            direct = [(x, y) for x, y in combinations(B, 2) if y in nbr[x]]
            middles = [v for v in range(g.n) if v not in bset]
            options = {}
            for mid in middles:
                ins = sorted(nbr[mid] & bset)
                options[mid] = [(x, y) for x, y in combinations(ins, 2) if y not in nbr[x]]
            live = [mid for mid in middles if options[mid]]
            if Fraction(len(direct) + len(live), k) < best_val:
                continue
            match = _matching(live, options)
            val = Fraction(len(direct) + len(match), k)
            if val > best_val:
                best_val = val
                paths = tuple(sorted((x, mid, y) for mid, (x, y) in match.items()))
                best = MinorModel("half", branch=B, direct=tuple(direct), paths=paths)
    return Density(best_val, "half", model=best)


# ---------------------------------------------------------------------------
# depth 1

def grad_one(g: Graph, guard: int | None = ONE_GUARD) -> Density:
    """Exact grad at depth 1: best contraction of disjoint radius-1 vertex sets.

    Vertices are placed in index order: skipped, opening a block, or joining
    one. A block whose vertices have no common dominator among its members or
    the still-unplaced vertices is abandoned early. Ties keep the first model
    met in this order.
    """
    if guard is not None and g.n > guard:
        raise ScaleError(f"grad_one is brute force; n = {g.n} exceeds the guard {guard}")
    n = g.n
    if n == 0:
        return Density(Fraction(0), "1", model=MinorModel("1"))
    closed = [set(g.adj[v]) | {v} for v in range(n)]
    blocks: list[list[int]] = []
    owner = [-1] * n
    cnt: list[list[int]] = []      # host edges between blocks
    state = {"edges": 0, "best": Fraction(-1), "model": None}
    # host edges with an endpoint >= i; each can add at most one minor edge
    rem_edges = [sum(1 for _, v in g.edges() if v >= i) for i in range(n + 1)]

    def dominated(blk: list[int], upto: int) -> bool:
        common = set.intersection(*(closed[v] for v in blk))
        return any(c in common for c in blk) or any(c >= upto for c in common)

    def place(v: int, b: int) -> None:
        owner[v] = b
        blocks[b].append(v)
        for w in g.adj[v]:
            o = owner[w]
            if o >= 0 and o != b:
                if cnt[b][o] == 0:
                    state["edges"] += 1
                cnt[b][o] += 1
                cnt[o][b] += 1

    def unplace(v: int, b: int) -> None:
        for w in g.adj[v]:
            o = owner[w]
            if o >= 0 and o != b:
                cnt[b][o] -= 1
                cnt[o][b] -= 1
                if cnt[b][o] == 0:
                    state["edges"] -= 1
        blocks[b].pop()
        owner[v] = -1

    def record() -> None:
        p = len(blocks)
        if not p:
            return
        if not all(dominated(blk, n) for blk in blocks):
            return
        val = Fraction(state["edges"], p)
        if val > state["best"]:
            centers = []
            for blk in blocks:
                common = set.intersection(*(closed[x] for x in blk))
                centers.append(min(c for c in blk if c in common))
            state["best"] = val
            state["model"] = MinorModel("1", blocks=tuple(tuple(b) for b in blocks), centers=tuple(centers))

    def rec(v: int) -> None:
        p = len(blocks)
        if p and Fraction(state["edges"] + rem_edges[v], p) <= state["best"]:
            return
        if v == n:
            record()
            return
        for b in range(p):
            place(v, b)
            if dominated(blocks[b], v + 1):
                rec(v + 1)
            unplace(v, b)
        blocks.append([])
        for row in cnt:
            row.append(0)
        cnt.append([0] * (p + 1))
        place(v, p)
        rec(v + 1)
        unplace(v, p)
        blocks.pop()
        cnt.pop()
        for row in cnt:
            row.pop()
        rec(v + 1)

    rec(0)
    return Density(state["best"], "1", model=state["model"])


# ---------------------------------------------------------------------------
# validation

def validate_model(host: Graph, model: MinorModel) -> list[str]:
    """Check a model against the host graph; returns the problems found."""
    problems: list[str] = []
    if model.depth == "half":
        B = model.branch
        if len(set(B)) != len(B):
            problems.append("branch vertices repeat")
        bset = set(B)
        seen_pairs: set[tuple[int, int]] = set()
        for x, y in model.direct:
            if x not in bset or y not in bset or not host.has_edge(x, y):
                problems.append(f"direct edge ({x}, {y}) is not a host edge inside the branch set")
            seen_pairs.add((min(x, y), max(x, y)))
        mids = [m for _, m, _ in model.paths]
        if len(set(mids)) != len(mids):
            problems.append("middle vertices repeat")
        for x, m, y in model.paths:
            if m in bset:
                problems.append(f"middle {m} is a branch vertex")
            if x not in bset or y not in bset:
                problems.append(f"path ({x}, {m}, {y}) does not join branch vertices")
            elif not (host.has_edge(x, m) and host.has_edge(m, y)):
                problems.append(f"path ({x}, {m}, {y}) is not in the host")
            key = (min(x, y), max(x, y))
            if key in seen_pairs:
                problems.append(f"pair {key} realised twice")
            seen_pairs.add(key)
        return problems
    if model.depth != "1":
        return [f"unknown depth {model.depth!r}"]
    used = [v for blk in model.blocks for v in blk]
    if len(set(used)) != len(used):
        problems.append("blocks are not disjoint")
    if len(model.centers) != len(model.blocks):
        return problems + ["one centre per block required"]
    for blk, c in zip(model.blocks, model.centers):
        if c not in blk:
            problems.append(f"centre {c} not in its block")
        elif any(v != c and not host.has_edge(c, v) for v in blk):
            problems.append(f"centre {c} does not dominate {blk}")
    return problems


def model_density(host: Graph, model: MinorModel) -> Fraction:
    h = model.minor(host)
    return Fraction(h.m, h.n) if h.n else Fraction(0)


# ---------------------------------------------------------------------------
# bounds

def strongdeg_bound_from_topgrads(s: int, t0, th) -> int:
    """``floor((2 t0 - 2)(s - 1) th + 2 t0)`` for K_{2,s}-free graphs, exactly.

    Strong degeneracy is at least 1, so the result is clamped there; the raw
    formula drops below 1 exactly on forests (``t0 < 1``).
    """
    if s < 2:
        raise ValueError("s must be >= 2")
    t0, th = Fraction(t0), Fraction(th)
    if t0 < 0 or th < t0:
        raise ValueError("need 0 <= t0 <= th")
    return max(1, math.floor((2 * t0 - 2) * (s - 1) * th + 2 * t0))


def strongdeg_bound_from_grad1(s: int, g1) -> int:
    """``floor(2 s g1)`` for K_{2,s}-free graphs, exactly (clamped at 1 like the above)."""
    if s < 2:
        raise ValueError("s must be >= 2")
    g1 = Fraction(g1)
    if g1 < 0:
        raise ValueError("g1 must be non-negative")
    return max(1, math.floor(2 * s * g1))


def no_minor_strongdeg(s: int, t: int, C: float) -> int:
    """Strong degeneracy for K_{2,s}-free graphs without a K_t minor: ``floor(2 s C t sqrt(log t))``.

    ``C`` is the absolute constant of the extremal bound for K_t-minor-free
    graphs (density at most ``C t sqrt(log t)``). The paper does not specify
    it; callers must supply one.
    """
    if s < 2 or t < 1 or C <= 0:
        raise ValueError("need s >= 2, t >= 1, C > 0")
    return math.floor(2 * s * C * t * math.sqrt(math.log(t)))


def no_subdivision_strongdeg(s: int, t: int, C) -> int:
    """Strong degeneracy for K_{2,s}-free graphs without a K_t subdivision: ``floor(2 s (C t^2)^2)``.

    ``C`` is the absolute constant of the extremal bound for graphs with no
    K_t subdivision (density at most ``C t^2``). The paper does not specify
    it; callers must supply one.
    """
    if s < 2 or t < 1 or C <= 0:
        raise ValueError("need s >= 2, t >= 1, C > 0")
    x = Fraction(C) * t * t
    return math.floor(2 * s * x * x)


def hat_bound(d: int) -> int:
    """``(2d)^d``."""
    return (2 * d) ** d
