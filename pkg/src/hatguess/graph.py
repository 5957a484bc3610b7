"""Graph substrate: representation, edge-list I/O, seeded generators, detectors.

Vertices are the dense integers ``0..n-1``. A :class:`Graph` is immutable once
built; every algorithm in the package reads it through ``adj``/``degree``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np


class GraphError(ValueError):
    """Invalid graph construction or generator parameters."""


class ParseError(GraphError):
    """Edge-list text that does not follow the format.

    ``kind`` is one of ``"malformed"``, ``"range"``, ``"duplicate"``, ``"loop"``,
    ``"count"``; ``line`` is the 1-based offending line (``None`` at EOF).
    """

    def __init__(self, kind: str, line: int | None, message: str):
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")
        self.kind = kind
        self.line = line


class Graph:
    """Simple undirected graph on vertices ``0..n-1``."""

    __slots__ = ("n", "adj", "m", "_nbr_sets")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise GraphError("vertex count must be non-negative")
        sets: list[set[int]] = [set() for _ in range(n)]
        m = 0
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if v in sets[u]:
                raise GraphError(f"duplicate edge ({u}, {v})")
            sets[u].add(v)
            sets[v].add(u)
            m += 1
        self.n = n
        self.m = m
        self.adj: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(s)) for s in sets)
        self._nbr_sets = tuple(frozenset(s) for s in sets)

    @classmethod
    def from_adjacency(cls, adj: Sequence[Iterable[int]]) -> "Graph":
        return cls(len(adj), ((u, v) for u, nb in enumerate(adj) for v in nb if u < v))

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    def neighbors(self, v: int) -> frozenset[int]:
        return self._nbr_sets[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._nbr_sets[u]

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        for u, nb in enumerate(self.adj):
            for v in nb:
                if u < v:
                    yield (u, v)

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph, relabelled to ``0..k-1``; also returns new->old labels."""
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        edges = [(index[u], index[v]) for u in keep for v in self.adj[u] if v in index and u < v]
        return Graph(len(keep), edges), keep

    def without(self, v: int) -> tuple["Graph", list[int]]:
        return self.induced(x for x in range(self.n) if x != v)

    def edge_key(self) -> tuple[int, tuple[tuple[int, int], ...]]:
        return (self.n, tuple(self.edges()))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.edge_key() == other.edge_key()

    def __hash__(self) -> int:
        return hash(self.edge_key())

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


# ---------------------------------------------------------------------------
# edge-list format

def parse_edge_list(text: str) -> Graph:
    """Parse the ``n m`` header + ``u v`` lines format ('#' starts a comment line)."""
    header: tuple[int, int] | None = None
    seen: set[tuple[int, int]] = set()
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError("malformed", lineno, f"expected two integers, got {raw!r}")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError("malformed", lineno, f"expected two integers, got {raw!r}") from None
        if header is None:
            if a < 0 or b < 0:
                raise ParseError("malformed", lineno, "header values must be non-negative")
            header = (a, b)
            continue
        n, m = header
        if len(edges) == m:
            raise ParseError("count", lineno, f"more than the declared {m} edge lines")
        if a == b:
            raise ParseError("loop", lineno, f"loop at vertex {a}")
        if not (0 <= a < n and 0 <= b < n):
            raise ParseError("range", lineno, f"vertex index out of range for n={n}")
        key = (min(a, b), max(a, b))
        if key in seen:
            raise ParseError("duplicate", lineno, f"duplicate edge {key[0]} {key[1]}")
        seen.add(key)
        edges.append(key)
    if header is None:
        raise ParseError("malformed", None, "missing 'n m' header")
    if len(edges) != header[1]:
        raise ParseError("count", None, f"declared {header[1]} edges, found {len(edges)}")
    return Graph(header[0], edges)


def format_edge_list(g: Graph, comment: str | None = None) -> str:
    lines = [f"# {comment}"] if comment else []
    lines.append(f"{g.n} {g.m}")
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# seeded generation

class SeededRng:
    """PCG64 raw 64-bit stream with fixed reductions.

    Only ``random_raw`` of the bit generator is used; floats take the top 53
    bits and bounded integers use rejection sampling, so the derived streams do
    not depend on numpy's ``Generator`` method implementations.
    """

    def __init__(self, seed: int):
        self._bits = np.random.PCG64(seed % (1 << 64))

    def raw(self, size: int) -> np.ndarray:
        return self._bits.random_raw(size)

    def random(self, size: int) -> np.ndarray:
        return (self.raw(size) >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))

    def below(self, k: int) -> int:
        """Uniform integer in ``[0, k)``."""
        if k <= 0:
            raise ValueError("k must be positive")
        limit = (1 << 64) - ((1 << 64) % k)
        while True:
            x = int(self._bits.random_raw())
            if x < limit:
                return x % k


FAMILIES = (
    "path", "cycle", "complete", "complete-bipartite", "random-tree",
    "maximal-outerplanar", "gnp", "one-subdivision-of", "star", "fan",
)


@dataclass(frozen=True)
class FamilySpec:
    """A generator request: family tag, its parameters and a seed.

    ``params`` holds ``n`` for most families, ``(m, n)`` for complete-bipartite,
    ``(n, p)`` for gnp and a nested spec for one-subdivision-of.
    """

    family: str
    params: tuple = ()
    seed: int = 0
    base: "FamilySpec | None" = field(default=None)

    def to_json(self) -> dict:
        out: dict = {"family": self.family, "params": list(self.params), "seed": self.seed}
        if self.base is not None:
            out["base"] = self.base.to_json()
        return out

    @classmethod
    def from_json(cls, data: dict) -> "FamilySpec":
        base = cls.from_json(data["base"]) if data.get("base") else None
        return cls(data["family"], tuple(data.get("params", ())), int(data.get("seed", 0)), base)


def path(n: int) -> Graph:
    return Graph(n, ((i, i + 1) for i in range(n - 1)))


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    return Graph(n, combinations(range(n), 2))


def complete_bipartite(a: int, b: int) -> Graph:
    """K_{a,b}; the ``a`` side is ``0..a-1``."""
    return Graph(a + b, ((i, a + j) for i in range(a) for j in range(b)))


def star(leaves: int) -> Graph:
    return complete_bipartite(1, leaves)


def fan(n: int) -> Graph:
    """Path ``0..n-2`` plus apex ``n-1`` joined to every path vertex."""
    if n < 3:
        raise GraphError("fan needs n >= 3")
    apex = n - 1
    return Graph(n, [(i, i + 1) for i in range(n - 2)] + [(i, apex) for i in range(n - 1)])


def random_tree(n: int, rng: SeededRng) -> Graph:
    return Graph(n, ((rng.below(i), i) for i in range(1, n)))


def maximal_outerplanar(n: int, rng: SeededRng) -> Graph:
    """Random triangulation of the convex polygon ``0, 1, ..., n-1``.

    Each polygon side ``(i, j)`` still to be triangulated picks an apex ``k``
    strictly between, forming triangle ``i, k, j``; sub-polygons are split in
    stack order so the stream of choices is fixed.
    """
    if n < 3:
        raise GraphError("maximal-outerplanar needs n >= 3")
    edges = [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)]
    stack = [(0, n - 1)]
    while stack:
        i, j = stack.pop()
        if j - i < 2:
            continue
        k = i + 1 + rng.below(j - i - 1)
        if k - i > 1:
            edges.append((i, k))
        if j - k > 1:
            edges.append((k, j))
        stack.append((k, j))
        stack.append((i, k))
    return Graph(n, edges)


def gnp(n: int, p: float, rng: SeededRng) -> Graph:
    """Erdős–Rényi G(n, p): row ``i`` draws ``n-1-i`` uniforms for pairs ``(i, j>i)``."""
    if not 0.0 <= p <= 1.0:
        raise GraphError("p must lie in [0, 1]")
    edges: list[tuple[int, int]] = []
    for i in range(n - 1):
        hits = np.flatnonzero(rng.random(n - 1 - i) < p)
        edges.extend((i, i + 1 + int(j)) for j in hits)
    return Graph(n, edges)


def one_subdivision(h: Graph) -> Graph:
    """H^(1): vertex ``h.n + k`` subdivides the k-th edge of ``h.edges()``."""
    edges = []
    for k, (u, v) in enumerate(h.edges()):
        mid = h.n + k
        edges.append((u, mid))
        edges.append((v, mid))
    return Graph(h.n + h.m, edges)


def generate(spec: FamilySpec) -> Graph:
    fam, prm = spec.family, spec.params
    try:
        if fam == "path":
            (n,) = prm
            return path(int(n))
        if fam == "cycle":
            (n,) = prm
            return cycle(int(n))
        if fam == "complete":
            (n,) = prm
            return complete(int(n))
        if fam == "complete-bipartite":
            a, b = prm
            return complete_bipartite(int(a), int(b))
        if fam == "star":
            (k,) = prm
            return star(int(k))
        if fam == "fan":
            (n,) = prm
            return fan(int(n))
        if fam == "random-tree":
            (n,) = prm
            if int(n) < 1:
                raise GraphError("random-tree needs n >= 1")
            return random_tree(int(n), SeededRng(spec.seed))
        if fam == "maximal-outerplanar":
            (n,) = prm
            return maximal_outerplanar(int(n), SeededRng(spec.seed))
        if fam == "gnp":
            n, p = prm
            return gnp(int(n), float(p), SeededRng(spec.seed))
        if fam == "one-subdivision-of":
            if spec.base is None:
                raise GraphError("one-subdivision-of needs a base spec")
            return one_subdivision(generate(spec.base))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, GraphError):
            raise
        raise GraphError(f"bad parameters {prm!r} for family {fam!r}") from exc
    raise GraphError(f"unknown family {fam!r}")


# ---------------------------------------------------------------------------
# detectors

def max_common_neighbors(g: Graph) -> tuple[int, tuple[int, int] | None]:
    """Largest ``|N(u) & N(v)|`` over pairs, with the lexicographically first maximiser.

    Counts wedges through each middle vertex, so the cost is ``sum(deg^2)``.
    """
    counts: dict[tuple[int, int], int] = {}
    for nb in g.adj:
        for a, b in combinations(nb, 2):
            counts[(a, b)] = counts.get((a, b), 0) + 1
    if not counts:
        return 0, None
    best = max(counts.values())
    pair = min(p for p, c in counts.items() if c == best)
    return best, pair


@dataclass(frozen=True)
class OuterplanarResult:
    is_maximal: bool
    ears: tuple[int, ...] = ()
    reason: str = ""

    def __bool__(self) -> bool:
        return self.is_maximal


def is_maximal_outerplanar(g: Graph) -> OuterplanarResult:
    """Recognise maximal outerplanar graphs by peeling ears down to a triangle.

    An ear is a degree-2 vertex with adjacent neighbours. Lowest-index ear
    first; ``ears`` lists the removal order (empty for K_3).
    """
    n = g.n
    if n < 3:
        return OuterplanarResult(False, reason="fewer than 3 vertices")
    if g.m != 2 * n - 3:
        return OuterplanarResult(False, reason=f"edge count {g.m} != 2n-3 = {2 * n - 3}")
    nbrs = [set(a) for a in g.adj]
    alive = n
    order: list[int] = []
    removed = [False] * n
    while alive > 3:
        ear = -1
        for v in range(n):
            if not removed[v] and len(nbrs[v]) == 2:
                a, b = nbrs[v]
                if b in nbrs[a]:
                    ear = v
                    break
        if ear < 0:
            return OuterplanarResult(False, tuple(order), reason=f"peeling stuck with {alive} vertices left")
        a, b = nbrs[ear]
        nbrs[a].discard(ear)
        nbrs[b].discard(ear)
        nbrs[ear].clear()
        removed[ear] = True
        order.append(ear)
        alive -= 1
    rest = [v for v in range(n) if not removed[v]]
    x, y, z = rest
    if not (y in nbrs[x] and z in nbrs[x] and z in nbrs[y]):
        return OuterplanarResult(False, tuple(order), reason="remaining three vertices are not a triangle")
    # peeling succeeded, so g is a 2-tree; it is outerplanar iff no edge lies in 3 triangles
    for u, v in g.edges():
        if len(g.neighbors(u) & g.neighbors(v)) > 2:
            return OuterplanarResult(False, tuple(order), reason=f"edge ({u}, {v}) lies in more than two triangles")
    return OuterplanarResult(True, tuple(order))
