"""Exact solving of the (multi-guess) hat-guessing game on tiny graphs.

Colours are ``0..q-1``. A strategy table gives every vertex ``v`` a guess set
for each *view*, the colours of its sorted neighbours encoded in mixed radix
with the first neighbour least significant.

:func:`decide_winnable` searches table cells (``(v, view)`` pairs) with
clause propagation: every colouring is a clause "some vertex guesses right".
Pruning uses a counting identity. With full-size guess sets the total number
of (colouring, correct vertex) incidences is fixed at
``sum_v g(v) q^(n-1)``, so colourings covered more than once can use up at
most ``sum_v g(v) q^(n-1) - q^n`` of that capacity.
"""
from __future__ import annotations

import heapq
import itertools
import multiprocessing
import time
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .graph import Graph

DEFAULT_GUARD = 10**5


class ScaleError(ValueError):
    """Instance exceeds the enumeration guard."""


class TableError(ValueError):
    """Malformed strategy table."""


# ---------------------------------------------------------------------------
# tables

@dataclass
class StrategyTable:
    q: int
    neighbors: tuple[tuple[int, ...], ...]
    guesses: list[list[tuple[int, ...]]]

    def guess(self, v: int, colouring: Sequence[int]) -> tuple[int, ...]:
        code, mult = 0, 1
        for w in self.neighbors[v]:
            code += colouring[w] * mult
            mult *= self.q
        return self.guesses[v][code]

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "neighbors": [list(nb) for nb in self.neighbors],
            "guesses": [[list(s) for s in row] for row in self.guesses],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "StrategyTable":
        return cls(
            int(data["q"]),
            tuple(tuple(int(w) for w in nb) for nb in data["neighbors"]),
            [[tuple(int(c) for c in s) for s in row] for row in data["guesses"]],
        )


def view_colours(code: int, deg: int, q: int) -> list[int]:
    out = []
    for _ in range(deg):
        out.append(code % q)
        code //= q
    return out


def _budget_list(g: Graph, budgets: Mapping[int, int] | Sequence[int] | int | None) -> list[int]:
    if budgets is None:
        out = [1] * g.n
    elif isinstance(budgets, int):
        out = [budgets] * g.n
    elif isinstance(budgets, Mapping):
        out = [int(budgets[v]) for v in range(g.n)]
    else:
        out = [int(b) for b in budgets]
    if len(out) != g.n or any(b < 1 for b in out):
        raise ValueError("need a positive budget for every vertex")
    return out


def check_table(g: Graph, budgets, q: int, table: StrategyTable) -> None:
    bl = _budget_list(g, budgets)
    if table.q != q:
        raise TableError(f"table is for q={table.q}, game has q={q}")
    if len(table.guesses) != g.n or tuple(table.neighbors) != g.adj:
        raise TableError("table does not match the graph")
    for v in range(g.n):
        row = table.guesses[v]
        if len(row) != q ** g.degree(v):
            raise TableError(f"vertex {v}: {len(row)} views mapped, expected {q ** g.degree(v)}")
        for code, s in enumerate(row):
            if len(s) > bl[v]:
                raise TableError(f"vertex {v}, view {code}: {len(s)} guesses exceed budget {bl[v]}")
            if any(not 0 <= c < q for c in s) or len(set(s)) != len(s):
                raise TableError(f"vertex {v}, view {code}: bad guess set {s}")


def verify_strategy(g: Graph, budgets, q: int, table: StrategyTable) -> tuple[int, ...] | None:
    """Return the lexicographically first mean colouring, or ``None`` if the table wins."""
    check_table(g, budgets, q, table)
    sets = [[frozenset(s) for s in row] for row in table.guesses]
    nbrs = g.adj
    for colouring in itertools.product(range(q), repeat=g.n):
        for v in range(g.n):
            code, mult = 0, 1
            for w in nbrs[v]:
                code += colouring[w] * mult
                mult *= q
            if colouring[v] in sets[v][code]:
                break
        else:
            return colouring
    return None


def clique_sum_strategy(n: int) -> StrategyTable:
    """Player ``i`` of K_n guesses so that the colour sum is ``i`` mod ``n``."""
    if n < 1:
        raise ValueError("n must be positive")
    neighbors = tuple(tuple(w for w in range(n) if w != v) for v in range(n))
    guesses = []
    for v in range(n):
        row = []
        for code in range(n ** (n - 1)):
            seen = sum(view_colours(code, n - 1, n))
            row.append(((v - seen) % n,))
        guesses.append(row)
    return StrategyTable(n, neighbors, guesses)


# ---------------------------------------------------------------------------
# search

@dataclass
class GameOutcome:
    winnable: bool
    table: StrategyTable | None = None
    reason: str = "search"
    nodes: int = 0
    seconds: float = 0.0

    def to_json(self) -> dict:
        out = {"winnable": self.winnable, "reason": self.reason, "nodes": self.nodes, "seconds": round(self.seconds, 6)}
        if self.table is not None:
            out["table"] = self.table.to_json()
        return out


def _max_clique(g: Graph) -> list[int]:
    best: list[int] = []

    def grow(clique: list[int], cands: list[int]) -> None:
        nonlocal best
        if len(clique) > len(best):
            best = list(clique)
        for i, v in enumerate(cands):
            if len(clique) + len(cands) - i <= len(best):
                return
            grow(clique + [v], [w for w in cands[i + 1:] if g.has_edge(v, w)])

    grow([], list(range(g.n)))
    return best


def _components(g: Graph) -> list[list[int]]:
    seen = [False] * g.n
    comps = []
    for r in range(g.n):
        if seen[r]:
            continue
        seen[r] = True
        stack, comp = [r], []
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in g.adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def _pad(mask_cols: Sequence[int], size: int, q: int) -> tuple[int, ...]:
    out = sorted(set(mask_cols))
    c = 0
    while len(out) < size:
        if c not in out:
            out.append(c)
        c += 1
    return tuple(sorted(out))


def _clique_table(g: Graph, bl: list[int], q: int, clique: Sequence[int]) -> StrategyTable:
    pos = {v: i for i, v in enumerate(clique[:q])}
    guesses = []
    for v in range(g.n):
        deg = g.degree(v)
        row = []
        for code in range(q ** deg):
            if v in pos:
                cols = view_colours(code, deg, q)
                seen = sum(c for w, c in zip(g.adj[v], cols) if w in pos)
                base = ((pos[v] - seen) % q,)
            else:
                base = ()
            row.append(_pad(base, min(bl[v], q), q))
        guesses.append(row)
    return StrategyTable(q, g.adj, guesses)


def _luby(i: int) -> int:
    """i-th term (0-based) of the Luby restart sequence 1 1 2 1 1 2 4 ..."""
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i %= size
    return 1 << seq


class _Search:
    """Clause-learning search over literals ``colour x is in the guess set of cell``.

    Variables are ``cell * q + x``; literal ``2 * var`` says the colour is
    guessed, ``2 * var + 1`` that it is not. Each colouring is a clause over
    one positive literal per vertex, propagated through per-clause counters.
    Every cell guesses exactly ``min(g(v), q)`` colours (supersets never hurt,
    so this loses nothing); that cardinality is propagated natively. Learned
    clauses use two watched literals. The waste bound (see module docstring)
    prunes at decisions.
    """

    RESTART_UNIT = 64
    VAR_DECAY = 0.95

    def __init__(self, g: Graph, bl: list[int], q: int, deadline: float | None = None):
        n = g.n
        self.g = g
        self.n, self.q = n, q
        self.deadline = deadline
        ncol = q**n
        idx = np.arange(ncol, dtype=np.int64)
        colour = [(idx // q**v) % q for v in range(n)]
        self.offset = []
        var_cols = []
        off = 0
        for v in range(n):
            self.offset.append(off)
            code = np.zeros(ncol, dtype=np.int64)
            mult = 1
            for w in g.adj[v]:
                code += colour[w] * mult
                mult *= q
            var_cols.append((code + off) * q + colour[v])
            off += q ** g.degree(v)
        self.ncell, self.ncol = off, ncol
        nvar = off * q
        self.size = [min(bl[v], q) for v in range(n) for _ in range(q ** g.degree(v))]
        mat = np.stack(var_cols, axis=1) if n else np.zeros((ncol, 0), dtype=np.int64)
        self.clause_vars = [tuple(r) for r in mat.tolist()]
        groups: list[list[int]] = [[] for _ in range(nvar)]
        for i, vs in enumerate(self.clause_vars):
            for x in vs:
                groups[x].append(i)
        self.groups = groups
        self.gsize = [len(x) for x in groups]

        self.lv = [-1] * (2 * nvar)     # literal values: 1 true, 0 false, -1 open
        self.level = [0] * nvar
        self.pos = [0] * nvar
        self.reason: list = [None] * nvar
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.ntrue = [0] * off
        self.nfalse = [0] * off
        self.covered = [0] * ncol
        self.nopen = [n] * ncol
        self.ucount = list(self.gsize)
        self.uncovered = ncol
        self.waste = 0
        self.slack = sum(min(bl[v], q) * q ** (n - 1) for v in range(n)) - ncol
        self.watches: list[list[list[int]]] = [[] for _ in range(2 * nvar)]
        self.learnts: list[list[int]] = []
        self.max_learnts = 2000
        self.activity = [0.0] * nvar
        self.var_inc = 1.0
        self.heap = [(0.0, v) for v in range(nvar)]
        self.nodes = 0
        self.conflicts = 0

    # -- assignment bookkeeping -------------------------------------------

    def _assign(self, lit: int, reason) -> None:
        var = lit >> 1
        self.lv[lit] = 1
        self.lv[lit ^ 1] = 0
        self.level[var] = len(self.trail_lim)
        self.pos[var] = len(self.trail)
        self.reason[var] = reason
        self.trail.append(lit)
        cell = var // self.q
        if lit & 1:
            self.nfalse[cell] += 1
            nopen = self.nopen
            for i in self.groups[var]:
                nopen[i] -= 1
        else:
            self.ntrue[cell] += 1
            covered, ucount, cv = self.covered, self.ucount, self.clause_vars
            for i in self.groups[var]:
                if covered[i]:
                    self.waste += 1
                else:
                    self.uncovered -= 1
                    for x in cv[i]:
                        ucount[x] -= 1
                covered[i] += 1

    def _backtrack(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        stop = self.trail_lim[lvl]
        q, trail, lv = self.q, self.trail, self.lv
        covered, ucount, nopen, cv = self.covered, self.ucount, self.nopen, self.clause_vars
        heap, act = self.heap, self.activity
        while len(trail) > stop:
            lit = trail.pop()
            var = lit >> 1
            cell = var // q
            if lit & 1:
                self.nfalse[cell] -= 1
                for i in self.groups[var]:
                    nopen[i] += 1
            else:
                self.ntrue[cell] -= 1
                for i in self.groups[var]:
                    covered[i] -= 1
                    if covered[i]:
                        self.waste -= 1
                    else:
                        self.uncovered += 1
                        for x in cv[i]:
                            ucount[x] += 1
            lv[lit] = lv[lit ^ 1] = -1
            self.reason[var] = None
            heapq.heappush(heap, (-act[var], var))
        del self.trail_lim[lvl:]
        self.qhead = len(trail)

    # -- propagation -------------------------------------------------

    def propagate(self):
        """Run to fixpoint; return a falsified clause (list of literals) or ``None``."""
        q, lv, size = self.q, self.lv, self.size
        trail = self.trail
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            var = p >> 1
            cell = var // q
            k = size[cell]
            base = 2 * cell * q
            if p & 1:
                left = q - self.nfalse[cell]
                if left < k:
                    return [l for l in range(base, base + 2 * q, 2) if lv[l] == 0]
                if left == k:
                    for l in range(base, base + 2 * q, 2):
                        if lv[l] < 0:
                            self._assign(l, "card")
                covered, nopen, cv = self.covered, self.nopen, self.clause_vars
                for i in self.groups[var]:
                    if covered[i] or nopen[i] > 1:
                        continue
                    if nopen[i] == 0:
                        return [2 * x for x in cv[i]]
                    for x in cv[i]:
                        if lv[2 * x] < 0:
                            self._assign(2 * x, i)
                            break
            else:
                t = self.ntrue[cell]
                if t > k:
                    return [l + 1 for l in range(base, base + 2 * q, 2) if lv[l] == 1]
                if t == k:
                    for l in range(base + 1, base + 2 * q, 2):
                        if lv[l] < 0:
                            self._assign(l, "card")
            confl = self._propagate_learnt(p ^ 1)
            if confl is not None:
                return confl
        return None

    def _propagate_learnt(self, false_lit: int):
        lv = self.lv
        ws = self.watches[false_lit]
        i = j = 0
        end = len(ws)
        while i < end:
            c = ws[i]
            i += 1
            if c[0] == false_lit:
                c[0], c[1] = c[1], false_lit
            first = c[0]
            if lv[first] == 1:
                ws[j] = c
                j += 1
                continue
            for k in range(2, len(c)):
                if lv[c[k]] != 0:
                    c[1], c[k] = c[k], false_lit
                    self.watches[c[1]].append(c)
                    break
            else:
                ws[j] = c
                j += 1
                if lv[first] == 0:
                    ws[j:i] = []
                    return list(c)
                self._assign(first, c)
        del ws[j:]
        return None

    def _reason_lits(self, var: int) -> list[int]:
        r = self.reason[var]
        if r == "card":
            q, lv, pos = self.q, self.lv, self.pos
            base = 2 * (var // q) * q
            mine = pos[var]
            if lv[2 * var] == 0:
                return [2 * var + 1] + [l + 1 for l in range(base, base + 2 * q, 2) if lv[l] == 1 and pos[l >> 1] < mine]
            return [2 * var] + [l for l in range(base, base + 2 * q, 2) if lv[l] == 0 and pos[l >> 1] < mine]
        if isinstance(r, int):
            return [2 * x for x in self.clause_vars[r]]
        return r

    # -- learning -------------------------------------------------

    def _bump(self, var: int) -> None:
        act = self.activity
        act[var] += self.var_inc
        if act[var] > 1e100:
            for v in range(len(act)):
                act[v] *= 1e-100
            self.var_inc *= 1e-100
            self.heap = [(-act[v], v) for v in range(len(act)) if self.lv[2 * v] < 0]
            heapq.heapify(self.heap)
        elif self.lv[2 * var] < 0:
            heapq.heappush(self.heap, (-act[var], var))

    def _analyze(self, confl: list[int]) -> tuple[list[int], int]:
        level, trail = self.level, self.trail
        cur = len(self.trail_lim)
        seen = bytearray(len(level))
        learnt = [0]
        path = 0
        idx = len(trail) - 1
        p = -1
        clause = confl
        while True:
            for lit in clause:
                v = lit >> 1
                if lit == p or seen[v] or level[v] == 0:
                    continue
                seen[v] = 1
                self._bump(v)
                if level[v] == cur:
                    path += 1
                else:
                    learnt.append(lit)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            path -= 1
            if path == 0:
                break
            clause = self._reason_lits(p >> 1)
        learnt[0] = p ^ 1
        # drop literals whose reason is already implied by the clause
        keep = [learnt[0]]
        for lit in learnt[1:]:
            v = lit >> 1
            if self.reason[v] is None:
                keep.append(lit)
                continue
            for r in self._reason_lits(v):
                u = r >> 1
                if u != v and not seen[u] and level[u] > 0:
                    keep.append(lit)
                    break
        learnt = keep
        self.var_inc /= self.VAR_DECAY
        if len(learnt) == 1:
            return learnt, 0
        best = max(range(1, len(learnt)), key=lambda t: level[learnt[t] >> 1])
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, level[learnt[1] >> 1]

    def _learn(self, confl: list[int]) -> bool:
        """Backjump on a conflict; False when the conflict is at level 0."""
        self.conflicts += 1
        if not self.trail_lim:
            return False
        learnt, back = self._analyze(confl)
        self._backtrack(back)
        if len(learnt) == 1:
            self._assign(learnt[0], None)
        else:
            self.watches[learnt[0]].append(learnt)
            self.watches[learnt[1]].append(learnt)
            self.learnts.append(learnt)
            self._assign(learnt[0], learnt)
        return True

    def _reduce_db(self) -> None:
        """Forget the longer half of the learned clauses not serving as reasons."""
        locked = {id(self.reason[c[0] >> 1]) for c in self.learnts if self.lv[c[0]] == 1}
        ranked = sorted(self.learnts, key=len)
        half = len(ranked) // 2
        keep = ranked[:half] + [c for c in ranked[half:] if len(c) <= 3 or id(c) in locked]
        self.learnts = keep
        for ws in self.watches:
            ws.clear()
        for c in keep:
            self.watches[c[0]].append(c)
            self.watches[c[1]].append(c)
        self.max_learnts = int(self.max_learnts * 1.1)

    # -- bound and branching -----------------------------------------------

    def _pruned(self) -> bool:
        """Lower-bound the waste of completing every cell; compare with slack."""
        q = self.q
        gsize, ucount, lv, size, ntrue = self.gsize, self.ucount, self.lv, self.size, self.ntrue
        budget = self.slack - self.waste
        if budget < 0:
            return True
        for cell in range(self.ncell):
            need = size[cell] - ntrue[cell]
            if not need:
                continue
            base = cell * q
            costs = [gsize[x] - ucount[x] for x in range(base, base + q) if lv[2 * x] < 0]
            budget -= min(costs) if need == 1 else sum(sorted(costs)[:need])
            if budget < 0:
                return True
        return False

    def _branch_literal(self) -> int:
        """Most active open variable, guessed (positive) first."""
        heap, lv = self.heap, self.lv
        while heap:
            _, v = heapq.heappop(heap)
            if lv[2 * v] < 0:
                return 2 * v
        raise AssertionError("no open variable but colourings uncovered")

    def _tick(self) -> None:
        self.nodes += 1
        if self.deadline is not None and self.nodes % 256 == 0 and time.monotonic() > self.deadline:
            raise TimeoutError("exact search exceeded its time limit")

    def add_units(self, lits) -> bool:
        """Assert literals at level 0; False if that is already contradictory."""
        for lit in lits:
            v = self.lv[lit]
            if v == 0:
                return False
            if v < 0:
                self._assign(lit, None)
        return self.propagate() is None

    def solve(self) -> bool:
        restarts = 0
        budget = _luby(0) * self.RESTART_UNIT
        while True:
            confl = self.propagate()
            if confl is None and self.uncovered and self._pruned():
                confl = [self.trail[s] ^ 1 for s in self.trail_lim]
            if confl is not None:
                if not self._learn(confl):
                    return False
                budget -= 1
                continue
            if self.uncovered == 0:
                return True
            if budget <= 0:
                restarts += 1
                budget = _luby(restarts) * self.RESTART_UNIT
                self._backtrack(0)
                if len(self.learnts) > self.max_learnts:
                    self._reduce_db()
                continue
            self._tick()
            self.trail_lim.append(len(self.trail))
            self._assign(self._branch_literal(), None)

    def cubes(self, width: int) -> list[list[int]]:
        """Split into up to ``width`` literal cubes, listed in search order.

        Splitting literals are chosen from a shortest uncovered colouring
        clause (most uncovered colourings first), independent of activity.
        """
        layer: list[list[int]] = [[]]
        while len(layer) < width:
            nxt = []
            grew = False
            for prefix in layer:
                if not self._enter(prefix):
                    self._backtrack(0)
                    continue
                if self.uncovered == 0:
                    nxt.append(prefix)
                elif not self._pruned():
                    lit = self._split_literal()
                    for l in (lit, lit ^ 1):
                        depth = len(self.trail_lim)
                        if self._enter([l]):
                            nxt.append(prefix + [l])
                            grew = True
                        self._backtrack(depth)
                self._backtrack(0)
            layer = nxt
            if not grew:
                break
        return layer

    def _split_literal(self) -> int:
        covered, nopen = self.covered, self.nopen
        best_i, best_len = -1, self.n + 1
        for i in range(self.ncol):
            if not covered[i] and nopen[i] < best_len:
                best_i, best_len = i, nopen[i]
        lv, ucount = self.lv, self.ucount
        best, best_u = -1, -1
        for x in self.clause_vars[best_i]:
            if lv[2 * x] < 0 and ucount[x] > best_u:
                best, best_u = x, ucount[x]
        return 2 * best

    def _enter(self, lits: list[int]) -> bool:
        for lit in lits:
            v = self.lv[lit]
            if v == 0:
                return False
            if v < 0:
                self.trail_lim.append(len(self.trail))
                self._assign(lit, None)
                if self.propagate() is not None:
                    return False
        return True

    # -- root handling -------------------------------------------------

    def root_units(self) -> list[int]:
        """Colour-relabelling symmetry breaking.

        Relabelling the colours of one vertex maps winning tables to winning
        tables. Vertices of a greedy independent set may use any relabelling,
        so their all-zero view guesses exactly ``{0..k-1}``. Every other vertex
        keeps 0 fixed, which leaves all all-zero views in place, and permutes
        ``1..q-1`` so its all-zero view guesses inside ``{0..k}``.
        """
        g, q = self.g, self.q
        chosen: list[int] = []
        for v in range(g.n):
            if all(not g.has_edge(v, u) for u in chosen):
                chosen.append(v)
        units = []
        for v in range(g.n):
            cell = self.offset[v]
            k = self.size[cell]
            if v in chosen:
                units.extend(2 * (cell * q + y) + (y >= k) for y in range(q))
            else:
                units.extend(2 * (cell * q + y) + 1 for y in range(k + 1, q))
        return units

    def table(self) -> StrategyTable:
        q = self.q
        guesses = []
        for v in range(self.n):
            row = []
            for code in range(q ** self.g.degree(v)):
                cell = self.offset[v] + code
                base = cell * q
                chosen = [y for y in range(q) if self.lv[2 * (base + y)] == 1]
                row.append(_pad(chosen, self.size[cell], q))
            guesses.append(row)
        return StrategyTable(q, self.g.adj, guesses)


FRONTIER = 8
SAT_SOLVER = "cadical195"


def sat_available() -> bool:
    try:
        import pysat.solvers  # noqa: F401
    except ImportError:
        return False
    return True


WASTE_ENCODING_LIMIT = 400_000


def _sat_cube(s: _Search, units: list[int]) -> tuple[bool, list | None, int]:
    """Solve one cube with an external CDCL solver on the same literals.

    Cells get an at-most-``k`` constraint instead of exactly ``k``; padding a
    smaller guess set afterwards never hurts. The waste bound becomes a
    cardinality constraint over per-colouring "covered twice or more"
    indicators when it is small enough to encode.
    """
    from pysat.card import CardEnc, EncType
    from pysat.solvers import Solver

    q = s.q
    clauses = [[x + 1 for x in vs] for vs in s.clause_vars]
    top = s.ncell * q
    for cell in range(s.ncell):
        lits = [cell * q + y + 1 for y in range(q)]
        k = s.size[cell]
        if k == 1:
            clauses.extend([-a, -b] for i, a in enumerate(lits) for b in lits[i + 1:])
        elif k < q:
            enc = CardEnc.atmost(lits, bound=k, top_id=top, encoding=EncType.seqcounter)
            top = max(top, enc.nv)
            clauses.extend(enc.clauses)

    n_extra = sum(max(0, len(vs) - 1) for vs in s.clause_vars)
    if s.slack == 0:
        for vs in s.clause_vars:
            clauses.extend([-(a + 1), -(b + 1)] for i, a in enumerate(vs) for b in vs[i + 1:])
    elif s.slack < n_extra and n_extra * s.slack <= WASTE_ENCODING_LIMIT:
        extra = []
        for vs in s.clause_vars:
            # prev[j]: at least j + 1 of the literals so far are true
            prev: list[int] = []
            for x in vs:
                cur = []
                for j in range(len(prev) + 1):
                    top += 1
                    cur.append(top)
                    if j < len(prev):
                        clauses.append([-prev[j], top])
                    if j == 0:
                        clauses.append([-(x + 1), top])
                    else:
                        clauses.append([-prev[j - 1], -(x + 1), top])
                prev = cur
            extra.extend(prev[1:])
        enc = CardEnc.atmost(extra, bound=s.slack, top_id=top, encoding=EncType.kmtotalizer)
        clauses.extend(enc.clauses)

    clauses.extend([-((u >> 1) + 1)] if u & 1 else [(u >> 1) + 1] for u in units)
    with Solver(name=SAT_SOLVER, bootstrap_with=clauses) as solver:
        ok = solver.solve()
        stats = solver.accum_stats() or {}
        if not ok:
            return False, None, int(stats.get("decisions", 0))
        model = solver.get_model()
    for x in range(s.ncell * q):
        s.lv[2 * x] = 1 if model[x] > 0 else 0
    return True, s.table().guesses, int(stats.get("decisions", 0))


def _solve_cube(args) -> tuple[bool, list | None, int]:
    edges, n, bl, q, cube, deadline, backend = args
    g = Graph(n, edges)
    s = _Search(g, bl, q, deadline)
    units = s.root_units() + list(cube)
    if backend == "sat":
        return _sat_cube(s, units)
    if not s.add_units(units):
        return False, None, 0
    if s.solve():
        return True, s.table().guesses, s.nodes
    return False, None, s.nodes


def _run_pooled(jobs: list, workers: int, deadline: float | None):
    """Yield cube results in order from a process pool; terminate on the deadline."""
    ctx = multiprocessing.get_context("fork" if "fork" in multiprocessing.get_all_start_methods() else "spawn")
    pool = ctx.Pool(processes=workers)
    try:
        pending = [pool.apply_async(_solve_cube, (job,)) for job in jobs]
        for res in pending:
            wait = None if deadline is None else max(0.0, deadline - time.monotonic())
            try:
                yield res.get(timeout=wait)
            except multiprocessing.TimeoutError:
                raise TimeoutError("exact search exceeded its time limit") from None
    finally:
        pool.terminate()
        pool.join()


def decide_winnable(
    g: Graph,
    budgets=None,
    q: int = 2,
    *,
    threads: int = 1,
    guard: int | None = DEFAULT_GUARD,
    shortcuts: bool = True,
    time_limit: float | None = None,
    backend: str = "auto",
) -> GameOutcome:
    """Decide whether the players have a winning table with ``q`` colours.

    ``shortcuts`` allows the explicit clique-sum table when ``q`` is at most
    the clique number. The counting bound ``sum min(g, q) < q`` always
    applies. Every returned table has been re-verified.

    The root is split into a fixed set of literal cubes that are solved in
    order, by worker processes when ``threads > 1``. The first winnable cube
    supplies the table, so the answer never depends on the worker count.

    ``backend`` picks the cube solver: ``"native"`` (the built-in search),
    ``"sat"`` (python-sat's CaDiCaL on the same encoding) or ``"auto"``
    (``"sat"`` when python-sat is installed).
    """
    t0 = time.monotonic()
    if q < 1:
        raise ValueError("q must be positive")
    if threads < 1:
        raise ValueError("threads must be positive")
    if backend == "auto":
        backend = "sat" if sat_available() else "native"
    if backend not in ("native", "sat"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "sat" and not sat_available():
        raise ValueError("backend 'sat' needs the python-sat package")
    bl = _budget_list(g, budgets)
    if guard is not None:
        cells = sum(q ** g.degree(v) for v in range(g.n))
        if q**g.n > guard or cells > guard:
            raise ScaleError(f"q^n = {q ** g.n} colourings / {cells} cells exceed the guard {guard}")

    def done(winnable: bool, table=None, reason="search", nodes=0) -> GameOutcome:
        if table is not None and verify_strategy(g, bl, q, table) is not None:
            raise AssertionError("solver produced a losing table")
        return GameOutcome(winnable, table, reason, nodes, time.monotonic() - t0)

    if g.n == 0:
        return done(False, reason="no players")
    for v in range(g.n):
        if bl[v] >= q:
            guesses = [[_pad((), min(bl[u], q), q) for _ in range(q ** g.degree(u))] for u in range(g.n)]
            return done(True, StrategyTable(q, g.adj, guesses), reason="budget covers all colours")
    if sum(bl) < q:
        return done(False, reason="counting")
    if shortcuts:
        clique = _max_clique(g)
        if q <= len(clique):
            return done(True, _clique_table(g, bl, q, clique), reason="clique")

    comps = _components(g)
    if len(comps) > 1:
        # The adversary can combine mean colourings of the components, so the
        # game is won exactly when some component wins on its own.
        nodes = 0
        for comp in comps:
            h, keep = g.induced(comp)
            left = None if time_limit is None else max(0.0, time_limit - (time.monotonic() - t0))
            sub = decide_winnable(
                h, [bl[v] for v in keep], q, threads=threads, guard=None,
                shortcuts=shortcuts, time_limit=left, backend=backend,
            )
            nodes += sub.nodes
            if sub.winnable:
                guesses = [[_pad((), min(bl[u], q), q) for _ in range(q ** g.degree(u))] for u in range(g.n)]
                for i, v in enumerate(keep):
                    guesses[v] = sub.table.guesses[i]
                return done(True, StrategyTable(q, g.adj, guesses), reason=f"component: {sub.reason}", nodes=nodes)
        return done(False, reason="components", nodes=nodes)

    deadline = None if time_limit is None else t0 + time_limit
    s = _Search(g, bl, q, deadline)
    if not s.add_units(s.root_units()):
        return done(False)
    cubes = s.cubes(FRONTIER)
    jobs = [(list(g.edges()), g.n, bl, q, cube, deadline, backend) for cube in cubes]
    pooled = threads > 1 or (backend == "sat" and deadline is not None)
    results = _run_pooled(jobs, threads, deadline) if pooled and jobs else map(_solve_cube, jobs)
    nodes = 0
    for ok, guesses, k in results:
        nodes += k
        if ok:
            if pooled:
                results.close()
            return done(True, StrategyTable(q, g.adj, guesses), nodes=nodes)
    return done(False, nodes=nodes)


@dataclass
class HGValue:
    value: int
    at_least: bool = False
    outcomes: dict[int, GameOutcome] = field(default_factory=dict)

    def __str__(self) -> str:
        return f">= {self.value}" if self.at_least else str(self.value)


def hat_guessing_number(g: Graph, budgets=None, q_max: int = 4, **kw) -> HGValue:
    """Largest ``q <= q_max`` that is winnable, scanning upward until the first loss."""
    if q_max < 1:
        raise ValueError("q_max must be positive")
    outcomes: dict[int, GameOutcome] = {}
    best = 0
    for q in range(1, q_max + 1):
        out = decide_winnable(g, budgets, q, **kw)
        outcomes[q] = out
        if not out.winnable:
            return HGValue(best, False, outcomes)
        best = q
    return HGValue(best, True, outcomes)
