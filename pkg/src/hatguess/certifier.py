"""Reduction certificates for upper bounds on the multi-guess hat number.

A step removes ``v`` from the current graph with budgets ``g`` and hands the
remaining graph budgets ``g_next`` that agree with ``g`` off ``N(v)``. If

    g(v)/q + sum_{w in N(v)} g(w) / (g_next(w) + 1) < 1

and q exceeds the remaining game's value, q also exceeds the value before the
step. A chain of passing steps that empties the graph therefore shows
``HG_g(G) <= q - 1``. Every left-hand side is an exact ``Fraction``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .elimination import strong_degeneracy
from .graph import Graph, is_maximal_outerplanar


class CertificationError(Exception):
    """No passing chain was found; ``step`` is the best failing step."""

    def __init__(self, message: str, step: "StepReport | None" = None, done: Sequence["StepReport"] = ()):
        super().__init__(message)
        self.step = step
        self.done = tuple(done)


# ---------------------------------------------------------------------------
# budget rules

class BudgetRule:
    """Assigns each vertex of a graph state its number of guesses.

    Built-in rules depend on the vertex degree only; subclasses override
    :meth:`budget`.
    """

    name = "rule"

    def budget(self, degree: int) -> int:
        raise NotImplementedError

    def budgets(self, degrees: Mapping[int, int]) -> dict[int, int]:
        return {v: self.budget(k) for v, k in degrees.items()}

    def describe(self) -> dict:
        return {"rule": self.name}


class TheoremRule(BudgetRule):
    """``(2d)^(d - deg)`` guesses up to degree ``d``, a single guess above."""

    name = "theorem"

    def __init__(self, d: int):
        if d < 1:
            raise ValueError("d must be >= 1")
        self.d = d
        self._base = 2 * d

    def budget(self, degree: int) -> int:
        return self._base ** (self.d - degree) if degree <= self.d else 1

    def describe(self) -> dict:
        return {"rule": self.name, "d": self.d}


class OuterplanarRule(BudgetRule):
    """4 / 2 / 1 guesses at degree 2 / 3 / >= 4.

    Degrees 1 and 0 only occur once a triangle is being dismantled; they get
    12 and 24, which keeps each of those three steps under the ear-step worst
    case 4/41 + 2/5 + 1/2.
    """

    name = "outerplanar"
    TABLE = {0: 24, 1: 12, 2: 4, 3: 2}

    def budget(self, degree: int) -> int:
        return self.TABLE.get(degree, 1)


class ConstantRule(BudgetRule):
    name = "constant"

    def __init__(self, k: int):
        if k < 1:
            raise ValueError("budgets must be positive")
        self.k = k

    def budget(self, degree: int) -> int:
        return self.k

    def describe(self) -> dict:
        return {"rule": self.name, "k": self.k}


class DegreeTableRule(BudgetRule):
    """User table ``degree -> budget`` with a fallback for unlisted degrees."""

    name = "table"

    def __init__(self, table: Mapping[int, int], default: int = 1):
        if default < 1 or any(b < 1 for b in table.values()):
            raise ValueError("budgets must be positive")
        self.table = {int(k): int(b) for k, b in table.items()}
        self.default = int(default)

    def budget(self, degree: int) -> int:
        return self.table.get(degree, self.default)

    def describe(self) -> dict:
        return {"rule": self.name, "table": {str(k): b for k, b in sorted(self.table.items())}, "default": self.default}

    @classmethod
    def from_json(cls, data: Mapping) -> "DegreeTableRule":
        return cls({int(k): int(b) for k, b in data.get("by_degree", {}).items()}, int(data.get("default", 1)))


# ---------------------------------------------------------------------------
# one step

@dataclass(frozen=True)
class StepReport:
    v: int
    neighbors: tuple[int, ...]
    g: dict[int, int]        # on v and its neighbours
    g_next: dict[int, int]   # on the neighbours
    lhs: Fraction

    @property
    def passed(self) -> bool:
        return self.lhs < 1

    def to_json(self) -> dict:
        return {
            "v": self.v,
            "neighbors": list(self.neighbors),
            "g": {str(k): val for k, val in self.g.items()},
            "g_next": {str(k): val for k, val in self.g_next.items()},
            "lhs": {"num": str(self.lhs.numerator), "den": str(self.lhs.denominator)},
        }


def step_lhs(gv: int, q: int, pairs: Iterable[tuple[int, int]]) -> Fraction:
    """``gv/q + sum g(w)/(g'(w)+1)`` over ``(g(w), g'(w))`` pairs, exactly."""
    total = Fraction(gv, q)
    for gw, gnw in pairs:
        total += Fraction(gw, gnw + 1)
    return total


def check_reduction_step(
    neighbors: Mapping[int, Iterable[int]],
    v: int,
    g: Mapping[int, int],
    g_next: Mapping[int, int],
    q: int,
) -> StepReport:
    """Evaluate one reduction step on the state graph ``neighbors`` (vertex -> neighbour set).

    Raises ``ValueError`` when a budget is missing or non-positive, or when
    ``g_next`` differs from ``g`` on a surviving vertex outside ``N(v)``.
    """
    if q < 1:
        raise ValueError("q must be positive")
    if v not in neighbors:
        raise ValueError(f"vertex {v} is not in the state graph")
    nv = tuple(sorted(neighbors[v]))
    live = neighbors.keys()
    if not (g.keys() >= live) or not (g_next.keys() >= live - {v}):
        missing = sorted((live - g.keys()) | (live - {v} - g_next.keys()))
        raise ValueError(f"budgets missing for vertices {missing}")
    if min(g.values(), default=1) < 1 or min(g_next.values(), default=1) < 1:
        raise ValueError("budgets must be positive")
    near = set(nv)
    for x, b in g_next.items() - g.items():
        if x in live and x != v and x not in near:
            raise ValueError(f"g_next({x}) = {b} differs from g({x}) = {g.get(x)} outside N({v})")
    lhs = step_lhs(g[v], q, ((g[w], g_next[w]) for w in nv))
    return StepReport(v, nv, {x: g[x] for x in (v, *nv)}, {w: g_next[w] for w in nv}, lhs)


# ---------------------------------------------------------------------------
# chains

@dataclass(frozen=True)
class ReductionCertificate:
    q: int
    budgets: dict[int, int]   # rule budgets on the full graph
    steps: tuple[StepReport, ...]
    rule: dict | None = None

    @property
    def bound(self) -> int:
        return self.q - 1

    @property
    def worst(self) -> Fraction:
        return max((s.lhs for s in self.steps), default=Fraction(0))

    def to_json(self) -> dict:
        out = {
            "q": self.q,
            "bound": self.bound,
            "budgets": {str(k): val for k, val in sorted(self.budgets.items())},
            "steps": [s.to_json() for s in self.steps],
        }
        if self.rule is not None:
            out["rule"] = self.rule
        return out

    def dumps(self, **kw) -> str:
        return json.dumps(self.to_json(), **kw)


class _State:
    """Residual graph with live adjacency sets and the rule's current budgets."""

    def __init__(self, g: Graph, rule: BudgetRule):
        self.rule = rule
        self.nbrs: dict[int, set[int]] = {v: set(g.adj[v]) for v in range(g.n)}
        self.g = rule.budgets({v: len(s) for v, s in self.nbrs.items()})

    def try_step(self, v: int, q: int) -> StepReport:
        nxt = dict(self.g)
        del nxt[v]
        for w in self.nbrs[v]:
            nxt[w] = self.rule.budget(len(self.nbrs[w]) - 1)
        return check_reduction_step(self.nbrs, v, self.g, nxt, q)

    def remove(self, v: int) -> None:
        del self.g[v]
        for w in self.nbrs.pop(v):
            self.nbrs[w].discard(v)
            self.g[w] = self.rule.budget(len(self.nbrs[w]))


def certify(
    g: Graph,
    rule: BudgetRule,
    q: int,
    order: Sequence[int] | str = "auto",
    candidates: Callable[[_State], Iterable[int]] | None = None,
) -> ReductionCertificate:
    """Walk a removal order, re-deriving budgets from ``rule`` on each residual graph.

    ``order="auto"`` takes, at each stage, the lowest-index vertex whose step
    passes (no backtracking). Raises :class:`CertificationError` on failure.
    """
    state = _State(g, rule)
    initial = dict(state.g)
    steps: list[StepReport] = []
    if order != "auto":
        order = list(order)
        if sorted(order) != list(range(g.n)):
            raise ValueError("order must be a permutation of the vertices")
        for v in order:
            rep = state.try_step(v, q)
            if not rep.passed:
                raise CertificationError(f"step removing {v} has lhs {rep.lhs} >= 1", rep, steps)
            steps.append(rep)
            state.remove(v)
    else:
        while state.nbrs:
            pool = candidates(state) if candidates else sorted(state.nbrs)
            best: StepReport | None = None
            for v in pool:
                rep = state.try_step(v, q)
                if rep.passed:
                    best = rep
                    break
                if best is None or rep.lhs < best.lhs:
                    best = rep
            if best is None or not best.passed:
                raise CertificationError(
                    f"no removable vertex passes with {len(state.nbrs)} vertices left", best, steps
                )
            steps.append(best)
            state.remove(best.v)
    return ReductionCertificate(q, initial, tuple(steps), rule.describe())


def theorem_bound(d: int) -> int:
    return (2 * d) ** d


def certify_theorem_bound(g: Graph) -> ReductionCertificate:
    """Certify ``HG(G) <= (2d)^d`` at the strong degeneracy ``d`` of ``g``."""
    d, elim = strong_degeneracy(g)
    q = theorem_bound(d) + 1
    try:
        return certify(g, TheoremRule(d), q, elim.vertices)
    except CertificationError as exc:
        raise RuntimeError(f"theorem schedule failed at d={d}; this is a bug: {exc}") from exc


def certify_outerplanar(g: Graph) -> ReductionCertificate:
    """Certify ``HG(G) <= 40`` for a maximal outerplanar graph.

    While more than three vertices remain, only ears (degree-2 vertices) are
    removed, so every residual graph stays maximal outerplanar.
    """
    rec = is_maximal_outerplanar(g)
    if not rec:
        raise ValueError(f"not maximal outerplanar: {rec.reason}")

    def ears(state: _State) -> list[int]:
        if len(state.nbrs) <= 3:
            return sorted(state.nbrs)
        return sorted(v for v, s in state.nbrs.items() if len(s) == 2)

    return certify(g, OuterplanarRule(), 41, "auto", candidates=ears)


def rule_from_name(name: str, d: int | None = None) -> BudgetRule:
    if name == "outerplanar":
        return OuterplanarRule()
    if name == "theorem":
        if d is None:
            raise ValueError("theorem rule needs d")
        return TheoremRule(d)
    if name.startswith("constant:"):
        return ConstantRule(int(name.split(":", 1)[1]))
    if name.startswith("file:"):
        with open(name.split(":", 1)[1], encoding="utf-8") as fh:
            return DegreeTableRule.from_json(json.load(fh))
    raise ValueError(f"unknown schedule {name!r}")
