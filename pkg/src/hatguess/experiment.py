"""Seeded study of sparse random graphs G(n, C/n).

Each trial records whether the sample contains K_{2,3} (some pair of
vertices with three common neighbours), its strong degeneracy ``d`` and the
hat-number bound ``(2d)^d`` that follows. The expected number of K_{2,3}
copies is at most ``n^5 (C/n)^6 = C^6/n``, which by Markov's inequality also
bounds the probability that one is present.
"""
from __future__ import annotations

import csv
import io
import statistics
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .elimination import strong_degeneracy
from .graph import SeededRng, gnp, max_common_neighbors


@dataclass(frozen=True)
class TrialRow:
    seed: int
    n: int
    m: int
    max_common: int
    k23_free: bool
    strong_degeneracy: int
    hg_bound: int


@dataclass
class ExperimentReport:
    n: int
    C: Fraction
    trials: int
    seed: int
    rows: list[TrialRow] = field(default_factory=list)

    @property
    def markov_bound(self) -> Fraction:
        return self.C**6 / self.n

    @property
    def free_fraction(self) -> Fraction:
        return Fraction(sum(r.k23_free for r in self.rows), len(self.rows))

    def aggregates(self) -> dict:
        ds = [r.strong_degeneracy for r in self.rows]
        return {
            "k23_free_fraction": float(self.free_fraction),
            "markov_bound": float(self.markov_bound),
            "strong_degeneracy_min": min(ds),
            "strong_degeneracy_max": max(ds),
            "strong_degeneracy_median": statistics.median(ds),
        }

    def to_json(self) -> dict:
        return {
            "config": {"n": self.n, "C": str(self.C), "p": float(self.C / self.n), "trials": self.trials, "seed": self.seed},
            "rows": [asdict(r) for r in self.rows],
            "aggregates": self.aggregates(),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(TrialRow.__dataclass_fields__))
        w.writeheader()
        for r in self.rows:
            w.writerow(asdict(r))
        return buf.getvalue()

    def table(self) -> str:
        lines = [f"G(n={self.n}, p={self.C}/{self.n}), {self.trials} trials from seed {self.seed}"]
        lines.append(f"{'seed':>8} {'m':>7} {'common':>6} {'K23-free':>8} {'d':>3} {'(2d)^d':>10}")
        for r in self.rows:
            lines.append(
                f"{r.seed:>8} {r.m:>7} {r.max_common:>6} {str(r.k23_free):>8} {r.strong_degeneracy:>3} {r.hg_bound:>10}"
            )
        agg = self.aggregates()
        lines.append(
            f"K23-free fraction {agg['k23_free_fraction']:.3f} (Markov bound on containment {agg['markov_bound']:.4g}); "
            f"d min/median/max {agg['strong_degeneracy_min']}/{agg['strong_degeneracy_median']}/{agg['strong_degeneracy_max']}"
        )
        return "\n".join(lines)


def random_experiment(n: int, C, trials: int, seed: int) -> ExperimentReport:
    """Run ``trials`` samples of G(n, C/n); trial ``i`` uses seed ``seed + i``."""
    C = Fraction(C)
    if n < 5:
        raise ValueError("n must be at least 5")
    if trials < 1:
        raise ValueError("trials must be positive")
    if C < 0 or C > n:
        raise ValueError("need 0 <= C <= n")
    report = ExperimentReport(n, C, trials, seed)
    p = float(C / n)
    for i in range(trials):
        g = gnp(n, p, SeededRng(seed + i))
        common, _ = max_common_neighbors(g)
        d, _ = strong_degeneracy(g)
        report.rows.append(TrialRow(seed + i, n, g.m, common, common < 3, d, (2 * d) ** d))
    return report
