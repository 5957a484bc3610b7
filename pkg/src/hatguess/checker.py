"""Stand-alone re-validation of reduction certificates.

Reads only the certificate JSON and the graph's edges. It never consults a
budget rule: the certificate's own ``budgets`` are the claim, and each step's
budgets must match what the previous steps left behind.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable


class CertificateInvalid(ValueError):
    pass


def _int_keys(d: dict) -> dict[int, int]:
    return {int(k): int(v) for k, v in d.items()}


def check_certificate(n: int, edges: Iterable[tuple[int, int]], cert: dict) -> int:
    """Validate ``cert`` for the graph ``(n, edges)``; return the certified bound.

    Raises :class:`CertificateInvalid` naming the first problem.
    """
    nbrs: dict[int, set[int]] = {v: set() for v in range(n)}
    for u, v in edges:
        nbrs[u].add(v)
        nbrs[v].add(u)

    q = int(cert["q"])
    if q < 1:
        raise CertificateInvalid("q must be positive")
    if int(cert["bound"]) != q - 1:
        raise CertificateInvalid("bound must equal q - 1")
    budget = _int_keys(cert["budgets"])
    if set(budget) != set(nbrs):
        raise CertificateInvalid("initial budgets must cover exactly the vertices")
    if any(b < 1 for b in budget.values()):
        raise CertificateInvalid("budgets must be positive")

    for i, step in enumerate(cert["steps"]):
        v = int(step["v"])
        if v not in nbrs:
            raise CertificateInvalid(f"step {i}: vertex {v} already removed or unknown")
        listed = [int(w) for w in step["neighbors"]]
        if sorted(listed) != sorted(nbrs[v]) or len(set(listed)) != len(listed):
            raise CertificateInvalid(f"step {i}: neighbour list of {v} is wrong")
        g = _int_keys(step["g"])
        g_next = _int_keys(step["g_next"])
        if set(g) != {v, *listed} or set(g_next) != set(listed):
            raise CertificateInvalid(f"step {i}: budget maps have the wrong domain")
        for x, b in g.items():
            if budget[x] != b:
                raise CertificateInvalid(f"step {i}: g({x}) = {b} but the chain has {budget[x]}")
        if any(b < 1 for b in g_next.values()):
            raise CertificateInvalid(f"step {i}: next budgets must be positive")

        lhs = Fraction(g[v], q)
        for w in listed:
            lhs += Fraction(g[w], g_next[w] + 1)
        claimed = Fraction(int(step["lhs"]["num"]), int(step["lhs"]["den"]))
        if claimed != lhs:
            raise CertificateInvalid(f"step {i}: stated lhs {claimed} but it is {lhs}")
        if not lhs < 1:
            raise CertificateInvalid(f"step {i}: lhs {lhs} is not below 1")

        for w in listed:
            nbrs[w].discard(v)
            budget[w] = g_next[w]
        del nbrs[v]
        del budget[v]

    if nbrs:
        raise CertificateInvalid(f"{len(nbrs)} vertices never removed")
    return q - 1
