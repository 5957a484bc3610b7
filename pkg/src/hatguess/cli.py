"""Command-line interface: ``hatguess <command> ...``.

Exit status 0 on success, 1 when a computation fails (a certificate chain
breaks, a strategy loses, a graph is not stuck), 2 on usage or input errors.
Every command takes ``--json`` for machine-readable output.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import certifier, density, elimination, experiment, game, graph
from .checker import check_certificate

RANDOM_FAMILIES = {"random-tree", "maximal-outerplanar", "gnp"}


class UsageError(Exception):
    pass


class Failure(Exception):
    """Computation finished with a negative verdict; carries the report."""

    def __init__(self, text: str, payload: dict):
        super().__init__(text)
        self.payload = payload


def _read_graph(path: str) -> graph.Graph:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return graph.parse_edge_list(text)
    except graph.ParseError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from exc


def _frac(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator}


def _budgets(arg: str | None, n: int):
    """``None`` -> all ones; an integer -> constant; otherwise a JSON file (list or {vertex: budget})."""
    if arg is None:
        return None
    if arg.isdigit():
        return int(arg)
    data = _read_json(arg)
    if isinstance(data, dict):
        data = {int(k): int(v) for k, v in data.items()}
        if set(data) != set(range(n)):
            raise UsageError("budget file must give every vertex a budget")
    return data


# ---------------------------------------------------------------------------
# commands; each returns (text, payload)

def cmd_gen(a):
    if a.family not in graph.FAMILIES:
        raise UsageError(f"unknown family {a.family!r}; choose from {', '.join(graph.FAMILIES)}")
    if a.family == "one-subdivision-of":
        if not a.params or a.params[0] not in graph.FAMILIES:
            raise UsageError("one-subdivision-of needs a base family, e.g. 'one-subdivision-of complete 4'")
        base_fam, rest = a.params[0], tuple(a.params[1:])
        if base_fam in RANDOM_FAMILIES and a.seed is None:
            raise UsageError(f"{base_fam} is random; --seed is required")
        spec = graph.FamilySpec(a.family, (), a.seed or 0, graph.FamilySpec(base_fam, rest, a.seed or 0))
    else:
        if a.family in RANDOM_FAMILIES and a.seed is None:
            raise UsageError(f"{a.family} is random; --seed is required")
        spec = graph.FamilySpec(a.family, tuple(a.params), a.seed or 0)
    try:
        g = graph.generate(spec)
    except graph.GraphError as exc:
        raise UsageError(str(exc)) from exc
    text = graph.format_edge_list(g, comment=json.dumps(spec.to_json()))
    if a.out:
        with open(a.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    payload = {"spec": spec.to_json(), "n": g.n, "edges": [list(e) for e in g.edges()]}
    return (f"wrote {a.out} (n={g.n}, m={g.m})" if a.out else text.rstrip("\n")), payload


def cmd_strongdeg(a):
    g = _read_graph(a.inp)
    d, order = elimination.strong_degeneracy(g)
    text = f"strong degeneracy: {d}\norder: {' '.join(map(str, order.vertices))}"
    return text, {"strong_degeneracy": d, "order": order.to_json()}


def cmd_degeneracy(a):
    g = _read_graph(a.inp)
    k = elimination.degeneracy(g)
    return f"degeneracy: {k}", {"degeneracy": k}


def cmd_certify(a):
    g = _read_graph(a.inp)
    d, elim = elimination.strong_degeneracy(g)
    try:
        if a.schedule == "outerplanar" and a.q is None and a.order == "auto":
            cert = certifier.certify_outerplanar(g)
        else:
            rule = certifier.rule_from_name(a.schedule, d)
            q = a.q if a.q is not None else (certifier.theorem_bound(d) + 1 if a.schedule == "theorem" else 41)
            if a.order == "auto":
                order = elim.vertices if a.schedule == "theorem" else "auto"
            else:
                order = _read_json(a.order)
            cert = certifier.certify(g, rule, q, order)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(str(exc)) from exc
    except certifier.CertificationError as exc:
        payload = {"certified": False, "message": str(exc)}
        if exc.step is not None:
            payload["failing_step"] = exc.step.to_json()
        raise Failure(f"certification failed: {exc}", payload) from exc
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    bound = check_certificate(g.n, g.edges(), cert.to_json())
    if a.out:
        with open(a.out, "w", encoding="utf-8") as fh:
            fh.write(cert.dumps(indent=1))
    text = f"bound: {bound}\nsteps: {len(cert.steps)}, worst lhs: {cert.worst}"
    return text, {"certified": True, **cert.to_json()}


def cmd_exact(a):
    g = _read_graph(a.inp)
    budgets = _budgets(a.budgets, g.n)
    guard = None if a.no_guard else game.DEFAULT_GUARD
    kw = dict(threads=a.threads, guard=guard, time_limit=a.time_limit, backend=a.backend)
    try:
        if a.q is not None:
            out = game.decide_winnable(g, budgets, a.q, **kw)
            text = f"q = {a.q}: {'winnable' if out.winnable else 'unwinnable'} ({out.reason}, {out.nodes} nodes)"
            return text, {"q": a.q, **out.to_json()}
        val = game.hat_guessing_number(g, budgets, a.qmax, **kw)
    except (game.ScaleError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    except TimeoutError as exc:
        raise Failure(str(exc), {"timeout": True}) from exc
    payload = {
        "hg": val.value,
        "at_least": val.at_least,
        "outcomes": {str(q): o.to_json() for q, o in val.outcomes.items()},
    }
    return f"HG = {val}", payload


def cmd_verify(a):
    g = _read_graph(a.inp)
    table = game.StrategyTable.from_json(_read_json(a.strategy))
    budgets = _budgets(a.budgets, g.n)
    try:
        mean = game.verify_strategy(g, budgets, table.q, table)
    except (game.TableError, ValueError) as exc:
        raise UsageError(f"malformed strategy: {exc}") from exc
    if mean is not None:
        raise Failure(f"mean colouring: {' '.join(map(str, mean))}", {"winning": False, "mean_colouring": list(mean)})
    return "winning", {"winning": True}


def cmd_density(a):
    g = _read_graph(a.inp)
    try:
        if a.depth == "0":
            res = density.max_subgraph_density(g)
        elif a.depth == "half":
            res = density.topgrad_half(g)
        else:
            res = density.grad_one(g)
    except density.ScaleError as exc:
        raise UsageError(str(exc)) from exc
    if res.model is not None:
        wit = res.model.to_json()
    else:
        wit = {"vertices": list(res.vertices)}
    return f"density (depth {a.depth}): {res.value}\nwitness: {json.dumps(wit)}", res.to_json()


def cmd_bounds(a):
    if a.inp:
        g = _read_graph(a.inp)
        common, _ = graph.max_common_neighbors(g)
        s = a.s if a.s is not None else max(2, common + 1)
        if common >= s:
            raise UsageError(f"graph contains K_2,{common}; it is not K_2,{s}-free")
        try:
            t0 = density.max_subgraph_density(g).value
            th = density.topgrad_half(g).value if a.prop == "31" else None
            g1 = density.grad_one(g).value if a.prop == "32" else None
        except density.ScaleError as exc:
            raise UsageError(str(exc)) from exc
    else:
        if a.s is None:
            raise UsageError("--s is required without --in")
        s = a.s
        t0, th, g1 = a.t0, a.th, a.g1
    try:
        if a.prop == "31":
            if t0 is None or th is None:
                raise UsageError("--prop 31 needs --t0 and --th (or --in)")
            d = density.strongdeg_bound_from_topgrads(s, t0, th)
            inputs = {"s": s, "t0": _frac(Fraction(t0)), "th": _frac(Fraction(th))}
        else:
            if g1 is None:
                raise UsageError("--prop 32 needs --g1 (or --in)")
            d = density.strongdeg_bound_from_grad1(s, g1)
            inputs = {"s": s, "g1": _frac(Fraction(g1))}
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return f"strong degeneracy <= {d}; HG <= {density.hat_bound(d)}", {"prop": a.prop, **inputs, "d": d, "hg_bound": density.hat_bound(d)}


def cmd_obstruction(a):
    g = _read_graph(a.inp)
    d = a.d
    if d is None:
        sd, _ = elimination.strong_degeneracy(g)
        if sd == 1:
            raise Failure("graph is strongly 1-degenerate; no obstruction at d >= 1", {"stuck": False})
        d = sd - 1
    try:
        w = elimination.extract_obstruction(g, d)
    except ValueError as exc:
        raise Failure(str(exc), {"stuck": False, "d": d}) from exc
    problems = elimination.validate_witness(g, w)
    if problems:
        raise Failure("witness failed validation: " + "; ".join(problems), {"witness": w.to_json()})
    if w.variant == "bipartite":
        text = f"K_2,{len(w.common)} at d={d}: centres {w.centers}, common {list(w.common)}"
    else:
        text = f"1-subdivision witness at d={d}: F has {w.f.n} vertices, min degree {w.delta}"
    return text, w.to_json()


def cmd_experiment(a):
    try:
        C = Fraction(a.C)
        rep = experiment.random_experiment(a.n, C, a.trials, a.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if a.csv:
        with open(a.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(rep.to_csv())
    return rep.table(), rep.to_json()


# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of a table")
    p = _Parser(prog="hatguess", description="Hat guessing numbers, strong degeneracy and certificates.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_input(name, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("--in", dest="inp", required=True, help="edge-list file")
        return sp

    sp = sub.add_parser("gen", parents=[common], help="generate a graph family as an edge list")
    sp.add_argument("family")
    sp.add_argument("params", nargs="*")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_gen)

    with_input("strongdeg", "strong degeneracy and an elimination order").set_defaults(func=cmd_strongdeg)
    with_input("degeneracy", "classical degeneracy").set_defaults(func=cmd_degeneracy)

    sp = with_input("certify", "reduction certificate for an upper bound on HG")
    sp.add_argument("--schedule", default="theorem", help="theorem | outerplanar | constant:K | file:PATH")
    sp.add_argument("--q", type=int)
    sp.add_argument("--order", default="auto", help="auto or a JSON file holding a vertex list")
    sp.add_argument("--out", help="write the certificate JSON here")
    sp.set_defaults(func=cmd_certify)

    sp = with_input("exact", "exact hat guessing number of a tiny graph")
    sp.add_argument("--qmax", type=int, default=4)
    sp.add_argument("--q", type=int, help="decide a single q instead")
    sp.add_argument("--budgets", help="constant K or a JSON file (list or {vertex: K})")
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--time-limit", type=float)
    sp.add_argument("--no-guard", action="store_true", help="lift the instance-size guard")
    sp.add_argument("--backend", choices=["auto", "native", "sat"], default="auto", help="cube solver (sat needs python-sat)")
    sp.set_defaults(func=cmd_exact)

    sp = with_input("verify-strategy", "check a strategy table against every colouring")
    sp.add_argument("--strategy", required=True)
    sp.add_argument("--budgets")
    sp.set_defaults(func=cmd_verify)

    sp = with_input("density", "exact (top-)grad densities")
    sp.add_argument("--depth", choices=["0", "half", "1"], default="0")
    sp.add_argument("--threads", type=int, default=1, help="accepted for symmetry; enumeration is sequential")
    sp.set_defaults(func=cmd_density)

    sp = sub.add_parser("bounds", parents=[common], help="strong-degeneracy bounds from densities")
    sp.add_argument("--prop", choices=["31", "32"], required=True)
    sp.add_argument("--in", dest="inp", help="compute s and densities from this graph")
    sp.add_argument("--s", type=int)
    sp.add_argument("--t0", type=Fraction)
    sp.add_argument("--th", type=Fraction)
    sp.add_argument("--g1", type=Fraction)
    sp.set_defaults(func=cmd_bounds)

    sp = with_input("obstruction", "witness that a graph is not strongly d-degenerate")
    sp.add_argument("--d", type=int, help="default: strong degeneracy minus one")
    sp.set_defaults(func=cmd_obstruction)

    sp = sub.add_parser("experiment-random", parents=[common], help="seeded G(n, C/n) study")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--C", required=True, help="rational, e.g. 2 or 3/2")
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--csv", help="also write the rows as CSV")
    sp.set_defaults(func=cmd_experiment)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text, payload = args.func(args)
    except UsageError as exc:
        print(f"hatguess {args.command}: {exc}", file=sys.stderr)
        return 2
    except Failure as exc:
        if args.json:
            print(json.dumps(exc.payload))
        else:
            print(str(exc))
        return 1
    print(json.dumps(payload) if args.json else text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
