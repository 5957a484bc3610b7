import json
from fractions import Fraction

import pytest

from hatguess import graph as G
from hatguess.certifier import (
    CertificationError,
    ConstantRule,
    DegreeTableRule,
    OuterplanarRule,
    TheoremRule,
    certify,
    certify_outerplanar,
    certify_theorem_bound,
    check_reduction_step,
    rule_from_name,
    step_lhs,
    theorem_bound,
)
from hatguess.checker import check_certificate
from hatguess.elimination import strong_degeneracy
from hatguess.game import decide_winnable

EAR_WORST = Fraction(4, 41) + Fraction(2, 5) + Fraction(1, 2)


def test_step_lhs_exact():
    assert step_lhs(4, 41, [(2, 4), (1, 1)]) == EAR_WORST
    assert EAR_WORST == Fraction(409, 410)


def test_single_step_validation():
    nbrs = {0: {1}, 1: {0}}
    rep = check_reduction_step(nbrs, 0, {0: 2, 1: 2}, {1: 4}, 5)
    assert rep.lhs == Fraction(2, 5) + Fraction(2, 5) and rep.passed
    with pytest.raises(ValueError):
        check_reduction_step(nbrs, 0, {0: 2}, {1: 4}, 5)
    with pytest.raises(ValueError):
        check_reduction_step({0: {1}, 1: {0}, 2: set()}, 0, {0: 1, 1: 1, 2: 1}, {1: 1, 2: 3}, 5)


def test_rules():
    assert [TheoremRule(2).budget(k) for k in range(4)] == [16, 4, 1, 1]
    assert [OuterplanarRule().budget(k) for k in range(6)] == [24, 12, 4, 2, 1, 1]
    assert DegreeTableRule.from_json({"by_degree": {"1": 3}, "default": 2}).budget(1) == 3
    assert isinstance(rule_from_name("constant:3"), ConstantRule)
    with pytest.raises(ValueError):
        rule_from_name("theorem")
    with pytest.raises(ValueError):
        rule_from_name("bogus")


def test_rule_from_file(tmp_path):
    p = tmp_path / "t.json"
    p.write_text(json.dumps({"by_degree": {"2": 4}, "default": 1}))
    assert rule_from_name(f"file:{p}").budget(2) == 4


@pytest.mark.parametrize("name", ["P5", "C7", "K5", "K2,4", "fan7", "petersen", "sub(K4)", "gnp10/s3", "mop9/s3"])
def test_theorem_certificates(corpus, name):
    g = dict(corpus)[name]
    d, _ = strong_degeneracy(g)
    cert = certify_theorem_bound(g)
    assert cert.bound == theorem_bound(d)
    assert all(s.lhs < 1 for s in cert.steps)
    assert check_certificate(g.n, g.edges(), cert.to_json()) == cert.bound
    assert json.loads(cert.dumps()) == cert.to_json()


def test_theorem_certificate_whole_corpus(corpus):
    for _, g in corpus:
        cert = certify_theorem_bound(g)
        check_certificate(g.n, g.edges(), cert.to_json())


def test_outerplanar_certificates():
    for seed in range(10):
        g = G.maximal_outerplanar(10 + 5 * seed, G.SeededRng(seed))
        cert = certify_outerplanar(g)
        assert cert.bound == 40
        assert cert.worst <= EAR_WORST
        assert check_certificate(g.n, g.edges(), cert.to_json()) == 40


def test_outerplanar_rejects_other_graphs():
    with pytest.raises(ValueError):
        certify_outerplanar(G.cycle(5))


def test_failing_chain_reports_step():
    # leaf first: the centre then holds budget 1 while two leaves still see it
    g = G.star(3)
    with pytest.raises(CertificationError) as info:
        certify(g, ConstantRule(1), 2, [1, 2, 3, 0])
    assert info.value.step is not None and not info.value.step.passed


def test_auto_order_fails_when_nothing_passes():
    with pytest.raises(CertificationError) as info:
        certify(G.complete(4), ConstantRule(1), 4)
    assert info.value.step.lhs >= 1


def test_order_must_be_permutation():
    with pytest.raises(ValueError):
        certify(G.path(3), ConstantRule(1), 3, [0, 1])


@pytest.mark.parametrize(
    "g", [G.path(3), G.path(4), G.cycle(4), G.star(3), G.complete(3), G.Graph(3, [(0, 1)])]
)
@pytest.mark.parametrize("rule", [ConstantRule(1), ConstantRule(2), TheoremRule(1), TheoremRule(2)])
def test_certified_games_are_lost(g, rule):
    """Whenever a chain certifies ``q``, the budgeted game with ``q`` colours is unwinnable."""
    for q in range(2, 7):
        try:
            cert = certify(g, rule, q)
        except CertificationError:
            continue
        budgets = [cert.budgets[v] for v in range(g.n)]
        assert not decide_winnable(g, budgets, q, guard=None).winnable
