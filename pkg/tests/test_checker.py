import copy

import pytest

from hatguess import graph as G
from hatguess.certifier import certify_outerplanar, certify_theorem_bound
from hatguess.checker import CertificateInvalid, check_certificate


@pytest.fixture
def cert_and_graph():
    g = G.maximal_outerplanar(12, G.SeededRng(5))
    return certify_outerplanar(g).to_json(), g


def test_valid(cert_and_graph):
    cert, g = cert_and_graph
    assert check_certificate(g.n, g.edges(), cert) == 40


def _mutations(cert):
    c = copy.deepcopy(cert)
    c["bound"] = 41
    yield "bound", c
    c = copy.deepcopy(cert)
    c["steps"][0]["lhs"]["num"] = str(int(c["steps"][0]["lhs"]["num"]) - 1)
    yield "lhs", c
    c = copy.deepcopy(cert)
    c["steps"].pop()
    yield "unfinished", c
    c = copy.deepcopy(cert)
    c["steps"][1], c["steps"][2] = c["steps"][2], c["steps"][1]
    yield "order", c
    c = copy.deepcopy(cert)
    first = c["steps"][0]
    w = str(first["neighbors"][0])
    first["g_next"][w] = 1000
    yield "inflated g_next", c
    c = copy.deepcopy(cert)
    c["budgets"]["0"] = 0
    yield "zero budget", c
    c = copy.deepcopy(cert)
    c["steps"][0]["neighbors"] = c["steps"][0]["neighbors"][:1]
    yield "neighbours", c
    c = copy.deepcopy(cert)
    c["q"] = 1000
    c["bound"] = 999
    yield "q changed", c


def test_tampering_detected(cert_and_graph):
    cert, g = cert_and_graph
    for label, bad in _mutations(cert):
        with pytest.raises(CertificateInvalid):
            check_certificate(g.n, g.edges(), bad)


def test_wrong_graph_detected(cert_and_graph):
    cert, g = cert_and_graph
    other = G.maximal_outerplanar(12, G.SeededRng(6))
    with pytest.raises(CertificateInvalid):
        check_certificate(other.n, other.edges(), cert)


def test_step_at_one_rejected():
    # a single step with lhs exactly 1
    cert = {
        "q": 2, "bound": 1, "budgets": {"0": 2},
        "steps": [{"v": 0, "neighbors": [], "g": {"0": 2}, "g_next": {}, "lhs": {"num": "1", "den": "1"}}],
    }
    with pytest.raises(CertificateInvalid, match="not below 1"):
        check_certificate(1, [], cert)


def test_theorem_certificate_checks():
    g = G.one_subdivision(G.complete(4))
    cert = certify_theorem_bound(g)
    assert check_certificate(g.n, list(g.edges()), cert.to_json()) == cert.bound
