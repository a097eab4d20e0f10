from fractions import Fraction

import pytest

from zxpqc.diagram import X, Z, Diagram, identity
from zxpqc.errors import NotClosed, SchemaViolation, TermBudgetExceeded, UnsupportedPhase
from zxpqc.evaluator import (Strategy, cost_expectation, edge_diagram, edge_expectation, evaluate_expectation,
                             evaluate_report)
from zxpqc.hweff import hweff_zz_expectation
from zxpqc.oracle import statevector_expectation, zz_expectation
from zxpqc.pqc import qaoa1_closed_form, ry_closed_form
from zxpqc.problem import QAOA, HwEffSU2, ProblemGraph, RyProduct, complete, example_graph, ring
from zxpqc.rewrite import Rule
from zxpqc.scalar import LinearPhase, ScalarExpr, equiv_numeric, random_bindings

EDGE = ProblemGraph.from_edges(2, [(0, 1)])


def cs(name):
    p = LinearPhase.param(name)
    return ScalarExpr.cos(p), ScalarExpr.sin(p)


cg, sg = cs("gamma")
cb, sb = cs("beta")
TWO = ScalarExpr.const(2)


def check_oracle(g, a, edge, e, trials=8):
    for b in random_bindings(a.params(), trials, seed=21):
        assert abs(complex(e.eval(b)) - zz_expectation(g, a, b, edge)) < 1e-9


# -- golden values ------------------------------------------------------------------------

def test_ry_pair():
    e = edge_expectation(EDGE, RyProduct(2), (0, 1))
    assert e == ry_closed_form(0, 1)


def test_ring_edge():
    e = edge_expectation(ring(8), QAOA(1), (0, 1), lightcone=True)
    assert e == TWO * cb * sb * sg * cg
    assert str(e) == "2*cos(beta)*cos(gamma)*sin(beta)*sin(gamma)"


def test_single_edge():
    e = edge_expectation(EDGE, QAOA(1), (0, 1))
    assert e == TWO * cb * sb * sg
    check_oracle(EDGE, QAOA(1), (0, 1), e)


def test_example_graph_all_edges():
    g = example_graph()
    for u, v in g.edges:
        e = edge_expectation(g, QAOA(1), (u, v), lightcone=True)
        assert equiv_numeric(e, qaoa1_closed_form(g, (u, v)))
        check_oracle(g, QAOA(1), (u, v), e)


def test_triangle_without_lightcone():
    g = complete(3)
    e = edge_expectation(g, QAOA(1), (0, 1))
    assert equiv_numeric(e, TWO * cb * sb * sg * cg + sb * sb * sg * sg)


def test_two_layers_small():
    g = ProblemGraph.from_edges(3, [(0, 1), (1, 2)])
    a = QAOA(2)
    e = edge_expectation(g, a, (0, 1), lightcone=True)
    check_oracle(g, a, (0, 1), e, trials=4)


def test_hweff_matches_term_sum():
    e = edge_expectation(complete(3), HwEffSU2(), (1, 2))
    assert equiv_numeric(e, hweff_zz_expectation())


def test_cost_expectation():
    g = ring(4)
    zz = [edge_expectation(g, QAOA(1), e, lightcone=True) for e in g.edges]
    c = cost_expectation(g, zz)
    for b in random_bindings(["gamma", "beta"], 6):
        assert abs(complex(c.eval(b)) - statevector_expectation(g, QAOA(1), b)) < 1e-9


def test_report_counts():
    rep = evaluate_report(edge_diagram(ring(8), QAOA(1), (0, 1), lightcone=True))
    assert rep.terms_expanded >= rep.terms_contracted >= 1


# -- strategies -----------------------------------------------------------------------------

def test_strategy_json_round_trip():
    s = Strategy(rules=[Rule.FUSE, Rule.IDENTITY], expand="all", budget=77)
    back = Strategy.loads('{"rules": ["f", "id"], "expand": "all", "budget": 77}')
    assert back.to_json() == s.to_json()
    assert Strategy.from_json({"rules": "f,pi"}).rules == [Rule.FUSE, Rule.PI]


@pytest.mark.parametrize("doc", [[], {"expand": "some"}, {"budget": 0}, {"rules": ["zz"]},
                                 {"rules": 3}, {"extra": 1}])
def test_strategy_schema_errors(doc):
    with pytest.raises(SchemaViolation):
        Strategy.from_json(doc)


@pytest.mark.parametrize("g,a,edge,lc", [
    (EDGE, RyProduct(2), (0, 1), False),
    (ring(8), QAOA(1), (0, 1), True),
    (EDGE, QAOA(1), (0, 1), False),
])
def test_strategy_robust(g, a, edge, lc):
    d = edge_diagram(g, a, edge, lightcone=lc)
    base = evaluate_expectation(d)
    compared = 0
    for s in (Strategy(expand="all"), Strategy(rules=[Rule.FUSE, Rule.IDENTITY]),
              Strategy(rules=[Rule.FUSE, Rule.IDENTITY, Rule.PI, Rule.COPY]), Strategy(rules=[], budget=256)):
        # only strategies that finish within their budget are comparable
        try:
            e = evaluate_expectation(d, s)
        except TermBudgetExceeded:
            continue
        assert equiv_numeric(e, base)
        compared += 1
    assert compared >= 3


def test_debug_mode_checks_every_expansion():
    d = edge_diagram(EDGE, QAOA(1), (0, 1))
    assert evaluate_expectation(d, Strategy(debug=True)) == TWO * cb * sb * sg


def test_budget_exceeded():
    d = edge_diagram(ring(8), QAOA(1), (0, 1), lightcone=True)
    with pytest.raises(TermBudgetExceeded):
        evaluate_expectation(d, Strategy(budget=2))


def test_open_diagram_rejected():
    with pytest.raises(NotClosed):
        evaluate_expectation(identity(1))


def test_non_clifford_constant_rejected():
    d = Diagram()
    z, x = d.add_vertex(Z, LinearPhase(Fraction(1, 4))), d.add_vertex(X)
    d.add_edge(z, x, 3)
    with pytest.raises(UnsupportedPhase):
        evaluate_expectation(d, Strategy(rules=[]))
