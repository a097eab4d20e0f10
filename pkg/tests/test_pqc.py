import math
import os
from fractions import Fraction

import numpy as np
import pytest

from zxpqc.errors import EdgeNotInGraph, GraphFormatError, SpecMismatch, SupportOutOfRange
from zxpqc.oracle import ansatz_state, contract_numeric, rx, zz_expectation
from zxpqc.pqc import (ObservableTerm, build_state, cost_from_zz, exclusive_neighborhoods,
                       expectation_diagram, grid_max, lightcone_reduce, maxcut_hamiltonian,
                       observable_diagram, qaoa1_closed_form, ry_closed_form)
from zxpqc.problem import (QAOA, HwEffSU2, ProblemGraph, RyProduct, complete, example_graph,
                           load_graph, parse_graph, path, random_graph, ring)
from zxpqc.scalar import ONE, LinearPhase, ScalarExpr, equiv_numeric, random_bindings

DATA = os.path.join(os.path.dirname(__file__), "data")
EDGE = ProblemGraph.from_edges(2, [(0, 1)])


def cs(name):
    p = LinearPhase.param(name)
    return ScalarExpr.cos(p), ScalarExpr.sin(p)


cg, sg = cs("gamma")
cb, sb = cs("beta")


def state_vector(d, b):
    return np.asarray(contract_numeric(d, b)).reshape(-1)


# -- graphs ----------------------------------------------------------------------------

def test_graph_file_format():
    g = parse_graph("# comment\n3 2\n0 1\n1 2\n")
    assert g.n == 3 and g.edges == ((0, 1), (1, 2))
    assert load_graph(os.path.join(DATA, "fig3.txt")) == example_graph()
    assert load_graph(os.path.join(DATA, "ring8.txt")) == ring(8)


@pytest.mark.parametrize("text", ["", "2\n", "2 1\n0 0\n", "2 2\n0 1\n0 1\n", "2 1\n0 5\n", "2 2\n0 1\n",
                                  "x y\n"])
def test_graph_file_errors(text):
    with pytest.raises(GraphFormatError):
        parse_graph(text)


def test_edge_not_in_graph():
    with pytest.raises(EdgeNotInGraph):
        exclusive_neighborhoods(ring(4), (0, 2))


# -- hamiltonian -------------------------------------------------------------------------

def test_hamiltonian_triangle():
    const, terms = maxcut_hamiltonian(complete(3))
    assert const == ScalarExpr.const(Fraction(3, 2))
    assert len(terms) == 3
    assert all(t.weight == ScalarExpr.const(Fraction(-1, 2)) for t in terms)


def test_hamiltonian_edgeless_and_example():
    const, terms = maxcut_hamiltonian(ProblemGraph.from_edges(3, []))
    assert const.is_zero and terms == []
    const, terms = maxcut_hamiltonian(example_graph())
    assert const == ScalarExpr.const(2) and len(terms) == 4


def test_observable_support_checked():
    with pytest.raises(SupportOutOfRange):
        observable_diagram(2, (0, 2))
    with pytest.raises(SupportOutOfRange):
        ObservableTerm(ONE, (1, 1))


# -- states ---------------------------------------------------------------------------------

def test_qaoa_single_edge_state():
    b = {"gamma": 0.63, "beta": -1.1}
    got = state_vector(build_state(EDGE, QAOA(1)), b)
    plus = np.full(4, 0.5)
    cost = np.array([0, 1, 1, 0])
    mixer = np.kron(rx(-b["beta"]), rx(-b["beta"]))
    want = mixer @ (np.exp(-1j * b["gamma"] * cost) * plus)
    assert np.allclose(got, want, atol=1e-12)


def test_ry_at_zero_is_all_zeros():
    got = state_vector(build_state(ring(3), RyProduct(3)), {f"alpha_{i}": 0.0 for i in range(3)})
    want = np.zeros(8)
    want[0] = 1
    assert np.allclose(got, want, atol=1e-12)


def test_hweff_state_normalized():
    b = random_bindings(HwEffSU2().params(), 1, seed=3)[0]
    got = state_vector(build_state(complete(3), HwEffSU2()), b)
    assert np.isclose(np.linalg.norm(got), 1)
    assert np.allclose(got, ansatz_state(complete(3), HwEffSU2(), b), atol=1e-12)


@pytest.mark.parametrize("g,a", [
    (example_graph(), QAOA(1)), (ring(5), QAOA(2)), (path(4), RyProduct(4)), (complete(3), HwEffSU2()),
])
def test_states_match_simulator(g, a):
    for b in random_bindings(a.params(), 4, seed=1):
        assert np.allclose(state_vector(build_state(g, a), b), ansatz_state(g, a, b), atol=1e-10)


def test_ansatz_must_fit_graph():
    with pytest.raises(SpecMismatch):
        build_state(ring(4), RyProduct(3))


# -- expectation diagrams ------------------------------------------------------------------------

def test_empty_support_is_norm():
    for g, a in [(example_graph(), QAOA(1)), (path(3), RyProduct(3))]:
        d = expectation_diagram(build_state(g, a), ObservableTerm(ONE, ()))
        for b in random_bindings(a.params(), 4):
            assert abs(contract_numeric(d, b) - 1) < 1e-10


def test_ry_pair_expectation():
    d = expectation_diagram(build_state(EDGE, RyProduct(2)), ObservableTerm(ONE, (0, 1)))
    want = ry_closed_form(0, 1)
    for b in random_bindings(["alpha_0", "alpha_1"], 8):
        assert abs(contract_numeric(d, b) - complex(want.eval(b))) < 1e-10


def test_example_graph_expectation_is_real():
    g = example_graph()
    d = expectation_diagram(build_state(g, QAOA(1)), ObservableTerm(ONE, (1, 2)))
    for b in random_bindings(["gamma", "beta"], 8):
        v = contract_numeric(d, b)
        assert abs(v.imag) < 1e-10 and -1 - 1e-10 <= v.real <= 1 + 1e-10
        assert abs(v - zz_expectation(g, QAOA(1), b, (1, 2))) < 1e-10


# -- lightcones ------------------------------------------------------------------------------------

def test_lightcone_depth_zero():
    rg, qmap = lightcone_reduce(ring(8), (3, 4), 0)
    assert sorted(qmap) == [3, 4] and rg.n == 2 and rg.m == 1


def test_lightcone_ring():
    rg, qmap = lightcone_reduce(ring(8), (3, 4), 1)
    assert sorted(qmap) == [2, 3, 4, 5]
    assert rg == path(4)


def test_lightcone_example_graph_keeps_everything():
    rg, qmap = lightcone_reduce(example_graph(), (1, 2), 1)
    assert sorted(qmap) == [0, 1, 2, 3]
    assert rg.m == 4


def test_lightcone_exact_on_random_graphs():
    rng = np.random.default_rng(8)
    for _ in range(6):
        g = random_graph(7, 0.35, rng)
        for p in (1, 2):
            a = QAOA(p)
            u, v = g.edges[0]
            rg, qmap = lightcone_reduce(g, (u, v), p)
            for b in random_bindings(a.params(), 3):
                full = zz_expectation(g, a, b, (u, v))
                red = zz_expectation(rg, a, b, (qmap[u], qmap[v]))
                assert abs(full - red) < 1e-9


# -- closed forms ------------------------------------------------------------------------------------

def test_exclusive_neighborhoods():
    assert exclusive_neighborhoods(ring(8), (3, 4)) == (1, 1, 0)
    assert exclusive_neighborhoods(example_graph(), (1, 2)) == (1, 0, 1)
    assert exclusive_neighborhoods(complete(3), (0, 1)) == (0, 0, 1)
    assert exclusive_neighborhoods(EDGE, (0, 1)) == (0, 0, 0)


def test_closed_form_instances():
    two = ScalarExpr.const(2)
    assert equiv_numeric(qaoa1_closed_form(ring(8), (3, 4)), two * cb * sb * sg * cg)
    assert equiv_numeric(qaoa1_closed_form(EDGE, (0, 1)), two * cb * sb * sg)
    assert equiv_numeric(qaoa1_closed_form(complete(3), (0, 1)), two * cb * sb * sg * cg + sb * sb * sg * sg)


@pytest.mark.parametrize("g", [ring(6), EDGE, complete(3), complete(4), example_graph(), path(5)])
def test_closed_form_matches_simulator(g):
    for u, v in g.edges:
        f = qaoa1_closed_form(g, (u, v))
        for b in random_bindings(["gamma", "beta"], 6):
            assert abs(complex(f.eval(b)) - zz_expectation(g, QAOA(1), b, (u, v))) < 1e-10


def test_cost_and_grid():
    assert cost_from_zz(ring(4), [1, 1, 1, 1]) == 0
    assert cost_from_zz(ring(4), [-1, -1, -1, -1]) == 4
    val, x, y = grid_max(lambda a, b: -(a - 1) ** 2 - (b - 2) ** 2, resolution=100)
    assert val <= 0 and abs(x - 1) < 0.05 and abs(y - 2) < 0.05
    assert math.isclose(grid_max(lambda a, b: np.ones_like(a), resolution=4)[0], 1)
