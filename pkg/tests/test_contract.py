import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from helpers import random_diagram
from zxpqc.contract import exact_contract
from zxpqc.diagram import X, Z, Diagram
from zxpqc.errors import NotClosed, UnsupportedPhase
from zxpqc.oracle import contract_numeric
from zxpqc.scalar import ScalarExpr, LinearPhase


def value(d):
    return complex(exact_contract(d).eval({}))


def test_z_pi_zero_legs_vanishes():
    d = Diagram()
    d.add_vertex(Z, LinearPhase(1))
    assert exact_contract(d).is_zero


def test_z_zero_zero_legs_is_two():
    d = Diagram()
    d.add_vertex(Z)
    assert exact_contract(d) == ScalarExpr.const(2)


def test_z_x_double_edge_is_two():
    d = Diagram()
    z, x = d.add_vertex(Z), d.add_vertex(X)
    d.add_edge(z, x, 2)
    assert exact_contract(d) == ScalarExpr.const(2)


def test_scalar_is_included():
    d = Diagram()
    d.add_vertex(Z)
    d.scalar = ScalarExpr.sqrt2(-1) * ScalarExpr.const(0, 1)
    assert abs(value(d) - 2j / 2 ** 0.5) < 1e-15


def test_quarter_turn_states_give_sqrt2_results():
    # <+|S|+> style pairing: Z(pi/2) state against X(0) effect
    d = Diagram()
    z, x = d.add_vertex(Z, LinearPhase(Fraction(1, 2))), d.add_vertex(X)
    d.add_edge(z, x)
    assert abs(value(d) - contract_numeric(d)) < 1e-12
    assert exact_contract(d).exact_constant() is not None


def test_rejects_non_clifford_phase():
    d = Diagram()
    d.add_vertex(Z, LinearPhase(Fraction(1, 4)))
    with pytest.raises(UnsupportedPhase):
        exact_contract(d)


def test_rejects_parameter():
    d = Diagram()
    d.add_vertex(X, LinearPhase.param("gamma"))
    with pytest.raises(UnsupportedPhase):
        exact_contract(d)


def test_rejects_open_diagram():
    d = Diagram()
    s = d.add_vertex(Z)
    o = d.add_output()
    d.add_edge(s, o)
    with pytest.raises(NotClosed):
        exact_contract(d)


def test_large_sparse_diagram_is_fast():
    # a 200-spider ring would be hopeless for dense tensors of the full network
    d = Diagram()
    vs = [d.add_vertex(Z if i % 2 else X, LinearPhase(Fraction(i % 4, 2))) for i in range(200)]
    for a, b in zip(vs, vs[1:] + vs[:1]):
        d.add_edge(a, b)
    assert abs(value(d) - contract_numeric(d)) < 1e-9


@settings(max_examples=500, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_agrees_with_numeric_oracle(seed):
    rng = random.Random(seed)
    d = random_diagram(rng, rng.randint(1, 7), rng.randint(0, 10), 0, 0, clifford_only=True)
    d.scalar = ScalarExpr.sqrt2(rng.randrange(-2, 3)) * ScalarExpr.const(*rng.choice([(1, 0), (0, 1), (-1, 1)]))
    want = contract_numeric(d)
    got = value(d)
    assert abs(got - want) <= 1e-9 * max(1.0, abs(want))
