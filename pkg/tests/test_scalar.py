import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from zxpqc.errors import MissingBinding, SchemaViolation
from zxpqc.scalar import (ONE, ZERO, LinearPhase, ScalarExpr, add, equiv_numeric, eval_at, exp_i_phase,
                          mul, neg, random_bindings, simplify, sqrt2_pow, trig_normal_form)

G = LinearPhase.param("gamma")
B = LinearPhase.param("beta")
cg, sg = ScalarExpr.cos(G), ScalarExpr.sin(G)
cb, sb = ScalarExpr.cos(B), ScalarExpr.sin(B)


# -- linear phases -----------------------------------------------------------------

def test_phase_constant_part_reduced_mod_two_pi():
    assert LinearPhase(Fraction(5, 2)) == LinearPhase(Fraction(1, 2))
    assert LinearPhase(-1) == LinearPhase(1)


def test_phase_arithmetic():
    p = G * 2 + LinearPhase(Fraction(1, 2)) - G
    assert p.coeff("gamma") == 1
    assert p.constant_part() == LinearPhase(Fraction(1, 2))
    assert (p - p).is_zero


def test_phase_value_and_missing_binding():
    assert math.isclose((G * -2 + LinearPhase(1)).value({"gamma": 0.25}), math.pi - 0.5)
    with pytest.raises(MissingBinding):
        G.value({})


def test_phase_json_round_trip():
    p = LinearPhase(Fraction(3, 4), {"gamma": -2, "beta": Fraction(1, 2)})
    assert LinearPhase.from_json(p.to_json()) == p


# -- exp_i_phase --------------------------------------------------------------------

def test_exp_i_phase_zero_is_one():
    assert exp_i_phase(LinearPhase()) == ONE


def test_exp_i_phase_pi_is_minus_one():
    assert exp_i_phase(LinearPhase(1)) == ScalarExpr.const(-1)


def test_exp_i_phase_euler():
    e = exp_i_phase(G)
    assert e == cg + sg * ScalarExpr.const(0, 1)
    assert abs(eval_at(e, {"gamma": math.pi / 2}) - 1j) < 1e-15


def test_exp_i_quarter_turns_exact():
    for k, want in enumerate([1, 1j, -1, -1j]):
        e = exp_i_phase(LinearPhase(Fraction(k, 2)))
        assert e.is_constant and abs(complex(e.eval({})) - want) < 1e-15


def test_exp_i_eighth_turn_uses_sqrt2():
    e = exp_i_phase(LinearPhase(Fraction(1, 4)))
    a, b = e.exact_constant()
    assert not a and b.re == Fraction(1, 2) and b.im == Fraction(1, 2)


# -- arithmetic ------------------------------------------------------------------------

def test_mul_cos_cos():
    e = mul(cg, cg)
    assert len(e) == 1
    assert math.isclose(eval_at(e, {"gamma": math.pi / 3}).real, 0.25)


def test_sqrt2_pow_folds():
    assert sqrt2_pow(ONE, 2) == ScalarExpr.const(2)
    assert ScalarExpr.sqrt2(2) == ScalarExpr.const(2)
    assert ScalarExpr.sqrt2(-1) * ScalarExpr.sqrt2(1) == ONE


def test_add_merges_like_monomials():
    e = add(cg * sg, cg * sg)
    assert e == (cg * sg).scale(2)
    assert math.isclose(eval_at(e, {"gamma": math.pi / 4}).real, 1.0)


def test_neg_and_zero():
    assert add(cg, neg(cg)) == ZERO
    assert ZERO.is_zero


def test_eval_examples():
    e = (cb * sb * sg * cg).scale(2)
    assert math.isclose(eval_at(e, {"beta": math.pi / 4, "gamma": math.pi / 4}).real, 0.5)
    assert math.isclose(eval_at(ScalarExpr.cos(G * -2), {"gamma": 0}).real, 1.0)
    assert abs(eval_at(exp_i_phase(G), {"gamma": math.pi}) - (-1)) < 1e-15


def test_eval_missing_binding():
    with pytest.raises(MissingBinding):
        eval_at(cg * sb, {"gamma": 0.1})


def test_conjugate():
    e = exp_i_phase(G) * ScalarExpr.const(1, 2)
    b = {"gamma": 0.7}
    assert abs(eval_at(e.conjugate(), b) - eval_at(e, b).conjugate()) < 1e-14


def test_atoms_are_canonical():
    # cos is even and sin odd: both signs of the argument give one atom
    assert ScalarExpr.cos(-G) == cg
    assert ScalarExpr.sin(-G) == -sg
    assert ScalarExpr.cos(G + LinearPhase(1)) == -cg


def test_scalar_json_round_trip():
    e = (cg * sb).scale(Fraction(-3, 2)) + ScalarExpr.sqrt2(1) * ScalarExpr.const(0, 1)
    assert ScalarExpr.from_json(e.to_json()) == e


def test_scalar_json_rejects_garbage():
    with pytest.raises(SchemaViolation):
        ScalarExpr.from_json({"monomials": "nope"})


def test_str_is_stable():
    e = (cb * cg * sb * sg).scale(2)
    assert str(e) == "2*cos(beta)*cos(gamma)*sin(beta)*sin(gamma)"


# -- equivalence and simplification ------------------------------------------------------

def test_equiv_pythagorean():
    assert equiv_numeric(sg * sg + cg * cg, ONE)


def test_equiv_rejects_different():
    assert not equiv_numeric(cg, sg)


def test_simplify_pythagorean_merge():
    assert simplify(sg * sg * cb + cg * cg * cb) == cb


def test_simplify_idempotent():
    e = (cb * sb * sg).scale(2) + cg
    assert simplify(simplify(e)) == simplify(e)


def test_trig_normal_form_double_angles():
    e = ScalarExpr.sin(G * 2)
    assert trig_normal_form(e, {"gamma": Fraction(1)}) == (sg * cg).scale(2)
    assert trig_normal_form(ScalarExpr.cos(G * 2), {"gamma": Fraction(1)}) == (cg * cg).scale(2) - ONE


def test_trig_normal_form_of_zero_function_is_zero():
    e = exp_i_phase(G) * exp_i_phase(-G) - ONE
    assert trig_normal_form(e).is_zero


def test_random_bindings_reproducible():
    assert random_bindings(["a", "b"], 3, seed=5) == random_bindings(["a", "b"], 3, seed=5)
    for b in random_bindings(["a"], 50):
        assert 0 <= b["a"] < 2 * math.pi


# -- properties ---------------------------------------------------------------------------

coeff = st.sampled_from([1, -1, 2, -2, 3, Fraction(1, 2)])
pi_part = st.sampled_from([Fraction(k, 4) for k in range(8)])


@st.composite
def atoms(draw):
    arg = LinearPhase(draw(pi_part), {draw(st.sampled_from(["gamma", "beta"])): draw(coeff)})
    return draw(st.sampled_from([ScalarExpr.cos, ScalarExpr.sin]))(arg)


@st.composite
def exprs(draw):
    total = ZERO
    for _ in range(draw(st.integers(1, 3))):
        term = ScalarExpr.const(draw(st.integers(-3, 3)), draw(st.integers(-2, 2)))
        for _ in range(draw(st.integers(0, 3))):
            term = term * draw(atoms())
        total = total + term
    return total


@settings(max_examples=60, deadline=None)
@given(exprs())
def test_normal_form_preserves_value(e):
    assert equiv_numeric(trig_normal_form(e), e, trials=8)


HALF_BASES = {"gamma": Fraction(1, 2), "beta": Fraction(1, 2)}


@settings(max_examples=60, deadline=None)
@given(exprs(), atoms())
def test_normal_form_is_canonical(a, x):
    # multiplying by cos(x)^2 + sin(x)^2, written with a shifted argument, is invisible
    y = ScalarExpr.cos(LinearPhase(Fraction(1, 2), {"gamma": 2}))
    z = ScalarExpr.sin(LinearPhase(Fraction(1, 2), {"gamma": 2}))
    padded = a * (y * y + z * z)
    assert trig_normal_form(padded, HALF_BASES) == trig_normal_form(a, HALF_BASES)
    assert trig_normal_form(a * x, HALF_BASES) == trig_normal_form(x * a, HALF_BASES)


@settings(max_examples=60, deadline=None)
@given(exprs(), exprs())
def test_ring_laws(a, b):
    bind = {"gamma": 0.37, "beta": 1.91}
    assert abs(eval_at(a * b, bind) - eval_at(a, bind) * eval_at(b, bind)) < 1e-9
    assert abs(eval_at(a + b, bind) - eval_at(a, bind) - eval_at(b, bind)) < 1e-9
    assert a * b == b * a
