import itertools

import pytest

from zxpqc.hweff import (hweff_core_diagram, hweff_core_weight, hweff_parity_identity, hweff_param_names,
                         hweff_zz_expectation)
from zxpqc.oracle import contract_numeric, zz_expectation
from zxpqc.problem import HwEffSU2, complete
from zxpqc.scalar import ONE, random_bindings

G3 = complete(3)
BITS = list(itertools.product((0, 1), repeat=3))


@pytest.fixture(scope="module")
def zz():
    return hweff_zz_expectation()


def test_parity_examples():
    assert hweff_parity_identity(0, 0, 0, 0, 0, 0, 0, 0) == ONE
    assert hweff_parity_identity(1, 0, 0, 0, 0, 0, 0, 0).is_zero
    assert hweff_parity_identity(0, 0, 0, 1, 0, 1, 0, 0).is_zero


def test_core_weights_are_signs():
    for ell in BITS:
        for r in BITS:
            for m in itertools.product((0, 1), repeat=2):
                k = hweff_core_weight(ell, m, r)
                assert k in (-1, 0, 1)
                assert abs(contract_numeric(hweff_core_diagram(ell, m, r)) - k) < 1e-12


def test_core_weights_are_a_permutation():
    # the entangler permutes basis states, so each (l, m) pairs with exactly one r
    for ell in BITS:
        for m in itertools.product((0, 1), repeat=2):
            assert sum(abs(hweff_core_weight(ell, m, r)) for r in BITS) == 1


def test_zero_angles(zz):
    b = {name: 0.0 for name in hweff_param_names()}
    v = complex(zz.eval(b))
    assert abs(v - 1) < 1e-12
    assert abs(v - zz_expectation(G3, HwEffSU2(), b, (1, 2))) < 1e-12


def test_matches_statevector(zz):
    for b in random_bindings(hweff_param_names(), 32, seed=17):
        assert abs(complex(zz.eval(b)) - zz_expectation(G3, HwEffSU2(), b, (1, 2))) < 1e-9


def test_final_layer_drops_out(zz):
    assert not zz.params() & {"gamma_12", "gamma_22", "gamma_32", "beta_12"}
    for b in random_bindings(hweff_param_names(), 16, seed=4):
        shifted = dict(b, gamma_22=b["gamma_22"] + 1.234)
        assert abs(zz_expectation(G3, HwEffSU2(), b, (1, 2)) - zz_expectation(G3, HwEffSU2(), shifted, (1, 2))) < 1e-12
