"""Three-qubit hardware-efficient SU(2) ansatz and its ``<Z_1 Z_2>`` term sum.

Circuit on qubits 0, 1, 2 (public angles are the circuit angles):

    R_Y(beta_q1), R_Z(gamma_q1) on each qubit
    CX(1 -> 2), then CX(0 -> 1)
    R_Y(beta_q2), R_Z(gamma_q2) on each qubit

with ``q = 1, 2, 3`` naming qubits 0, 1, 2.  As spiders, R_Y(t) is
Z(-pi/2), X(t), Z(pi/2) with scalar e^{-it/2}; R_Z(t) is Z(t) with scalar
e^{-it/2}; CX is a Z spider on the control joined to an X spider on the target,
scalar sqrt 2.  The fused Z phase after the first layer is ``gamma + pi/2``.

The expectation of Z on qubits 1 and 2 is a finite sum.  The last R_Z layer
commutes with the observable and the last R_Y on qubit 0 cancels, while
R_Y(b)^dag Z R_Y(b) = Z (cos b - i sin b Y) splits each remaining observable
leg into Z (index m = 0) or X (index m = 1, using Z Y = -i X).  The first layer
prepares a product state whose density entries carry the indices l (ket) and
r (bra).  The sum is then

    sum_{l, m, r} rho(l, r) c(m) K(l, m, r),   K = <r| W^dag Z^(1-m) X^m W |l>

where W is the entangler and K is a parameter-free diagram, evaluated exactly.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Tuple

from .contract import exact_contract
from .diagram import X, Z, Diagram
from .problem import HWEFF_PARAMS, HwEffSU2
from .scalar import ONE, LinearPhase, ScalarExpr, exp_i_phase, trig_normal_form

# (control, target) in application order
ENTANGLER = ((1, 2), (0, 1))
OBSERVABLE = (1, 2)
PI = LinearPhase(1)
HALF_PI = LinearPhase(Fraction(1, 2))


def _p(name: str) -> LinearPhase:
    return LinearPhase.param(name)


def _add_ry(d: Diagram, wire, q: int, name: str) -> LinearPhase:
    t = _p(name)
    for kind, ph in ((Z, -HALF_PI), (X, t), (Z, HALF_PI)):
        s = d.add_spider(kind, ph)
        d.add_edge(wire[q], s)
        wire[q] = s
    return t * Fraction(-1, 2)


def _add_rz(d: Diagram, wire, q: int, name: str) -> LinearPhase:
    t = _p(name)
    s = d.add_spider(Z, t)
    d.add_edge(wire[q], s)
    wire[q] = s
    return t * Fraction(-1, 2)


def _add_cx(d: Diagram, wire, c: int, t: int) -> ScalarExpr:
    zc = d.add_spider(Z)
    xt = d.add_spider(X)
    d.add_edge(wire[c], zc)
    d.add_edge(wire[t], xt)
    d.add_edge(zc, xt)
    wire[c], wire[t] = zc, xt
    return ScalarExpr.sqrt2(1)


def hweff_state_diagram() -> Diagram:
    """State diagram of the ansatz with its exact global scalar."""
    d = Diagram()
    wire = [d.add_spider(X) for _ in range(3)]  # |0> = X(0) / sqrt 2
    scalar = ScalarExpr.sqrt2(-3)
    phase = LinearPhase()
    for layer in (1, 2):
        if layer == 2:
            for c, t in ENTANGLER:
                scalar = scalar * _add_cx(d, wire, c, t)
        for q in range(3):
            phase = phase + _add_ry(d, wire, q, f"beta_{q + 1}{layer}")
            phase = phase + _add_rz(d, wire, q, f"gamma_{q + 1}{layer}")
    for q in range(3):
        o = d.add_output()
        d.add_edge(wire[q], o)
    d.scalar = scalar * exp_i_phase(phase)
    return d


def hweff_parity_identity(l1: int, l2: int, l3: int, m2: int, m3: int,
                          r1: int, r2: int, r3: int) -> ScalarExpr:
    """Closed-form sign table: zero under any of three parity conditions, else f."""
    if (l1 + m2 + l3 + m3 + r3) % 2 or (r1 + m2 + l3 + m3 + r3) % 2 or (l2 + m2 + r2) % 2:
        return ScalarExpr()
    e = m2 * r1 + (m2 ^ m3) * r2 + m3 * r3
    return ScalarExpr.const(-1 if e % 2 else 1)


def hweff_core_diagram(ell: Tuple[int, int, int], m: Tuple[int, int],
                       r: Tuple[int, int, int]) -> Diagram:
    """Closed diagram ``<r| W^dag P_m W |l>`` with ``P_m`` Z or X on the observed qubits."""
    d = Diagram()
    wire = []
    for b in ell:
        s = d.add_spider(X, PI * b)
        wire.append(s)
    scalar = ScalarExpr.sqrt2(-3)
    for c, t in ENTANGLER:
        scalar = scalar * _add_cx(d, wire, c, t)
    for q, mq in zip(OBSERVABLE, m):
        s = d.add_spider(X if mq else Z, PI)
        d.add_edge(wire[q], s)
        wire[q] = s
    for c, t in reversed(ENTANGLER):
        scalar = scalar * _add_cx(d, wire, c, t)
    scalar = scalar * ScalarExpr.sqrt2(-3)
    for q, b in enumerate(r):
        s = d.add_spider(X, PI * b)
        d.add_edge(wire[q], s)
    d.scalar = scalar
    return d


@lru_cache(maxsize=None)
def hweff_core_weight(ell: Tuple[int, int, int], m: Tuple[int, int],
                      r: Tuple[int, int, int]) -> int:
    """Exact value of :func:`hweff_core_diagram`; always 0 or +-1."""
    v = exact_contract(hweff_core_diagram(ell, m, r)).exact_constant()
    rational, root2 = v  # the sqrt 2 part vanishes for this diagram
    assert rational.im == 0 and not root2
    return int(rational.re)


def _density(q: int) -> Dict[Tuple[int, int], ScalarExpr]:
    """Entries ``rho(l, r)`` of R_Z(g) R_Y(b)|0><0| R_Y(b)^dag R_Z(g)^dag."""
    b, g = _p(f"beta_{q + 1}1"), _p(f"gamma_{q + 1}1")
    cb, sb = ScalarExpr.cos(b), ScalarExpr.sin(b)
    half = Fraction(1, 2)
    return {(0, 0): (ONE + cb).scale(half), (1, 1): (ONE - cb).scale(half),
            (1, 0): (sb * exp_i_phase(g)).scale(half), (0, 1): (sb * exp_i_phase(-g)).scale(half)}


def _observable_leg(q: int) -> Dict[int, ScalarExpr]:
    """``c(m)`` with R_Y(b)^dag Z R_Y(b) = c(0) Z + c(1) X."""
    b = _p(f"beta_{q + 1}2")
    return {0: ScalarExpr.cos(b), 1: -ScalarExpr.sin(b)}


def hweff_zz_expectation(a: HwEffSU2 = HwEffSU2()) -> ScalarExpr:
    """``<Z_1 Z_2>`` (qubits 1 and 2, 0-based) as a sum over the expansion indices."""
    rho = [_density(q) for q in range(3)]
    legs = [_observable_leg(q) for q in OBSERVABLE]
    total = ScalarExpr()
    for ell in itertools.product((0, 1), repeat=3):
        for r in itertools.product((0, 1), repeat=3):
            for m in itertools.product((0, 1), repeat=2):
                k = hweff_core_weight(ell, m, r)
                if not k:
                    continue
                c = rho[0][ell[0], r[0]] * rho[1][ell[1], r[1]] * rho[2][ell[2], r[2]]
                c = c * legs[0][m[0]] * legs[1][m[1]]
                total = total + c.scale(k)
    return trig_normal_form(total)


def hweff_param_names() -> Tuple[str, ...]:
    return HWEFF_PARAMS
