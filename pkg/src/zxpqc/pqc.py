"""Ansatz state diagrams, MaxCut observables, lightcones and reference formulas.

Conventions, with qubit ``q`` as wire ``q`` (output ``q``):

* QAOA: ``|+>^n`` followed by ``p`` layers of exp(-i gamma_k C) and
  exp(i beta_k X / 2) on each qubit, ``C = sum (1 - Z_u Z_v) / 2``.  Each edge
  is a phase gadget with phase hub Z(-gamma) and scalar sqrt 2, each mixer an
  X(-beta) spider with scalar e^{i beta / 2}.
* Ry product: ``R_Y(alpha_i)|0>`` as X(0) state, Z(-pi/2), X(alpha), Z(pi/2),
  with scalar e^{-i alpha / 2} / sqrt 2 per qubit.
* Hardware-efficient: see :mod:`zxpqc.hweff`.

Every state diagram carries its exact global scalar.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from .diagram import X, Z, Diagram, adjoint, compose
from .errors import SpecMismatch, SupportOutOfRange
from .problem import QAOA, HwEffSU2, ProblemGraph, RyProduct, check_arity
from .scalar import LinearPhase, ScalarExpr, exp_i_phase, simplify, trig_normal_form

HALF_PI = LinearPhase(Fraction(1, 2))


@dataclass(frozen=True)
class ObservableTerm:
    """``weight * prod_{q in support} Z_q``."""

    weight: ScalarExpr
    support: Tuple[int, ...]

    def __post_init__(self):
        sup = tuple(int(q) for q in self.support)
        if len(set(sup)) != len(sup):
            raise SupportOutOfRange(f"repeated qubit in support {sup}")
        if any(q < 0 for q in sup):
            raise SupportOutOfRange(f"negative qubit in support {sup}")
        object.__setattr__(self, "support", sup)


def maxcut_hamiltonian(g: ProblemGraph) -> Tuple[ScalarExpr, List[ObservableTerm]]:
    """``C = |E|/2 - 1/2 sum_{(u,v)} Z_u Z_v`` as constant plus ZZ terms."""
    half = Fraction(1, 2)
    const = ScalarExpr.const(Fraction(g.m, 2))
    terms = [ObservableTerm(ScalarExpr.const(-half), (u, v)) for u, v in g.edges]
    return const, terms


# -- states ------------------------------------------------------------------------

def qaoa_state_diagram(g: ProblemGraph, a: QAOA) -> Diagram:
    d = Diagram()
    wire = [d.add_spider(Z) for _ in range(g.n)]  # |+> states, sqrt 2 each
    root2 = -g.n
    phase = LinearPhase()
    for layer, (gname, bname) in enumerate(zip(a.gammas, a.betas)):
        gamma = LinearPhase.param(gname)
        beta = LinearPhase.param(bname)
        if layer:
            nxt = [d.add_spider(Z) for _ in range(g.n)]
            for q in range(g.n):
                d.add_edge(wire[q], nxt[q])
            wire = nxt
        for u, v in g.edges:
            hub = d.add_spider(X)
            ph = d.add_spider(Z, -gamma)
            d.add_edge(hub, ph)
            d.add_edge(hub, wire[u])
            d.add_edge(hub, wire[v])
        root2 += g.m
        mixers = []
        for q in range(g.n):
            m = d.add_spider(X, -beta)
            d.add_edge(wire[q], m)
            mixers.append(m)
        phase = phase + beta * Fraction(g.n, 2)
        wire = mixers
    for q in range(g.n):
        o = d.add_output()
        d.add_edge(wire[q], o)
    d.scalar = ScalarExpr.sqrt2(root2) * exp_i_phase(phase)
    return d


def ry_state_diagram(a: RyProduct) -> Diagram:
    d = Diagram()
    phase = LinearPhase()
    for name in a.names:
        alpha = LinearPhase.param(name)
        chain = [d.add_spider(X), d.add_spider(Z, -HALF_PI), d.add_spider(X, alpha),
                 d.add_spider(Z, HALF_PI)]
        for s, t in zip(chain, chain[1:]):
            d.add_edge(s, t)
        o = d.add_output()
        d.add_edge(chain[-1], o)
        phase = phase + alpha * Fraction(-1, 2)
    d.scalar = ScalarExpr.sqrt2(-a.n) * exp_i_phase(phase)
    return d


def build_state(g: ProblemGraph, a) -> Diagram:
    """State diagram (0 inputs, ``g.n`` outputs) of ansatz ``a`` on graph ``g``."""
    check_arity(g, a)
    if isinstance(a, QAOA):
        return qaoa_state_diagram(g, a)
    if isinstance(a, RyProduct):
        return ry_state_diagram(a)
    if isinstance(a, HwEffSU2):
        from .hweff import hweff_state_diagram
        return hweff_state_diagram()
    raise SpecMismatch(f"unknown ansatz {a!r}")


def observable_diagram(n: int, support: Sequence[int]) -> Diagram:
    """``prod Z_q`` on ``n`` wires: Z(pi) on the support, Z(0) elsewhere."""
    for q in support:
        if not 0 <= q < n:
            raise SupportOutOfRange(f"qubit {q} outside 0..{n - 1}")
    d = Diagram()
    sup = set(support)
    for q in range(n):
        i = d.add_input()
        s = d.add_spider(Z, LinearPhase(1) if q in sup else None)
        o = d.add_output()
        d.add_edge(i, s)
        d.add_edge(s, o)
    return d


def expectation_diagram(state: Diagram, term: ObservableTerm) -> Diagram:
    """Closed diagram ``<psi| Z..Z |psi>``; the weight is not included."""
    if state.arity[0] != 0:
        raise SupportOutOfRange("expectation needs a state diagram (no inputs)")
    n = state.arity[1]
    obs = observable_diagram(n, term.support)
    d = compose(compose(state, obs), adjoint(state))
    # |e^{i phi}|^2 pairs merge before the expansion into unit angles
    d.scalar = trig_normal_form(simplify(d.scalar))
    return d


# -- neighbourhoods and lightcones -------------------------------------------------

def exclusive_neighborhoods(g: ProblemGraph, edge: Tuple[int, int]) -> Tuple[int, int, int]:
    """``(n_u, n_v, n_uv)``: neighbours of only ``u``, only ``v``, and of both."""
    u, v = edge
    g.check_edge(u, v)
    nu, nv = g.neighbors(u) - {v}, g.neighbors(v) - {u}
    return len(nu - nv), len(nv - nu), len(nu & nv)


def _balls(g: ProblemGraph, seed: Sequence[int], depth: int) -> List[set]:
    adj = g.adjacency()
    balls = [set(seed)]
    for _ in range(depth):
        cur = set(balls[-1])
        for w in balls[-1]:
            cur |= adj[w]
        balls.append(cur)
    return balls


def lightcone_reduce(g: ProblemGraph, edge: Tuple[int, int], p: int
                     ) -> Tuple[ProblemGraph, Dict[int, int]]:
    """Subgraph that determines ``<Z_u Z_v>`` after ``p`` QAOA layers.

    Keeps every vertex within distance ``p`` of ``{u, v}`` and every edge with
    an endpoint within distance ``p - 1``; vertices are renumbered in sorted
    order and the map old -> new is returned with the graph.
    """
    u, v = edge
    g.check_edge(u, v)
    if p < 0:
        raise ValueError("p must be non-negative")
    balls = _balls(g, (u, v), p)
    keep = sorted(balls[p])
    if p == 0:
        edges = [(min(u, v), max(u, v))]
    else:
        inner = balls[p - 1]
        edges = [e for e in g.edges if e[0] in inner or e[1] in inner]
    qmap = {w: i for i, w in enumerate(keep)}
    return ProblemGraph.from_edges(len(keep), [(qmap[a], qmap[b]) for a, b in edges]), qmap


# -- reference formulas -----------------------------------------------------------

def _cs(name: str) -> Tuple[ScalarExpr, ScalarExpr]:
    ph = LinearPhase.param(name)
    return ScalarExpr.cos(ph), ScalarExpr.sin(ph)


def qaoa1_closed_form(g: ProblemGraph, edge: Tuple[int, int],
                      gamma: str = "gamma", beta: str = "beta") -> ScalarExpr:
    """Depth-one ``<Z_u Z_v>`` from the exclusive neighbourhood sizes."""
    nu, nv, nuv = exclusive_neighborhoods(g, edge)
    cg, sg = _cs(gamma)
    cb, sb = _cs(beta)
    first = cb * sb * sg * (cg ** (nu + nuv) + cg ** (nv + nuv))
    tri = ScalarExpr()
    for i in range(1, nuv + 1, 2):
        tri = tri + (sg ** (2 * i) * cg ** (2 * (nuv - i))).scale(math.comb(nuv, i))
    return first + cg ** (nu + nv) * sb * sb * tri


def ry_closed_form(u: int, v: int, names: Sequence[str] = ()) -> ScalarExpr:
    """``cos(alpha_u) cos(alpha_v)``."""
    a = names[u] if names else f"alpha_{u}"
    b = names[v] if names else f"alpha_{v}"
    return ScalarExpr.cos(LinearPhase.param(a)) * ScalarExpr.cos(LinearPhase.param(b))


def cost_from_zz(g: ProblemGraph, zz: Sequence[float]) -> float:
    """``<C> = |E|/2 - 1/2 sum <Z_u Z_v>`` for per-edge values in edge order."""
    return g.m / 2 - 0.5 * float(np.sum(zz))


def grid_max(f: Callable[[np.ndarray, np.ndarray], np.ndarray], resolution: int = 200,
             period: float = math.pi) -> Tuple[float, float, float]:
    """Maximum of a vectorised ``f(gamma, beta)`` on a square grid over [0, period)^2.

    Returns ``(value, gamma, beta)`` at the best grid point.
    """
    axis = np.arange(resolution) * (period / resolution)
    gg, bb = np.meshgrid(axis, axis, indexing="ij")
    vals = np.real(np.asarray(f(gg, bb), dtype=complex)) * np.ones_like(gg)
    i = np.unravel_index(int(np.argmax(vals)), vals.shape)
    return float(vals[i]), float(gg[i]), float(bb[i])
