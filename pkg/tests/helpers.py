"""Random diagram generators shared by the test modules."""
from __future__ import annotations

import random
from fractions import Fraction

from zxpqc.diagram import X, Z, Diagram
from zxpqc.scalar import LinearPhase, ScalarExpr, exp_i_phase

PARAMS = ("gamma", "beta")


def random_phase(rng: random.Random, clifford_only: bool = False) -> LinearPhase:
    pi = Fraction(rng.randrange(8), 4)
    if clifford_only:
        return LinearPhase(Fraction(rng.randrange(4), 2))
    r = rng.random()
    if r < 0.4:
        return LinearPhase(pi)
    if r < 0.55:
        return LinearPhase(1)
    name = rng.choice(PARAMS)
    return LinearPhase(pi, {name: rng.choice([1, -1, 2, -2, Fraction(1, 2)])})


def random_scalar(rng: random.Random) -> ScalarExpr:
    s = ScalarExpr.sqrt2(rng.randrange(-2, 3))
    if rng.random() < 0.5:
        s = s * exp_i_phase(random_phase(rng))
    return s


def random_diagram(rng: random.Random, n_spiders: int = 6, n_edges: int = 8, n_in: int = 1,
                   n_out: int = 1, clifford_only: bool = False, loops: bool = True) -> Diagram:
    d = Diagram()
    spiders = [d.add_vertex(rng.choice((Z, X)), random_phase(rng, clifford_only))
               for _ in range(n_spiders)]
    for _ in range(n_edges):
        a, b = rng.choice(spiders), rng.choice(spiders)
        if a == b and not loops:
            continue
        d.add_edge(a, b)
    for _ in range(n_in):
        v = d.add_input()
        d.add_edge(v, rng.choice(spiders))
    for _ in range(n_out):
        v = d.add_output()
        d.add_edge(v, rng.choice(spiders))
    d.scalar = random_scalar(rng)
    return d


def _attach_context(rng: random.Random, d: Diagram, ends, clifford_only: bool = False) -> None:
    """Hook each dangling end either to a boundary or to a random context spider."""
    ctx = [d.add_vertex(rng.choice((Z, X)), random_phase(rng, clifford_only))
           for _ in range(rng.randint(0, 2))]
    for v in ends:
        r = rng.random()
        if ctx and r < 0.4:
            d.add_edge(v, rng.choice(ctx))
        elif r < 0.7:
            b = d.add_output()
            d.add_edge(v, b)
        else:
            b = d.add_input()
            d.add_edge(v, b)
    for c in ctx:
        if d.degree(c) == 0 or rng.random() < 0.3:
            b = d.add_output()
            d.add_edge(c, b)


def plant_bialgebra(rng: random.Random) -> Diagram:
    d = Diagram()
    m, n = rng.randint(2, 3), rng.randint(2, 3)
    zs = [d.add_vertex(Z) for _ in range(m)]
    xs = [d.add_vertex(X) for _ in range(n)]
    for z in zs:
        for x in xs:
            d.add_edge(z, x)
    _attach_context(rng, d, zs + xs)
    d.scalar = random_scalar(rng)
    return d


def add_gadget(d: Diagram, legs, phase: LinearPhase, hub_phase: LinearPhase = LinearPhase()) -> int:
    h = d.add_vertex(X, hub_phase)
    p = d.add_vertex(Z, phase)
    d.add_edge(h, p)
    for leg in legs:
        d.add_edge(h, leg)
    return h


def gadget_circuit(k: int, phases, pi_legs=(), hub_pi: bool = False) -> Diagram:
    """k wires, optional X(pi) on chosen input wires, then one gadget per phase."""
    d = Diagram()
    legs = []
    for i in range(k):
        a = d.add_input()
        prev = a
        if i in pi_legs:
            q = d.add_vertex(X, LinearPhase(1))
            d.add_edge(prev, q)
            prev = q
        leg = d.add_vertex(Z)
        d.add_edge(prev, leg)
        legs.append(leg)
    for j, ph in enumerate(phases):
        add_gadget(d, legs, ph, LinearPhase(1) if (hub_pi and j == 0) else LinearPhase())
    for leg in legs:
        o = d.add_output()
        d.add_edge(leg, o)
    return d


def plant_gadget_fuse(rng: random.Random) -> Diagram:
    k = rng.randint(1, 4)
    return gadget_circuit(k, [random_phase(rng) for _ in range(2)])


def plant_gadget_pi(rng: random.Random) -> Diagram:
    k = rng.randint(1, 4)
    subset = [i for i in range(k) if rng.random() < 0.5] or [0]
    return gadget_circuit(k, [random_phase(rng)], subset, hub_pi=rng.random() < 0.3)


def plant_pi(rng: random.Random) -> Diagram:
    d = Diagram()
    kind = rng.choice((Z, X))
    other = X if kind == Z else Z
    s = d.add_vertex(other, random_phase(rng))
    p = d.add_vertex(kind, LinearPhase(1))
    d.add_edge(p, s)
    a = d.add_input()
    d.add_edge(a, p)
    _attach_context(rng, d, [s] * rng.randint(0, 3))
    d.scalar = random_scalar(rng)
    return d


def plant_copy(rng: random.Random) -> Diagram:
    d = Diagram()
    kind = rng.choice((Z, X))
    other = X if kind == Z else Z
    s = d.add_vertex(other, random_phase(rng))
    c = d.add_vertex(kind, LinearPhase(rng.choice((0, 1))))
    d.add_edge(c, s)
    _attach_context(rng, d, [s] * rng.randint(0, 3))
    d.scalar = random_scalar(rng)
    return d


def plant_hopf(rng: random.Random) -> Diagram:
    d = Diagram()
    z = d.add_vertex(Z, random_phase(rng))
    x = d.add_vertex(X, random_phase(rng))
    d.add_edge(z, x, rng.randint(2, 3))
    _attach_context(rng, d, [z] * rng.randint(0, 2) + [x] * rng.randint(0, 2))
    d.scalar = random_scalar(rng)
    return d


def plant_fuse(rng: random.Random) -> Diagram:
    return random_diagram(rng, rng.randint(2, 5), rng.randint(1, 7), rng.randint(0, 2), rng.randint(0, 2))


def plant_identity(rng: random.Random) -> Diagram:
    d = random_diagram(rng, rng.randint(1, 4), rng.randint(0, 5), rng.randint(0, 2), rng.randint(0, 2))
    a, b = rng.choice(d.spiders()), rng.choice(d.spiders())
    s = d.add_vertex(rng.choice((Z, X)))
    d.add_edge(a, s)
    d.add_edge(s, b)
    return d


PLANTERS = {
    "f": plant_fuse,
    "id": plant_identity,
    "pi": plant_pi,
    "c": plant_copy,
    "h": plant_hopf,
    "b": plant_bialgebra,
    "gf": plant_gadget_fuse,
    "gpi": plant_gadget_pi,
}
