"""Formal linear combinations of diagrams.

A :class:`LinComb` is a finite sum ``sum_i c_i * D_i`` of diagrams sharing one
arity, with :class:`ScalarExpr` coefficients.  Its meaning is the sum of the
terms' tensors.  Terms always hold complete diagrams: distributing a context
over a sum is done eagerly by :func:`substitute` and :func:`product`.

The rotation decompositions rest on the identity, valid for both colours and
any number of legs,

    S(c + t) = (1 + e^{it})/2 * S(c) + (1 - e^{it})/2 * S(c + pi)

where ``t`` is the parameter part of the phase and ``c`` its constant part.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

from .contract import exact_contract
from .diagram import IN, OUT, X, Z, Diagram, compose, _embed
from .errors import (ArityMismatch, NotAGadget, NotClosed, NotDecomposable, RegionArityMismatch,
                     SchemaViolation, TermBudgetExceeded)
from .rewrite import PI, Match, Rule, apply_inplace, gadget_at
from .scalar import ONE, ZERO, LinearPhase, ScalarExpr, exp_i_phase, trig_normal_form

DEFAULT_BUDGET = 4096
HALF = Fraction(1, 2)


class LinComb:
    __slots__ = ("arity", "terms")

    def __init__(self, arity: Tuple[int, int], terms: Iterable[Tuple[ScalarExpr, Diagram]] = ()):
        self.arity = (int(arity[0]), int(arity[1]))
        self.terms: List[Tuple[ScalarExpr, Diagram]] = []
        for c, d in terms:
            if d.arity != self.arity:
                raise ArityMismatch(f"term arity {d.arity} differs from {self.arity}")
            self.terms.append((c, d))

    @classmethod
    def single(cls, d: Diagram, coeff: ScalarExpr = ONE) -> "LinComb":
        return cls(d.arity, [(coeff, d)])

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __repr__(self) -> str:
        return f"LinComb(arity={self.arity}, terms={len(self.terms)})"

    def scale(self, c: ScalarExpr) -> "LinComb":
        return LinComb(self.arity, [(c * k, d) for k, d in self.terms])

    def __add__(self, other: "LinComb") -> "LinComb":
        if self.arity != other.arity:
            raise ArityMismatch(f"cannot add arities {self.arity} and {other.arity}")
        return LinComb(self.arity, self.terms + other.terms)

    def params(self) -> set:
        out = set()
        for c, d in self.terms:
            out |= c.params() | d.params()
        return out

    def to_json(self) -> dict:
        return {"arity": list(self.arity),
                "terms": [{"coeff": c.to_json(), "diagram": d.to_json()} for c, d in self.terms]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, doc, path: str = "$") -> "LinComb":
        if not isinstance(doc, dict) or "arity" not in doc or "terms" not in doc:
            raise SchemaViolation(path, "linear combination needs 'arity' and 'terms'")
        ar = doc["arity"]
        if not isinstance(ar, list) or len(ar) != 2 or not all(isinstance(x, int) for x in ar):
            raise SchemaViolation(path + ".arity", "must be [m, n]")
        if not isinstance(doc["terms"], list):
            raise SchemaViolation(path + ".terms", "must be a list")
        terms = []
        for i, t in enumerate(doc["terms"]):
            p = f"{path}.terms[{i}]"
            if not isinstance(t, dict) or "coeff" not in t or "diagram" not in t:
                raise SchemaViolation(p, "term needs 'coeff' and 'diagram'")
            d = Diagram.from_json(t["diagram"], p + ".diagram")
            if d.arity != tuple(ar):
                raise SchemaViolation(p + ".diagram", f"arity {d.arity} differs from {tuple(ar)}")
            terms.append((ScalarExpr.from_json(t["coeff"], p + ".coeff"), d))
        return cls(tuple(ar), terms)


# -- decompositions ----------------------------------------------------------------

def split_coefficients(param_part: LinearPhase) -> Tuple[ScalarExpr, ScalarExpr]:
    """``((1 + e^{it})/2, (1 - e^{it})/2)`` for the parameter part ``t``."""
    e = exp_i_phase(param_part)
    return (ONE + e).scale(HALF), (ONE - e).scale(HALF)


def decompose_spider(v: int, host: Diagram) -> LinComb:
    """Split a parameterized spider of any degree into two constant-phase terms."""
    if v not in host or not host.is_spider(v):
        raise NotDecomposable(f"vertex {v} is not a spider")
    ph = host.phase(v)
    if ph.is_constant:
        raise NotDecomposable(f"spider {v} has constant phase {ph}")
    const, param = ph.constant_part(), ph.param_part()
    a, b = split_coefficients(param)
    d0 = host.copy()
    d0.set_phase(v, const)
    d1 = host.copy()
    d1.set_phase(v, const + PI)
    return LinComb(host.arity, [(a, d0), (b, d1)])


def _rotation_site(host: Diagram, v: int, kind: str) -> None:
    if v not in host or host.kind(v) != kind:
        raise NotDecomposable(f"vertex {v} is not a {kind} spider")
    if host.degree(v) != 2 or host.self_loops(v):
        raise NotDecomposable(f"{kind} spider {v} does not sit on a wire (degree {host.degree(v)})")


def decompose_z_rotation(v: int, host: Diagram) -> LinComb:
    """``Z(c + t)`` on a wire as ``(1+e^{it})/2 Z(c) + (1-e^{it})/2 Z(c+pi)``."""
    _rotation_site(host, v, Z)
    return decompose_spider(v, host)


def decompose_x_rotation(v: int, host: Diagram) -> LinComb:
    """``X(c + t)`` on a wire as ``(1+e^{it})/2 X(c) + (1-e^{it})/2 X(c+pi)``."""
    _rotation_site(host, v, X)
    return decompose_spider(v, host)


def decompose_phase_gadget(hub: int, host: Diagram) -> LinComb:
    """Split a parameterized gadget into ``Z(c)`` / ``Z(c+pi)`` phase terms.

    When ``c`` is 0 or pi the phase state is then copied through the hub, so the
    two terms become plain legs and Z(pi) on every leg respectively.
    """
    g = gadget_at(host, hub)
    if g is None:
        raise NotAGadget(f"vertex {hub} is not a phase-gadget hub")
    ph, legs = g
    if host.phase(ph).is_constant:
        raise NotDecomposable(f"gadget at {hub} has constant phase")
    lc = decompose_spider(ph, host)
    out = []
    for c, d in lc.terms:
        p = d.phase(ph)
        if p.is_constant and p.pi in (0, 1) and d.phase(hub).is_constant and d.phase(hub).pi in (0, 1):
            apply_inplace(d, Match(Rule.COPY, (ph, hub)))
            # the copied Z states sit next to the Z legs: fuse them in
            for leg in legs:
                for w in list(d.neighbors(leg)):
                    if d.kind(w) == Z and d.degree(w) == 1 and w not in legs:
                        a, b = sorted((leg, w))
                        apply_inplace(d, Match(Rule.FUSE, (a, b)))
        out.append((c, d))
    return LinComb(host.arity, out)


# -- rule (i): substitution ------------------------------------------------------

def substitute(host: Diagram, region: Sequence[int], replacement: LinComb,
               inputs: Sequence[Tuple[int, int]], outputs: Sequence[Tuple[int, int]]) -> LinComb:
    """Replace ``region`` in ``host`` by each term of ``replacement``.

    ``inputs``/``outputs`` list the cut edges as ``(outside, inside)`` pairs in
    the order of the replacement's inputs/outputs; together they must be every
    edge leaving the region (repeat a pair for parallel edges).
    """
    region = set(region)
    for v in region:
        if v not in host or not host.is_spider(v):
            raise RegionArityMismatch(f"region vertex {v} is not a spider of the host")
    if (len(inputs), len(outputs)) != replacement.arity:
        raise RegionArityMismatch(
            f"region cut ({len(inputs)}, {len(outputs)}) vs replacement arity {replacement.arity}")
    cut: Dict[Tuple[int, int], int] = {}
    for v in region:
        for w, c in host.incident(v).items():
            if w not in region:
                cut[(w, v)] = cut.get((w, v), 0) + c
    given: Dict[Tuple[int, int], int] = {}
    for pair in list(inputs) + list(outputs):
        given[tuple(pair)] = given.get(tuple(pair), 0) + 1
    if cut != given:
        raise RegionArityMismatch("listed cut edges do not match the region's boundary")
    base = host.copy()
    for v in region:
        base.remove_vertex(v)
    terms = []
    for coeff, r in replacement.terms:
        d = base.copy()
        m = _embed(d, r)
        for (outside, _), b in zip(list(inputs) + list(outputs), list(r.inputs) + list(r.outputs)):
            b = m[b]
            inner = d.boundary_neighbor(b)
            d.remove_vertex(b)
            d.add_edge(outside, inner)
        d.scalar = host.scalar * r.scalar
        d.normalize_bare_wires()
        terms.append((coeff, d))
    return LinComb(host.arity, terms)


# -- rule (ii): products ------------------------------------------------------------

def product(a: LinComb, b: LinComb, budget: int = DEFAULT_BUDGET) -> LinComb:
    """Sequential composition ``b after a`` of two sums, distributed termwise."""
    if a.arity[1] != b.arity[0]:
        raise ArityMismatch(f"cannot compose arity {a.arity} with {b.arity}")
    count = len(a) * len(b)
    if count > budget:
        raise TermBudgetExceeded(count, budget)
    terms = [(ca * cb, compose(da, db)) for ca, da in a.terms for cb, db in b.terms]
    return LinComb((a.arity[0], b.arity[1]), terms)


# -- canonical form for term merging ---------------------------------------------

def _vertex_label(d: Diagram, v: int):
    k = d.kind(v)
    if k == IN:
        return (k, d.inputs.index(v))
    if k == OUT:
        return (k, d.outputs.index(v))
    return (k, d.phase(v).sort_key())


def _refine(d: Diagram, colors: Dict[int, int]) -> Dict[int, int]:
    while True:
        sig = {}
        for v in colors:
            nb = tuple(sorted((colors[w], c) for w, c in d.incident(v).items()))
            sig[v] = (colors[v], nb)
        keys = sorted(set(sig.values()))
        index = {k: i for i, k in enumerate(keys)}
        new = {v: index[sig[v]] for v in colors}
        if len(keys) == len(set(colors.values())):
            return new
        colors = new


def canonical_form(d: Diagram, max_branches: int = 64):
    """Hashable form identical exactly for isomorphic diagrams (scalar excluded).

    Uses colour refinement plus individualisation; returns None when the search
    would exceed ``max_branches`` leaves, in which case callers must not merge.
    """
    verts = d.vertices()
    labels = {v: _vertex_label(d, v) for v in verts}
    keys = sorted(set(labels.values()))
    colors = _refine(d, {v: keys.index(labels[v]) for v in verts})
    budget = [max_branches]
    best = _search(d, colors, labels, budget)
    return best


def _search(d: Diagram, colors, labels, budget):
    cells: Dict[int, List[int]] = {}
    for v, c in colors.items():
        cells.setdefault(c, []).append(v)
    multi = [c for c, vs in cells.items() if len(vs) > 1]
    if not multi:
        budget[0] -= 1
        order = sorted(colors, key=lambda v: colors[v])
        pos = {v: i for i, v in enumerate(order)}
        vlabels = tuple(labels[v] for v in order)
        edges = tuple(sorted((min(pos[u], pos[v]), max(pos[u], pos[v])) for u, v in d.edges()))
        return (vlabels, edges, tuple(pos[v] for v in d.inputs), tuple(pos[v] for v in d.outputs))
    target = min(multi, key=lambda c: (len(cells[c]), c))
    best = None
    for v in sorted(cells[target]):
        if budget[0] <= 0:
            return None
        new = {w: 2 * c for w, c in colors.items()}
        new[v] = 2 * colors[v] + 1
        form = _search(d, _refine(d, new), labels, budget)
        if form is None:
            return None
        if best is None or form < best:
            best = form
    return best


# -- canonicalisation ----------------------------------------------------------------

def _is_clifford_closed(d: Diagram) -> bool:
    if not d.is_closed:
        return False
    for v in d.spiders():
        ph = d.phase(v)
        if not ph.is_constant or (ph.pi * 2).denominator != 1:
            return False
    return True


def normalize_coeff(c: ScalarExpr) -> ScalarExpr:
    return trig_normal_form(c)


def canonicalize(lc: LinComb) -> LinComb:
    """Hoist scalars, evaluate closed Clifford terms, merge equal diagrams, drop zeros."""
    merged: Dict[object, List] = {}
    order: List[object] = []
    unmergeable = 0
    for coeff, d in lc.terms:
        c = coeff * d.scalar
        body = d.copy()
        body.scalar = ONE
        if _is_clifford_closed(body) and body.num_vertices():
            c = c * exact_contract(body)
            body = Diagram()
        key = canonical_form(body)
        if key is None:
            key = ("unmergeable", unmergeable)
            unmergeable += 1
        if key in merged:
            merged[key][0] = merged[key][0] + c
        else:
            merged[key] = [c, body]
            order.append(key)
    terms = []
    for key in order:
        c, body = merged[key]
        c = normalize_coeff(c)
        if not c.is_zero:
            terms.append((c, body))
    return LinComb(lc.arity, terms)


def collapse_closed(lc: LinComb) -> ScalarExpr:
    """Sum of coefficient times exact value over the terms of a closed sum."""
    if lc.arity != (0, 0):
        raise NotClosed(f"linear combination has arity {lc.arity}")
    total = ZERO
    for coeff, d in lc.terms:
        total = total + coeff * exact_contract(d)
    return total
