"""Closed expectation diagram -> canonical ScalarExpr.

The pipeline keeps a worklist of ``(coefficient, diagram)`` terms.  Each term
is simplified with the rewrite rules; if parameters survive, one
parameterized spider is split into two constant-phase terms, otherwise the
term is contracted exactly.  Coefficients are kept in a fixed trigonometric
basis throughout so that products stay small and the final sum is canonical.
"""
from __future__ import annotations

import itertools
import json
from collections import OrderedDict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .contract import exact_contract
from .diagram import X, Z, Diagram
from .errors import NotClosed, SchemaViolation, TermBudgetExceeded
from .lincomb import DEFAULT_BUDGET, LinComb, canonical_form, decompose_phase_gadget, decompose_spider
from .rewrite import DEFAULT_ORDER, Rule, apply_inplace, first_match, gadget_at, parse_rules
from .scalar import ONE, ZERO, ScalarExpr, _rational_gcd, _reduce_sin_squares, trig_normal_form

EXPAND_POLICIES = ("auto", "all")


@dataclass
class Strategy:
    """Rule order, expansion policy and term budget for :func:`evaluate_expectation`.

    ``expand="auto"`` splits parameterized X spiders first, then gadget phase
    hubs, then any remaining parameterized spider; ``"all"`` takes any
    parameterized spider in id order.  ``debug`` spot-checks every expansion
    against the numeric oracle.
    """

    rules: List[Rule] = field(default_factory=lambda: list(DEFAULT_ORDER))
    expand: str = "auto"
    budget: int = DEFAULT_BUDGET
    max_steps: int = 100000
    debug: bool = False

    def __post_init__(self):
        self.rules = [Rule.parse(r) if isinstance(r, str) else Rule(r) for r in self.rules]
        if self.expand not in EXPAND_POLICIES:
            raise SchemaViolation("$.expand", f"must be one of {EXPAND_POLICIES}")
        if not isinstance(self.budget, int) or self.budget < 1:
            raise SchemaViolation("$.budget", "must be an integer >= 1")

    def to_json(self) -> dict:
        return {"rules": [r.value for r in self.rules], "expand": self.expand, "budget": self.budget}

    @classmethod
    def from_json(cls, doc) -> "Strategy":
        if not isinstance(doc, dict):
            raise SchemaViolation("$", "strategy must be an object")
        unknown = set(doc) - {"rules", "expand", "budget"}
        if unknown:
            raise SchemaViolation("$", f"unknown keys {sorted(unknown)}")
        kw = {}
        if "rules" in doc:
            if isinstance(doc["rules"], str):
                kw["rules"] = parse_rules(doc["rules"])
            elif isinstance(doc["rules"], list):
                try:
                    kw["rules"] = [Rule.parse(r) for r in doc["rules"]]
                except (ValueError, TypeError) as exc:
                    raise SchemaViolation("$.rules", str(exc)) from None
            else:
                raise SchemaViolation("$.rules", "must be a list of rule ids")
        if "expand" in doc:
            kw["expand"] = doc["expand"]
        if "budget" in doc:
            kw["budget"] = doc["budget"]
        return cls(**kw)

    @classmethod
    def loads(cls, text: str) -> "Strategy":
        return cls.from_json(json.loads(text))


# -- coefficient arithmetic in a fixed trig basis ----------------------------

def phase_bases(d: Diagram) -> Dict[str, Fraction]:
    """Per-parameter gcd of all coefficients in the phases and scalar of ``d``."""
    coeffs: Dict[str, list] = {}
    for v in d.spiders():
        for name, c in d.phase(v).terms:
            coeffs.setdefault(name, []).append(c)
    for (_, atoms) in d.scalar._terms:
        for _, arg in atoms:
            for name, c in arg.terms:
                coeffs.setdefault(name, []).append(c)
    return {n: _rational_gcd(cs) for n, cs in coeffs.items()}


def output_bases(bases: Dict[str, Fraction]) -> Dict[str, Fraction]:
    """Unit angles where possible: gcd of each base with 1."""
    return {n: _rational_gcd([b, Fraction(1)]) for n, b in bases.items()}


class _Coeffs:
    def __init__(self, bases: Dict[str, Fraction]):
        self.bases = bases

    def norm(self, e: ScalarExpr) -> ScalarExpr:
        return trig_normal_form(e, self.bases) if not e.is_constant else e

    def mul(self, a: ScalarExpr, b: ScalarExpr) -> ScalarExpr:
        """Product of two normal forms is normal after sin^2 reduction."""
        return _reduce_sin_squares(a * b)


# -- expansion site choice -------------------------------------------------------

def _param_spiders(d: Diagram) -> List[int]:
    return [v for v in d.spiders() if not d.phase(v).is_constant]


def choose_site(d: Diagram, policy: str = "auto") -> Optional[Tuple[str, int]]:
    """``("gadget", hub)`` or ``("spider", v)`` to split next, or None."""
    params = _param_spiders(d)
    if not params:
        return None
    if policy == "all":
        return ("spider", params[0])
    for v in params:
        if d.kind(v) == X:
            return ("spider", v)
    for v in params:
        if d.kind(v) == Z and d.degree(v) == 1:
            (h,) = d.neighbors(v)
            g = gadget_at(d, h)
            if g is not None and g[0] == v and d.phase(h).is_constant:
                ph = d.phase(h).pi
                if ph in (0, 1):
                    return ("gadget", h)
    return ("spider", params[0])


def expand_site(d: Diagram, site: Tuple[str, int]) -> LinComb:
    kind, v = site
    if kind == "gadget":
        return decompose_phase_gadget(v, d)
    return decompose_spider(v, d)


# -- pipeline ------------------------------------------------------------------------

@dataclass
class EvaluationReport:
    value: ScalarExpr
    terms_expanded: int
    terms_contracted: int


def _debug_check(before: Diagram, coeff: ScalarExpr, lc: LinComb) -> None:
    from .oracle import semantics
    from .scalar import random_bindings
    names = sorted(before.params() | lc.params() | coeff.params())
    for b in random_bindings(names, 4, seed=7):
        want = complex(coeff.eval(b)) * complex(semantics(before, b))
        got = complex(coeff.eval(b)) * complex(semantics(lc, b))
        if abs(want - got) > 1e-9 * max(1.0, abs(want)):
            raise AssertionError(f"expansion changed the value: {want} vs {got}")


def evaluate_report(d: Diagram, s: Optional[Strategy] = None) -> EvaluationReport:
    s = s or Strategy()
    if not d.is_closed:
        raise NotClosed(f"expectation diagram has arity {d.arity}")
    bases = phase_bases(d)
    cf = _Coeffs(bases)
    # pending terms keyed by canonical form: identical diagrams reached along
    # different branches are merged and expanded once
    pending: "OrderedDict[object, List]" = OrderedDict()
    fresh = itertools.count()

    def push(coeff: ScalarExpr, t: Diagram) -> None:
        # fold each rule's scalar into the coefficient as it appears, which
        # keeps every intermediate product in normal form and small
        coeff = cf.mul(coeff, cf.norm(t.scalar))
        t.scalar = ONE
        for _ in range(s.max_steps):
            m = first_match(t, s.rules)
            if m is None:
                break
            apply_inplace(t, m)
            if not t.scalar.is_one():
                coeff = cf.mul(coeff, cf.norm(t.scalar))
                t.scalar = ONE
                if coeff.is_zero:
                    return
        if coeff.is_zero:
            return
        key = canonical_form(t)
        if key is None:
            key = ("unique", next(fresh))
        slot = pending.get(key)
        if slot is None:
            pending[key] = [coeff, t]
        else:
            slot[0] = slot[0] + coeff

    start = d.copy()
    start.scalar = ONE
    push(cf.norm(d.scalar), start)
    total = ZERO
    generated = 1
    contracted = 0
    while pending:
        _, (coeff, t) = pending.popitem(last=False)
        if coeff.is_zero:
            continue
        site = choose_site(t, s.expand)
        if site is None:
            total = total + cf.mul(coeff, exact_contract(t))
            contracted += 1
            continue
        lc = expand_site(t, site)
        if s.debug:
            _debug_check(t, ONE, lc)
        generated += len(lc) - 1
        if generated > s.budget:
            raise TermBudgetExceeded(generated, s.budget)
        for k, dd in lc.terms:
            push(cf.mul(coeff, cf.norm(k)), dd)
    total = _reduce_sin_squares(total)
    return EvaluationReport(trig_normal_form(total, output_bases(bases)), generated, contracted)


def evaluate_expectation(d: Diagram, s: Optional[Strategy] = None) -> ScalarExpr:
    """Value of the closed diagram ``d`` as a canonical trigonometric polynomial."""
    return evaluate_report(d, s).value


def edge_diagram(g, a, edge: Tuple[int, int], lightcone: bool = False) -> Diagram:
    """Closed ``<Z_u Z_v>`` diagram, optionally restricted to the edge's causal cone.

    For QAOA the cone is :func:`~zxpqc.pqc.lightcone_reduce` at depth ``p``;
    for a product ansatz it is the two observed qubits.
    """
    from .pqc import ObservableTerm, build_state, expectation_diagram, lightcone_reduce
    from .problem import QAOA, ProblemGraph, RyProduct, check_arity
    u, v = edge
    g.check_edge(u, v)
    check_arity(g, a)
    if lightcone and isinstance(a, QAOA):
        g, qmap = lightcone_reduce(g, edge, a.p)
        u, v = qmap[u], qmap[v]
    elif lightcone and isinstance(a, RyProduct):
        a = RyProduct(2, (a.names[u], a.names[v]))
        g, u, v = ProblemGraph.from_edges(2, [(0, 1)]), 0, 1
    return expectation_diagram(build_state(g, a), ObservableTerm(ONE, (u, v)))


def edge_expectation(g, a, edge: Tuple[int, int], lightcone: bool = False,
                     s: Optional[Strategy] = None) -> ScalarExpr:
    """Symbolic ``<Z_u Z_v>`` for ansatz ``a`` on graph ``g``."""
    return evaluate_expectation(edge_diagram(g, a, edge, lightcone), s)


def cost_expectation(g, zz: Sequence[ScalarExpr]) -> ScalarExpr:
    """``<C> = |E|/2 - 1/2 sum <Z_u Z_v>`` from per-edge expressions."""
    total = ScalarExpr.const(Fraction(g.m, 2))
    for e in zz:
        total = total - e.scale(Fraction(1, 2))
    return _reduce_sin_squares(total)
