"""Scalar-exact local rewrite rules.

Every rule updates the diagram's global scalar so that the tensor it denotes is
unchanged, not merely proportional.  Scalars used below (k is the number of
legs involved, alpha the phase of the spider being pushed through):

* fusion, identity removal, self-loop removal: 1
* isolated spider with phase alpha: 1 + e^{i alpha}
* pi-commutation: e^{i alpha}
* state copy: sqrt(2)**(1 - k), times e^{i alpha} for a pi state
* Hopf (two parallel Z-X edges removed): 1/2
* bialgebra on an m x n core: sqrt(2)**(-(m - 1)(n - 1))
* gadget fusion on k legs: sqrt(2)**(1 - k)
* gadget with a pi hub and phase theta: e^{i theta}, phase negated

``find_matches(d, rule, auto=True)`` restricts every rule to a subset that
strictly decreases (edges, vertices, pi hubs) once fusion has been applied, so
``simplify_fixpoint`` always terminates.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .diagram import X, Z, Diagram, opposite
from .errors import NotAGadget, StaleMatch
from .scalar import ONE, LinearPhase, ScalarExpr, exp_i_phase

PI = LinearPhase(1)
HALF = ScalarExpr.const(Fraction(1, 2))


class Rule(str, enum.Enum):
    FUSE = "f"
    IDENTITY = "id"
    PI = "pi"
    COPY = "c"
    BIALGEBRA = "b"
    HOPF = "h"
    GADGET_FUSE = "gf"
    GADGET_PI = "gpi"

    @classmethod
    def parse(cls, name: str) -> "Rule":
        name = name.strip()
        for r in cls:
            if name == r.value or name.upper() == r.name:
                return r
        raise ValueError(f"unknown rule {name!r}")


DEFAULT_ORDER = [Rule.IDENTITY, Rule.FUSE, Rule.PI, Rule.COPY, Rule.HOPF,
                 Rule.BIALGEBRA, Rule.GADGET_FUSE, Rule.GADGET_PI]


def parse_rules(text: str) -> List[Rule]:
    return [Rule.parse(p) for p in text.split(",") if p.strip()]


@dataclass(frozen=True)
class Match:
    """A rule site.  ``split`` separates the Z and X halves of a bialgebra core."""

    rule: Rule
    site: Tuple[int, ...]
    split: int = 0


def _is_pi(ph: LinearPhase) -> bool:
    return ph == PI


def _is_pauli(ph: LinearPhase) -> bool:
    return ph.is_constant and ph.pi in (0, 1)


# -- gadget recognition -------------------------------------------------------

def gadget_at(d: Diagram, h: int) -> Optional[Tuple[int, Tuple[int, ...]]]:
    """``(phase_hub, legs)`` if ``h`` is the X hub of a phase gadget.

    A gadget hub is an X spider joined by single edges to one degree-1 Z spider
    (the phase hub) and to at least one further Z spider (the legs).  When
    several degree-1 Z neighbours qualify, a parameterized one is preferred,
    then the smallest id.
    """
    if h not in d or d.kind(h) != X or d.self_loops(h):
        return None
    inc = d.incident(h)
    for w, c in inc.items():
        if c != 1 or d.kind(w) != Z:
            return None
    cands = [w for w in inc if d.degree(w) == 1]
    if not cands:
        return None
    cands.sort(key=lambda w: (d.phase(w).is_constant, w))
    ph = cands[0]
    legs = tuple(sorted(w for w in inc if w != ph))
    if not legs:
        return None
    return ph, legs


def _require_gadget(d: Diagram, h: int):
    g = gadget_at(d, h)
    if g is None:
        raise NotAGadget(f"vertex {h} is not a phase-gadget hub")
    return g


# -- predicates ---------------------------------------------------------------

def _check_fuse(d: Diagram, site, auto) -> bool:
    a, b = site
    if a not in d or b not in d or not d.is_spider(a):
        return False
    if a == b:
        return d.self_loops(a) > 0
    return a < b and d.kind(a) == d.kind(b) and d.edge_count(a, b) > 0


def _check_identity(d: Diagram, site, auto) -> bool:
    (v,) = site
    if v not in d or not d.is_spider(v) or d.self_loops(v):
        return False
    deg = d.degree(v)
    if deg == 0:
        return True
    if deg != 2 or not d.phase(v).is_zero:
        return False
    nbrs = d.neighbors(v)
    return not all(d.is_boundary(w) for w in nbrs)


def _pi_ends(d: Diagram, p: int):
    """Neighbours of a degree-2, loop-free spider as a list of two ids."""
    inc = d.incident(p)
    if p in inc:
        return None
    ends = []
    for w, c in inc.items():
        ends.extend([w] * c)
    return ends if len(ends) == 2 else None


def _check_pi(d: Diagram, site, auto) -> bool:
    p, s = site
    if p not in d or s not in d or not d.is_spider(p) or not d.is_spider(s):
        return False
    if not _is_pi(d.phase(p)) or d.kind(s) != opposite(d.kind(p)):
        return False
    ends = _pi_ends(d, p)
    if ends is None or ends.count(s) != 1 or d.self_loops(s):
        return False
    if auto and d.degree(s) > 1:
        k = d.kind(p)
        for w in d.incident(s):
            if w != p and (d.kind(w) != k):
                return False
    return True


def _check_copy(d: Diagram, site, auto) -> bool:
    c, s = site
    if c not in d or s not in d or not d.is_spider(c) or not d.is_spider(s):
        return False
    if d.degree(c) != 1 or d.self_loops(c) or not _is_pauli(d.phase(c)):
        return False
    return d.edge_count(c, s) == 1 and d.kind(s) == opposite(d.kind(c)) and not d.self_loops(s)


def _check_hopf(d: Diagram, site, auto) -> bool:
    z, x = site
    if z not in d or x not in d:
        return False
    return d.kind(z) == Z and d.kind(x) == X and d.edge_count(z, x) >= 2


def _check_bialgebra(d: Diagram, site, split, auto) -> bool:
    zs, xs = site[:split], site[split:]
    if len(zs) < 2 or len(xs) < 2:
        return False
    core = set(site)
    if len(core) != len(site):
        return False
    for v in site:
        if v not in d or not d.is_spider(v) or not d.phase(v).is_zero or d.self_loops(v):
            return False
    for z in zs:
        if d.kind(z) != Z or d.degree(z) != len(xs) + 1:
            return False
        if any(d.edge_count(z, x) != 1 for x in xs):
            return False
        if not any(w not in core for w in d.incident(z)):
            return False
    for x in xs:
        if d.kind(x) != X or d.degree(x) != len(zs) + 1:
            return False
        if not any(w not in core for w in d.incident(x)):
            return False
    return True


def _check_gadget_fuse(d: Diagram, site, auto) -> bool:
    h1, h2 = site
    if h1 >= h2:
        return False
    g1, g2 = gadget_at(d, h1), gadget_at(d, h2)
    if g1 is None or g2 is None:
        return False
    if not d.phase(h1).is_zero or not d.phase(h2).is_zero:
        return False
    return g1[1] == g2[1]


def _wire_pi_leg(d: Diagram, q: int, legs: Sequence[int], hub: int) -> Optional[int]:
    if q not in d or d.kind(q) != X or not _is_pi(d.phase(q)):
        return None
    ends = _pi_ends(d, q)
    if ends is None or hub in ends:
        return None
    on_legs = [w for w in ends if w in legs]
    if len(on_legs) != 1 or d.self_loops(on_legs[0]):
        return None
    return on_legs[0]


def _check_gadget_pi(d: Diagram, site, auto) -> bool:
    h = site[0]
    g = gadget_at(d, h)
    if g is None:
        return False
    if len(site) == 1:
        return _is_pi(d.phase(h))
    if auto:
        return False
    legs = g[1]
    used = set()
    for q in site[1:]:
        leg = _wire_pi_leg(d, q, legs, h)
        if leg is None or leg in used:
            return False
        used.add(leg)
    return True


# -- enumeration ----------------------------------------------------------------

def _iter_fuse(d: Diagram, auto: bool) -> Iterator[Match]:
    for a in d.spiders():
        inc = d.incident(a)
        if a in inc:
            yield Match(Rule.FUSE, (a, a))
        ka = d.kind(a)
        for b in sorted(inc):
            if b > a and d.kind(b) == ka:
                yield Match(Rule.FUSE, (a, b))


def _iter_identity(d: Diagram, auto: bool) -> Iterator[Match]:
    for v in d.spiders():
        if _check_identity(d, (v,), auto):
            yield Match(Rule.IDENTITY, (v,))


def _iter_pi(d: Diagram, auto: bool) -> Iterator[Match]:
    for p in d.spiders():
        if not _is_pi(d.phase(p)) or d.degree(p) != 2:
            continue
        for s in d.neighbors(p):
            if _check_pi(d, (p, s), auto):
                yield Match(Rule.PI, (p, s))


def _iter_copy(d: Diagram, auto: bool) -> Iterator[Match]:
    for c in d.spiders():
        if d.degree(c) != 1 or not _is_pauli(d.phase(c)):
            continue
        for s in d.neighbors(c):
            if _check_copy(d, (c, s), auto):
                yield Match(Rule.COPY, (c, s))


def _iter_hopf(d: Diagram, auto: bool) -> Iterator[Match]:
    for z in d.spiders():
        if d.kind(z) != Z:
            continue
        for x, c in sorted(d.incident(z).items()):
            if c >= 2 and d.kind(x) == X:
                yield Match(Rule.HOPF, (z, x))


def _iter_bialgebra(d: Diagram, auto: bool) -> Iterator[Match]:
    seen = set()
    out = []
    for z in d.spiders():
        if d.kind(z) != Z or not d.phase(z).is_zero or d.self_loops(z):
            continue
        deg = d.degree(z)
        if deg < 3:
            continue
        xn = [x for x, c in d.incident(z).items()
              if c == 1 and d.kind(x) == X and d.phase(x).is_zero]
        if len(xn) < deg - 1:
            continue
        options = [xn] if len(xn) == deg - 1 else [[x for x in xn if x != e] for e in xn]
        for xs in options:
            if len(xs) < 2:
                continue
            common = None
            for x in xs:
                zn = {w for w, c in d.incident(x).items() if c == 1 and d.kind(w) == Z}
                common = zn if common is None else common & zn
            zs = sorted(w for w in common if d.phase(w).is_zero and d.degree(w) == len(xs) + 1)
            if len(zs) < 2:
                continue
            m = len(zs)
            xs_ok = [x for x in xs if d.degree(x) == m + 1]
            if len(xs_ok) != len(xs):
                continue
            site = tuple(zs) + tuple(sorted(xs))
            key = frozenset(site)
            if key in seen:
                continue
            seen.add(key)
            if _check_bialgebra(d, site, m, auto):
                out.append(Match(Rule.BIALGEBRA, site, m))
    out.sort(key=lambda mt: mt.site)
    return iter(out)


def _iter_gadget_fuse(d: Diagram, auto: bool) -> Iterator[Match]:
    by_legs: Dict[Tuple[int, ...], List[int]] = {}
    for h in d.spiders():
        if d.kind(h) != X or not d.phase(h).is_zero:
            continue
        g = gadget_at(d, h)
        if g is not None:
            by_legs.setdefault(g[1], []).append(h)
    out = []
    for hubs in by_legs.values():
        for i in range(len(hubs)):
            for j in range(i + 1, len(hubs)):
                out.append(Match(Rule.GADGET_FUSE, (hubs[i], hubs[j])))
    out.sort(key=lambda mt: mt.site)
    return iter(out)


def _iter_gadget_pi(d: Diagram, auto: bool) -> Iterator[Match]:
    for h in d.spiders():
        if d.kind(h) != X:
            continue
        g = gadget_at(d, h)
        if g is None:
            continue
        if _is_pi(d.phase(h)):
            yield Match(Rule.GADGET_PI, (h,))
        if auto:
            continue
        legs = g[1]
        qs = []
        for leg in legs:
            for q in d.neighbors(leg):
                if q != h and _wire_pi_leg(d, q, legs, h) == leg:
                    qs.append(q)
                    break
        if qs:
            yield Match(Rule.GADGET_PI, (h,) + tuple(sorted(qs)))


_ITER = {
    Rule.FUSE: _iter_fuse,
    Rule.IDENTITY: _iter_identity,
    Rule.PI: _iter_pi,
    Rule.COPY: _iter_copy,
    Rule.HOPF: _iter_hopf,
    Rule.BIALGEBRA: _iter_bialgebra,
    Rule.GADGET_FUSE: _iter_gadget_fuse,
    Rule.GADGET_PI: _iter_gadget_pi,
}


def find_matches(d: Diagram, rule: Rule, auto: bool = False) -> List[Match]:
    """All sites for ``rule`` in ``d``, sorted by site ids.

    ``auto`` restricts to the terminating subset used by ``simplify_fixpoint``.
    """
    rule = Rule(rule)
    return sorted(_ITER[rule](d, auto), key=lambda m: (m.site, m.split))


def is_valid(d: Diagram, m: Match, auto: bool = False) -> bool:
    r = m.rule
    if r == Rule.BIALGEBRA:
        return _check_bialgebra(d, m.site, m.split, auto)
    check = {
        Rule.FUSE: _check_fuse,
        Rule.IDENTITY: _check_identity,
        Rule.PI: _check_pi,
        Rule.COPY: _check_copy,
        Rule.HOPF: _check_hopf,
        Rule.GADGET_FUSE: _check_gadget_fuse,
        Rule.GADGET_PI: _check_gadget_pi,
    }[r]
    try:
        return check(d, m.site, auto)
    except (ValueError, KeyError):
        return False


# -- application (in place) ----------------------------------------------------

def _drop_loops(d: Diagram, v: int) -> None:
    loops = d.self_loops(v)
    if loops:
        d.remove_edge(v, v, loops)


def _apply_fuse(d: Diagram, m: Match) -> None:
    a, b = m.site
    if a != b:
        k = d.edge_count(a, b)
        d.remove_edge(a, b, k)
        for w, c in list(d.incident(b).items()):
            if w == b:
                d.add_edge(a, a, c)
            else:
                d.add_edge(a, w, c)
        d.set_phase(a, d.phase(a) + d.phase(b))
        d.remove_vertex(b)
    # a Z or X spider with a self-loop equals the spider without it, scalar 1
    _drop_loops(d, a)


def _apply_identity(d: Diagram, m: Match) -> None:
    (v,) = m.site
    if d.degree(v) == 0:
        d.scalar = d.scalar * (ONE + exp_i_phase(d.phase(v)))
        d.remove_vertex(v)
        return
    ends = _pi_ends(d, v)
    d.remove_vertex(v)
    a, b = ends
    d.add_edge(a, b)
    if a == b:
        _drop_loops(d, a)


def _push_pi(d: Diagram, p: int, s: int, fuse_into: Optional[str] = None) -> None:
    """Move the pi spider ``p`` through its neighbour ``s``.

    ``s`` gets phase -alpha, the scalar picks up e^{i alpha}, and a pi spider of
    p's colour lands on every other edge of ``s``.  With ``fuse_into`` set, copies
    that would sit next to a spider of that colour are added to its phase
    instead.
    """
    k = d.kind(p)
    ends = _pi_ends(d, p)
    t = ends[0] if ends[1] == s else ends[1]
    alpha = d.phase(s)
    others = [(w, c) for w, c in d.incident(s).items() if w != p]
    d.remove_vertex(p)
    d.set_phase(s, -alpha)
    d.scalar = d.scalar * exp_i_phase(alpha)
    for w, c in others:
        for _ in range(c):
            if fuse_into is not None and d.kind(w) == fuse_into:
                d.set_phase(w, d.phase(w) + PI)
                continue
            d.remove_edge(s, w)
            q = d.add_vertex(k, PI)
            d.add_edge(s, q)
            d.add_edge(q, w)
    d.add_edge(t, s)


def _apply_pi(d: Diagram, m: Match) -> None:
    p, s = m.site
    _push_pi(d, p, s)


def _apply_copy(d: Diagram, m: Match) -> None:
    c, s = m.site
    kind, ph = d.kind(c), d.phase(c)
    others = [(w, n) for w, n in d.incident(s).items() if w != c]
    k = d.degree(s) - 1
    factor = ScalarExpr.sqrt2(1 - k)
    if _is_pi(ph):
        factor = factor * exp_i_phase(d.phase(s))
    d.scalar = d.scalar * factor
    d.remove_vertex(c)
    d.remove_vertex(s)
    for w, n in others:
        for _ in range(n):
            q = d.add_vertex(kind, ph)
            d.add_edge(q, w)


def _apply_hopf(d: Diagram, m: Match) -> None:
    z, x = m.site
    d.remove_edge(z, x, 2)
    d.scalar = d.scalar * HALF


def _apply_bialgebra(d: Diagram, m: Match) -> None:
    zs, xs = m.site[:m.split], m.site[m.split:]
    core = set(m.site)
    ext = {}
    for v in m.site:
        (w,) = [w for w in d.incident(v) if w not in core]
        ext[v] = w
    nz, nx = len(zs), len(xs)
    for v in m.site:
        d.remove_vertex(v)
    new_z = d.add_vertex(Z)
    new_x = d.add_vertex(X)
    d.add_edge(new_z, new_x)
    for x in xs:
        d.add_edge(new_z, ext[x])
    for z in zs:
        d.add_edge(new_x, ext[z])
    d.scalar = d.scalar * ScalarExpr.sqrt2(-(nz - 1) * (nx - 1))


def _apply_gadget_fuse(d: Diagram, m: Match) -> None:
    h1, h2 = m.site
    ph1, legs = _require_gadget(d, h1)
    ph2, _ = _require_gadget(d, h2)
    d.set_phase(ph1, d.phase(ph1) + d.phase(ph2))
    d.remove_vertex(ph2)
    d.remove_vertex(h2)
    d.scalar = d.scalar * ScalarExpr.sqrt2(1 - len(legs))


def _flip_pi_hub(d: Diagram, h: int, ph: int) -> None:
    theta = d.phase(ph)
    d.set_phase(h, d.phase(h) + PI)
    d.set_phase(ph, -theta)
    d.scalar = d.scalar * exp_i_phase(theta)


def _apply_gadget_pi(d: Diagram, m: Match) -> None:
    h = m.site[0]
    ph, legs = _require_gadget(d, h)
    for q in m.site[1:]:
        leg = _wire_pi_leg(d, q, legs, h)
        # X(pi) copies on the leg's other edges fuse into adjacent X spiders,
        # which includes this gadget's hub
        _push_pi(d, q, leg, fuse_into=X)
    if _is_pi(d.phase(h)):
        _flip_pi_hub(d, h, ph)


_APPLY = {
    Rule.FUSE: _apply_fuse,
    Rule.IDENTITY: _apply_identity,
    Rule.PI: _apply_pi,
    Rule.COPY: _apply_copy,
    Rule.HOPF: _apply_hopf,
    Rule.BIALGEBRA: _apply_bialgebra,
    Rule.GADGET_FUSE: _apply_gadget_fuse,
    Rule.GADGET_PI: _apply_gadget_pi,
}


def apply_inplace(d: Diagram, m: Match) -> None:
    if not is_valid(d, m):
        raise StaleMatch(f"{m.rule.name} site {m.site} no longer matches")
    _APPLY[m.rule](d, m)


def apply(d: Diagram, m: Match) -> Diagram:
    """Rewrite a copy of ``d`` at ``m``; raises StaleMatch if the site is gone."""
    out = d.copy()
    apply_inplace(out, m)
    return out


def gadget_ops(d: Diagram, m: Match) -> Diagram:
    """Apply a GADGET_FUSE or GADGET_PI match; NotAGadget if the hub is not a gadget."""
    if m.rule not in (Rule.GADGET_FUSE, Rule.GADGET_PI):
        raise ValueError("gadget_ops takes GADGET_FUSE or GADGET_PI matches")
    for h in (m.site if m.rule == Rule.GADGET_FUSE else m.site[:1]):
        _require_gadget(d, h)
    return apply(d, m)


def push_pi_through_gadget(d: Diagram, hub: int, pis: Sequence[int]) -> Diagram:
    """Commute X(pi) spiders on the given gadget legs past the gadget."""
    _require_gadget(d, hub)
    return apply(d, Match(Rule.GADGET_PI, (hub,) + tuple(sorted(pis))))


# -- fixpoint driver -------------------------------------------------------------

@dataclass
class SimplifyResult:
    diagram: Diagram
    steps: int
    exhausted: bool


def first_match(d: Diagram, rules: Sequence[Rule]) -> Optional[Match]:
    for r in rules:
        for m in _ITER[r](d, True):
            return m
    return None


def simplify_inplace(d: Diagram, rules: Sequence[Rule] = DEFAULT_ORDER,
                     max_steps: int = 100000) -> Tuple[int, bool]:
    """Rewrite ``d`` in place; returns (steps taken, budget exhausted)."""
    steps = 0
    rules = [Rule(r) for r in rules]
    while steps < max_steps:
        m = first_match(d, rules)
        if m is None:
            return steps, False
        _APPLY[m.rule](d, m)
        steps += 1
    return steps, first_match(d, rules) is not None


def simplify_run(d: Diagram, rules: Optional[Sequence[Rule]] = None,
                 max_steps: int = 100000) -> SimplifyResult:
    if max_steps < 0:
        raise ValueError("max_steps must be non-negative")
    out = d.copy()
    steps, exhausted = simplify_inplace(out, DEFAULT_ORDER if rules is None else rules, max_steps)
    return SimplifyResult(out, steps, exhausted)


def simplify_fixpoint(d: Diagram, rules: Optional[Sequence[Rule]] = None,
                      max_steps: int = 100000) -> Diagram:
    """Apply the first available match in rule order until none is left."""
    return simplify_run(d, rules, max_steps).diagram
