"""Exact contraction of closed diagrams whose phases are multiples of pi/2.

The state sum over edge bits is reorganised before it is evaluated:

* every connected cluster of Z spiders shares one bit, weighted by i^K where
  K*pi/2 is the cluster's total phase;
* an X spider of phase k*pi/2 contributes 1 + i^k (-1)^parity, written as a sum
  over an auxiliary bit y with weight i^(k*y) and coupling (-1)^(y*bit) to each
  incident bit (multiplicity mod 2);
* an edge between two X spiders is its own free bit;
* normalisation 2^(-deg/2) of all X spiders is collected as a power of sqrt 2.

The resulting sum of products of unary weights and pairwise signs is evaluated
by variable elimination over Gaussian integers, so the result is exact.
"""
from __future__ import annotations

from typing import Dict, List, Tuple

import numpy as np

from .diagram import X, Z, Diagram
from .errors import NotClosed, UnsupportedPhase
from .scalar import ScalarExpr

# i^k as (re, im)
_I_POW = ((1, 0), (0, 1), (-1, 0), (0, -1))


def quarter_turns(d: Diagram, v: int) -> int:
    ph = d.phase(v)
    if not ph.is_constant:
        raise UnsupportedPhase(v, ph)
    k = ph.pi * 2
    if k.denominator != 1:
        raise UnsupportedPhase(v, ph)
    return int(k) % 4


class _Factor:
    __slots__ = ("vars", "re", "im")

    def __init__(self, vars_, re, im):
        self.vars = tuple(vars_)
        self.re = re
        self.im = im


def _align(f: _Factor, target: Tuple[int, ...]):
    order = sorted(range(len(f.vars)), key=lambda i: target.index(f.vars[i]))
    re = np.transpose(f.re, order) if f.vars else f.re
    im = np.transpose(f.im, order) if f.vars else f.im
    shape = [2 if v in f.vars else 1 for v in target]
    return np.asarray(re).reshape(shape), np.asarray(im).reshape(shape)


def _multiply(factors: List[_Factor], dtype) -> _Factor:
    target = tuple(sorted({v for f in factors for v in f.vars}))
    re = np.ones([1] * len(target), dtype=dtype)
    im = np.zeros([1] * len(target), dtype=dtype)
    for f in factors:
        a, b = _align(f, target)
        re, im = re * a - im * b, re * b + im * a
    shape = [2] * len(target)
    return _Factor(target, np.broadcast_to(re, shape).copy(), np.broadcast_to(im, shape).copy())


def _sum_out(f: _Factor, v: int) -> _Factor:
    ax = f.vars.index(v)
    re, im = f.re.sum(axis=ax), f.im.sum(axis=ax)
    return _Factor(f.vars[:ax] + f.vars[ax + 1:], np.asarray(re, dtype=f.re.dtype),
                   np.asarray(im, dtype=f.im.dtype))


def _eliminate(factors: List[_Factor], n_vars: int) -> Tuple[int, int]:
    dtype = np.int64 if n_vars < 60 else object
    for f in factors:
        f.re = np.asarray(f.re, dtype=dtype)
        f.im = np.asarray(f.im, dtype=dtype)
    remaining = set(v for f in factors for v in f.vars)
    while remaining:
        # min-degree heuristic on the interaction graph
        nbrs: Dict[int, set] = {v: set() for v in remaining}
        for f in factors:
            for v in f.vars:
                nbrs[v].update(f.vars)
        v = min(remaining, key=lambda u: (len(nbrs[u]), u))
        touching = [f for f in factors if v in f.vars]
        rest = [f for f in factors if v not in f.vars]
        g = _sum_out(_multiply(touching, dtype), v)
        factors = rest + [g]
        remaining.discard(v)
    out = _multiply(factors, dtype) if factors else _Factor((), np.array(1), np.array(0))
    return int(out.re.reshape(())), int(out.im.reshape(()))


def contract_value(d: Diagram) -> Tuple[int, int, int]:
    """``(a, b, k)`` with the diagram tensor (without its scalar) = (a + b i) * sqrt(2)^k."""
    if not d.is_closed:
        raise NotClosed(f"diagram has {len(d.inputs)} inputs and {len(d.outputs)} outputs")
    spiders = d.spiders()
    turns = {v: quarter_turns(d, v) for v in spiders}

    parent = {v: v for v in spiders if d.kind(v) == Z}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for u, v in d.edges():
        if u != v and d.kind(u) == Z and d.kind(v) == Z:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)

    var_of_comp: Dict[int, int] = {}
    unary: Dict[int, int] = {}  # variable -> quarter turns of its weight (i^k at bit 1)
    n = 0
    for v in spiders:
        if d.kind(v) == Z:
            r = find(v)
            if r not in var_of_comp:
                var_of_comp[r] = n
                unary[n] = 0
                n += 1
            unary[var_of_comp[r]] = (unary[var_of_comp[r]] + turns[v]) % 4
    aux: Dict[int, int] = {}
    parity: Dict[int, Dict[int, int]] = {}
    sqrt2 = 0
    doubling = 0
    for v in spiders:
        if d.kind(v) == X:
            aux[v] = n
            unary[n] = turns[v]
            parity[v] = {}
            n += 1
            sqrt2 -= d.degree(v)
    for u, v in d.edges():
        ku, kv = d.kind(u), d.kind(v)
        if u == v:
            if ku == X:
                doubling += 1  # free loop bit, cancels in the parity
            continue
        if ku == Z and kv == Z:
            continue
        if ku == X and kv == X:
            e = n
            unary[e] = 0
            n += 1
            for x in (u, v):
                parity[x][e] = parity[x].get(e, 0) + 1
            continue
        z, x = (u, v) if ku == Z else (v, u)
        c = var_of_comp[find(z)]
        parity[x][c] = parity[x].get(c, 0) + 1

    factors: List[_Factor] = []
    for var, k in unary.items():
        re1, im1 = _I_POW[k]
        factors.append(_Factor((var,), [1, re1], [0, im1]))
    sign = [[1, 1], [1, -1]]
    zero = [[0, 0], [0, 0]]
    for x, inc in parity.items():
        y = aux[x]
        for var, cnt in inc.items():
            if cnt % 2:
                factors.append(_Factor((y, var), sign, zero))
    a, b = _eliminate(factors, n)
    return a * (1 << doubling), b * (1 << doubling), sqrt2


def exact_contract(d: Diagram) -> ScalarExpr:
    """Exact value of a closed diagram with pi/2-multiple phases, scalar included."""
    a, b, k = contract_value(d)
    if a == 0 and b == 0:
        return ScalarExpr()
    return ScalarExpr.const(a, b).sqrt2_pow(k) * d.scalar
