"""Exact symbolic scalars.

A :class:`ScalarExpr` is a finite sum of monomials

    (a + b i) * sqrt(2)**k * prod(cos(L_j) or sin(L_j))

with Gaussian-rational coefficient, ``k`` in {0, 1} after folding powers of two
into the coefficient, and trigonometric atoms whose arguments are
:class:`LinearPhase` values.  ``e^{iL}`` never appears as an atom: it is
expanded to ``cos L + i sin L`` on construction.

Everything here is immutable; arithmetic returns fresh objects.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple, Union

import numpy as np

from .errors import MissingBinding, SchemaViolation

RationalLike = Union[int, Fraction, str]
Binding = Mapping[str, float]

_HALF = Fraction(1, 2)
_QUARTER = Fraction(1, 4)


def as_fraction(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def fraction_to_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _parse_fraction(s, path: str) -> Fraction:
    if not isinstance(s, str):
        raise SchemaViolation(path, f"expected rational string 'p/q', got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise SchemaViolation(path, f"malformed rational {s!r}") from None


class LinearPhase:
    """An angle ``pi_part * pi + sum(coeff * param)``.

    ``pi_part`` is kept modulo 2.  Parameter coefficients are exact rationals and
    are never reduced, since parameters range over all reals.
    """

    __slots__ = ("pi", "terms", "_hash")

    def __init__(self, pi: RationalLike = 0, terms: Optional[Mapping[str, RationalLike]] = None):
        p = as_fraction(pi) % 2
        items = []
        for name, c in (terms or {}).items():
            if not isinstance(name, str) or not name:
                raise ValueError(f"invalid parameter name {name!r}")
            c = as_fraction(c)
            if c:
                items.append((name, c))
        items.sort()
        self.pi: Fraction = p
        self.terms: Tuple[Tuple[str, Fraction], ...] = tuple(items)
        self._hash = hash((self.pi, self.terms))

    @classmethod
    def param(cls, name: str, coeff: RationalLike = 1, pi: RationalLike = 0) -> "LinearPhase":
        return cls(pi, {name: coeff})

    @classmethod
    def const(cls, pi: RationalLike) -> "LinearPhase":
        return cls(pi)

    @property
    def is_constant(self) -> bool:
        return not self.terms

    @property
    def is_zero(self) -> bool:
        return not self.terms and self.pi == 0

    def params(self) -> set:
        return {name for name, _ in self.terms}

    def coeff(self, name: str) -> Fraction:
        for n, c in self.terms:
            if n == name:
                return c
        return Fraction(0)

    def constant_part(self) -> "LinearPhase":
        return LinearPhase(self.pi)

    def param_part(self) -> "LinearPhase":
        return LinearPhase(0, dict(self.terms))

    def __add__(self, other: "LinearPhase") -> "LinearPhase":
        if not isinstance(other, LinearPhase):
            return NotImplemented
        d: Dict[str, Fraction] = dict(self.terms)
        for n, c in other.terms:
            d[n] = d.get(n, 0) + c
        return LinearPhase(self.pi + other.pi, d)

    def __neg__(self) -> "LinearPhase":
        return LinearPhase(-self.pi, {n: -c for n, c in self.terms})

    def __sub__(self, other: "LinearPhase") -> "LinearPhase":
        return self + (-other)

    def __mul__(self, k: RationalLike) -> "LinearPhase":
        k = as_fraction(k)
        return LinearPhase(self.pi * k, {n: c * k for n, c in self.terms})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, LinearPhase) and self.pi == other.pi and self.terms == other.terms

    def __hash__(self) -> int:
        return self._hash

    def sort_key(self) -> tuple:
        return (self.terms, self.pi)

    def value(self, binding: Binding):
        v = float(self.pi) * math.pi
        for name, c in self.terms:
            try:
                x = binding[name]
            except KeyError:
                raise MissingBinding(name) from None
            v = v + float(c) * x
        return v

    def __str__(self) -> str:
        parts = []
        for name, c in self.terms:
            parts.append(_coeff_str(c, name))
        if self.pi:
            parts.append(_coeff_str(self.pi, "pi"))
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self) -> str:
        return f"LinearPhase({self})"

    def to_json(self) -> dict:
        return {
            "pi": fraction_to_str(self.pi),
            "params": {n: fraction_to_str(c) for n, c in self.terms},
        }

    @classmethod
    def from_json(cls, doc, path: str = "$") -> "LinearPhase":
        if not isinstance(doc, dict):
            raise SchemaViolation(path, "phase must be an object")
        unknown = set(doc) - {"pi", "params"}
        if unknown:
            raise SchemaViolation(path, f"unknown keys {sorted(unknown)}")
        pi = _parse_fraction(doc.get("pi", "0/1"), path + ".pi")
        params = doc.get("params", {})
        if not isinstance(params, dict):
            raise SchemaViolation(path + ".params", "must be an object")
        terms = {}
        for name, c in params.items():
            if not name:
                raise SchemaViolation(path + ".params", "empty parameter name")
            terms[name] = _parse_fraction(c, f"{path}.params.{name}")
        return cls(pi, terms)


def _coeff_str(c: Fraction, sym: str) -> str:
    if c == 1:
        return sym
    if c == -1:
        return "-" + sym
    if c.denominator == 1:
        return f"{c.numerator}*{sym}"
    if c.numerator == 1:
        return f"{sym}/{c.denominator}"
    if c.numerator == -1:
        return f"-{sym}/{c.denominator}"
    return f"{c.numerator}*{sym}/{c.denominator}"


class Gauss:
    """Gaussian rational ``re + i*im``."""

    __slots__ = ("re", "im")

    def __init__(self, re: RationalLike = 0, im: RationalLike = 0):
        self.re = as_fraction(re)
        self.im = as_fraction(im)

    def __add__(self, o: "Gauss") -> "Gauss":
        return Gauss(self.re + o.re, self.im + o.im)

    def __sub__(self, o: "Gauss") -> "Gauss":
        return Gauss(self.re - o.re, self.im - o.im)

    def __mul__(self, o: "Gauss") -> "Gauss":
        return Gauss(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    def scale(self, k: Fraction) -> "Gauss":
        return Gauss(self.re * k, self.im * k)

    def __neg__(self) -> "Gauss":
        return Gauss(-self.re, -self.im)

    def conjugate(self) -> "Gauss":
        return Gauss(self.re, -self.im)

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, o) -> bool:
        return isinstance(o, Gauss) and self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        return f"Gauss({self.re}, {self.im})"


ONE_G = Gauss(1)
I_G = Gauss(0, 1)

# powers of i as Gaussian integers, indexed mod 4
I_POWERS = (Gauss(1), Gauss(0, 1), Gauss(-1), Gauss(0, -1))

Atom = Tuple[str, LinearPhase]
MonoKey = Tuple[int, Tuple[Atom, ...]]


def _atom_key(a: Atom):
    return (a[0], a[1].sort_key())


def _merge_atoms(a: Tuple[Atom, ...], b: Tuple[Atom, ...]) -> Tuple[Atom, ...]:
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b, key=_atom_key))


class ScalarExpr:
    """Exact symbolic complex number; see module docstring for the shape."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[MonoKey, Gauss]] = None):
        self._terms: Dict[MonoKey, Gauss] = {}
        if terms:
            for k, c in terms.items():
                if c:
                    self._terms[k] = c
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def _raw(cls, terms: Dict[MonoKey, Gauss]) -> "ScalarExpr":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, re: RationalLike = 0, im: RationalLike = 0) -> "ScalarExpr":
        return cls({(0, ()): Gauss(re, im)})

    @classmethod
    def gauss(cls, g: Gauss) -> "ScalarExpr":
        return cls({(0, ()): g})

    @classmethod
    def sqrt2(cls, k: int = 1) -> "ScalarExpr":
        """``sqrt(2)**k`` for any integer ``k``."""
        q, r = divmod(int(k), 2)
        c = Fraction(2) ** q
        return cls({(r, ()): Gauss(c)})

    @classmethod
    def cos(cls, arg: LinearPhase) -> "ScalarExpr":
        return _atom("cos", arg)

    @classmethod
    def sin(cls, arg: LinearPhase) -> "ScalarExpr":
        return _atom("sin", arg)

    # -- inspection ---------------------------------------------------------

    def monomials(self) -> Iterator[Tuple[Gauss, int, Tuple[Atom, ...]]]:
        for (k, atoms), c in self._terms.items():
            yield c, k, atoms

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_constant(self) -> bool:
        return all(not atoms for (_, atoms) in self._terms)

    def params(self) -> set:
        out = set()
        for (_, atoms) in self._terms:
            for _, arg in atoms:
                out |= arg.params()
        return out

    def constant_value(self) -> complex:
        if not self.is_constant:
            raise ValueError("expression has trigonometric atoms")
        return complex(self.eval({}))

    def exact_constant(self) -> Optional[Tuple[Gauss, Gauss]]:
        """``(a, b)`` with value ``a + b*sqrt(2)`` when atom-free, else None."""
        if not self.is_constant:
            return None
        a = self._terms.get((0, ()), Gauss())
        b = self._terms.get((1, ()), Gauss())
        return a, b

    def is_one(self) -> bool:
        return len(self._terms) == 1 and self._terms.get((0, ())) == ONE_G

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other) -> "ScalarExpr":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        terms = dict(self._terms)
        for k, c in other._terms.items():
            s = terms.get(k)
            if s is None:
                terms[k] = c
            else:
                s = s + c
                if s:
                    terms[k] = s
                else:
                    del terms[k]
        return ScalarExpr._raw(terms)

    __radd__ = __add__

    def __neg__(self) -> "ScalarExpr":
        return ScalarExpr._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> "ScalarExpr":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "ScalarExpr":
        return (-self) + other

    def __mul__(self, other) -> "ScalarExpr":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if not self._terms or not other._terms:
            return ZERO
        if other.is_one():
            return self
        if self.is_one():
            return other
        terms: Dict[MonoKey, Gauss] = {}
        for (k1, a1), c1 in self._terms.items():
            for (k2, a2), c2 in other._terms.items():
                c = c1 * c2
                k = k1 + k2
                if k == 2:
                    c = c.scale(Fraction(2))
                    k = 0
                key = (k, _merge_atoms(a1, a2))
                s = terms.get(key)
                if s is None:
                    terms[key] = c
                else:
                    s = s + c
                    if s:
                        terms[key] = s
                    else:
                        del terms[key]
        return ScalarExpr._raw(terms)

    __rmul__ = __mul__

    def __truediv__(self, k) -> "ScalarExpr":
        k = as_fraction(k)
        return self.scale(1 / k)

    def scale(self, k: RationalLike) -> "ScalarExpr":
        k = as_fraction(k)
        if not k:
            return ZERO
        return ScalarExpr._raw({key: c.scale(k) for key, c in self._terms.items()})

    def times_gauss(self, g: Gauss) -> "ScalarExpr":
        if not g:
            return ZERO
        return ScalarExpr._raw({key: c * g for key, c in self._terms.items()})

    def sqrt2_pow(self, k: int) -> "ScalarExpr":
        return self * ScalarExpr.sqrt2(k)

    def __pow__(self, n: int) -> "ScalarExpr":
        if n < 0:
            raise ValueError("negative powers are not supported")
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self) -> "ScalarExpr":
        """Complex conjugate, valid for real parameter values."""
        return ScalarExpr._raw({k: c.conjugate() for k, c in self._terms.items()})

    def real_part(self) -> "ScalarExpr":
        return ScalarExpr({k: Gauss(c.re) for k, c in self._terms.items()})

    def imag_part(self) -> "ScalarExpr":
        return ScalarExpr({k: Gauss(c.im) for k, c in self._terms.items()})

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is None:
            return False
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- evaluation ---------------------------------------------------------

    def eval(self, binding: Binding = None):
        """Numeric value.  Binding values may be floats or numpy arrays."""
        binding = binding or {}
        total = 0j
        cache: Dict[Atom, object] = {}
        for (k, atoms), c in self._terms.items():
            term = complex(c) * (math.sqrt(2) if k else 1.0)
            for atom in atoms:
                v = cache.get(atom)
                if v is None:
                    x = atom[1].value(binding)
                    v = np.cos(x) if atom[0] == "cos" else np.sin(x)
                    cache[atom] = v
                term = term * v
            total = total + term
        return total

    # -- rendering / serialization --------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = [_mono_str(c, k, atoms) for (k, atoms), c in sorted(self._terms.items(), key=_mono_sort)]
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self) -> str:
        return f"ScalarExpr({self})"

    def to_json(self) -> dict:
        monos = []
        for (k, atoms), c in sorted(self._terms.items(), key=_mono_sort):
            monos.append({
                "re": fraction_to_str(c.re),
                "im": fraction_to_str(c.im),
                "sqrt2": k,
                "atoms": [{"fn": fn, "arg": arg.to_json()} for fn, arg in atoms],
            })
        return {"monomials": monos}

    @classmethod
    def from_json(cls, doc, path: str = "$") -> "ScalarExpr":
        if not isinstance(doc, dict) or "monomials" not in doc:
            raise SchemaViolation(path, "scalar must be an object with 'monomials'")
        monos = doc["monomials"]
        if not isinstance(monos, list):
            raise SchemaViolation(path + ".monomials", "must be a list")
        out = ZERO
        for i, m in enumerate(monos):
            p = f"{path}.monomials[{i}]"
            if not isinstance(m, dict):
                raise SchemaViolation(p, "monomial must be an object")
            re = _parse_fraction(m.get("re", "0/1"), p + ".re")
            im = _parse_fraction(m.get("im", "0/1"), p + ".im")
            k = m.get("sqrt2", 0)
            if not isinstance(k, int) or isinstance(k, bool):
                raise SchemaViolation(p + ".sqrt2", "must be an integer")
            atoms = m.get("atoms", [])
            if not isinstance(atoms, list):
                raise SchemaViolation(p + ".atoms", "must be a list")
            term = ScalarExpr.const(re, im).sqrt2_pow(k)
            for j, a in enumerate(atoms):
                ap = f"{p}.atoms[{j}]"
                if not isinstance(a, dict) or a.get("fn") not in ("cos", "sin"):
                    raise SchemaViolation(ap, "atom needs fn 'cos' or 'sin'")
                arg = LinearPhase.from_json(a.get("arg"), ap + ".arg")
                term = term * _atom(a["fn"], arg)
            out = out + term
        return out


def _mono_sort(item):
    (k, atoms), _ = item
    return (len(atoms), [_atom_key(a) for a in atoms], k)


def _atom_str(fn: str, arg: LinearPhase) -> str:
    return f"{fn}({arg})"


def _mono_str(c: Gauss, k: int, atoms: Tuple[Atom, ...]) -> str:
    factors = []
    i = 0
    while i < len(atoms):
        j = i
        while j < len(atoms) and atoms[j] == atoms[i]:
            j += 1
        s = _atom_str(*atoms[i])
        factors.append(s if j - i == 1 else f"{s}^{j - i}")
        i = j
    if k:
        factors.insert(0, "sqrt(2)")
    if c.im == 0:
        coeff, neg = abs(c.re), c.re < 0
        cs = "" if coeff == 1 and factors else _rat_str(coeff)
    elif c.re == 0:
        coeff, neg = abs(c.im), c.im < 0
        cs = "I" if coeff == 1 else f"{_rat_str(coeff)}*I"
    else:
        neg = False
        sign = "-" if c.im < 0 else "+"
        cs = f"({_rat_str(c.re)}{sign}{_rat_str(abs(c.im))}*I)"
    body = "*".join(([cs] if cs else []) + factors)
    return ("-" if neg else "") + body


def _rat_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _coerce(x) -> Optional[ScalarExpr]:
    if isinstance(x, ScalarExpr):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return ScalarExpr.const(x)
    if isinstance(x, Gauss):
        return ScalarExpr.gauss(x)
    return None


ZERO = ScalarExpr()
ONE = ScalarExpr.const(1)
I = ScalarExpr.const(0, 1)


def _atom(fn: str, arg: LinearPhase) -> ScalarExpr:
    """Canonical atom: pi part in [0, 1/2), leading parameter coefficient positive.

    Quarter-turn shifts and sign flips are folded into the coefficient; constant
    arguments that are multiples of pi/4 are evaluated exactly.
    """
    j, r = divmod(arg.pi, _HALF)
    j = int(j)
    base = LinearPhase(r, dict(arg.terms))
    # cos(x + j*pi/2), sin(x + j*pi/2) in terms of cos x, sin x
    if fn == "cos":
        fn2, sign = (("cos", 1), ("sin", -1), ("cos", -1), ("sin", 1))[j]
    else:
        fn2, sign = (("sin", 1), ("cos", 1), ("sin", -1), ("cos", -1))[j]
    if base.is_constant:
        if r == 0:
            val = ONE if fn2 == "cos" else ZERO
        elif r == _QUARTER:
            val = ScalarExpr.sqrt2(-1)
        else:
            val = ScalarExpr({(0, ((fn2, base),)): ONE_G})
        return val if sign == 1 else -val
    if base.terms[0][1] < 0:
        neg = -base
        if fn2 == "cos":
            val = _atom("cos", neg)
        else:
            val = -_atom("sin", neg)
        return val if sign == 1 else -val
    val = ScalarExpr({(0, ((fn2, base),)): ONE_G})
    return val if sign == 1 else -val


def exp_i_phase(arg: LinearPhase) -> ScalarExpr:
    """``e^{i*arg}`` written as ``cos(arg) + i sin(arg)``."""
    return _atom("cos", arg) + _atom("sin", arg) * I


def add(*xs: ScalarExpr) -> ScalarExpr:
    return reduce(lambda a, b: a + b, xs, ZERO)


def mul(*xs: ScalarExpr) -> ScalarExpr:
    return reduce(lambda a, b: a * b, xs, ONE)


def neg(x: ScalarExpr) -> ScalarExpr:
    return -x


def sqrt2_pow(x: ScalarExpr, k: int) -> ScalarExpr:
    return x.sqrt2_pow(k)


def eval_at(e: ScalarExpr, binding: Binding) -> complex:
    return complex(e.eval(binding))


def random_bindings(names: Iterable[str], trials: int, seed: int = 0) -> list:
    """Independent uniform draws over [0, 2*pi) for each name."""
    names = sorted(set(names))
    rng = np.random.default_rng(seed)
    vals = rng.uniform(0.0, 2 * math.pi, size=(trials, len(names)))
    return [dict(zip(names, row.tolist())) for row in vals]


def equiv_numeric(a: ScalarExpr, b: ScalarExpr, trials: int = 32, tol: float = 1e-9,
                  seed: int = 0) -> bool:
    """Probabilistic equality: agree within ``tol`` at ``trials`` random bindings."""
    if trials < 1 or tol <= 0:
        raise ValueError("trials must be >= 1 and tol > 0")
    names = a.params() | b.params()
    for binding in random_bindings(names, trials, seed):
        if abs(eval_at(a, binding) - eval_at(b, binding)) > tol:
            return False
    return True


# -- simplification ------------------------------------------------------------

def simplify(e: ScalarExpr) -> ScalarExpr:
    """Merge ``X*cos(L)^2 + X*sin(L)^2`` pairs into ``X`` until none remain."""
    terms = dict(e._terms)
    changed = True
    while changed:
        changed = False
        for key in sorted(terms, key=lambda k: (len(k[1]), [_atom_key(a) for a in k[1]], k[0])):
            if key not in terms:
                continue
            k, atoms = key
            hit = _pythagorean_partner(terms, key)
            if hit is None:
                continue
            partner, reduced_atoms = hit
            c = terms.pop(key)
            del terms[partner]
            rk = (k, reduced_atoms)
            s = terms.get(rk, Gauss()) + c
            if s:
                terms[rk] = s
            else:
                terms.pop(rk, None)
            changed = True
    return ScalarExpr._raw(terms)


def _pythagorean_partner(terms, key):
    k, atoms = key
    c = terms[key]
    seen = set()
    for i, (fn, arg) in enumerate(atoms):
        if fn != "cos" or arg in seen:
            continue
        seen.add(arg)
        count = sum(1 for a in atoms if a == ("cos", arg))
        if count < 2:
            continue
        rest = list(atoms)
        rest.remove(("cos", arg))
        rest.remove(("cos", arg))
        partner_atoms = tuple(sorted(rest + [("sin", arg), ("sin", arg)], key=_atom_key))
        partner = (k, partner_atoms)
        if terms.get(partner) == c:
            return partner, tuple(rest)
    return None


def _rational_gcd(values: Iterable[Fraction]) -> Fraction:
    num = 0
    den = 1
    for v in values:
        v = abs(v)
        num = math.gcd(num, v.numerator)
        den = den * v.denominator // math.gcd(den, v.denominator)
    return Fraction(num, den)


def trig_normal_form(e: ScalarExpr, bases: Optional[Mapping[str, Fraction]] = None) -> ScalarExpr:
    """Canonical polynomial form.

    Every atom is rewritten as a polynomial in ``cos(b_p)``, ``sin(b_p)`` where
    ``b_p = base_p * p`` and ``base_p`` is the rational gcd of all coefficients
    of ``p`` in ``e``; then ``sin(b)^2`` is replaced by ``1 - cos(b)^2``.
    The result is unique for a given function and choice of bases.
    """
    if bases is None:
        coeffs: Dict[str, list] = {}
        for (_, atoms) in e._terms:
            for _, arg in atoms:
                for n, c in arg.terms:
                    coeffs.setdefault(n, []).append(c)
        bases = {n: _rational_gcd(cs) for n, cs in coeffs.items()}
    cache: Dict[Atom, ScalarExpr] = {}
    out = ZERO
    for (k, atoms), c in e._terms.items():
        term = ScalarExpr._raw({(k, ()): c})
        for atom in atoms:
            exp = cache.get(atom)
            if exp is None:
                exp = _expand_atom(atom, bases)
                cache[atom] = exp
            term = _reduce_sin_squares(term * exp)
        out = out + term
    return _reduce_sin_squares(out)


_POW_CACHE: Dict[Tuple[str, Fraction, int], ScalarExpr] = {}


def _unit_power(name: str, base: Fraction, k: int) -> ScalarExpr:
    key = (name, base, k)
    hit = _POW_CACHE.get(key)
    if hit is not None:
        return hit
    b = LinearPhase.param(name, base)
    c, s = _atom("cos", b), _atom("sin", b)
    unit = c + s * I if k > 0 else c - s * I
    val = _reduce_sin_squares(unit ** abs(k))
    _POW_CACHE[key] = val
    return val


def _expand_atom(atom: Atom, bases: Mapping[str, Fraction]) -> ScalarExpr:
    fn, arg = atom
    if arg.is_constant:
        return ScalarExpr({(0, (atom,)): ONE_G})
    z = exp_i_phase(arg.constant_part())
    for name, c in arg.terms:
        base = bases[name]
        k = c / base
        if k.denominator != 1:
            raise ValueError(f"base {base} does not divide coefficient {c} of {name}")
        z = z * _unit_power(name, base, int(k))
    return z.real_part() if fn == "cos" else z.imag_part()


def _reduce_sin_squares(e: ScalarExpr) -> ScalarExpr:
    out: Dict[MonoKey, Gauss] = {}
    stack = list(e._terms.items())
    while stack:
        (k, atoms), c = stack.pop()
        idx = None
        for i in range(len(atoms) - 1):
            if atoms[i][0] == "sin" and atoms[i] == atoms[i + 1]:
                idx = i
                break
        if idx is None:
            key = (k, atoms)
            s = out.get(key)
            s = c if s is None else s + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
            continue
        arg = atoms[idx][1]
        rest = atoms[:idx] + atoms[idx + 2:]
        stack.append(((k, rest), c))
        stack.append(((k, tuple(sorted(rest + (("cos", arg), ("cos", arg)), key=_atom_key))), -c))
    return ScalarExpr._raw(out)
