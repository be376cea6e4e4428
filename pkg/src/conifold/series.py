"""Sparse multivariate (Laurent) series with exact rational coefficients.

A single class covers three roles:

* scalars in ``Q[lam, zinv]`` where ``lam`` stands for ``1/(2 pi i)`` and
  ``zinv`` for ``1/z`` (both formal, weight zero);
* truncated power series in Kaehler/Novikov variables (``u1``, ``q2``, ...);
* Laurent polynomials such as prepotentials with ``x0`` in the denominator.

Monomials are sorted tuples of ``(name, exponent)`` pairs, so series in
different variable sets combine without any declaration step.  Truncation
drops terms whose degree, counting only non-formal variables, exceeds
``order``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping

__all__ = [
    "FORMAL_CONSTANTS",
    "TruncatedSeries",
    "Monomial",
    "var",
    "const",
    "LAM",
    "ZINV",
    "parse_scalar",
    "exp_series",
    "geometric_series",
]

FORMAL_CONSTANTS = frozenset({"lam", "zinv"})

Monomial = tuple[tuple[str, int], ...]

_ONE: Monomial = ()


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        e2 = d.get(v, 0) + e
        if e2:
            d[v] = e2
        else:
            d.pop(v, None)
    return tuple(sorted(d.items()))


def _mono_degree(m: Monomial) -> int:
    return sum(e for v, e in m if v not in FORMAL_CONSTANTS)


def _coerce(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int) and not isinstance(c, bool):
        return Fraction(c)
    raise TypeError(f"cannot use {c!r} as an exact coefficient")


class TruncatedSeries:
    __slots__ = ("terms", "order")

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None, order: int | None = None):
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                c = _coerce(c)
                if c and (order is None or _mono_degree(m) <= order):
                    m = tuple(sorted((v, e) for v, e in m if e))
                    clean[m] = clean.get(m, Fraction(0)) + c
                    if not clean[m]:
                        del clean[m]
        self.terms = clean
        self.order = order

    # -- construction -------------------------------------------------------

    @classmethod
    def monomial(cls, coeff=1, order: int | None = None, **exps: int) -> "TruncatedSeries":
        return cls({tuple(sorted(exps.items())): coeff}, order)

    def truncate(self, order: int | None) -> "TruncatedSeries":
        if order is None and self.order is None:
            return self
        new = order if self.order is None else (self.order if order is None else min(order, self.order))
        return TruncatedSeries(self.terms, new)

    # -- queries ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def variables(self) -> set[str]:
        return {v for m in self.terms for v, _ in m}

    def coefficient(self, **exps: int) -> Fraction:
        return self.terms.get(tuple(sorted((v, e) for v, e in exps.items() if e)), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.terms.get(_ONE, Fraction(0))

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def is_scalar(self) -> bool:
        """True when only the formal constants ``lam`` and ``zinv`` occur."""
        return all(v in FORMAL_CONSTANTS for m in self.terms for v, _ in m)

    def degree_in(self, name: str) -> int:
        return max((dict(m).get(name, 0) for m in self.terms), default=0)

    # -- arithmetic ---------------------------------------------------------

    def _lift(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        return TruncatedSeries({_ONE: _coerce(other)})

    @staticmethod
    def _meet(a: int | None, b: int | None) -> int | None:
        if a is None:
            return b
        if b is None:
            return a
        return min(a, b)

    def __add__(self, other) -> "TruncatedSeries":
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return TruncatedSeries(out, self._meet(self.order, other.order))

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries({m: -c for m, c in self.terms.items()}, self.order)

    def __sub__(self, other) -> "TruncatedSeries":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "TruncatedSeries":
        return self._lift(other) - self

    def __mul__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            c = _coerce(other)
            return TruncatedSeries({m: c * x for m, x in self.terms.items()}, self.order)
        order = self._meet(self.order, other.order)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            d1 = _mono_degree(m1)
            for m2, c2 in other.terms.items():
                if order is not None and d1 + _mono_degree(m2) > order:
                    continue
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return TruncatedSeries(out, order)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "TruncatedSeries":
        if n < 0:
            raise ValueError("negative powers are not supported")
        out = TruncatedSeries({_ONE: 1}, self.order)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = self._lift(other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- calculus and substitution -------------------------------------------

    def derivative(self, name: str) -> "TruncatedSeries":
        out: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.get(name, 0)
            if not e:
                continue
            d[name] = e - 1
            key = tuple(sorted((v, x) for v, x in d.items() if x))
            out[key] = out.get(key, Fraction(0)) + c * e
        # Differentiation lowers the degree by one, so one more order is exact.
        order = None if self.order is None else self.order - 1
        return TruncatedSeries(out, order)

    def euler(self, name: str) -> "TruncatedSeries":
        """``name * d/d(name)``: multiplies each term by its exponent in ``name``."""
        return TruncatedSeries(
            {m: c * dict(m).get(name, 0) for m, c in self.terms.items()}, self.order)

    def substitute(self, name: str, value) -> "TruncatedSeries":
        """Replace the variable ``name`` by ``value`` (number or series)."""
        value = self._lift(value)
        out = TruncatedSeries({}, self.order)
        cache: dict[int, TruncatedSeries] = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.pop(name, 0)
            rest = TruncatedSeries({tuple(sorted(d.items())): c})
            if e:
                if e < 0:
                    raise ValueError(f"cannot substitute into negative power of {name}")
                if e not in cache:
                    cache[e] = value ** e
                rest = rest * cache[e]
            out = out + rest
        return out.truncate(self.order)

    def rename(self, mapping: Mapping[str, str]) -> "TruncatedSeries":
        out: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            d: dict[str, int] = {}
            for v, e in m:
                v = mapping.get(v, v)
                d[v] = d.get(v, 0) + e
            key = tuple(sorted((v, e) for v, e in d.items() if e))
            out[key] = out.get(key, Fraction(0)) + c
        return TruncatedSeries(out, self.order)

    def drop(self, names: Iterable[str]) -> "TruncatedSeries":
        """Keep only terms free of every variable in ``names``."""
        names = set(names)
        return TruncatedSeries(
            {m: c for m, c in self.terms.items() if not any(v in names for v, _ in m)}, self.order)

    def select(self, predicate) -> "TruncatedSeries":
        return TruncatedSeries({m: c for m, c in self.terms.items() if predicate(dict(m))},
                               self.order)

    # -- text form ------------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0/1"
        parts = []
        for m, c in sorted(self.terms.items(), key=lambda mc: _sort_key(mc[0])):
            pieces = [f"{c.numerator}/{c.denominator}"]
            pieces.extend(_factor_str(v, e) for v, e in _display_order(m))
            parts.append(" · ".join(pieces))
        return " + ".join(parts)

    def __repr__(self) -> str:
        suffix = "" if self.order is None else f", order={self.order}"
        return f"TruncatedSeries({str(self)!r}{suffix})"


def _display_order(m: Monomial):
    formal = [(v, e) for v, e in m if v in FORMAL_CONSTANTS]
    other = [(v, e) for v, e in m if v not in FORMAL_CONSTANTS]
    return other + formal


def _sort_key(m: Monomial):
    return (_mono_degree(m), [(v, e) for v, e in _display_order(m)])


def _factor_str(v: str, e: int) -> str:
    if v == "zinv":
        return f"z^{-e}"
    return v if e == 1 else f"{v}^{e}"


_FACTOR = re.compile(r"^(?P<name>[A-Za-z_][A-Za-z_0-9]*)(?:\^(?P<exp>-?\d+))?$")


def parse_scalar(text: str) -> TruncatedSeries:
    """Inverse of ``str(series)`` for the ``"p/q · name^e + ..."`` text form."""
    text = text.strip()
    if text in ("", "0", "0/1"):
        return TruncatedSeries()
    out: dict[Monomial, Fraction] = {}
    for term in text.split(" + "):
        pieces = [p.strip() for p in term.split("·")]
        coeff = Fraction(pieces[0])
        exps: dict[str, int] = {}
        for p in pieces[1:]:
            mt = _FACTOR.match(p)
            if not mt:
                raise ValueError(f"bad factor {p!r} in {text!r}")
            name, e = mt["name"], int(mt["exp"] or 1)
            if name == "z":
                name, e = "zinv", -e
            exps[name] = exps.get(name, 0) + e
        key = tuple(sorted((v, e) for v, e in exps.items() if e))
        out[key] = out.get(key, Fraction(0)) + coeff
    return TruncatedSeries(out)


def var(name: str, order: int | None = None) -> TruncatedSeries:
    return TruncatedSeries({((name, 1),): 1}, order)


def const(c, order: int | None = None) -> TruncatedSeries:
    return TruncatedSeries({_ONE: c}, order)


LAM = var("lam")
ZINV = var("zinv")


def exp_series(arg: TruncatedSeries, order: int) -> TruncatedSeries:
    """``exp(arg)`` for ``arg`` without constant term, truncated at ``order``."""
    if arg.constant_term():
        raise ValueError("exp_series needs an argument without constant term")
    arg = arg.truncate(order)
    out = const(1, order)
    term = const(1, order)
    for n in range(1, order + 1):
        term = term * arg * Fraction(1, n)
        if term.is_zero():
            break
        out = out + term
    return out


def geometric_series(arg: TruncatedSeries, order: int, start: int = 1,
                     weights=None) -> TruncatedSeries:
    """``sum_{d >= start} w(d) arg^d`` truncated at ``order``; ``w`` defaults to 1."""
    arg = arg.truncate(order)
    out = TruncatedSeries({}, order)
    power = arg ** start if start else const(1, order)
    d = start
    while not power.is_zero() and d <= max(order, 0) + max(start, 0):
        w = 1 if weights is None else weights(d)
        out = out + power * w
        power = power * arg
        d += 1
    return out
