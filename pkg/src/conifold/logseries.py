"""Finite expressions in ``r_1..r_mu``, ``log w`` and ``1/w`` for linear forms ``w``.

A term is ``c * r^alpha * [log w] * [w'^(-e)]`` with ``c`` in ``Q[lam]``.
Log factors are keyed by the integer row that defines them, so two nodes
with identical rows share a logarithm but proportional rows do not (no
branch constants are ever introduced).  Inverse powers are keyed by the
primitive form with positive leading entry, and every term carrying an
inverse power is reduced so that the pivot variable of that form does not
occur in ``r^alpha``; together this gives a canonical representation and
equality is coefficient-wise.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterator, Sequence

from .series import TruncatedSeries, const

__all__ = ["LogSeries", "normalize_form"]

Key = tuple  # (alpha, log_form | None, inv_form | None, inv_power)


def normalize_form(form: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """``(primitive, c)`` with ``form == c * primitive`` and leading entry of ``primitive`` > 0."""
    return _normalize(tuple(int(x) for x in form))


@lru_cache(maxsize=4096)
def _normalize(form: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
    g = 0
    for x in form:
        g = gcd(g, x)
    if g == 0:
        raise ZeroDivisionError("zero linear form")
    lead = next(x for x in form if x)
    if lead < 0:
        g = -g
    return tuple(x // g for x in form), g


def _pivot(form: tuple[int, ...]) -> int:
    return next(j for j, x in enumerate(form) if x)


def _scalar(c) -> TruncatedSeries:
    return c if isinstance(c, TruncatedSeries) else const(c)


class LogSeries:
    __slots__ = ("mu", "terms")

    def __init__(self, mu: int, terms: dict | None = None):
        self.mu = mu
        self.terms: dict[Key, TruncatedSeries] = {}
        for key, c in (terms or {}).items():
            self._add_term(key, _scalar(c))

    # -- construction -------------------------------------------------------

    @classmethod
    def zero(cls, mu: int) -> "LogSeries":
        return cls(mu)

    @classmethod
    def polynomial(cls, mu: int, alpha: Sequence[int], coeff=1) -> "LogSeries":
        return cls(mu, {(tuple(alpha), None, None, 0): coeff})

    @classmethod
    def constant(cls, mu: int, coeff=1) -> "LogSeries":
        return cls.polynomial(mu, (0,) * mu, coeff)

    @classmethod
    def r(cls, mu: int, j: int) -> "LogSeries":
        """The coordinate ``r_j`` (zero-based ``j``)."""
        alpha = [0] * mu
        alpha[j] = 1
        return cls.polynomial(mu, alpha)

    @classmethod
    def linear(cls, form: Sequence[int], coeff=1) -> "LogSeries":
        out = cls(len(form))
        for j, a in enumerate(form):
            if a:
                out = out + cls.r(len(form), j) * (_scalar(coeff) * a)
        return out

    @classmethod
    def log_times(cls, form: Sequence[int], alpha: Sequence[int], coeff=1) -> "LogSeries":
        """``coeff * r^alpha * log w`` with ``w = sum form_j r_j``."""
        form = tuple(int(x) for x in form)
        if not any(form):
            raise ZeroDivisionError("log of the zero form")
        return cls(len(form), {(tuple(alpha), form, None, 0): coeff})

    @classmethod
    def w_log_w(cls, form: Sequence[int], coeff=1) -> "LogSeries":
        """``coeff * w log w`` expanded as ``sum_j form_j r_j log w``."""
        mu = len(form)
        out = cls(mu)
        for j, a in enumerate(form):
            if a:
                alpha = [0] * mu
                alpha[j] = 1
                out = out + cls.log_times(form, alpha, _scalar(coeff) * a)
        return out

    @classmethod
    def inverse(cls, form: Sequence[int], power: int = 1, coeff=1,
                alpha: Sequence[int] | None = None) -> "LogSeries":
        """``coeff * r^alpha / w^power``."""
        mu = len(form)
        alpha = tuple(alpha) if alpha is not None else (0,) * mu
        return cls(mu, {(alpha, None, tuple(form), power): coeff})

    # -- canonical form -------------------------------------------------------

    def _add_term(self, key: Key, c: TruncatedSeries) -> None:
        for k2, c2 in self._canonical(key, c):
            total = self.terms.get(k2)
            total = c2 if total is None else total + c2
            if total.is_zero():
                self.terms.pop(k2, None)
            else:
                self.terms[k2] = total

    def _canonical(self, key: Key, c: TruncatedSeries) -> Iterator[tuple[Key, TruncatedSeries]]:
        if c.is_zero():
            return
        alpha, log_form, inv_form, power = key
        if len(alpha) != self.mu:
            raise ValueError(f"exponent {alpha} does not match mu={self.mu}")
        if log_form is not None and len(log_form) != self.mu:
            raise ValueError("log form length mismatch")
        if inv_form is None or power == 0:
            yield (tuple(alpha), log_form, None, 0), c
            return
        if power < 0:
            raise ValueError("inverse power must be positive")
        prim, scale = normalize_form(inv_form)
        c = c * Fraction(1, scale ** power)
        stack = [(tuple(alpha), power, c)]
        piv = _pivot(prim)
        while stack:
            a, e, coeff = stack.pop()
            if e == 0:
                yield (a, log_form, None, 0), coeff
                continue
            if a[piv] == 0:
                yield (a, log_form, prim, e), coeff
                continue
            # r_piv = (w - sum_{j != piv} w_j r_j) / w_piv
            lowered = list(a)
            lowered[piv] -= 1
            inv_piv = Fraction(1, prim[piv])
            stack.append((tuple(lowered), e - 1, coeff * inv_piv))
            for j, wj in enumerate(prim):
                if j != piv and wj:
                    shifted = list(lowered)
                    shifted[j] += 1
                    stack.append((tuple(shifted), e, coeff * (-wj * inv_piv)))

    # -- arithmetic -----------------------------------------------------------

    def copy(self) -> "LogSeries":
        out = LogSeries(self.mu)
        out.terms = dict(self.terms)
        return out

    def __add__(self, other: "LogSeries") -> "LogSeries":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = LogSeries.constant(self.mu, other)
        if other.mu != self.mu:
            raise ValueError("mu mismatch")
        out = self.copy()
        for key, c in other.terms.items():
            out._add_term(key, c)
        return out

    __radd__ = __add__

    def __neg__(self) -> "LogSeries":
        out = LogSeries(self.mu)
        out.terms = {k: -c for k, c in self.terms.items()}
        return out

    def __sub__(self, other: "LogSeries") -> "LogSeries":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = LogSeries.constant(self.mu, other)
        return self + (-other)

    def __rsub__(self, other) -> "LogSeries":
        return (-self) + other

    def __mul__(self, scalar) -> "LogSeries":
        s = _scalar(scalar)
        out = LogSeries(self.mu)
        for key, c in self.terms.items():
            out._add_term(key, c * s)
        return out

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = LogSeries.constant(self.mu, other)
        if not isinstance(other, LogSeries):
            return NotImplemented
        return self.mu == other.mu and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    # -- calculus -------------------------------------------------------------

    def derivative(self, p: int) -> "LogSeries":
        """``d/d r_p`` for zero-based ``p``."""
        out = LogSeries(self.mu)
        for (alpha, log_form, inv_form, power), c in self.terms.items():
            if alpha[p]:
                lowered = list(alpha)
                lowered[p] -= 1
                out._add_term((tuple(lowered), log_form, inv_form, power), c * alpha[p])
            if inv_form is not None and inv_form[p]:
                out._add_term((alpha, log_form, inv_form, power + 1), c * (-power * inv_form[p]))
            if log_form is not None and log_form[p]:
                target, scale = normalize_form(log_form)
                if inv_form is None:
                    out._add_term((alpha, None, target, 1), c * Fraction(log_form[p], scale))
                elif inv_form == target:
                    out._add_term((alpha, None, target, power + 1), c * Fraction(log_form[p], scale))
                else:
                    raise NotImplementedError("product of inverses of two different forms")
        return out

    # -- views ------------------------------------------------------------------

    def polar_part(self) -> "LogSeries":
        out = LogSeries(self.mu)
        out.terms = {k: c for k, c in self.terms.items() if k[2] is not None}
        return out

    def log_part(self) -> "LogSeries":
        out = LogSeries(self.mu)
        out.terms = {k: c for k, c in self.terms.items() if k[1] is not None}
        return out

    def holomorphic_part(self) -> "LogSeries":
        out = LogSeries(self.mu)
        out.terms = {k: c for k, c in self.terms.items() if k[1] is None and k[2] is None}
        return out

    def boundary_value(self) -> TruncatedSeries:
        """Value at ``r = 0`` using ``r^alpha log w -> 0`` for ``|alpha| >= 1``."""
        total = TruncatedSeries()
        for (alpha, log_form, inv_form, power), c in self.terms.items():
            if inv_form is not None:
                raise ZeroDivisionError("pole at r = 0")
            if any(alpha):
                continue
            if log_form is not None:
                raise ZeroDivisionError("log w diverges at r = 0")
            total = total + c
        return total

    def sorted_terms(self):
        def order(item):
            (alpha, lf, inv, e), _ = item
            return (inv is not None, lf is not None, e, alpha, lf or (), inv or ())
        return sorted(self.terms.items(), key=order)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (alpha, lf, inv, e), c in self.sorted_terms():
            bits = [f"({c})"]
            bits += [f"r{j + 1}" if a == 1 else f"r{j + 1}^{a}" for j, a in enumerate(alpha) if a]
            if lf is not None:
                bits.append(f"log({_form_str(lf)})")
            if inv is not None:
                bits.append(f"({_form_str(inv)})^-{e}")
            parts.append(" · ".join(bits))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"LogSeries({self})"


def _form_str(form) -> str:
    out = []
    for j, a in enumerate(form):
        if not a:
            continue
        sign = "-" if a < 0 else "+"
        mag = abs(a)
        term = f"r{j + 1}" if mag == 1 else f"{mag}*r{j + 1}"
        out.append((sign, term))
    s = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, term in out[1:]:
        s += f" {sign} {term}"
    return s
