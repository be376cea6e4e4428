"""Logarithmic connections ``d + sum_i (d w_i / w_i) (x) R_i`` on a trivial bundle."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .logseries import LogSeries, normalize_form
from .series import TruncatedSeries

__all__ = ["LogConnection"]


@dataclass(frozen=True)
class LogConnection:
    """Residues ``R_i`` are constant square matrices over ``Q[lam, zinv]``.

    ``residues[i][a][b]`` is the coefficient of frame vector ``a`` in
    ``R_i`` applied to frame vector ``b``.  Forms may repeat or be
    proportional; :meth:`deduplicated` merges them.
    """

    base_dim: int
    forms: tuple[tuple, ...]
    residues: tuple[tuple[tuple[TruncatedSeries, ...], ...], ...]
    frame: tuple[str, ...]
    # Holomorphic part of the connection matrix; ``None`` means zero.
    remainder: tuple | None = None

    def __post_init__(self):
        if len(self.forms) != len(self.residues):
            raise ValueError("one residue per hyperplane form is required")
        size = len(self.frame)
        for f in self.forms:
            if len(f) != self.base_dim:
                raise ValueError("form length must equal the base dimension")
        for R in self.residues:
            if len(R) != size or any(len(r) != size for r in R):
                raise ValueError("residue shape must match the frame")
            for r in R:
                for x in r:
                    if not x.is_scalar():
                        raise ValueError("residues must be constant")

    def residue(self, i: int):
        return self.residues[i]

    def deduplicated(self) -> "LogConnection":
        """Merge proportional forms (``dlog(c w) = dlog w``) and drop zero forms."""
        merged: dict[tuple, list] = {}
        order = []
        for form, R in zip(self.forms, self.residues):
            if not any(form):
                if any(not x.is_zero() for r in R for x in r):
                    raise ValueError("nonzero residue along a zero form")
                continue
            key, _ = normalize_form([_as_int(x) for x in form]) if _integral(form) else (tuple(form), 1)
            if key not in merged:
                merged[key] = [list(r) for r in R]
                order.append(key)
            else:
                acc = merged[key]
                for a in range(len(R)):
                    for b in range(len(R)):
                        acc[a][b] = acc[a][b] + R[a][b]
        return LogConnection(self.base_dim, tuple(order),
                             tuple(tuple(tuple(r) for r in merged[k]) for k in order), self.frame,
                             self.remainder)

    def derivative_matrix(self, p: int) -> list[list[LogSeries]]:
        """Matrix of ``nabla_{d/dr_p} - d/dr_p``: ``sum_i (form_i[p] / w_i) R_i``."""
        size = len(self.frame)
        out = [[LogSeries.zero(self.base_dim) for _ in range(size)] for _ in range(size)]
        for form, R in zip(self.forms, self.residues):
            if not form[p]:
                continue
            inv = LogSeries.inverse([_as_int(x) for x in form], 1, 1)
            for a in range(size):
                for b in range(size):
                    if not R[a][b].is_zero():
                        out[a][b] = out[a][b] + inv * (R[a][b] * form[p])
        return out


def _integral(form: Sequence) -> bool:
    return all(Fraction(x).denominator == 1 for x in form)


def _as_int(x) -> int:
    f = Fraction(x)
    if f.denominator != 1:
        raise ValueError(f"non-integral form entry {x}")
    return int(f)
