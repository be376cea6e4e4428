"""Conifold-transition presentations: the relation matrices A and B.

``A`` (k x mu) spans the relations among the exceptional curve classes and
``B`` (k x rho) the relations among the vanishing spheres.  Column ``l`` of
``B`` records the pairings ``b_il = (C_i . T_l)`` with the exceptional
divisors.  A valid presentation satisfies ``A^t B = 0``, ``mu + rho = k``
and each matrix spans the saturated kernel of the other's transpose.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import DimensionMismatchError, MissingDataError, RankDeficiencyError
from .linalg import (IntMatrix, determinant, hermite_normal_form, kernel_basis, quotient_structure,
                     rank, smith_normal_form)

__all__ = [
    "Hodge",
    "TransitionPresentation",
    "Check",
    "ValidationReport",
    "validate",
    "complete_from_A",
    "complete_from_B",
    "euler_check",
    "same_column_span",
    "saturate",
]


@dataclass(frozen=True)
class Hodge:
    h3X: int
    h3Y: int
    h2X: int
    h2Y: int


@dataclass(frozen=True)
class TransitionPresentation:
    k: int
    A: IntMatrix
    B: IntMatrix
    triple: Mapping[tuple[int, int, int], Fraction] | None = None
    hodge: Hodge | None = None

    @property
    def mu(self) -> int:
        return self.A.cols

    @property
    def rho(self) -> int:
        return self.B.cols

    def triple_number(self, l: int, m: int, n: int) -> Fraction:
        """Classical ``(T_l . T_m . T_n)``, zero-based indices; zero when unset."""
        if not self.triple:
            return Fraction(0)
        return Fraction(self.triple.get(tuple(sorted((l, m, n))), 0))

    @property
    def S(self) -> IntMatrix:
        """The square matrix ``[A | B]``."""
        return self.A.hstack(self.B)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""
    violations: tuple = ()


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[Check, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]


def _symmetric_triple(triple) -> tuple[bool, tuple]:
    if not triple:
        return True, ()
    bad = []
    for key, val in triple.items():
        for perm in set(itertools.permutations(key)):
            other = triple.get(perm)
            if other is not None and Fraction(other) != Fraction(val):
                bad.append(tuple(x + 1 for x in perm))
    return not bad, tuple(sorted(set(bad)))


def same_column_span(X: IntMatrix, Y: IntMatrix) -> bool:
    """True when the integer column lattices of ``X`` and ``Y`` coincide."""
    if X.rows != Y.rows:
        return False
    hx = hermite_normal_form(X.columns(), X.rows)
    hy = hermite_normal_form(Y.columns(), Y.rows)
    return hx == hy


def validate(P: TransitionPresentation) -> ValidationReport:
    """Check every invariant; violation coordinates are 1-based."""
    A, B, k = P.A, P.B, P.k
    if A.rows != k or B.rows != k:
        raise DimensionMismatchError(
            f"relation matrices must have k={k} rows (A has {A.rows}, B has {B.rows})")
    checks = []

    AtB = A.T @ B
    bad = tuple((j + 1, l + 1) for j in range(AtB.rows) for l in range(AtB.cols) if AtB[j, l])
    checks.append(Check("orthogonality", not bad,
                        "A^t B = 0" if not bad else f"A^t B nonzero at (j, l) = {list(bad)}", bad))

    checks.append(Check("dimension", P.mu + P.rho == k, f"mu + rho = {P.mu} + {P.rho}, k = {k}"))

    rA, rB = rank(A), rank(B)
    checks.append(Check("rank_A", rA == P.mu, f"rank(A) = {rA}, mu = {P.mu}"))
    checks.append(Check("rank_B", rB == P.rho, f"rank(B) = {rB}, rho = {P.rho}"))

    kerAt = kernel_basis(A.T)
    kerBt = kernel_basis(B.T)
    checks.append(Check("B_is_ker_At", same_column_span(B, kerAt),
                        "colspan(B) equals the saturated kernel of A^t"))
    checks.append(Check("A_is_ker_Bt", same_column_span(A, kerBt),
                        "colspan(A) equals the saturated kernel of B^t"))

    sym, badsym = _symmetric_triple(P.triple)
    checks.append(Check("triple_symmetric", sym, "triple intersections symmetric", badsym))

    zero_A = tuple(i + 1 for i in range(k) if not any(A.row(i)))
    checks.append(Check("friedman", not zero_A,
                        "every node appears in a relation among the curves" if not zero_A
                        else f"A has zero rows {list(zero_A)}", zero_A))
    zero_B = tuple(i + 1 for i in range(k) if not any(B.row(i)))
    checks.append(Check("sty", not zero_B,
                        "every vanishing sphere class is nonzero" if not zero_B
                        else f"B has zero rows {list(zero_B)}", zero_B))
    return ValidationReport(tuple(checks))


def _check_full_rank(M: IntMatrix, name: str) -> None:
    r = rank(M)
    if r != M.cols:
        raise RankDeficiencyError(f"{name} has dependent columns (rank {r} < {M.cols})")


def saturate(M: IntMatrix) -> IntMatrix:
    """``M`` itself if its columns span a saturated lattice, else a Hermite basis of the saturation."""
    _free, torsion = quotient_structure(M)
    if not torsion:
        return M
    snf = smith_normal_form(M)
    r = len([d for d in snf.diagonal if d])
    cols = hermite_normal_form([snf.U_inv.column(j) for j in range(r)], M.rows)
    return IntMatrix.from_columns(cols, rows=M.rows)


def complete_from_A(k: int, A: IntMatrix) -> TransitionPresentation:
    """Complete with ``B = ker A^t``; a non-saturated ``A`` is replaced by its saturation."""
    if A.rows != k:
        raise DimensionMismatchError(f"A must have {k} rows, got {A.rows}")
    _check_full_rank(A, "A")
    return TransitionPresentation(k, saturate(A), kernel_basis(A.T))


def complete_from_B(k: int, B: IntMatrix) -> TransitionPresentation:
    if B.rows != k:
        raise DimensionMismatchError(f"B must have {k} rows, got {B.rows}")
    _check_full_rank(B, "B")
    return TransitionPresentation(k, kernel_basis(B.T), saturate(B))


def euler_check(P: TransitionPresentation) -> ValidationReport:
    """Compare mu and rho with the Betti-number jumps ``(h3X - h3Y)/2`` and ``h2Y - h2X``."""
    if P.hodge is None:
        raise MissingDataError("euler_check needs hodge data")
    h = P.hodge
    diff3 = h.h3X - h.h3Y
    mu_h = Fraction(diff3, 2)
    rho_h = h.h2Y - h.h2X
    return ValidationReport((
        Check("mu_from_h3", mu_h == P.mu, f"(h3X - h3Y)/2 = {mu_h}, mu = {P.mu}"),
        Check("rho_from_h2", rho_h == P.rho, f"h2Y - h2X = {rho_h}, rho = {P.rho}"),
        Check("k_from_hodge", mu_h + rho_h == P.k, f"mu + rho from hodge = {mu_h + rho_h}, k = {P.k}"),
    ))


def is_invertible_S(P: TransitionPresentation) -> bool:
    S = P.S
    if S.rows != S.cols:
        return False
    return determinant(S.to_rows()) != 0


def presentation(k: int, A: Sequence[Sequence[int]] | None = None,
                 B: Sequence[Sequence[int]] | None = None, **extra) -> TransitionPresentation:
    """Convenience constructor from nested lists, completing whichever matrix is missing."""
    if A is None and B is None:
        raise MissingDataError("need at least one of A, B")
    Am = _as_matrix(A, k)
    Bm = _as_matrix(B, k)
    if Am is not None and Bm is None:
        P = complete_from_A(k, Am)
    elif Bm is not None and Am is None:
        P = complete_from_B(k, Bm)
    else:
        P = TransitionPresentation(k, Am, Bm)
    if extra:
        P = TransitionPresentation(P.k, P.A, P.B, extra.get("triple"), extra.get("hodge"))
    return P


def _as_matrix(M, k):
    if M is None or isinstance(M, IntMatrix):
        return M
    M = [list(r) for r in M]
    return IntMatrix.from_rows(M, cols=len(M[0]) if M and k else 0)
