"""Exact integer and rational matrix arithmetic.

Everything here works on Python ints and :class:`fractions.Fraction`; no
floating point is used anywhere.  The central routine is
:func:`smith_normal_form`, from which kernels, ranks, cokernels and integer
linear solves are derived.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "IntMatrix",
    "SmithDecomposition",
    "smith_normal_form",
    "kernel_basis",
    "rank",
    "quotient_structure",
    "hermite_normal_form",
    "solve_integer",
    "determinant",
    "rational_inverse",
    "rational_solve",
    "matmul",
    "transpose",
]


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix stored row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )
        for x in self.entries:
            if isinstance(x, bool) or not isinstance(x, int):
                raise TypeError(f"IntMatrix entries must be int, got {x!r}")

    # -- construction -------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        columns = [list(c) for c in columns]
        for c in columns:
            if len(c) != rows:
                raise ValueError("column length does not match row count")
        return cls.from_rows([[c[i] for c in columns] for i in range(rows)], cols=len(columns))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    # -- access -------------------------------------------------------------

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    # -- arithmetic ---------------------------------------------------------

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix.from_rows(
            [[self[i, j] for i in range(self.rows)] for j in range(self.cols)], cols=self.rows
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return IntMatrix.from_rows(matmul(self.to_rows(), other.to_rows(), inner=self.cols),
                                   cols=other.cols)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(-x for x in self.entries))

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(self.rows, self.cols,
                         tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(self[i, j] * v[j] for j in range(self.cols)) for i in range(self.rows))

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return IntMatrix.from_rows([list(self.row(i)) + list(other.row(i)) for i in range(self.rows)],
                                   cols=self.cols + other.cols)

    def with_rows_zeroed(self, zero: Iterable[int]) -> "IntMatrix":
        zero = set(zero)
        return IntMatrix.from_rows(
            [[0] * self.cols if i in zero else list(self.row(i)) for i in range(self.rows)],
            cols=self.cols)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __repr__(self) -> str:
        return f"IntMatrix({self.to_rows()!r})"


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ M @ V == D`` with ``U``, ``V`` unimodular and ``D`` in Smith form."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i, i] for i in range(min(self.D.rows, self.D.cols))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def matmul(a: Sequence[Sequence], b: Sequence[Sequence], inner: int | None = None) -> list[list]:
    """Plain product of two row-major exact matrices (ints, Fractions, or ring elements)."""
    if inner is None:
        inner = len(b)
    ncols = len(b[0]) if b else 0
    out = []
    for row in a:
        if len(row) != inner:
            raise ValueError("shape mismatch")
        out_row = []
        for j in range(ncols):
            acc = 0
            for t in range(inner):
                x = row[t]
                if x:
                    y = b[t][j]
                    if y:
                        acc = acc + x * y
            out_row.append(acc)
        out.append(out_row)
    return out


def transpose(a: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    if ncols is None:
        ncols = len(a[0]) if a else 0
    return [[a[i][j] for i in range(len(a))] for j in range(ncols)]


def smith_normal_form(M: IntMatrix) -> SmithDecomposition:
    """Smith normal form with unimodular transforms and their inverses.

    Pivoting picks the smallest nonzero absolute value in the active block,
    which keeps intermediate entries small on relation matrices.
    """
    m, n = M.rows, M.cols
    D = M.to_rows()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    Ui = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    Vi = [[int(i == j) for j in range(n)] for i in range(n)]

    # Row op R_i += c R_j acts as U <- E U, U_inv <- U_inv E^{-1} (col_j -= c col_i).
    def row_add(i, j, c):
        D[i] = [a + c * b for a, b in zip(D[i], D[j])]
        U[i] = [a + c * b for a, b in zip(U[i], U[j])]
        for r in Ui:
            r[j] -= c * r[i]

    def row_swap(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        for r in Ui:
            r[i], r[j] = r[j], r[i]

    def row_neg(i):
        D[i] = [-a for a in D[i]]
        U[i] = [-a for a in U[i]]
        for r in Ui:
            r[i] = -r[i]

    # Column op C_i += c C_j acts as V <- V E, V_inv <- E^{-1} V_inv (row_j -= c row_i).
    def col_add(i, j, c):
        for r in D:
            r[i] += c * r[j]
        for r in V:
            r[i] += c * r[j]
        Vi[j] = [a - c * b for a, b in zip(Vi[j], Vi[i])]

    def col_swap(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = D[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, pi, pj = best
        if pi != t:
            row_swap(t, pi)
        if pj != t:
            col_swap(t, pj)
        while True:
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    row_add(i, t, -(D[i][t] // p))
                    if D[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if D[t][j]:
                    col_add(j, t, -(D[t][j] // p))
                    if D[t][j]:
                        dirty = True
            if not dirty:
                # Pivot must divide the rest of the block for the divisibility chain.
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if D[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                row_add(t, bad, 1)
                continue
            # Move the smallest remaining entry of row/column t into the pivot.
            best = (abs(p), t, t)
            for i in range(t + 1, m):
                if D[i][t] and abs(D[i][t]) < best[0]:
                    best = (abs(D[i][t]), i, t)
            for j in range(t + 1, n):
                if D[t][j] and abs(D[t][j]) < best[0]:
                    best = (abs(D[t][j]), t, j)
            _, pi, pj = best
            if pi != t:
                row_swap(t, pi)
            if pj != t:
                col_swap(t, pj)
        if D[t][t] < 0:
            row_neg(t)
        t += 1

    return SmithDecomposition(
        U=IntMatrix.from_rows(U, cols=m),
        D=IntMatrix.from_rows(D, cols=n),
        V=IntMatrix.from_rows(V, cols=n),
        U_inv=IntMatrix.from_rows(Ui, cols=m),
        V_inv=IntMatrix.from_rows(Vi, cols=n),
    )


def hermite_normal_form(vectors: Sequence[Sequence[int]], dim: int) -> list[tuple[int, ...]]:
    """Row-style Hermite normal form of the lattice spanned by ``vectors``.

    Returns a basis in echelon form: pivots positive, strictly increasing
    pivot positions, entries above each pivot reduced into ``[0, pivot)``.
    Zero rows are dropped, so the result is a basis of the span.
    """
    rows = [list(v) for v in vectors if any(v)]
    for r in rows:
        if len(r) != dim:
            raise ValueError("vector length mismatch")
    out: list[list[int]] = []
    col = 0
    while rows and col < dim:
        live = [r for r in rows if r[col]]
        if not live:
            col += 1
            continue
        rest = [r for r in rows if not r[col]]
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            piv = live[0]
            nxt = [piv]
            for r in live[1:]:
                q = r[col] // piv[col]
                r = [a - q * b for a, b in zip(r, piv)]
                if r[col]:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            live = nxt
        piv = live[0]
        if piv[col] < 0:
            piv = [-a for a in piv]
        for prev in out:
            q = prev[col] // piv[col]
            if q:
                prev[:] = [a - q * b for a, b in zip(prev, piv)]
        out.append(piv)
        rows = [r for r in rest if any(r)]
        col += 1
    return [tuple(r) for r in out]


def kernel_basis(M: IntMatrix) -> IntMatrix:
    """Saturated integer kernel of ``M`` as the columns of a matrix.

    The columns are in Hermite normal form (as rows of the transpose), so
    the output is canonical for the kernel lattice.
    """
    snf = smith_normal_form(M)
    r = snf.rank
    raw = [snf.V.column(j) for j in range(r, M.cols)]
    basis = hermite_normal_form(raw, M.cols)
    return IntMatrix.from_columns(basis, rows=M.cols)


def rank(M: IntMatrix) -> int:
    return smith_normal_form(M).rank


def quotient_structure(M: IntMatrix) -> tuple[int, list[int]]:
    """``(free_rank, torsion)`` of ``Z^rows / colspan(M)``.

    ``torsion`` lists the invariant factors greater than one.
    """
    snf = smith_normal_form(M)
    diag = [d for d in snf.diagonal if d != 0]
    return M.rows - len(diag), [d for d in diag if d > 1]


def solve_integer(M: IntMatrix, b: Sequence[int]) -> tuple[int, ...] | None:
    """An integer solution of ``M x = b``, or ``None`` if none exists."""
    if len(b) != M.rows:
        raise ValueError("right-hand side length mismatch")
    snf = smith_normal_form(M)
    c = snf.U.apply(b)
    y = [0] * M.cols
    for i in range(M.rows):
        d = snf.D[i, i] if i < M.cols else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d:
                return None
            y[i] = c[i] // d
    return snf.V.apply(y)


def determinant(a: Sequence[Sequence]) -> Fraction | int:
    """Exact determinant by fraction-free Bareiss elimination (ints) or Gauss (Fractions)."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    if any(len(r) != n for r in m):
        raise ValueError("determinant of non-square matrix")
    if all(isinstance(x, int) for r in m for x in r):
        sign, prev = 1, 1
        for k in range(n - 1):
            if m[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
                if swap is None:
                    return 0
                m[k], m[swap] = m[swap], m[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1]
    m = [[Fraction(x) for x in r] for r in m]
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        det *= m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[k])]
    return det


def _rref(a: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    m = [list(r) for r in a]
    rows = len(m)
    cols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rational_inverse(a: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(a)
    aug = [[Fraction(x) for x in a[i]] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    red, pivots = _rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red]


def rational_solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One rational solution of ``a x = b`` (free variables set to zero), or ``None``."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    aug = [[Fraction(x) for x in a[i]] + [Fraction(b[i])] for i in range(rows)]
    red, pivots = _rref(aug)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for r, c in enumerate(pivots):
        x[c] = red[r][cols]
    return x
