"""Inducing logarithmic connections from the trivial one on ``(C + C^dual)^k``.

The trivial connection ``d + (1/z) sum_i (dy_i / y_i) (e^i (x) e_i^*)`` is
pulled back along a column embedding ``M`` of ``C^m`` and projected
orthogonally.  With ``M = B`` this gives the logarithmic part of the
Dubrovin connection (``y_i = v_i``); with ``M = A`` and ``z = 1/lam`` it
gives the topological Gauss-Manin residues (``y_i = w_i``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .amodel import ExtremalModel, dubrovin_residue
from .bmodel import gm_topological_connection
from .errors import ConifoldError, RankDeficiencyError
from .linalg import IntMatrix, determinant, matmul, rank, rational_inverse, transpose
from .logconn import LogConnection
from .series import LAM, ZINV, TruncatedSeries
from .transition import TransitionPresentation, validate

__all__ = [
    "trivial_log_connection",
    "induce_via_embedding",
    "orthogonal_projection",
    "GlueVerdict",
    "GlueReport",
    "glue_check",
]

_STRUCTURAL = ("dimension", "rank_A", "rank_B")


def _frame(m: int) -> tuple[str, ...]:
    return tuple([f"e_{i + 1}" for i in range(m)] + [f"e^{i + 1}" for i in range(m)])


def trivial_log_connection(k: int) -> LogConnection:
    """Residue along ``y_i = 0`` is ``(1/z) e^i (x) e_i^*`` in the frame ``e_1..e_k, e^1..e^k``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    zero = TruncatedSeries()
    residues = []
    for i in range(k):
        R = [[zero] * (2 * k) for _ in range(2 * k)]
        R[k + i][i] = ZINV
        residues.append(tuple(tuple(r) for r in R))
    forms = tuple(tuple(int(i == j) for j in range(k)) for i in range(k))
    return LogConnection(k, forms, tuple(residues), _frame(k))


def _blockdiag(X, Y):
    rx, cx = len(X), len(X[0]) if X else 0
    ry, cy = len(Y), len(Y[0]) if Y else 0
    out = [[Fraction(0)] * (cx + cy) for _ in range(rx + ry)]
    for a in range(rx):
        for b in range(cx):
            out[a][b] = Fraction(X[a][b])
    for a in range(ry):
        for b in range(cy):
            out[rx + a][cx + b] = Fraction(Y[a][b])
    return out


def induce_via_embedding(k: int, M: IntMatrix | Sequence[Sequence]) -> LogConnection:
    """Pull the trivial connection back along ``C^m -> C^k, x -> M x`` and project.

    Primal vectors embed by ``M``, dual vectors by ``M (M^t M)^-1`` so the
    embedding is compatible with the pairing; projection back uses the
    left inverse ``(M^t M)^-1 M^t`` on the primal and ``M^t`` on the dual
    side.  The residue along ``y_i o M`` maps ``e_l`` to
    ``(1/z) sum_n M_il M_in e^n``.  ``M`` may have rational entries.
    """
    rows = M.to_rows() if isinstance(M, IntMatrix) else [list(r) for r in M]
    if len(rows) != k:
        raise ValueError(f"embedding has {len(rows)} rows, expected k = {k}")
    m = len(rows[0]) if rows else 0
    Mt = transpose(rows, m)
    gram = matmul(Mt, rows, k)
    if m == 0 or determinant(gram) == 0:
        raise RankDeficiencyError("embedding matrix must have full column rank")
    gram_inv = rational_inverse(gram)
    emb = _blockdiag(rows, matmul(rows, gram_inv, m))
    proj = _blockdiag(matmul(gram_inv, Mt, m), Mt)
    base = trivial_log_connection(k)
    residues = []
    for R in base.residues:
        # R is a single matrix unit, so only its coefficient is needed.
        (a, b), c = next(((a, b), x) for a, r in enumerate(R) for b, x in enumerate(r) if x)
        size = 2 * m
        zero = TruncatedSeries()
        left = [proj[s][a] for s in range(size)]
        right = [emb[b][t] for t in range(size)]
        out = []
        for s in range(size):
            if not left[s]:
                out.append((zero,) * size)
                continue
            out.append(tuple(c * (left[s] * right[t]) if right[t] else zero for t in range(size)))
        residues.append(tuple(out))
    forms = tuple(tuple(_simplify(x) for x in r) for r in rows)
    return LogConnection(m, forms, tuple(residues), _frame(m))


def _simplify(x):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else x


def orthogonal_projection(k: int, W: IntMatrix) -> list[list[Fraction]]:
    """Projection onto ``im(W)^perp`` for the standard dot product on ``Q^k``."""
    if W.cols == 0:
        return [[Fraction(int(i == j)) for j in range(k)] for i in range(k)]
    rows = W.to_rows()
    Wt = transpose(rows, W.cols)
    inv = rational_inverse(matmul(Wt, rows, k))
    P = matmul(matmul(rows, inv, W.cols), Wt, W.cols)
    return [[Fraction(int(i == j)) - P[i][j] for j in range(k)] for i in range(k)]


@dataclass(frozen=True)
class GlueVerdict:
    name: str
    passed: bool
    substitution: dict
    mismatches: tuple = ()


@dataclass(frozen=True)
class GlueReport:
    verdicts: tuple[GlueVerdict, ...]
    orthogonal: bool
    invertible: bool
    facts: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts) and self.orthogonal and self.invertible

    def __getitem__(self, name: str) -> GlueVerdict:
        for v in self.verdicts:
            if v.name == name:
                return v
        raise KeyError(name)


def _compare(induced: LogConnection, expected_forms, expected_residues, dual_offset, mu):
    """Locate differences as ``(node, kind, row, col, got, want)``, 1-based."""
    bad = []
    for i, (form, R) in enumerate(zip(induced.forms, induced.residues)):
        want_form = expected_forms[i]
        if tuple(Fraction(x) for x in form) != tuple(Fraction(x) for x in want_form):
            bad.append((i + 1, "form", None, None, [str(Fraction(x)) for x in form],
                        [str(Fraction(x)) for x in want_form]))
        W = expected_residues[i]
        for a in range(2 * mu):
            for b in range(2 * mu):
                got = R[a][b]
                want = W[a][b]
                if got != want:
                    bad.append((i + 1, "residue", a + 1, b + 1, str(got), str(want)))
    return tuple(bad)


def glue_check(P: TransitionPresentation) -> GlueReport:
    """Compare both induced connections with the A- and B-model residues.

    Structural defects (wrong shapes, rank deficiency) raise; an
    orthogonality failure is reported through the verdicts instead, each
    mismatch located by node and residue entry.
    """
    report = validate(P)
    broken = [c.name for c in report.checks if c.name in _STRUCTURAL and not c.passed]
    if broken:
        raise ConifoldError("presentation fails " + ", ".join(broken))
    k, A, B = P.k, P.A, P.B
    orthogonal = (A.T @ B).is_zero()
    invertible = P.mu + P.rho == k and determinant(P.S.to_rows()) != 0

    # (1) Dubrovin side: embed through the part of B orthogonal to im(A).
    MB = matmul(orthogonal_projection(k, A), B.to_rows(), k)
    rho = P.rho
    induced_b = induce_via_embedding(k, MB)
    model = ExtremalModel(P, order=0, check=False)
    zero = TruncatedSeries()
    expected_b = []
    for i in range(k):
        D = dubrovin_residue(model, i + 1)
        R = [[zero] * (2 * rho) for _ in range(2 * rho)]
        for m in range(rho):
            for n in range(rho):
                R[rho + n][m] = D[m][n]
        expected_b.append(R)
    bad_b = _compare(induced_b, [B.row(i) for i in range(k)], expected_b, rho, rho)
    v1 = GlueVerdict("dubrovin", not bad_b, {"y_i": "v_i"}, bad_b)

    # (2) Gauss-Manin side: embed through the part of A orthogonal to im(B), set z = 1/lam.
    MA = matmul(orthogonal_projection(k, B), A.to_rows(), k)
    mu = P.mu
    induced_a = induce_via_embedding(k, MA)
    induced_a = LogConnection(
        mu, induced_a.forms,
        tuple(tuple(tuple(x.substitute("zinv", LAM) for x in r) for r in R) for R in induced_a.residues),
        gm_frame(mu))
    gm = gm_topological_connection(P)
    bad_a = _compare(induced_a, gm.forms, gm.residues, mu, mu)
    v2 = GlueVerdict("gauss_manin", not bad_a, {"y_i": "w_i", "z": "1/lam"}, bad_a)

    facts = {
        "AtB_zero": orthogonal,
        "det_S_nonzero": invertible,
        "rank_A": rank(A),
        "rank_B": rank(B),
    }
    return GlueReport((v1, v2), orthogonal, invertible, facts)


def gm_frame(mu: int) -> tuple[str, ...]:
    return tuple([f"v_{m + 1}" for m in range(mu)] + [f"v^{m + 1}" for m in range(mu)])
