"""Extremal genus-zero A-model of a conifold transition.

Kaehler coordinates on H^2(Y)/H^2(X) are the series variables ``u1..u_rho``
and the Novikov symbols of the exceptional curves are ``q1..q_k``.  The
structural coefficients are

    C_lmn(u) = (T_l.T_m.T_n) + sum_i b_il b_im b_in f(q_i exp(v_i)),
    v_i = sum_p b_ip u^p,  f(x) = x / (1 - x).

All index arguments of the public functions are 1-based, matching the
usual notation for ``l, m, n`` and node ``i``.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .errors import ConifoldError, DimensionMismatchError
from .linalg import IntMatrix, kernel_basis
from .series import ZINV, TruncatedSeries, const, exp_series, geometric_series, var
from .transition import TransitionPresentation, validate

__all__ = [
    "f_series",
    "multiple_cover_series",
    "ExtremalModel",
    "structural_terms",
    "structural_coefficient",
    "DubrovinConnection",
    "dubrovin_connection",
    "curvature",
    "dubrovin_residue",
    "monodromy_block",
    "residue_oracle",
    "laurent_f_exp",
    "NovikovLattice",
    "novikov_reduce",
    "TransformResult",
    "transform_prepotential",
    "restrict_prepotential",
    "classical_cross_terms",
]

_CORE_CHECKS = ("orthogonality", "dimension", "rank_A", "rank_B", "B_is_ker_At", "A_is_ker_Bt")


def f_series(order: int, name: str = "q") -> TruncatedSeries:
    """``f(q) = q + q^2 + ... + q^order``."""
    if order < 1:
        raise ValueError("order must be at least 1")
    return geometric_series(var(name, order), order)


def multiple_cover_series(order: int, name: str = "q") -> TruncatedSeries:
    """Genus-zero multiple cover contributions ``sum_d q^d / d^3`` of a (-1,-1) curve.

    ``name`` stands for the combined symbol ``q^[C] e^(C.t)``, so the curve
    direction derivative is the Euler operator ``name * d/d(name)``.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    return geometric_series(var(name, order), order, weights=lambda d: Fraction(1, d ** 3))


def _u(p: int) -> str:
    return f"u{p + 1}"


def _q(i: int) -> str:
    return f"q{i + 1}"


@dataclass(frozen=True)
class ExtremalModel:
    presentation: TransitionPresentation
    order: int = 4
    # mixed[eps][m][n] = C_{eps m n}: constants coupling H^2(X) directions to the block.
    mixed: tuple = ()
    check: InitVar[bool] = True

    def __post_init__(self, check):
        if self.order < 0:
            raise ValueError("order must be nonnegative")
        if check:
            report = validate(self.presentation)
            bad = [c for c in report.checks if c.name in _CORE_CHECKS and not c.passed]
            if bad:
                raise ConifoldError("presentation fails " + ", ".join(c.name for c in bad))
        rho = self.rho
        for eps, block in enumerate(self.mixed):
            if len(block) != rho or any(len(r) != rho for r in block):
                raise DimensionMismatchError(f"mixed block {eps} must be {rho}x{rho}")
            for m in range(rho):
                for n in range(rho):
                    if Fraction(block[m][n]) != Fraction(block[n][m]):
                        raise ConifoldError(f"mixed block {eps} is not symmetric")

    @property
    def B(self) -> IntMatrix:
        return self.presentation.B

    @property
    def k(self) -> int:
        return self.presentation.k

    @property
    def rho(self) -> int:
        return self.presentation.rho

    def v(self, i: int) -> TruncatedSeries:
        """``v_i = sum_p b_ip u^p`` for zero-based node ``i``."""
        return _linear_form(self.B.row(i), self.order)


def _linear_form(row: Sequence[int], order: int | None) -> TruncatedSeries:
    out = TruncatedSeries({}, order)
    for p, b in enumerate(row):
        if b:
            out = out + var(_u(p), order) * b
    return out


@lru_cache(maxsize=512)
def _node_f(row: tuple[int, ...], i: int, order: int) -> TruncatedSeries:
    if order == 0:
        return TruncatedSeries({}, 0)
    x = var(_q(i), order) * exp_series(_linear_form(row, order), order)
    return geometric_series(x, order)


def _check_index(x: int, upper: int, what: str) -> int:
    if not 1 <= x <= upper:
        raise IndexError(f"{what} index {x} outside 1..{upper}")
    return x - 1


def structural_terms(M: ExtremalModel, l: int, m: int, n: int):
    """``(classical, [(node, b_il b_im b_in), ...])`` for 1-based ``l, m, n``."""
    l0, m0, n0 = (_check_index(x, M.rho, "divisor") for x in (l, m, n))
    B = M.B
    weights = []
    for i in range(M.k):
        w = B[i, l0] * B[i, m0] * B[i, n0]
        if w:
            weights.append((i, w))
    return M.presentation.triple_number(l0, m0, n0), weights


def structural_coefficient(M: ExtremalModel, l: int, m: int, n: int) -> TruncatedSeries:
    classical, weights = structural_terms(M, l, m, n)
    out = const(classical, M.order)
    for i, w in weights:
        out = out + _node_f(M.B.row(i), i, M.order) * w
    return out


# -- Dubrovin connection -------------------------------------------------------


@dataclass(frozen=True)
class DubrovinConnection:
    """Connection matrices ``z nabla`` on the frame ``T_m, T^m, Tbar^eps, T^0``.

    ``matrices[d][a][b]`` is the coefficient of frame vector ``a`` in
    ``nabla_{d} (frame vector b)``; ``zinv`` carries the ``1/z``.
    """

    frame: tuple[str, ...]
    directions: tuple[str, ...]
    matrices: Mapping[str, tuple[tuple[TruncatedSeries, ...], ...]]

    def entry(self, direction: str, target: str, source: str) -> TruncatedSeries:
        a, b = self.frame.index(target), self.frame.index(source)
        return self.matrices[direction][a][b]


def dubrovin_connection(M: ExtremalModel) -> DubrovinConnection:
    rho, order = M.rho, M.order
    ne = len(M.mixed)
    frame = tuple([f"T_{m + 1}" for m in range(rho)] + [f"T^{m + 1}" for m in range(rho)]
                  + [f"Tbar^{e + 1}" for e in range(ne)] + (["T^0"] if rho or ne else []))
    if not frame:
        return DubrovinConnection((), (), {})
    size = len(frame)
    zero = TruncatedSeries({}, order)
    lower, mixed0, top = rho, 2 * rho, size - 1
    mz = -ZINV

    C = {}
    for l in range(rho):
        for m in range(rho):
            for n in range(rho):
                key = tuple(sorted((l, m, n)))
                if key not in C:
                    C[key] = structural_coefficient(M, *(x + 1 for x in key))

    matrices = {}
    for l in range(rho):
        mat = [[zero] * size for _ in range(size)]
        mat[top][lower + l] = mz.truncate(order)
        for m in range(rho):
            for n in range(rho):
                mat[lower + n][m] = C[tuple(sorted((l, m, n)))] * mz
            for e in range(ne):
                c = Fraction(M.mixed[e][l][m])
                if c:
                    mat[mixed0 + e][m] = (mz * c).truncate(order)
        matrices[_u(l)] = tuple(tuple(r) for r in mat)
    for e in range(ne):
        mat = [[zero] * size for _ in range(size)]
        for m in range(rho):
            for n in range(rho):
                c = Fraction(M.mixed[e][m][n])
                if c:
                    mat[lower + n][m] = (mz * c).truncate(order)
        mat[top][mixed0 + e] = mz.truncate(order)
        matrices[f"s{e + 1}"] = tuple(tuple(r) for r in mat)
    directions = tuple(matrices)
    return DubrovinConnection(frame, directions, matrices)


def _mat_mul(X, Y):
    n = len(X)
    out = []
    for a in range(n):
        row = []
        for b in range(n):
            acc = None
            for c in range(n):
                if X[a][c] and Y[c][b]:
                    t = X[a][c] * Y[c][b]
                    acc = t if acc is None else acc + t
            row.append(acc if acc is not None else TruncatedSeries({}, X[a][b].order))
        out.append(row)
    return out


def curvature(conn: DubrovinConnection) -> dict[tuple[str, str], list[list[TruncatedSeries]]]:
    """``F_ab = d_a M_b - d_b M_a + M_a M_b - M_b M_a`` for every pair of directions.

    Directions named ``u*`` differentiate the series; constant directions
    (``s*``) have no variable in the entries, so their derivatives vanish.
    """
    out = {}
    dirs = conn.directions
    for x in range(len(dirs)):
        for y in range(x + 1, len(dirs)):
            a, b = dirs[x], dirs[y]
            Ma, Mb = conn.matrices[a], conn.matrices[b]
            AB, BA = _mat_mul(Ma, Mb), _mat_mul(Mb, Ma)
            n = len(Ma)
            F = [[Mb[r][c].derivative(a) - Ma[r][c].derivative(b) + AB[r][c] - BA[r][c]
                  for c in range(n)] for r in range(n)]
            out[(a, b)] = F
    return out


# -- residues and monodromy ---------------------------------------------------


def dubrovin_residue(M: ExtremalModel, i: int) -> list[list[TruncatedSeries]]:
    """Residue of the connection along ``v_i = 0``: ``(1/z) b_im b_in``."""
    i0 = _check_index(i, M.k, "node")
    row = M.B.row(i0)
    return [[ZINV * (row[m] * row[n]) for n in range(M.rho)] for m in range(M.rho)]


def monodromy_block(M: ExtremalModel, l: int) -> list[list[TruncatedSeries]]:
    """``(1/z) B_l^t B_l`` with ``B_l`` keeping only rows where ``b_il != 0``."""
    l0 = _check_index(l, M.rho, "divisor")
    B = M.B
    Bl = B.with_rows_zeroed(i for i in range(M.k) if B[i, l0] == 0)
    G = Bl.T @ Bl
    return [[ZINV * G[m, n] for n in range(M.rho)] for m in range(M.rho)]


@lru_cache(maxsize=256)
def laurent_f_exp(b: int, order: int = 3) -> dict[int, Fraction]:
    """Laurent coefficients of ``f(exp(b x)) = -1 - 1/(exp(b x) - 1)`` around ``x = 0``.

    Uses ``(exp(bx) - 1)/(bx) = sum (bx)^n/(n+1)!`` and inverts that power
    series exactly.  Returns ``{power: coefficient}`` for powers ``-1..order``.
    """
    if b == 0:
        raise ZeroDivisionError("f(exp(0 x)) has no expansion in x")
    n = order + 2
    g = []
    fact = 1
    for j in range(n + 1):
        fact *= j + 1
        g.append(Fraction(b ** j, fact))
    h = [Fraction(0)] * (n + 1)
    h[0] = 1 / g[0]
    for j in range(1, n + 1):
        h[j] = -sum(g[t] * h[j - t] for t in range(1, j + 1)) / g[0]
    # 1/(exp(bx) - 1) = h(x) / (b x)
    out = {p - 1: -h[p] / b for p in range(n + 1) if p - 1 <= order}
    out[0] = out.get(0, Fraction(0)) - 1
    return {p: c for p, c in out.items() if c}


def residue_oracle(M: ExtremalModel, l: int) -> list[list[TruncatedSeries]]:
    """Residue along ``u^l -> 0`` from the node decomposition of ``C_lmn``.

    On the ``u^l`` axis with Novikov symbols set to one, node ``i`` carries
    ``f(exp(b_il u^l))``; its Laurent principal part supplies the residue.
    The connection coefficient is ``-(1/z) C_lmn``.
    """
    l0 = _check_index(l, M.rho, "divisor")
    out = []
    for m in range(M.rho):
        row = []
        for n in range(M.rho):
            _, weights = structural_terms(M, l, m + 1, n + 1)
            total = Fraction(0)
            for i, w in weights:
                total += w * laurent_f_exp(M.B[i, l0], 1).get(-1, Fraction(0))
            row.append(-ZINV * total)
        out.append(row)
    return out


# -- Novikov lattice and prepotential transport -----------------------------------


@dataclass(frozen=True)
class NovikovLattice:
    """Exponents ``(beta_1..beta_b, d_1..d_k)`` modulo the relations spanned by ``A``.

    ``beta`` are coordinates in a chosen basis of H_2(X) (lifted to Y) and
    ``d_i`` the multiplicities of the exceptional curves.  The canonical
    form replaces ``d`` by ``K^t d`` where the columns of ``K`` are the
    Hermite-normalised saturated kernel of ``A^t``; ``K^t`` is onto and its
    kernel is exactly ``sat(im A)``.
    """

    A: IntMatrix
    base_count: int = 0
    projection: IntMatrix = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "projection", kernel_basis(self.A.T).T)

    @property
    def k(self) -> int:
        return self.A.rows

    @property
    def generator_count(self) -> int:
        return self.base_count + self.k

    @property
    def canonical_rank(self) -> int:
        return self.base_count + self.projection.rows


def novikov_reduce(L: NovikovLattice, exponent: Sequence[int]) -> tuple[int, ...]:
    if len(exponent) != L.generator_count:
        raise DimensionMismatchError(
            f"exponent has length {len(exponent)}, expected {L.generator_count}")
    base = tuple(exponent[:L.base_count])
    return base + L.projection.apply(tuple(exponent[L.base_count:]))


@dataclass(frozen=True)
class TransformResult:
    """Coefficients keyed by canonical Y-class plus the classical cross terms."""

    coefficients: dict[tuple[int, ...], Fraction]
    cross_terms: TruncatedSeries
    base_count: int


def _extremal_contributions(M: ExtremalModel, L: NovikovLattice, order: int):
    out: dict[tuple[int, ...], Fraction] = {}
    for i in range(M.k):
        for d in range(1, order + 1):
            exp = [0] * L.generator_count
            exp[L.base_count + i] = d
            key = novikov_reduce(L, exp)
            out[key] = out.get(key, Fraction(0)) + Fraction(1, d ** 3)
    return out


def transform_prepotential(M: ExtremalModel, FX: Iterable, order: int | None = None,
                           lifts: Mapping | None = None, base_count: int | None = None,
                           cubic: Sequence | None = None) -> TransformResult:
    """Transport genus-zero data from X to Y.

    ``FX`` is a list of ``(beta, n_beta)`` with ``beta`` an exponent vector
    in H_2(X); ``lifts`` maps ``beta`` to the exceptional multiplicities
    ``d`` of its chosen lift (default zero).  The extremal classes
    ``d [C_i]`` get ``1/d^3`` for ``d <= order``, merged per canonical class.
    """
    order = M.order if order is None else order
    FX = [(tuple(int(x) for x in beta), Fraction(n)) for beta, n in FX]
    if base_count is None:
        base_count = len(FX[0][0]) if FX else 0
    L = NovikovLattice(M.presentation.A, base_count)
    lifts = dict(lifts or {})
    out: dict[tuple[int, ...], Fraction] = {}
    for beta, n in FX:
        if len(beta) != base_count:
            raise DimensionMismatchError(f"class {beta} has length {len(beta)}, expected {base_count}")
        if not any(beta):
            raise ConifoldError("the zero class does not carry a Gromov-Witten coefficient")
        d = tuple(lifts.get(beta, (0,) * M.k))
        if len(d) != M.k:
            raise DimensionMismatchError(f"lift of {beta} must have length {M.k}")
        key = novikov_reduce(L, beta + d)
        out[key] = out.get(key, Fraction(0)) + n
    for key, c in _extremal_contributions(M, L, order).items():
        out[key] = out.get(key, Fraction(0)) + c
    out = {key: c for key, c in sorted(out.items()) if c}
    cross = classical_cross_terms(cubic, base_count) if cubic is not None else TruncatedSeries()
    return TransformResult(out, cross, base_count)


def restrict_prepotential(M: ExtremalModel, FY: Mapping | Iterable, base_count: int,
                          order: int | None = None) -> dict[tuple[int, ...], Fraction]:
    """Inverse transport: drop the extremal series and push classes forward to X."""
    order = M.order if order is None else order
    items = FY.items() if isinstance(FY, Mapping) else FY
    L = NovikovLattice(M.presentation.A, base_count)
    width = L.canonical_rank
    remaining: dict[tuple[int, ...], Fraction] = {}
    for key, c in items:
        key = tuple(int(x) for x in key)
        if len(key) != width:
            raise DimensionMismatchError(f"Y class {key} has length {len(key)}, expected {width}")
        remaining[key] = remaining.get(key, Fraction(0)) + Fraction(c)
    for key, c in _extremal_contributions(M, L, order).items():
        remaining[key] = remaining.get(key, Fraction(0)) - c
    out: dict[tuple[int, ...], Fraction] = {}
    for key, c in remaining.items():
        if not c:
            continue
        beta = key[:base_count]
        if not any(beta):
            raise ConifoldError(f"exceptional class {key} has coefficient {c} beyond the extremal series")
        out[beta] = out.get(beta, Fraction(0)) + c
    return {b: c for b, c in sorted(out.items()) if c}


def classical_cross_terms(cubic: Sequence, base_count: int) -> TruncatedSeries:
    """``((s+u)^3 - s^3 - u^3)/3!`` for the cubic form with tensor ``cubic``.

    Indices ``0..base_count-1`` belong to H^2(X) (variables ``s*``), the
    rest to the exceptional divisors (variables ``u*``).
    """
    n = len(cubic)
    names = [f"s{a + 1}" for a in range(base_count)] + [f"u{a + 1}" for a in range(n - base_count)]

    def form(active):
        total = TruncatedSeries()
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    t = Fraction(cubic[a][b][c])
                    if t and all(active(x) for x in (a, b, c)):
                        total = total + TruncatedSeries.monomial(t / 6) * \
                            var(names[a]) * var(names[b]) * var(names[c])
        return total

    return form(lambda x: True) - form(lambda x: x < base_count) - form(lambda x: x >= base_count)
