"""B-model side: vanishing cycles, Picard-Lefschetz monodromy and periods.

Conventions.  A symplectic basis ``alpha_0..alpha_h, beta_0..beta_h`` of
H_3 has ``(alpha_j . beta_p) = delta_jp``.  Cocycles are written in the
dual basis, ``sigma = sum x_p alpha_p^* + y_p beta_p^*`` with
``x_p = sigma(alpha_p)`` and ``y_p = sigma(beta_p)``; coordinate vectors
are ``(x_0..x_h, y_0..y_h)``.  Poincare duality sends ``alpha_p`` to
``beta_p^*`` and ``beta_p`` to ``-alpha_p^*``.  The vanishing cycles
``Gamma_j = alpha_j`` (``1 <= j <= mu``) span V, and the spheres are
``S_i = -sum_j a_ij Gamma_j``.

Index arguments of the public functions are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import (ConifoldError, DegeneratePairingError, DimensionMismatchError,
                     IsotropyError)
from .linalg import (IntMatrix, determinant, kernel_basis, matmul, rank, rational_solve,
                     smith_normal_form, solve_integer)
from .logconn import LogConnection
from .logseries import LogSeries
from .series import LAM, TruncatedSeries, const, var
from .transition import TransitionPresentation

__all__ = [
    "SymplecticLattice",
    "build_symplectic_basis",
    "standard_symplectic_form",
    "SphereSystem",
    "picard_lefschetz",
    "pl_nilpotent",
    "single_sphere_nilpotent",
    "cocycle_pairing",
    "monodromy_pairing",
    "monodromy_pairing_via_pl",
    "omega_expansion",
    "beta_period",
    "yukawa_principal",
    "yukawa_from_periods",
    "yukawa_tensor_from_periods",
    "yukawa_principal_tensor",
    "gm_topological_connection",
    "gm_residue_tensors",
    "Prepotential",
    "BGConnection",
    "bryant_griffiths_connection",
    "prepotential_from_periods",
]


def standard_symplectic_form(n: int) -> list[list[int]]:
    """``[[0, I], [-I, 0]]`` of size ``2n``."""
    return [[(1 if j == i + n else -1 if i == j + n else 0) for j in range(2 * n)]
            for i in range(2 * n)]


def _pair(M: Sequence[Sequence], x: Sequence, y: Sequence):
    total = 0
    for i, xi in enumerate(x):
        if xi:
            row = M[i]
            for j, yj in enumerate(y):
                if yj and row[j]:
                    total += xi * row[j] * yj
    return total


@dataclass(frozen=True)
class SymplecticLattice:
    pairing: IntMatrix
    alpha: tuple[tuple, ...]
    beta: tuple[tuple, ...]
    mu: int

    @property
    def h(self) -> int:
        return len(self.alpha) - 1

    def pair(self, x, y):
        return _pair(self.pairing.to_rows(), x, y)

    def basis(self) -> list[tuple]:
        return list(self.alpha) + list(self.beta)

    def gram(self) -> list[list]:
        b = self.basis()
        M = self.pairing.to_rows()
        return [[_pair(M, x, y) for y in b] for x in b]

    def is_integral(self) -> bool:
        return all(Fraction(c).denominator == 1 for v in self.basis() for c in v)

    def symplectic_coordinates(self, cycle: Sequence) -> tuple:
        """Coordinates ``(c_0..c_h, d_0..d_h)`` with ``cycle = sum c_p alpha_p + d_p beta_p``."""
        M = self.pairing.to_rows()
        c = [_pair(M, cycle, b) for b in self.beta]
        d = [_pair(M, a, cycle) for a in self.alpha]
        return tuple(c + d)


def build_symplectic_basis(pairing: IntMatrix, V_basis: Sequence[Sequence[int]]) -> SymplecticLattice:
    """Symplectic basis whose first ``alpha``s (after ``alpha_0``) are the given ``V_basis``.

    ``V_basis`` is extended greedily to a maximal isotropic ``W`` by taking
    the lowest-index vector of ``W^perp`` outside ``W``; ``alpha_0`` is the
    last vector added.  Dual vectors ``delta_l`` with
    ``(alpha_p . delta_l) = delta_pl`` are then corrected inductively by
    ``beta_{l+1} = delta_{l+1} - sum_{p<=l} (delta_{l+1} . beta_p) alpha_p``.
    """
    N = pairing.rows
    if pairing.cols != N or N % 2:
        raise DegeneratePairingError("pairing must be square of even size")
    rows = pairing.to_rows()
    if any(rows[i][j] != -rows[j][i] for i in range(N) for j in range(N)):
        raise DegeneratePairingError("pairing is not skew-symmetric")
    if determinant(rows) == 0:
        raise DegeneratePairingError("pairing is degenerate")
    n = N // 2
    V = [tuple(int(x) for x in v) for v in V_basis]
    for v in V:
        if len(v) != N:
            raise DimensionMismatchError("V basis vectors must match the lattice rank")
    for a in range(len(V)):
        for b in range(len(V)):
            if _pair(rows, V[a], V[b]):
                raise IsotropyError(f"V is not isotropic: ({a + 1}.{b + 1}) != 0")
    if V and rank(IntMatrix.from_rows(V)) != len(V):
        raise ConifoldError("V basis vectors are dependent")
    if len(V) > n:
        raise IsotropyError("isotropic subspace larger than half the rank")
    mu = len(V)

    W = list(V)
    while len(W) < n:
        perp = _perp(rows, W, N)
        for cand in perp:
            if rank(IntMatrix.from_rows(W + [cand])) > len(W):
                W.append(cand)
                break
        else:  # pragma: no cover - impossible for nondegenerate pairings
            raise ConifoldError("failed to extend to a maximal isotropic subspace")

    W = _saturate_extension(rows, W, mu, N)

    # W^t M delta = e_l
    WM = IntMatrix.from_rows(matmul([list(w) for w in W], rows))
    deltas = []
    for l in range(n):
        e = [int(l == p) for p in range(n)]
        sol = solve_integer(WM, e)
        if sol is None:
            sol = tuple(rational_solve(WM.to_rows(), e))
        deltas.append(tuple(sol))

    betas: list[tuple] = []
    for l in range(n):
        d = deltas[l]
        b = list(d)
        for p in range(l):
            c = _pair(rows, d, betas[p])
            if c:
                b = [x - c * y for x, y in zip(b, W[p])]
        betas.append(tuple(b))

    alpha = (W[n - 1],) + tuple(W[:n - 1])
    beta = (betas[n - 1],) + tuple(betas[:n - 1])
    return SymplecticLattice(pairing, alpha, beta, mu)


def _perp(rows, W, N) -> list[tuple[int, ...]]:
    if not W:
        return [tuple(int(i == j) for j in range(N)) for i in range(N)]
    WM = IntMatrix.from_rows(matmul([list(w) for w in W], rows))
    return kernel_basis(WM).columns()


def _saturate_extension(rows, W, mu, N):
    """Replace the extension vectors by a completion of V to a basis of ``sat(W)``.

    For a Lagrangian W, ``W^perp`` computed as a saturated kernel is exactly
    ``sat(W)``.  If V is not primitive there, the rational extension is kept.
    """
    sat = _perp(rows, W, N)
    n = len(W)
    if mu == 0:
        return [tuple(v) for v in sat]
    S = IntMatrix.from_columns(sat, rows=N)
    coords = []
    for v in W[:mu]:
        c = solve_integer(S, v)
        if c is None:
            return W
        coords.append(c)
    K = IntMatrix.from_columns(coords, rows=n)
    snf = smith_normal_form(K)
    if any(d != 1 for d in snf.diagonal):
        return W
    completion = [snf.U_inv.column(j) for j in range(mu, n)]
    ext = [S.apply(c) for c in completion]
    return list(W[:mu]) + ext


# -- vanishing spheres and Picard-Lefschetz ---------------------------------------


@dataclass(frozen=True)
class SphereSystem:
    """Sphere classes in symplectic coordinates: ``S_i = -sum_j a_ij alpha_j``."""

    A: IntMatrix
    h: int

    def __post_init__(self):
        if self.h < self.A.cols:
            raise DimensionMismatchError(f"h = {self.h} is smaller than mu = {self.A.cols}")

    @property
    def k(self) -> int:
        return self.A.rows

    @property
    def mu(self) -> int:
        return self.A.cols

    def cycle(self, i: int) -> tuple[int, ...]:
        """Homology coordinates of ``S_i`` (zero-based ``i``)."""
        n = self.h + 1
        c = [0] * (2 * n)
        for j in range(self.mu):
            c[j + 1] = -self.A[i, j]
        return tuple(c)

    def pd(self, i: int) -> tuple[int, ...]:
        return poincare_dual(self.cycle(i))

    @classmethod
    def from_lattice(cls, A: IntMatrix, L: SymplecticLattice) -> "SphereSystem":
        if L.mu != A.cols:
            raise DimensionMismatchError("lattice V rank must equal mu")
        return cls(A, L.h)


def poincare_dual(cycle: Sequence) -> tuple:
    """``PD(alpha_p) = beta_p^*``, ``PD(beta_p) = -alpha_p^*`` in cocycle coordinates."""
    n = len(cycle) // 2
    c, d = cycle[:n], cycle[n:]
    return tuple([-x for x in d] + list(c))


def evaluate(sigma: Sequence, cycle: Sequence):
    return sum(s * c for s, c in zip(sigma, cycle))


def cocycle_pairing(sigma: Sequence, tau: Sequence):
    """Cup-product pairing; ``(alpha_p^* . beta_q^*) = delta_pq``."""
    n = len(sigma) // 2
    return sum(sigma[p] * tau[n + p] - sigma[n + p] * tau[p] for p in range(n))


def picard_lefschetz(L: SymplecticLattice | None, S: SphereSystem, sigma: Sequence,
                     nodes: Sequence[int] | None = None) -> tuple:
    """``T sigma = sigma + sum_i sigma([S_i]) PD([S_i])`` over ``nodes`` (1-based, default all)."""
    n = S.h + 1
    if L is not None and L.h != S.h:
        raise DimensionMismatchError("lattice and sphere system disagree on h")
    if len(sigma) != 2 * n:
        raise DimensionMismatchError(f"cocycle must have {2 * n} coordinates")
    out = list(sigma)
    for i in _nodes(S, nodes):
        c = evaluate(sigma, S.cycle(i))
        if c:
            out = [x + c * y for x, y in zip(out, S.pd(i))]
    return tuple(out)


def _nodes(S: SphereSystem, nodes):
    if nodes is None:
        return range(S.k)
    return [i - 1 for i in nodes]


def pl_nilpotent(S: SphereSystem, nodes: Sequence[int] | None = None) -> list[list[int]]:
    """Matrix of ``N = T - I`` acting on cocycle coordinates (columns = images of basis)."""
    n2 = 2 * (S.h + 1)
    N = [[0] * n2 for _ in range(n2)]
    for i in _nodes(S, nodes):
        cyc, pd = S.cycle(i), S.pd(i)
        for a in range(n2):
            if pd[a]:
                for b in range(n2):
                    if cyc[b]:
                        N[a][b] += pd[a] * cyc[b]
    return N


def single_sphere_nilpotent(S: SphereSystem, i: int) -> list[list[int]]:
    """``N^(i) sigma = sigma([S_i]) PD([S_i])`` (1-based ``i``)."""
    return pl_nilpotent(S, [i])


def monodromy_pairing(P: TransitionPresentation, l: int, h: int | None = None) -> list[list[int]]:
    """``(A_l^t A_l)_{jp}`` where ``A_l`` keeps the rows with ``a_il != 0``.

    With ``h`` given, the result is padded to ``(h+1) x (h+1)`` indexed by
    ``p = 0..h``; rows and columns for ``p = 0`` and ``p > mu`` vanish.
    """
    A = P.A
    if not 1 <= l <= P.mu:
        raise IndexError(f"coordinate index {l} outside 1..{P.mu}")
    Al = A.with_rows_zeroed(i for i in range(P.k) if A[i, l - 1] == 0)
    G = (Al.T @ Al).to_rows()
    if h is None:
        return G
    out = [[0] * (h + 1) for _ in range(h + 1)]
    for j in range(P.mu):
        for p in range(P.mu):
            out[j + 1][p + 1] = G[j][p]
    return out


def monodromy_pairing_via_pl(P: TransitionPresentation, l: int, h: int | None = None) -> list[list[int]]:
    """``int_{beta_p} N(l) Gamma_j^*`` computed from Picard-Lefschetz on the vanishing spheres."""
    h = P.mu if h is None else h
    S = SphereSystem(P.A, h)
    nodes = [i + 1 for i in range(P.k) if P.A[i, l - 1] != 0]
    n = h + 1
    out = []
    for j in range(1, P.mu + 1):
        gamma_star = [0] * (2 * n)
        gamma_star[j] = 1
        image = [a - b for a, b in zip(picard_lefschetz(None, S, gamma_star, nodes), gamma_star)]
        out.append([image[n + p] for p in range(1, P.mu + 1)])
    return out


# -- periods ----------------------------------------------------------------------


def omega_expansion(P: TransitionPresentation, a_jets: Mapping | None = None,
                    h: int | None = None) -> list[LogSeries]:
    """Coordinates ``(int_{alpha_p} Omega, int_{beta_p} Omega)`` of the 3-form near the node.

    ``Omega = a_0 + sum_j Gamma_j^* r_j + h.o.t. - lam sum_i w_i log w_i PD([S_i])``.
    ``a_jets`` may carry ``"a0"`` (constant vector of length ``2h+2``, zero on
    ``alpha_1..alpha_mu``) and ``"hot"`` (coordinate index -> LogSeries,
    at least quadratic, not on ``alpha_1..alpha_mu``).
    """
    mu = P.mu
    h = mu if h is None else h
    if h < mu:
        raise DimensionMismatchError(f"h = {h} is smaller than mu = {mu}")
    n = h + 1
    a_jets = dict(a_jets or {})
    a0 = list(a_jets.get("a0", [0] * (2 * n)))
    if len(a0) != 2 * n:
        raise DimensionMismatchError(f"a0 must have {2 * n} coordinates")
    for j in range(1, mu + 1):
        if a0[j]:
            raise ConifoldError("a0 must vanish on the vanishing cycles alpha_1..alpha_mu")
    omega = [LogSeries.constant(mu, Fraction(c)) for c in a0]
    for j in range(mu):
        omega[j + 1] = omega[j + 1] + LogSeries.r(mu, j)
    for idx, series in dict(a_jets.get("hot", {})).items():
        idx = int(idx)
        if 1 <= idx <= mu:
            raise ConifoldError("higher-order terms must lie in V^perp")
        for (alpha, lf, inv, _), _c in series.terms.items():
            if lf is not None or inv is not None or sum(alpha) < 2:
                raise ConifoldError("higher-order terms must be holomorphic and at least quadratic")
        omega[idx] = omega[idx] + series
    S = SphereSystem(P.A, h)
    for i in range(P.k):
        row = P.A.row(i)
        if not any(row):
            continue
        wlogw = LogSeries.w_log_w(row, -LAM)
        pd = S.pd(i)
        for c, coeff in enumerate(pd):
            if coeff:
                omega[c] = omega[c] + wlogw * coeff
    return omega


def beta_period(omega: Sequence[LogSeries], p: int) -> LogSeries:
    """``int_{beta_p} Omega`` (``p`` runs over ``0..h``)."""
    n = len(omega) // 2
    return omega[n + p]


def yukawa_principal(P: TransitionPresentation, p: int, m: int, n: int) -> LogSeries:
    """``sum_i lam a_ip a_im a_in / w_i`` (1-based indices)."""
    for x in (p, m, n):
        if not 1 <= x <= P.mu:
            raise IndexError(f"index {x} outside 1..{P.mu}")
    out = LogSeries.zero(P.mu)
    for i in range(P.k):
        row = P.A.row(i)
        c = row[p - 1] * row[m - 1] * row[n - 1]
        if c:
            out = out + LogSeries.inverse(row, 1, LAM * c)
    return out


def yukawa_from_periods(omega: Sequence[LogSeries], p: int, m: int, n: int) -> LogSeries:
    """``d^2/(dr_m dr_n)`` of the ``beta_p`` period: the third derivative of the prepotential."""
    return beta_period(omega, p).derivative(m - 1).derivative(n - 1)


def yukawa_tensor_from_periods(omega: Sequence[LogSeries], mu: int) -> dict:
    """All ``u_pmn`` with ``p <= m <= n`` from the periods, reusing the first derivative."""
    out = {}
    for p in range(1, mu + 1):
        period = beta_period(omega, p)
        for m in range(p, mu + 1):
            first = period.derivative(m - 1)
            for n in range(m, mu + 1):
                out[(p, m, n)] = first.derivative(n - 1)
    return out


def yukawa_principal_tensor(P: TransitionPresentation) -> dict:
    """All principal parts with ``p <= m <= n``."""
    idx = range(1, P.mu + 1)
    return {(p, m, n): yukawa_principal(P, p, m, n)
            for p in idx for m in idx if m >= p for n in idx if n >= m}


def gm_residue_tensors(P: TransitionPresentation) -> list[IntMatrix]:
    """``P^i_{mn} = a_im a_in`` per node."""
    out = []
    for i in range(P.k):
        row = P.A.row(i)
        out.append(IntMatrix.from_rows([[row[m] * row[n] for n in range(P.mu)] for m in range(P.mu)],
                                       cols=P.mu))
    return out


def gm_topological_connection(P: TransitionPresentation) -> LogConnection:
    """Gauss-Manin connection on ``V^* (+) V`` in the frame ``v_1..v_mu, v^1..v^mu``.

    Along ``w_i = 0`` the residue sends ``v_m`` to ``lam sum_n a_im a_in v^n``.
    """
    mu = P.mu
    frame = tuple([f"v_{m + 1}" for m in range(mu)] + [f"v^{m + 1}" for m in range(mu)])
    zero = TruncatedSeries()
    residues = []
    for Pi in gm_residue_tensors(P):
        R = [[zero] * (2 * mu) for _ in range(2 * mu)]
        for m in range(mu):
            for n in range(mu):
                if Pi[m, n]:
                    R[mu + n][m] = LAM * Pi[m, n]
        residues.append(tuple(tuple(r) for r in R))
    forms = tuple(P.A.row(i) for i in range(P.k))
    return LogConnection(mu, forms, tuple(residues), frame)


# -- Bryant-Griffiths ---------------------------------------------------------------


@dataclass(frozen=True)
class Prepotential:
    """Weight-two homogeneous Laurent polynomial ``u(x_0..x_h)``."""

    u: TruncatedSeries
    h: int

    def __post_init__(self):
        names = {f"x{p}" for p in range(self.h + 1)}
        for m in self.u.terms:
            if any(v not in names for v, _ in m):
                raise ConifoldError(f"unexpected variable in prepotential term {m}")
            if sum(e for _, e in m) != 2:
                raise ConifoldError("prepotential is not homogeneous of weight 2")

    def d(self, *indices: int) -> TruncatedSeries:
        out = self.u
        for p in indices:
            out = out.derivative(f"x{p}")
        return out

    def euler_defect(self) -> TruncatedSeries:
        """``2u - sum_p x_p d_p u``; zero for weight-two potentials."""
        total = self.u * 2
        for p in range(self.h + 1):
            total = total - var(f"x{p}") * self.d(p)
        return total


@dataclass(frozen=True)
class BGConnection:
    frame: tuple[str, ...]
    directions: tuple[str, ...]
    matrices: Mapping[str, tuple[tuple[TruncatedSeries, ...], ...]]
    curvature_zero: bool
    euler_relation: bool
    failures: tuple = ()

    @property
    def flat(self) -> bool:
        return self.curvature_zero


def bryant_griffiths_connection(u: Prepotential) -> BGConnection:
    """Connection in the frame ``tau_0, tau_1..tau_h, tau^1..tau^h, tau^0`` on ``x_0 != 0``.

    ``nabla_p tau_0 = tau_p``, ``nabla_p tau_j = sum_m u_pjm tau^m``,
    ``nabla_p tau^j = delta_pj tau^0``, ``nabla_p tau^0 = 0``.
    Curvature and the Euler relation ``x_0 u_pj0 + sum_m x_m u_pjm = 0``
    are evaluated symbolically.
    """
    h = u.h
    size = 2 * h + 2
    frame = tuple(["tau_0"] + [f"tau_{j}" for j in range(1, h + 1)]
                  + [f"tau^{j}" for j in range(1, h + 1)] + ["tau^0"])
    zero = TruncatedSeries()
    one = const(1)
    lower = h + 1
    top = size - 1
    matrices = {}
    for p in range(1, h + 1):
        M = [[zero] * size for _ in range(size)]
        M[p][0] = one
        for j in range(1, h + 1):
            for m in range(1, h + 1):
                M[lower + m - 1][j] = u.d(p, j, m)
            if j == p:
                M[top][lower + j - 1] = one
        matrices[f"x{p}"] = tuple(tuple(r) for r in M)

    failures = []
    dirs = tuple(matrices)
    flat = True
    for a in range(len(dirs)):
        for b in range(a + 1, len(dirs)):
            Ma, Mb = matrices[dirs[a]], matrices[dirs[b]]
            for r in range(size):
                for c in range(size):
                    F = Mb[r][c].derivative(dirs[a]) - Ma[r][c].derivative(dirs[b])
                    for t in range(size):
                        if Ma[r][t] and Mb[t][c]:
                            F = F + Ma[r][t] * Mb[t][c]
                        if Mb[r][t] and Ma[t][c]:
                            F = F - Mb[r][t] * Ma[t][c]
                    if not F.is_zero():
                        flat = False
                        failures.append(("curvature", dirs[a], dirs[b], frame[r], frame[c]))

    euler_ok = u.euler_defect().is_zero()
    if not euler_ok:
        failures.append(("homogeneity",))
    for p in range(1, h + 1):
        for j in range(1, h + 1):
            rel = var("x0") * u.d(p, j, 0)
            for m in range(1, h + 1):
                rel = rel + var(f"x{m}") * u.d(p, j, m)
            if not rel.is_zero():
                euler_ok = False
                failures.append(("euler", p, j))
    return BGConnection(frame, dirs, matrices, flat, euler_ok, tuple(failures))


def prepotential_from_periods(x: Sequence, u_p: Sequence):
    """``u = (1/2) sum_p x_p u_p``."""
    if len(x) != len(u_p):
        raise DimensionMismatchError("period vectors must have equal length")
    total = 0
    for a, b in zip(x, u_p):
        total = total + a * b
    return total * Fraction(1, 2)
