import itertools
import random
from fractions import Fraction

import pytest
import sympy

from conifold import amodel
from conifold.errors import ConifoldError, DimensionMismatchError
from conifold.linalg import IntMatrix
from conifold.series import ZINV, TruncatedSeries, var
from conifold.transition import TransitionPresentation, presentation

from gen import random_presentations


def model(P, order=4, **kw):
    return amodel.ExtremalModel(P, order=order, **kw)


def test_f_series():
    assert amodel.f_series(3) == var("q") + var("q") ** 2 + var("q") ** 3
    assert amodel.f_series(1) == var("q")


def test_f_at_exp_has_residue_minus_one():
    assert amodel.laurent_f_exp(1)[-1] == -1


def test_laurent_against_sympy():
    x = sympy.Symbol("x")
    for b in (1, -1, 2, -3):
        ref = sympy.series(-1 - 1 / (sympy.exp(b * x) - 1), x, 0, 4).removeO()
        ours = amodel.laurent_f_exp(b, 3)
        for p in range(-1, 4):
            assert ours.get(p, 0) == Fraction(str(ref.coeff(x, p)))


def test_multiple_cover_coefficients():
    s = amodel.multiple_cover_series(3)
    assert [s.coefficient(q=d) for d in (1, 2, 3)] == [1, Fraction(1, 8), Fraction(1, 27)]
    assert amodel.multiple_cover_series(1) == var("q")


def test_multiple_cover_third_euler_derivative_is_f():
    s = amodel.multiple_cover_series(5)
    assert s.euler("q").euler("q").euler("q") == amodel.f_series(5)


def test_structural_coefficient_two_node(named):
    # computed at order 4; terms with q-degree <= 2 and u-degree <= 2 are exact there
    M = model(named["two_node"], order=4)
    C = amodel.structural_coefficient(M, 1, 1, 1)
    low = C.select(lambda m: m.get("q1", 0) + m.get("q2", 0) <= 2 and m.get("u1", 0) <= 2)
    u, q1, q2 = var("u1"), var("q1"), var("q2")
    expected = (q1 + q2) * (1 + u + u * u * Fraction(1, 2)) + (q1 * q1 + q2 * q2) * (1 + u * 2 + u * u * 2)
    expected = expected.select(lambda m: m.get("q1", 0) + m.get("q2", 0) <= 2)
    assert low == expected


def test_structural_coefficient_against_sympy(named):
    M = model(named["two_node"], order=5)
    C = amodel.structural_coefficient(M, 1, 1, 1)
    q, u = sympy.symbols("q u")
    expr = q * sympy.exp(u) / (1 - q * sympy.exp(u))
    t = sympy.Symbol("t")
    ref = sympy.series(expr.subs({q: t * q, u: t * u}), t, 0, 6).removeO()
    ref = sympy.expand(ref.subs(t, 1))
    poly = sympy.Poly(ref, q, u)
    for (a, b), c in poly.terms():
        assert C.coefficient(q1=a, u1=b) == Fraction(str(c))


def test_zero_row_contributes_nothing():
    P = TransitionPresentation(2, IntMatrix.from_rows([[1], [0]]), IntMatrix.from_rows([[0], [1]]))
    M = model(P)
    C = amodel.structural_coefficient(M, 1, 1, 1)
    assert "q1" not in C.variables()


def test_classical_term_only():
    P = TransitionPresentation(1, IntMatrix.zeros(1, 0), IntMatrix.from_rows([[0]]),
                               triple={(0, 0, 0): 6})
    M = amodel.ExtremalModel(P, check=False)
    assert amodel.structural_coefficient(M, 1, 1, 1) == 6


def test_structural_coefficient_symmetric():
    P = presentation(3, B=[[1, 0], [0, 1], [1, 1]])
    M = model(P, order=3)
    for idx in itertools.product((1, 2), repeat=3):
        base = amodel.structural_coefficient(M, *sorted(idx))
        for perm in itertools.permutations(idx):
            assert amodel.structural_coefficient(M, *perm) == base


def test_index_out_of_range(named):
    with pytest.raises(IndexError):
        amodel.structural_coefficient(model(named["two_node"]), 2, 1, 1)


def test_dubrovin_tables(named):
    M = model(named["two_node"], order=3)
    conn = amodel.dubrovin_connection(M)
    assert conn.entry("u1", "T^0", "T^1") == -ZINV
    f = amodel.structural_coefficient(M, 1, 1, 1)
    assert conn.entry("u1", "T^1", "T_1") == f * (-ZINV)


def test_dubrovin_empty():
    P = TransitionPresentation(1, IntMatrix.identity(1), IntMatrix.zeros(1, 0))
    conn = amodel.dubrovin_connection(amodel.ExtremalModel(P, check=False))
    assert conn.matrices == {}


def _flat(conn):
    return all(x.is_zero() for F in amodel.curvature(conn).values() for r in F for x in r)


def test_dubrovin_flat_examples():
    for P in [presentation(2, A=[[1], [-1]]), presentation(3, B=[[1, 0], [0, 1], [1, 1]]),
              presentation(4, B=[[1, 0], [0, 1], [1, 1], [2, -1]])]:
        assert _flat(amodel.dubrovin_connection(model(P, order=3)))


def test_dubrovin_flat_with_mixed_constants():
    P = presentation(3, B=[[1, 0], [0, 1], [1, 1]])
    mixed = (((1, 2), (2, -1)), ((0, Fraction(1, 2)), (Fraction(1, 2), 3)))
    conn = amodel.dubrovin_connection(model(P, order=3, mixed=mixed))
    assert "Tbar^2" in conn.frame
    assert _flat(conn)


def test_mixed_must_be_symmetric():
    P = presentation(3, B=[[1, 0], [0, 1], [1, 1]])
    with pytest.raises(ConifoldError):
        model(P, mixed=(((1, 2), (0, 1)),))
    with pytest.raises(DimensionMismatchError):
        model(P, mixed=(((1,),),))


def test_dubrovin_residue_examples():
    M = model(presentation(2, A=[[1], [-1]]))
    assert amodel.dubrovin_residue(M, 1) == [[ZINV]]
    P = presentation(3, B=[[2, -1], [0, 1], [1, 1]])
    R = amodel.dubrovin_residue(model(P), 1)
    assert R == [[ZINV * 4, ZINV * -2], [ZINV * -2, ZINV]]


def test_monodromy_block_examples():
    assert amodel.monodromy_block(model(presentation(2, A=[[1], [-1]])), 1) == [[ZINV * 2]]
    M = model(presentation(3, B=[[1, 0], [0, 1], [1, 1]]))
    assert amodel.monodromy_block(M, 1) == [[ZINV * 2, ZINV], [ZINV, ZINV]]


def test_monodromy_block_zero_column():
    P = TransitionPresentation(2, IntMatrix.zeros(2, 0), IntMatrix.from_rows([[1, 0], [0, 0]]))
    M = amodel.ExtremalModel(P, check=False)
    assert amodel.monodromy_block(M, 2) == [[0, 0], [0, 0]]
    assert amodel.residue_oracle(M, 2) == [[0, 0], [0, 0]]


def test_residue_oracle_random():
    for P in random_presentations(5, 15, kmax=8):
        M = model(P, order=1)
        for l in range(1, P.rho + 1):
            assert amodel.monodromy_block(M, l) == amodel.residue_oracle(M, l)


def _as_operator(block, rho):
    # primal T_m -> dual T^n, acting on T_1..T_rho, T^1..T^rho
    N = sympy.zeros(2 * rho, 2 * rho)
    for m in range(rho):
        for n in range(rho):
            N[rho + n, m] = block[m][n].coefficient(zinv=1)
    return N


def test_monodromy_blocks_compose_to_zero():
    P = presentation(4, B=[[1, 0], [0, 1], [1, 1], [2, -1]])
    M = model(P)
    rho = P.rho
    ops = [_as_operator(amodel.monodromy_block(M, l), rho) for l in range(1, rho + 1)]
    for X in ops:
        for Y in ops:
            assert X * Y == sympy.zeros(2 * rho, 2 * rho)
    # common kernel is exactly the dual block when B has no zero rows
    stacked = sympy.Matrix.vstack(*ops)
    assert 2 * rho - stacked.rank() == rho


def test_residues_rank_one_psd():
    P = presentation(4, B=[[1, 0], [0, 1], [1, 1], [2, -1]])
    M = model(P)
    for i in range(1, 5):
        R = sympy.Matrix([[x.coefficient(zinv=1) for x in r] for r in amodel.dubrovin_residue(M, i)])
        assert R == R.T
        assert R.rank() <= 1
        assert all(ev >= 0 for ev in R.eigenvals())


def test_novikov_reduce():
    L = amodel.NovikovLattice(IntMatrix.from_rows([[1], [-1]]))
    assert amodel.novikov_reduce(L, (2, 3)) == (5,)
    assert amodel.novikov_reduce(L, (1, -1)) == (0,)
    L0 = amodel.NovikovLattice(IntMatrix.zeros(3, 0))
    assert amodel.novikov_reduce(L0, (1, 2, 3)) == (1, 2, 3)
    with pytest.raises(DimensionMismatchError):
        amodel.novikov_reduce(L, (1,))


def test_novikov_reduce_respects_relations():
    rng = random.Random(3)
    for P in random_presentations(11, 10, kmax=7):
        L = amodel.NovikovLattice(P.A, base_count=1)
        for _ in range(5):
            d = [rng.randint(-3, 3) for _ in range(P.k)]
            c = [rng.randint(-2, 2) for _ in range(P.mu)]
            shifted = [x + sum(P.A[i, j] * c[j] for j in range(P.mu)) for i, x in enumerate(d)]
            assert amodel.novikov_reduce(L, [7] + d) == amodel.novikov_reduce(L, [7] + shifted)


def test_transform_extremal_only(named):
    M = model(named["two_node"], order=2)
    out = amodel.transform_prepotential(M, [], base_count=0)
    assert out.coefficients == {(1,): 2, (2,): Fraction(2, 8)}


def test_transform_passes_through():
    P = presentation(2, A=[[1], [-1]])
    M = model(P, order=2)
    out = amodel.transform_prepotential(M, [((1,), 5)])
    assert out.coefficients[(1, 0)] == 5


def test_transform_roundtrip():
    P = presentation(3, A=[[1, 0], [0, 1], [-1, -1]])
    M = model(P, order=3)
    FX = [((1, 0), Fraction(5)), ((0, 2), Fraction(-1, 3)), ((2, 1), Fraction(7))]
    lifts = {(1, 0): (1, 0, 2)}
    out = amodel.transform_prepotential(M, FX, lifts=lifts)
    back = amodel.restrict_prepotential(M, out.coefficients, base_count=2)
    assert back == dict(FX)


def test_transform_errors():
    M = model(presentation(2, A=[[1], [-1]]))
    with pytest.raises(DimensionMismatchError):
        amodel.transform_prepotential(M, [((1,), 1)], lifts={(1,): (1, 2, 3)})
    with pytest.raises(ConifoldError):
        amodel.transform_prepotential(M, [((0,), 1)])
    with pytest.raises(ConifoldError):
        amodel.restrict_prepotential(M, {(0, 1): 3}, base_count=1)


def test_classical_cross_terms():
    # cubic s^3 + 3 s^2 u on one base and one exceptional direction
    cubic = [[[6, 2], [2, 0]], [[2, 0], [0, 0]]]
    cross = amodel.classical_cross_terms(cubic, 1)
    s, u = var("s1"), var("u1")
    assert cross == s * s * u
    assert isinstance(cross, TruncatedSeries)
