from fractions import Fraction

import pytest
import sympy

from conifold import gluing
from conifold.errors import ConifoldError, RankDeficiencyError
from conifold.linalg import IntMatrix
from conifold.series import ZINV, TruncatedSeries
from conifold.transition import TransitionPresentation, presentation


def dual_block(conn, i):
    m = conn.base_dim
    R = conn.residue(i)
    return [[R[m + n][l] for n in range(m)] for l in range(m)]


def test_trivial_connection_units():
    c1 = gluing.trivial_log_connection(1)
    assert c1.residue(0) == ((TruncatedSeries(), TruncatedSeries()), (ZINV, TruncatedSeries()))
    c2 = gluing.trivial_log_connection(2)
    nonzero = [[(a, b) for a, r in enumerate(R) for b, x in enumerate(r) if x] for R in c2.residues]
    assert nonzero == [[(2, 0)], [(3, 1)]]
    # restricting to one coordinate recovers the k = 1 case
    R = c2.residue(1)
    assert ((R[1][1], R[1][3]), (R[3][1], R[3][3])) == c1.residue(0)
    with pytest.raises(ValueError):
        gluing.trivial_log_connection(0)


def test_induce_B_and_A():
    cB = gluing.induce_via_embedding(2, IntMatrix.from_rows([[1], [1]]))
    assert [dual_block(cB, i) for i in range(2)] == [[[ZINV]], [[ZINV]]]
    cA = gluing.induce_via_embedding(2, IntMatrix.from_rows([[1], [-1]]))
    assert [dual_block(cA, i) for i in range(2)] == [[[ZINV]], [[ZINV]]]
    assert cA.forms == ((1,), (-1,))


def test_induce_identity_recovers_trivial():
    assert gluing.induce_via_embedding(3, IntMatrix.identity(3)).residues == \
        gluing.trivial_log_connection(3).residues


def test_induce_rank_deficient():
    with pytest.raises(RankDeficiencyError):
        gluing.induce_via_embedding(2, IntMatrix.from_rows([[1, 2], [1, 2]]))


def test_induced_residues_rank_one_nilpotent():
    M = IntMatrix.from_rows([[1, 0], [2, 1], [-1, 3]])
    conn = gluing.induce_via_embedding(3, M)
    for i, R in enumerate(conn.residues):
        S = sympy.Matrix([[x.coefficient(zinv=1) for x in r] for r in R])
        assert S * S == sympy.zeros(4, 4)
        assert S.rank() <= 1
        row = M.row(i)
        assert dual_block(conn, i) == [[ZINV * (row[l] * row[n]) for n in range(2)] for l in range(2)]


def test_projection_orthogonal_complement():
    A = IntMatrix.from_rows([[1], [-1]])
    P = sympy.Matrix(gluing.orthogonal_projection(2, A))
    assert P * sympy.Matrix([1, -1]) == sympy.zeros(2, 1)
    assert P * P == P
    assert P * sympy.Matrix([1, 1]) == sympy.Matrix([1, 1])


def test_glue_named(named):
    for P in named.values():
        report = gluing.glue_check(P)
        assert report.passed
        assert report["dubrovin"].substitution == {"y_i": "v_i"}
        assert report["gauss_manin"].substitution == {"y_i": "w_i", "z": "1/lam"}
        assert report.facts["AtB_zero"] and report.facts["det_S_nonzero"]


def test_glue_random(randoms):
    for P in randoms[:10]:
        assert gluing.glue_check(P).passed


def test_glue_tampered_B_is_located():
    T = TransitionPresentation(2, IntMatrix.from_rows([[1], [-1]]), IntMatrix.from_rows([[1], [2]]))
    report = gluing.glue_check(T)
    assert not report.passed
    assert not report.orthogonal
    v = report["dubrovin"]
    assert not v.passed
    nodes = {m[0] for m in v.mismatches}
    assert nodes == {1, 2}
    residue_hits = [m for m in v.mismatches if m[1] == "residue"]
    assert residue_hits[0][2:4] == (2, 1)


def test_glue_structural_failure_raises():
    bad = TransitionPresentation(2, IntMatrix.from_rows([[1, 2], [1, 2]]), IntMatrix.from_rows([[1], [1]]))
    with pytest.raises(ConifoldError):
        gluing.glue_check(bad)


def test_rational_embedding_allowed():
    M = [[Fraction(1, 2)], [Fraction(3, 2)]]
    conn = gluing.induce_via_embedding(2, M)
    assert dual_block(conn, 1) == [[ZINV * Fraction(9, 4)]]


def test_direct_sum_dimensions(named):
    P = named["sixteen_node"]
    S = sympy.Matrix(P.S.to_rows())
    assert S.det() != 0
    assert (sympy.Matrix(P.A.to_rows()).T * sympy.Matrix(P.B.to_rows())).is_zero_matrix
