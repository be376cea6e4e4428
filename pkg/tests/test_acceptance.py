"""Acceptance criteria.  Each test is one criterion; the session summary prints one line per criterion."""

import random
import time
from fractions import Fraction

from conifold import amodel, bmodel, cli
from conifold.fileformat import PresentationFile, parse_presentation
from conifold.gluing import glue_check
from conifold.linalg import IntMatrix, matmul
from conifold.transition import validate

from gen import random_A, random_potential

SEED = 20261019


def _presentations(randoms, named):
    return list(named.values()) + list(randoms)


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _transpose(M):
    return [list(r) for r in zip(*M)]


def test_criterion_1_exact_sequence():
    start = time.perf_counter()
    rng = random.Random(SEED)
    checked = 0
    for _ in range(50):
        k = rng.randint(2, 20)
        mu = rng.randint(1, k - 1)
        A, P = random_A(rng, k, mu)
        report = validate(P)
        assert report.passed, report.failed()
        assert (P.A.T @ P.B).is_zero()
        assert P.mu + P.rho == k
        checked += 1
    elapsed = time.perf_counter() - start
    assert checked >= 50
    assert elapsed < 1.0, f"{elapsed:.2f}s"


def test_criterion_2_glue(named, randoms):
    for P in _presentations(randoms, named):
        report = glue_check(P)
        assert report.passed, [v.mismatches[:3] for v in report.verdicts]
    assert (named["sixteen_node"].k, named["sixteen_node"].rho, named["sixteen_node"].mu) == (16, 1, 15)
    assert named["three_node"].mu == 2


def test_criterion_3_monodromy_oracle(named, randoms):
    for P in _presentations(randoms, named):
        M = amodel.ExtremalModel(P, order=1)
        for l in range(1, P.rho + 1):
            assert amodel.monodromy_block(M, l) == amodel.residue_oracle(M, l)


def test_criterion_4_picard_lefschetz(named, randoms):
    assert bmodel.monodromy_pairing(named["two_node"], 1) == [[2]]
    rng = random.Random(SEED)
    for P in _presentations(randoms, named):
        h = P.mu + rng.randint(0, 1)
        S = bmodel.SphereSystem(P.A, h)
        n2 = 2 * (h + 1)
        J = bmodel.standard_symplectic_form(h + 1)
        N = bmodel.pl_nilpotent(S)
        T = [[N[a][b] + int(a == b) for b in range(n2)] for a in range(n2)]
        assert matmul(matmul(_transpose(T), J), T) == J
        zero = [[0] * n2 for _ in range(n2)]
        assert matmul(N, N) == zero
        singles = [bmodel.single_sphere_nilpotent(S, i) for i in range(1, P.k + 1)]
        for X in singles:
            for Y in singles:
                assert matmul(X, Y) == zero
        rows = P.A.to_rows()
        for l in range(1, P.mu + 1):
            Al = [r for r in rows if r[l - 1]]
            want = matmul(_transpose(Al), Al) if Al else [[0] * P.mu for _ in range(P.mu)]
            assert bmodel.monodromy_pairing(P, l) == want


def test_criterion_5_bryant_griffiths():
    start = time.perf_counter()
    rng = random.Random(SEED)
    for _ in range(20):
        h = rng.randint(1, 4)
        u = bmodel.Prepotential(random_potential(rng, h, max_degree=5), h)
        conn = bmodel.bryant_griffiths_connection(u)
        assert conn.curvature_zero, conn.failures
        assert conn.euler_relation, conn.failures
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0, f"{elapsed:.2f}s"


def test_criterion_6_yukawa_two_paths(named, randoms):
    for P in _presentations(randoms, named):
        from_periods = bmodel.yukawa_tensor_from_periods(bmodel.omega_expansion(P), P.mu)
        assert from_periods == bmodel.yukawa_principal_tensor(P)


def test_criterion_7_multiple_cover():
    s = amodel.multiple_cover_series(4)
    assert [s.coefficient(q=d) for d in (1, 2, 3, 4)] == [1, Fraction(1, 8), Fraction(1, 27), Fraction(1, 64)]


def _random_gw(rng, width):
    classes = set()
    while len(classes) < rng.randint(1, 6):
        c = tuple(rng.randint(0, 3) for _ in range(width))
        if any(c):
            classes.add(c)
    return tuple((c, Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 5)), None)
                 for c in sorted(classes))


def test_criterion_8_transform_roundtrip():
    start = time.perf_counter()
    rng = random.Random(SEED)
    for trial in range(20):
        k = rng.randint(2, 5)
        mu = rng.randint(1, k - 1)
        _, P = random_A(rng, k, mu)
        width = rng.randint(1, 3)
        gw = _random_gw(rng, width)
        pf = PresentationFile(P, gw, order=2)
        forward = cli.transform_document(pf, "x-to-y")
        back = cli.transform_document(parse_presentation(forward), "y-to-x")
        got = {tuple(e["class"]): Fraction(e["n"]) for e in back["gw"]}
        assert got == {c: n for c, n, _ in gw}, trial
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"{elapsed:.2f}s"
