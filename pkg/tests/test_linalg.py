import random
from fractions import Fraction

from confcoh.linalg import SpanSolver, is_zero_matrix, kernel_basis, mat_mul, rank, rref


def F(x):
    return Fraction(x)


def test_rank_simple():
    assert rank([[F(1), F(2)], [F(2), F(4)]], 2) == 1
    assert rank([[F(1), F(0)], [F(0), F(1)]], 2) == 2
    assert rank([], 3) == 0
    assert rank([[F(0), F(0)]], 2) == 0


def test_rank_fractions():
    m = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(1, 4), Fraction(1, 6)]]
    assert rank(m, 2) == 1


def test_rref_and_kernel():
    rows = [[F(1), F(2), F(3)], [F(2), F(4), F(6)], [F(0), F(1), F(1)]]
    red, pivots = rref(rows, 3)
    assert pivots == [0, 1]
    ker = kernel_basis(rows, 3)
    assert len(ker) == 1
    for r in rows:
        assert sum(a * b for a, b in zip(r, ker[0])) == 0


def test_rank_matches_rref_random():
    rng = random.Random(4)
    for _ in range(50):
        n, m = rng.randrange(1, 6), rng.randrange(1, 6)
        rows = [
            [Fraction(rng.randrange(-4, 5), rng.randrange(1, 4)) for _ in range(m)]
            for _ in range(n)
        ]
        red, piv = rref(rows, m)
        assert rank(rows, m) == len(piv)
        ker = kernel_basis(rows, m)
        assert len(ker) == m - len(piv)
        for v in ker:
            for r in rows:
                assert sum(a * b for a, b in zip(r, v)) == 0


def test_span_solver():
    v1 = [F(1), F(0), F(1)]
    v2 = [F(0), F(1), F(1)]
    ss = SpanSolver([v1, v2], 3)
    assert ss.rank == 2
    coords = ss.coordinates([F(2), F(3), F(5)])
    assert coords == [F(2), F(3)]
    assert ss.coordinates([F(0), F(0), F(1)]) is None
    assert not ss.add_vector([F(1), F(1), F(2)])
    assert ss.add_vector([F(0), F(0), F(1)])
    assert ss.rank == 3


def test_span_solver_random():
    rng = random.Random(8)
    for _ in range(30):
        m = rng.randrange(2, 6)
        vecs = [
            [Fraction(rng.randrange(-3, 4)) for _ in range(m)]
            for _ in range(rng.randrange(1, 5))
        ]
        ss = SpanSolver(vecs, m)
        coeffs = [Fraction(rng.randrange(-3, 4)) for _ in vecs]
        target = [
            sum(c * v[j] for c, v in zip(coeffs, vecs)) for j in range(m)
        ]
        got = ss.coordinates(target)
        assert got is not None
        recon = [sum(c * v[j] for c, v in zip(got, vecs)) for j in range(m)]
        assert recon == target


def test_mat_mul():
    a = [[F(1), F(2)], [F(3), F(4)]]
    b = [[F(0), F(1)], [F(1), F(0)]]
    assert mat_mul(a, b) == [[F(2), F(1)], [F(4), F(3)]]
    assert is_zero_matrix(mat_mul(a, [[F(0), F(0)], [F(0), F(0)]]))
