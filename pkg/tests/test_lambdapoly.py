import random
from fractions import Fraction

import pytest

from confcoh.diffpoly import DiffPoly
from confcoh.gens import EVEN, GenDecl, make_universe
from confcoh.lambdapoly import LambdaPoly, reduce_last_slot, taylor_shift

VIR = make_universe(GenDecl("L", EVEN, Fraction(2)))


def L(k=0):
    return DiffPoly.gen(VIR, 0, k)


def lam(nvars, i):
    return LambdaPoly.var(nvars, i, VIR)


def test_permute_vars():
    p = lam(2, 0).mul_var(0).mul_var(1)  # l1^2 l2
    q = p.permute_vars([1, 0])
    assert q == lam(2, 1).mul_var(1).mul_var(0)
    sym = lam(2, 0) + lam(2, 1)
    assert sym.permute_vars([1, 0]) == sym
    cube = LambdaPoly(2, VIR, {(3, 0): DiffPoly.one(VIR)})
    assert cube.permute_vars([1, 0]) == LambdaPoly(2, VIR, {(0, 3): DiffPoly.one(VIR)})


def test_reduce_generator_of_ideal():
    # (d m + lambda1 m) reduces to 0 for n=1
    m = L()
    p = LambdaPoly.const(1, m.partial()) + LambdaPoly.const(1, m).mul_var(0)
    assert reduce_last_slot(p, 0).is_zero()


def test_reduce_direct_substitution():
    # lambda2 * m  ->  -lambda1 * m - d(m), n=2
    m = L()
    p = LambdaPoly.const(2, m).mul_var(1)
    got = reduce_last_slot(p, 0)
    want = LambdaPoly.const(2, m).mul_var(0).scale(-1) - LambdaPoly.const(2, m.partial())
    assert got == want
    # lambda1 * m untouched
    q = LambdaPoly.const(2, m).mul_var(0)
    assert reduce_last_slot(q, 0) == q


def random_lp(rng, nvars, maxexp=2):
    p = LambdaPoly.zero(nvars, VIR)
    for _ in range(4):
        e = tuple(rng.randrange(maxexp + 1) for _ in range(nvars))
        c = DiffPoly.gen(VIR, 0, rng.randrange(2)).scale(rng.randrange(-3, 4))
        p = p + LambdaPoly(nvars, VIR, {e: c})
    return p


@pytest.mark.parametrize("nvars", [1, 2, 3])
def test_reduce_kills_ideal(nvars):
    # reduce(p + (d + l1 + ... + ln) q) == reduce(p)
    rng = random.Random(5)
    for _ in range(40):
        p = random_lp(rng, nvars)
        q = random_lp(rng, nvars)
        ideal = q.map_coeffs(lambda c: c.partial())
        for i in range(nvars):
            ideal = ideal + q.mul_var(i)
        assert reduce_last_slot(p + ideal, 0) == reduce_last_slot(p, 0)


def test_reduce_is_projection():
    rng = random.Random(9)
    for _ in range(20):
        p = random_lp(rng, 2)
        r = reduce_last_slot(p, 0)
        assert reduce_last_slot(r, 0) == r
        assert r.max_degree(1) == 0


def test_taylor_shift_unit():
    p = random_lp(random.Random(1), 2)
    assert taylor_shift(DiffPoly.one(VIR), p, 0) == p


def test_taylor_shift_one_term():
    # b=L, p=lambda1 (n=1)  ->  L*lambda1 + dL
    p = lam(1, 0)
    got = taylor_shift(L(), p, 0)
    want = LambdaPoly.const(1, L()).mul_var(0) + LambdaPoly.const(1, L(1))
    assert got == want


def test_taylor_shift_constant_in_var():
    p = LambdaPoly.const(2, L()).mul_var(1)  # no lambda1 dependence
    assert taylor_shift(L(2), p, 0) == p.mul_coeff(L(2))


def test_taylor_shift_semigroup():
    # shift(b, shift(c, p)) == shift(b*c, p) for even b, c
    rng = random.Random(2)
    for _ in range(25):
        p = random_lp(rng, 2)
        b = L(rng.randrange(2)).scale(rng.randrange(1, 3))
        c = L(rng.randrange(2))
        assert taylor_shift(b, taylor_shift(c, p, 0), 0) == taylor_shift(b * c, p, 0)


def test_weight_split():
    p = LambdaPoly.const(2, L()).mul_var(0) + LambdaPoly.const(2, L(1))
    assert set(p.split_weight()) == {3}
    q = p + LambdaPoly.const(2, DiffPoly.one(VIR))
    assert set(q.split_weight()) == {0, 3}


def test_reduce_preserves_weight():
    rng = random.Random(13)
    for _ in range(20):
        p = random_lp(rng, 3)
        for w, part in p.split_weight().items():
            red = reduce_last_slot(part, 0)
            if red:
                assert set(red.split_weight()) == {w}
