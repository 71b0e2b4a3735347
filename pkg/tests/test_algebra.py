import random
from fractions import Fraction

import pytest

from confcoh.algebra import (
    LCA,
    PVA,
    AlgebraSpec,
    CompositeArgumentError,
    VirasoroData,
    central_quotient,
    check_axioms,
    check_virasoro,
    jacobi_residual,
)
from confcoh.diffpoly import DiffPoly
from confcoh.gens import EVEN, GenDecl, make_universe
from confcoh.lambdapoly import LambdaPoly
from confcoh.modules import adjoint_module, check_module, leibniz_action_residual
from confcoh.zoo import (
    abelian_data,
    make_affine,
    make_free_boson,
    make_free_fermion,
    make_module,
    make_virasoro,
    sl2_data,
    universal_envelope,
)


def lam_terms(p):
    return {e[0]: c for e, c in p.terms.items()}


# -- bracket extension ---------------------------------------------------------


def test_virasoro_self_bracket():
    lca, _ = make_virasoro()
    L = lca.gen("L")
    C = lca.gen("C")
    br = lca.bracket(L, L)
    assert lam_terms(br) == {
        0: L.partial(),
        1: L.scale(2),
        3: C.scale(Fraction(1, 12)),
    }


def test_boson_bracket():
    lca, _ = make_free_boson(N=2)
    a, b = lca.gen("u1"), lca.gen("u2")
    assert lca.bracket(a, b).is_zero()  # identity Gram: off-diagonal zero
    br = lca.bracket(a, a)
    assert lam_terms(br) == {1: lca.gen("K")}


def test_pva_left_leibniz_virasoro_square():
    # c = 0: [L_l L^2] = 2 L (d + 2l) L
    _, pva = make_virasoro(0)
    L = pva.gen("L")
    br = pva.bracket(L, L * L)
    want = {0: (L * L.partial()).scale(2), 1: (L * L).scale(4)}
    assert lam_terms(br) == want


def test_lca_rejects_composite():
    lca, _ = make_virasoro()
    L = lca.gen("L")
    with pytest.raises(CompositeArgumentError):
        lca.bracket(L, L * L)


def test_sesquilinearity_both_slots():
    rng = random.Random(17)
    _, pva = make_virasoro(1)
    L = pva.gen("L")
    for _ in range(20):
        a = L.partial_n(rng.randrange(2)) * L.partial_n(rng.randrange(2))
        b = L.partial_n(rng.randrange(2))
        left = pva.bracket(a.partial(), b)
        want = pva.bracket(a, b).mul_var(0).scale(-1)
        assert left == want
        right = pva.bracket(a, b.partial())
        base = pva.bracket(a, b)
        assert right == base.mul_var(0) + base.map_coeffs(lambda c: c.partial())


def test_leibniz_expansions_randomized():
    # L4 and L4' against the recursive bracket, on random homogeneous inputs
    rng = random.Random(23)
    _, pva = make_free_boson(N=2)
    gens = [pva.gen("u1"), pva.gen("u2")]
    from confcoh.lambdapoly import taylor_shift

    for _ in range(30):
        a = gens[rng.randrange(2)].partial_n(rng.randrange(2))
        b = gens[rng.randrange(2)].partial_n(rng.randrange(2))
        c = gens[rng.randrange(2)] * gens[rng.randrange(2)]
        # L4: [a_l bc] = [a_l b] c + [a_l c] b   (even case)
        got = pva.bracket(a, b * c)
        want = pva.bracket(a, b).mul_coeff_right(c) + pva.bracket(a, c).mul_coeff_right(b)
        assert got == want
        # L4': [ab_l c] = (e^{d dl}a)[b_l c] + (e^{d dl}b)[a_l c]
        got2 = pva.bracket(a * b, c)
        want2 = taylor_shift(a, pva.bracket(b, c), 0) + taylor_shift(
            b, pva.bracket(a, c), 0
        )
        assert got2 == want2


def test_skewsymmetry_executable_randomized():
    for spec in [make_virasoro(1)[1], make_free_fermion(N=2)[1], make_affine(sl2_data(), 1)[1]]:
        rng = random.Random(5)
        gens = [DiffPoly.gen(spec.gens, i) for i in range(len(spec.gens))]
        for _ in range(20):
            a = rng.choice(gens).partial_n(rng.randrange(2))
            b = rng.choice(gens).partial_n(rng.randrange(2))
            if spec.kind == PVA and rng.random() < 0.5:
                b = b * rng.choice(gens)
            pa, pb = a.parity(), b.parity()
            flip = spec.bracket(b, a).subst_var(
                0, [(0, Fraction(-1))], partial_coeff=Fraction(-1)
            )
            # [a_l b] + (-1)^{p(a)p(b)} [b_{-l-d} a] = 0
            residual = spec.bracket(a, b) + flip.scale(-1 if (pa and pb) else 1)
            assert residual.is_zero()


# -- axiom checks ---------------------------------------------------------------


@pytest.mark.parametrize(
    "spec",
    [
        make_virasoro()[0],
        make_virasoro(0)[1],
        make_virasoro(1)[1],
        make_free_boson(N=1)[0],
        make_free_boson(N=2)[1],
        make_free_fermion(N=1)[1],
        make_free_fermion(N=2)[1],
        make_affine(sl2_data(), 1)[0],
        make_affine(sl2_data(), 1)[1],
        make_affine(sl2_data(), 2)[1],
    ],
)
def test_zoo_axioms_pass(spec):
    rep = check_axioms(spec)
    assert rep.ok, repr(rep)


def test_abelian_lca_passes():
    gens = make_universe(GenDecl("x", EVEN, Fraction(1)))
    spec = AlgebraSpec(LCA, gens, {})
    assert check_axioms(spec).ok


def test_mutated_virasoro_fails_jacobi():
    # [L_l L] = (d + 3l) L breaks skewsymmetry and Jacobi
    gens = make_universe(GenDecl("L", EVEN, Fraction(2)))
    L = DiffPoly.gen(gens, 0)
    table = {(0, 0): LambdaPoly.const(1, L.partial()) + LambdaPoly.const(1, L.scale(3)).mul_var(0)}
    spec = AlgebraSpec(LCA, gens, table)
    rep = check_axioms(spec)
    assert not rep.ok
    assert any("Jacobi" in v.label or "skew" in v.label for v in rep.violations)
    # the reported residual is a nonzero polynomial
    assert any(v.residual for v in rep.violations)


def test_jacobi_residual_cross_checked_coefficient():
    # mutation negative-control: compute one residual coefficient by hand.
    # For [L_l L] = (d+3l)L skewsymmetry already fails:
    # [L_l L] + [L_{-l-d} L] = (d+3l)L + (d+3(-l-d))L = (-d)L != 0 at l^0.
    gens = make_universe(GenDecl("L", EVEN, Fraction(2)))
    L = DiffPoly.gen(gens, 0)
    table = {(0, 0): LambdaPoly.const(1, L.partial()) + LambdaPoly.const(1, L.scale(3)).mul_var(0)}
    spec = AlgebraSpec(LCA, gens, table)
    br = spec.bracket(L, L)
    flip = br.subst_var(0, [(0, Fraction(-1))], partial_coeff=Fraction(-1))
    residual = br + flip
    assert lam_terms(residual) == {0: L.partial().scale(-1)}


# -- Virasoro designations -------------------------------------------------------


def test_check_virasoro_quotients():
    for c in (0, 1, Fraction(-7, 3)):
        _, pva = make_virasoro(c)
        rep = check_virasoro(pva)
        assert rep.ok, repr(rep)
        assert pva.virasoro.charge == Fraction(c)


def test_check_virasoro_universal():
    lca, _ = make_virasoro()
    assert check_virasoro(lca).ok


def test_boson_virasoro_weights_and_charge():
    _, pva = make_free_boson(N=2)
    rep = check_virasoro(pva)
    assert rep.ok, repr(rep)
    assert pva.virasoro.charge == 0


def test_fermion_virasoro_weight_half():
    _, pva = make_free_fermion(N=2, data=None)
    rep = check_virasoro(pva)
    assert rep.ok, repr(rep)
    # weights are declared 1/2 and verified by the check itself
    assert all(d.weight == Fraction(1, 2) for d in pva.gens)


def test_affine_virasoro():
    for k in (1, 2):
        _, pva = make_affine(sl2_data(), k)
        rep = check_virasoro(pva)
        assert rep.ok, repr(rep)


def test_fermion_dual_pairing_identity():
    # sum_j u^j u_j = 0 in the fermion algebra
    _, pva = make_free_fermion(N=2)
    data_gens = pva.gens
    total = DiffPoly.zero(data_gens)
    # identity Gram: u^j = u_j, so sum u_j u_j = 0 because odd squares vanish
    for i in range(len(data_gens)):
        total = total + DiffPoly.gen(data_gens, i) * DiffPoly.gen(data_gens, i)
    assert total.is_zero()


def test_shifted_virasoro_coefficient_detected():
    # negative control: designating 2L as Virasoro fails the check
    _, pva = make_virasoro(0)
    bad = AlgebraSpec(
        PVA, pva.gens, pva.table,
        virasoro=VirasoroData(element=pva.gen("L").scale(2), charge=Fraction(0)),
    )
    assert not check_virasoro(bad).ok


# -- universal envelope / central quotient ---------------------------------------


def test_universal_envelope_and_quotient():
    lca, _ = make_virasoro()
    env = universal_envelope(lca)
    assert env.kind == PVA
    assert check_axioms(env).ok
    pva = central_quotient(env, "C", Fraction(1))
    assert [d.name for d in pva.gens] == ["L"]
    br = pva.bracket(pva.gen("L"), pva.gen("L"))
    assert lam_terms(br)[3] == DiffPoly.scalar(pva.gens, Fraction(1, 12))
    assert check_axioms(pva).ok


def test_quotient_boson_at_zero_is_abelian():
    lca, _ = make_free_boson(N=2)
    ab = central_quotient(universal_envelope(lca), "K", Fraction(0))
    for i in range(2):
        for j in range(2):
            assert ab.bracket(
                DiffPoly.gen(ab.gens, i), DiffPoly.gen(ab.gens, j)
            ).is_zero()


def test_affine_abelian_equals_boson():
    lcaA, _ = make_affine(abelian_data(2), None)
    lcaB, _ = make_free_boson(N=2)
    assert lcaA.gens == lcaB.gens
    assert lcaA.table == lcaB.table


def test_quotient_requires_torsion_central():
    lca, _ = make_virasoro()
    with pytest.raises(ValueError):
        central_quotient(lca, "L", Fraction(0))


# -- modules ----------------------------------------------------------------------


def test_m_delta_passes_and_action():
    lca, _ = make_virasoro()
    for delta in (Fraction(0), Fraction(2), Fraction(-7, 2)):
        mod = make_module("M_Delta", lca, delta=delta)
        rep = check_module(lca, mod)
        assert rep.ok, repr(rep)
        v = mod.mod_gen("v")
        act = mod.act(lca.gen("L"), v)
        assert lam_terms(act) == ({0: v.partial(), 1: v.scale(delta)} if delta else {0: v.partial()})


def test_trivial_module():
    lca, _ = make_virasoro()
    mod = make_module("trivial", lca)
    assert check_module(lca, mod).ok
    assert mod.act(lca.gen("L"), mod.mod_gen("m")).is_zero()


def test_adjoint_module_passes():
    _, pva = make_virasoro(1)
    mod = adjoint_module(pva)
    rep = check_module(pva, mod)
    assert rep.ok, repr(rep)
    act = mod.act(pva.gen("L"), pva.gen("L"))
    assert lam_terms(act)[3] == DiffPoly.scalar(pva.gens, Fraction(1, 12))


def test_mutated_m_delta_fails():
    lca, _ = make_virasoro()
    mod = make_module("M_Delta", lca, delta=Fraction(2))
    v = mod.mod_gen("v")
    bad = dict(mod.lam_table)
    key = next(iter(bad))
    bad[key] = bad[key] + LambdaPoly.const(1, v)  # action (d + Delta l + 1) v
    mod.lam_table = bad
    rep = check_module(lca, mod)
    assert not rep.ok


def test_augmentation_consistency():
    # valid over charge 0, M3 residual (c/12) l^3 m over charge 1
    _, pva0 = make_virasoro(0)
    aug0 = make_module("augmentation", pva0)
    assert check_module(pva0, aug0).ok

    _, pva1 = make_virasoro(1)
    aug1 = make_module("augmentation", pva1)
    rep = check_module(pva1, aug1)
    assert not rep.ok
    L = pva1.gen("L")
    m = aug1.mod_gen("m")
    residual = leibniz_action_residual(pva1, aug1, L, L, m)
    assert lam_terms(residual.scale(-1)) == {3: m.scale(Fraction(1, 12))}


def test_m_v_adjoint_coefficients():
    data = sl2_data()
    lca, _ = make_affine(data, None)
    bar = central_quotient(lca, "K", 0)
    mod = make_module("M_V", bar, data=data)
    rep = check_module(bar, mod)
    assert rep.ok, repr(rep)
    # a_l v = [a, v]: e acting on v_h gives -2 v_e
    act = mod.act(bar.gen("e"), mod.mod_gen("v_h"))
    assert lam_terms(act) == {0: mod.mod_gen("v_e").scale(-2)}


def test_spo_fermion_action():
    # x = u v in S^2 h acts on a in h by (v|a) u + (-1)^{p(u)p(v)} (u|a) v
    _, pva = make_free_fermion(N=2)
    u1, u2 = pva.gen("u1"), pva.gen("u2")
    x = u1 * u2
    br = pva.bracket(x, u1)
    # (u2|u1) u1 - (u1|u1) u2 with identity Gram: (u2|u1)=0, (u1|u1)=1
    assert lam_terms(br) == {0: u2.scale(-1)}
    br2 = pva.bracket(u1 * u1, u1)
    assert br2.is_zero()


def test_sl2_data_valid():
    assert sl2_data().check() == []


def test_sl2_casimir_invariance():
    # sum_j ([a, u^j] u_j + u^j [a, u_j]) = 0 via the quotient bracket with L
    data = sl2_data()
    _, pva = make_affine(data, 1)
    for name in ("e", "h", "f"):
        a = pva.gen(name)
        br = pva.bracket(a, pva.virasoro.element)
        # [a_l L] = l a exactly when the Casimir is ad-invariant
        assert lam_terms(br) == {1: a}
