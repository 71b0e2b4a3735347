"""Coefficient modules: the lambda-action and (for Poisson vertex modules)
the product action, extended from tables or delegated to a bracket.

Module elements are differential superpolynomials over the module universe.
Adjoint-style modules are polynomial (the coefficients are the algebra
itself, possibly through a central specialization); table modules are free
or torsion F[d]-modules whose elements are linear in the module generators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .algebra import LCA, PVA, AlgebraSpec, CheckReport
from .diffpoly import DiffPoly
from .gens import Universe, gen_index
from .lambdapoly import LambdaPoly, taylor_shift


@dataclass
class CoeffModule:
    gens: Universe                       # module universe
    poly: bool                           # polynomial vs linear elements
    action_spec: Optional[AlgebraSpec] = None   # adjoint-style modules
    embed: Optional[Callable[[DiffPoly], DiffPoly]] = None
    lam_table: dict = field(default_factory=dict)   # (alg i, mod j) -> LambdaPoly(1)
    prod_table: Optional[dict] = None    # (alg i, mod j) -> DiffPoly (PVA modules)
    alg_gens: Optional[Universe] = None  # algebra universe for table modules
    name: str = ""

    def __post_init__(self):
        if self.action_spec is not None and self.alg_gens is None:
            self.alg_gens = self.action_spec.gens

    @property
    def adjoint(self) -> bool:
        return self.action_spec is not None

    @property
    def has_product(self) -> bool:
        return self.adjoint or self.prod_table is not None

    def zero(self) -> DiffPoly:
        return DiffPoly.zero(self.gens)

    def mod_gen(self, name: str, k: int = 0) -> DiffPoly:
        return DiffPoly.gen(self.gens, gen_index(self.gens, name), k)

    def embed_alg(self, a: DiffPoly) -> DiffPoly:
        return self.embed(a) if self.embed is not None else a

    # -- lambda-action -------------------------------------------------------

    def act(self, a: DiffPoly, m: DiffPoly) -> LambdaPoly:
        """a_l m as a polynomial in one lambda over the module."""
        if self.adjoint:
            return self.action_spec.bracket(self.embed_alg(a), m)
        out = LambdaPoly.zero(1, self.gens)
        for m1, c1 in a.terms.items():
            for m2, c2 in m.terms.items():
                out = out + self._act_monos(m1, m2).scale(c1 * c2)
        return out

    def _act_monos(self, am, mm) -> LambdaPoly:
        if not am:
            return LambdaPoly.zero(1, self.gens)  # unit acts by 0 in lambda
        if len(mm) != 1:
            raise ValueError("table-module elements are linear in the module basis")
        if len(am) > 1:
            if not self.has_product:
                raise ValueError(
                    "Poisson-vertex module action requested without a "
                    "product-action table"
                )
            # (fg)_l m = (e^{d dl}f)(g_l m) + (-1)^{p(f)p(g)} (e^{d dl}g)(f_l m)
            f, rest = am[:1], am[1:]
            alg = self.alg_gens
            fpoly = DiffPoly(alg, {f: Fraction(1)})
            rpoly = DiffPoly(alg, {rest: Fraction(1)})
            pf = alg[f[0][0]].parity
            pr = sum(alg[g].parity for g, _ in rest) & 1
            t1 = taylor_shift(fpoly, self._act_monos(rest, mm), 0, mul=self.product)
            t2 = taylor_shift(rpoly, self._act_monos(f, mm), 0, mul=self.product)
            if pf and pr:
                t2 = t2.scale(-1)
            return t1 + t2
        (g, k), = am
        (h, l), = mm
        out = self.lam_table.get((g, h), LambdaPoly.zero(1, self.gens))
        for _ in range(l):  # a_l (dm) = (l + d)(a_l m)
            out = out.mul_var(0) + out.map_coeffs(lambda c: c.partial())
        if k:  # (da)_l m = -l (a_l m)
            out = out.mul_var(0, k)
            if k & 1:
                out = out.scale(-1)
        return out

    # -- product action ------------------------------------------------------

    def product(self, x: DiffPoly, m: DiffPoly) -> DiffPoly:
        """The differential-algebra module product x . m."""
        if self.adjoint:
            return self.embed_alg(x) * m
        if self.prod_table is None:
            raise ValueError("module has no product action")
        out = DiffPoly.zero(self.gens)
        for xm, xc in x.terms.items():
            piece = m.scale(xc)
            for g, k in reversed(xm):
                piece = self._factor_product(g, k, piece)
            out = out + piece
        return out

    def _factor_product(self, g: int, k: int, m: DiffPoly) -> DiffPoly:
        """(d^k u_g) . m, for a table module with a torsion module universe."""
        if k == 0:
            out = DiffPoly.zero(self.gens)
            for mm, c in m.terms.items():
                if len(mm) != 1 or mm[0][1] != 0:
                    raise ValueError(
                        "product tables require a torsion module universe"
                    )
                h = mm[0][0]
                base = self.prod_table.get((g, h), DiffPoly.zero(self.gens))
                out = out + base.scale(c)
            return out
        # (d x) . m = d(x . m) - x . (d m)
        lower = self._factor_product(g, k - 1, m)
        return lower.partial() - self._factor_product(g, k - 1, m.partial())

    # -- conformal helpers ----------------------------------------------------

    def first_mode(self, a: DiffPoly, m: DiffPoly) -> DiffPoly:
        """d/dl (a_l m) at l = 0."""
        return self.act(a, m).terms.get((1,), DiffPoly.zero(self.gens))

    def zero_mode(self, a: DiffPoly, m: DiffPoly) -> DiffPoly:
        return self.act(a, m).terms.get((0,), DiffPoly.zero(self.gens))


# ---------------------------------------------------------------------------
# module axiom checks
# ---------------------------------------------------------------------------


def check_module(spec: AlgebraSpec, mod: CoeffModule) -> CheckReport:
    """Verify M1 (structural plus table sanity), M2 on all (gen, gen,
    module-gen) triples, and M3 on the same triples for Poisson vertex
    modules with a product action."""
    rep = CheckReport(f"module[{mod.name or ('adjoint' if mod.adjoint else 'table')}]")
    gens = spec.gens
    N = len(gens)
    mgens = mod.gens
    monly = range(len(mgens))

    for (g, h), val in mod.lam_table.items():
        want_par = (gens[g].parity + mgens[h].parity) & 1
        want_w = gens[g].weight + mgens[h].weight - 1
        for e, c in val.terms.items():
            if c.parity() != want_par:
                rep.add(f"parity of action {gens[g].name} on {mgens[h].name}", val)
                break
            if any(w + e[0] != want_w for w in c.split_weight()):
                rep.add(f"weight of action {gens[g].name} on {mgens[h].name}", val)
                break

    for i in range(N):
        for j in range(N):
            a = DiffPoly.gen(gens, i)
            b = DiffPoly.gen(gens, j)
            for h in monly:
                m = DiffPoly.gen(mgens, h)
                residual = module_jacobi_residual(spec, mod, a, b, m)
                rep.add(
                    f"M2 [{gens[i].name},{gens[j].name}] on {mgens[h].name}",
                    residual,
                )
                if mod.has_product:
                    residual = leibniz_action_residual(spec, mod, a, b, m)
                    rep.add(
                        f"M3 {gens[i].name} on {gens[j].name}.{mgens[h].name}",
                        residual,
                    )
    return rep


def module_jacobi_residual(spec, mod, a, b, m) -> LambdaPoly:
    """a_l(b_m m) - (-1)^{p(a)p(b)} b_m(a_l m) - [a_l b]_{l+m} m in two
    lambda variables (l, m) = (0, 1)."""

    def outer(x, inner: LambdaPoly, xvar: int, ivar: int) -> LambdaPoly:
        out = LambdaPoly.zero(2, mod.gens)
        for (e,), coeff in inner.terms.items():
            piece = mod.act(x, coeff)
            for (f,), cc in piece.terms.items():
                exps = [0, 0]
                exps[xvar] = f
                exps[ivar] = e
                out._add_term(tuple(exps), cc)
        return out

    t1 = outer(a, mod.act(b, m), 0, 1)
    t2 = outer(b, mod.act(a, m), 1, 0)
    if a.parity() and b.parity():
        t2 = t2.scale(-1)
    t3 = LambdaPoly.zero(2, mod.gens)
    ab = spec.bracket(a, b)
    for (e,), coeff in ab.terms.items():
        piece = mod.act(coeff, m)
        for (f,), cc in piece.terms.items():
            binom = 1
            for s in range(f + 1):
                t3._add_term((e + s, f - s), cc.scale(binom))
                binom = binom * (f - s) // (s + 1)
    return t1 - t2 - t3


def leibniz_action_residual(spec, mod, a, b, m) -> LambdaPoly:
    """a_l(b.m) - [a_l b].m - (-1)^{p(a)p(b)} b.(a_l m)."""
    t1 = mod.act(a, mod.product(b, m))
    t2 = spec.bracket(a, b).map_coeffs(lambda c: mod.product(c, m))
    t2 = LambdaPoly(1, mod.gens, t2.terms)
    t3 = mod.act(a, m).map_coeffs(lambda c: mod.product(b, c))
    if a.parity() and b.parity():
        t3 = t3.scale(-1)
    return t1 - t2 - t3


# ---------------------------------------------------------------------------
# standard module constructors
# ---------------------------------------------------------------------------


def adjoint_module(spec: AlgebraSpec) -> CoeffModule:
    return CoeffModule(
        gens=spec.gens,
        poly=(spec.kind == PVA),
        action_spec=spec,
        name="adjoint",
    )


def restricted_adjoint(sub: AlgebraSpec, ambient: AlgebraSpec, embed=None) -> CoeffModule:
    """The ambient algebra as a module over a subalgebra or specialization;
    ``embed`` maps subalgebra elements into the ambient algebra (defaults to
    the identity on matching universes)."""
    return CoeffModule(
        gens=ambient.gens,
        poly=(ambient.kind == PVA),
        action_spec=ambient,
        embed=embed,
        name=f"adjoint({ambient.name})" if ambient.name else "adjoint",
    )
