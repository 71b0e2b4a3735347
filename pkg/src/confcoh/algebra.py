"""Algebra specifications and the lambda-bracket calculus.

An ``AlgebraSpec`` holds a generator universe together with a bracket table
on ordered generator pairs.  The bracket of arbitrary elements is computed
recursively: derivatives are peeled off by sesquilinearity, products are
split by the left/right Leibniz rules (Poisson vertex kind only), and the
table is consulted with the skewsymmetry substitution when the pair is
reversed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .diffpoly import DiffPoly, Mono
from .gens import GenDecl, Universe, gen_index
from .lambdapoly import LambdaPoly, taylor_shift

LCA = "lca"
PVA = "pva"


class CompositeArgumentError(ValueError):
    """A Lie-conformal-kind bracket or cochain received a non-linear
    argument."""


@dataclass(frozen=True)
class VirasoroData:
    """Designated Virasoro element and central charge.

    ``charge`` is a rational for quotient algebras; ``charge_element`` is
    the central combination z with [L_l L] = (d + 2l)L + l^3/12 * z (for a
    universal algebra z is a torsion generator, for a quotient z = c * 1).
    """

    element: DiffPoly
    charge: Optional[Fraction] = None


@dataclass
class AlgebraSpec:
    kind: str
    gens: Universe
    table: dict = field(default_factory=dict)  # (i, j) i<=j -> LambdaPoly(1)
    virasoro: Optional[VirasoroData] = None
    name: str = ""

    def __post_init__(self):
        if self.kind not in (LCA, PVA):
            raise ValueError(f"kind must be {LCA!r} or {PVA!r}")
        for (i, j), val in self.table.items():
            if i > j:
                raise ValueError("bracket table keys must satisfy i <= j")
            if val.nvars != 1:
                raise ValueError("bracket table values are polynomials in one lambda")

    # -- element constructors ----------------------------------------------

    def gen(self, name: str, k: int = 0) -> DiffPoly:
        return DiffPoly.gen(self.gens, gen_index(self.gens, name), k)

    def one(self) -> DiffPoly:
        return DiffPoly.one(self.gens)

    def zero_value(self) -> LambdaPoly:
        return LambdaPoly.zero(1, self.gens)

    def central_ids(self):
        """Generators whose brackets with everything vanish per the table."""
        used = set()
        for (i, j), val in self.table.items():
            if val:
                used.add(i)
                used.add(j)
        return [d.name for k, d in enumerate(self.gens) if k not in used]

    # -- the bracket ---------------------------------------------------------

    def pair_bracket(self, i: int, j: int) -> LambdaPoly:
        """[u_i_l u_j] straight from the table, with skewsymmetry for i > j."""
        if i <= j:
            return self.table.get((i, j), self.zero_value())
        base = self.table.get((j, i), self.zero_value())
        flipped = base.subst_var(0, [(0, Fraction(-1))], partial_coeff=Fraction(-1))
        sign = -1 if not (self.gens[i].parity and self.gens[j].parity) else 1
        return flipped.scale(sign)

    def bracket(self, a: DiffPoly, b: DiffPoly) -> LambdaPoly:
        """[a_l b], exact, as a polynomial in one lambda over the algebra."""
        out = self.zero_value()
        for m1, c1 in a.terms.items():
            for m2, c2 in b.terms.items():
                out = out + self._bracket_monos(m1, m2).scale(c1 * c2)
        return out

    def _bracket_monos(self, m1: Mono, m2: Mono) -> LambdaPoly:
        if not m1 or not m2:
            return self.zero_value()  # the unit brackets to zero
        if len(m1) > 1:
            if self.kind == LCA:
                raise CompositeArgumentError(
                    "Lie conformal bracket on a composite left argument"
                )
            # right Leibniz: [fg_l c] = (e^{d dl}f)[g_l c] +
            #                (-1)^{p(f)p(g)} (e^{d dl}g)[f_l c]
            f, rest = m1[:1], m1[1:]
            fpoly = DiffPoly(self.gens, {f: Fraction(1)})
            rpoly = DiffPoly(self.gens, {rest: Fraction(1)})
            pf = self.gens[f[0][0]].parity
            pr = sum(self.gens[g].parity for g, _ in rest) & 1
            t1 = taylor_shift(fpoly, self._bracket_monos(rest, m2), 0)
            t2 = taylor_shift(rpoly, self._bracket_monos(f, m2), 0)
            if pf and pr:
                t2 = t2.scale(-1)
            return t1 + t2
        if len(m2) > 1:
            if self.kind == LCA:
                raise CompositeArgumentError(
                    "Lie conformal bracket on a composite right argument"
                )
            # left Leibniz: [a_l fg] = [a_l f]g + (-1)^{p(f)p(g)}[a_l g]f
            f, rest = m2[:1], m2[1:]
            fpoly = DiffPoly(self.gens, {f: Fraction(1)})
            rpoly = DiffPoly(self.gens, {rest: Fraction(1)})
            pf = self.gens[f[0][0]].parity
            pr = sum(self.gens[g].parity for g, _ in rest) & 1
            t1 = self._bracket_monos(m1, f).mul_coeff_right(rpoly)
            t2 = self._bracket_monos(m1, rest).mul_coeff_right(fpoly)
            if pf and pr:
                t2 = t2.scale(-1)
            return t1 + t2
        (g1, k1), = m1
        (g2, k2), = m2
        out = self.pair_bracket(g1, g2)
        for _ in range(k2):  # [a_l db] = (l + d)[a_l b]
            out = out.mul_var(0) + out.map_coeffs(lambda c: c.partial())
        if k1:  # [d^k a_l b] = (-l)^k [a_l b]
            out = out.mul_var(0, k1)
            if k1 & 1:
                out = out.scale(-1)
        return out

    def nth_product(self, a: DiffPoly, b: DiffPoly, n: int) -> DiffPoly:
        """a_(n) b: n! times the lambda^n coefficient of [a_l b]."""
        br = self.bracket(a, b)
        coeff = br.terms.get((n,), DiffPoly.zero(self.gens))
        fact = 1
        for t in range(2, n + 1):
            fact *= t
        return coeff.scale(fact)


def _mul_coeff_right(self: LambdaPoly, b: DiffPoly) -> LambdaPoly:
    return self.map_coeffs(lambda c: c * b)


LambdaPoly.mul_coeff_right = _mul_coeff_right


# ---------------------------------------------------------------------------
# axiom checks
# ---------------------------------------------------------------------------


@dataclass
class Violation:
    label: str
    residual: object

    def __repr__(self):
        return f"Violation({self.label}: {self.residual!r})"


@dataclass
class CheckReport:
    title: str
    violations: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, label: str, residual) -> None:
        if residual:
            self.violations.append(Violation(label, residual))

    def lines(self):
        out = [f"{'PASS' if self.ok else 'FAIL'} {self.title}"]
        for n in self.notes:
            out.append(f"  note: {n}")
        for v in self.violations:
            out.append(f"  violated: {v.label}; residual {v.residual!r}")
        return out

    def __repr__(self):
        return "\n".join(self.lines())


def check_axioms(spec: AlgebraSpec, rng=None, composite_trials: int = 8) -> CheckReport:
    """Verify the bracket table symbolically: parity and weight consistency,
    skewsymmetry on all generator pairs, the Jacobi identity on all
    generator triples, and (Poisson vertex kind) the Jacobi identity on
    randomized composite triples."""
    rep = CheckReport(f"axioms[{spec.name or spec.kind}]")
    gens = spec.gens
    N = len(gens)

    for (i, j), val in spec.table.items():
        want_par = (gens[i].parity + gens[j].parity) & 1
        want_w = gens[i].weight + gens[j].weight - 1
        for e, c in val.terms.items():
            if c.parity() != want_par:
                rep.add(f"parity of [{gens[i].name},{gens[j].name}]", val)
                break
            ws = set(c.split_weight())
            if any(w + e[0] != want_w for w in ws):
                rep.add(f"weight of [{gens[i].name},{gens[j].name}]", val)
                break
        if spec.kind == LCA and not all(c.is_linear() for c in val.terms.values()):
            rep.add(
                f"linearity of [{gens[i].name},{gens[j].name}] "
                "(Lie conformal tables take values in the F[d]-span of "
                "generators)",
                val,
            )

    for i in range(N):
        for j in range(N):
            a = DiffPoly.gen(gens, i)
            b = DiffPoly.gen(gens, j)
            direct = spec.bracket(a, b)
            flipped = spec.bracket(b, a).subst_var(
                0, [(0, Fraction(-1))], partial_coeff=Fraction(-1)
            )
            sign = 1 if (gens[i].parity and gens[j].parity) else -1
            residual = direct - flipped.scale(sign)
            rep.add(f"skewsymmetry [{gens[i].name},{gens[j].name}]", residual)

    for i in range(N):
        for j in range(N):
            for k in range(N):
                residual = jacobi_residual(
                    spec,
                    DiffPoly.gen(gens, i),
                    DiffPoly.gen(gens, j),
                    DiffPoly.gen(gens, k),
                )
                rep.add(
                    f"Jacobi [{gens[i].name},{gens[j].name},{gens[k].name}]",
                    residual,
                )

    if spec.kind == PVA and composite_trials:
        import random

        rng = rng or random.Random(20240)
        nontorsion = [i for i, d in enumerate(gens) if not d.torsion]
        t = 0
        while t < composite_trials:
            picks = []
            for _ in range(3):
                g1 = rng.choice(range(N))
                p = DiffPoly.gen(gens, g1, 0 if gens[g1].torsion else rng.randrange(2))
                if nontorsion and rng.random() < 0.7:
                    g2 = rng.choice(nontorsion)
                    p = p * DiffPoly.gen(gens, g2, rng.randrange(2))
                picks.append(p)
            if any(p.is_zero() for p in picks):
                continue  # an odd square vanished; redraw
            residual = jacobi_residual(spec, *picks)
            rep.add(f"Jacobi composite trial {t}", residual)
            t += 1
    return rep


def jacobi_residual(spec: AlgebraSpec, a: DiffPoly, b: DiffPoly, c: DiffPoly) -> LambdaPoly:
    """[a_l [b_m c]] - (-1)^{p(a)p(b)} [b_m [a_l c]] - [[a_l b]_{l+m} c]
    as a polynomial in (l, m) = variables (0, 1)."""
    gens = spec.gens

    def outer(x: DiffPoly, inner: LambdaPoly, xvar: int, ivar: int) -> LambdaPoly:
        out = LambdaPoly.zero(2, gens)
        for (e,), coeff in inner.terms.items():
            piece = spec.bracket(x, coeff)  # in one lambda = xvar
            for (f,), cc in piece.terms.items():
                exps = [0, 0]
                exps[xvar] = f
                exps[ivar] = e
                out._add_term(tuple(exps), cc)
        return out

    t1 = outer(a, spec.bracket(b, c), 0, 1)
    t2 = outer(b, spec.bracket(a, c), 1, 0)
    pa, pb = a.parity(), b.parity()
    if pa is None or pb is None:
        raise ValueError("Jacobi check requires parity-homogeneous arguments")
    if pa and pb:
        t2 = t2.scale(-1)
    t3 = LambdaPoly.zero(2, gens)
    ab = spec.bracket(a, b)
    for (e,), coeff in ab.terms.items():
        piece = spec.bracket(coeff, c)  # in nu, substituted nu -> l + m
        for (f,), cc in piece.terms.items():
            binom = 1
            for s in range(f + 1):
                t3._add_term((e + s, f - s), cc.scale(binom))
                binom = binom * (f - s) // (s + 1)
    return t1 - t2 - t3


def check_virasoro(spec: AlgebraSpec) -> CheckReport:
    """Verify the designated Virasoro element: its self-bracket shape, that
    its zero mode acts as d on every generator, and that every generator is
    an eigenvector of its first mode with the declared conformal weight."""
    rep = CheckReport(f"virasoro[{spec.name or spec.kind}]")
    if spec.virasoro is None:
        rep.add("designation", "no Virasoro element designated")
        return rep
    L = spec.virasoro.element
    gens = spec.gens
    got = spec.bracket(L, L)
    want = (
        LambdaPoly.const(1, L.partial())
        + LambdaPoly.const(1, L).mul_var(0).scale(2)
    )
    cubic = got - want
    for e, c in cubic.terms.items():
        if e != (3,):
            rep.add("self-bracket shape", cubic)
            break
    z = cubic.terms.get((3,), DiffPoly.zero(gens)).scale(12)
    if spec.virasoro.charge is not None:
        want_z = DiffPoly.scalar(gens, spec.virasoro.charge)
        rep.add("central charge value", z - want_z)
    else:
        if z and not (z.is_linear() and all(gens[g].torsion for (g, _k), in z.terms)):
            rep.add("central term not a torsion central element", z)
    rep.notes.append(f"central term z with [L_l L] = (d+2l)L + l^3/12 z: {z!r}")

    for i, d in enumerate(gens):
        a = DiffPoly.gen(gens, i)
        br = spec.bracket(L, a)
        zero_mode = br.terms.get((0,), DiffPoly.zero(gens))
        rep.add(f"L_(0) {d.name} = d {d.name}", zero_mode - a.partial())
        first = br.terms.get((1,), DiffPoly.zero(gens))
        rep.add(
            f"L_(1) {d.name} = {d.weight} {d.name}",
            first - a.scale(d.weight),
        )
    return rep


# ---------------------------------------------------------------------------
# universal envelope and central quotients
# ---------------------------------------------------------------------------


def universal_pva(spec: AlgebraSpec) -> AlgebraSpec:
    """The enveloping Poisson vertex algebra: same generators and table,
    bracket extended to polynomials by the Leibniz rules."""
    if spec.kind != LCA:
        raise ValueError("universal envelope applies to Lie conformal algebras")
    return AlgebraSpec(
        kind=PVA,
        gens=spec.gens,
        table=dict(spec.table),
        virasoro=spec.virasoro,
        name=(spec.name + "-env") if spec.name else "",
    )


def substitute_gen(p: DiffPoly, idx: int, value: Fraction, new_gens: Universe, index_map) -> DiffPoly:
    """Map a polynomial along gen[idx] -> value (a scalar), relabeling the
    remaining generators through index_map."""
    out = DiffPoly.zero(new_gens)
    for m, c in p.terms.items():
        coeff = Fraction(c)
        nm = []
        for g, k in m:
            if g == idx:
                coeff *= value  # torsion: k == 0 always
            else:
                nm.append((index_map[g], k))
        out = out + DiffPoly(new_gens, {tuple(sorted(nm)): coeff})
    return out


def central_quotient(spec: AlgebraSpec, cname: str, value: Fraction) -> AlgebraSpec:
    """Quotient by the ideal generated by (C - value) for a torsion central
    generator C.  For Lie conformal kind only value = 0 is meaningful (there
    is no unit in the algebra)."""
    value = Fraction(value)
    idx = gen_index(spec.gens, cname)
    decl = spec.gens[idx]
    if not decl.torsion:
        raise ValueError(f"{cname!r} is not a torsion generator")
    if cname not in spec.central_ids():
        raise ValueError(f"{cname!r} is not central")
    if spec.kind == LCA and value != 0:
        raise ValueError(
            "a Lie conformal algebra has no unit: central quotients must "
            "send the torsion generator to 0"
        )
    new_gens = tuple(d for k, d in enumerate(spec.gens) if k != idx)
    index_map = {}
    shift = 0
    for k in range(len(spec.gens)):
        if k == idx:
            shift = 1
            continue
        index_map[k] = k - shift if shift else k
    table = {}
    for (i, j), val in spec.table.items():
        if idx in (i, j):
            continue
        mapped = val.map_coeffs(
            lambda c: substitute_gen(c, idx, value, new_gens, index_map)
        )
        mapped = LambdaPoly(1, new_gens, mapped.terms)
        if mapped:
            table[(index_map[i], index_map[j])] = mapped
    vir = None
    if spec.virasoro is not None:
        vir = VirasoroData(
            element=substitute_gen(spec.virasoro.element, idx, value, new_gens, index_map),
            charge=value if spec.virasoro.charge is None else spec.virasoro.charge,
        )
    return AlgebraSpec(
        kind=spec.kind,
        gens=new_gens,
        table=table,
        virasoro=vir,
        name=f"{spec.name}@{cname}={value}" if spec.name else "",
    )
