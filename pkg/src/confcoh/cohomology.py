"""Cohomology of the sliced complexes: exact ranks, dimensions, explicit
representatives, low-degree interpreters (Casimirs, derivations), the
relation between a central extension and its quotient, and the comparison
between a Lie conformal complex and the matching Poisson vertex complex.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .algebra import LCA, PVA, AlgebraSpec, check_virasoro
from .cochains import (
    REDUCED,
    Cochain,
    differential,
    energy_decompose,
    make_cochain,
    zero_mode_cochain,
)
from .diffpoly import DiffPoly, UnboundedSliceError
from .gens import gen_index
from .lambdapoly import LambdaPoly
from .linalg import SpanSolver, is_zero_matrix, kernel_basis, mat_mul, rank
from .modules import CoeffModule
from .parallel import map_jobs
from .slices import SliceBasis, cochain_slice, differential_matrix


@dataclass
class SliceReport:
    degree: int
    delta: Fraction
    dim_space: int
    dim_kernel: int
    dim_image: int          # image of d from degree-1
    representatives: list   # list of Cochain

    @property
    def dim_h(self) -> int:
        return self.dim_kernel - self.dim_image


@dataclass
class CohomologyReport:
    algebra: object
    module: object
    flavor: str
    deltas: list
    degrees: list
    entries: dict = field(default_factory=dict)   # (n, delta) -> SliceReport
    total_mode: bool = False
    hypothesis_ok: bool = False
    hypothesis_notes: list = field(default_factory=list)

    def dim(self, n: int, delta) -> int:
        e = self.entries.get((n, Fraction(delta)))
        return e.dim_h if e else 0

    def total(self, n: int) -> int:
        return sum(self.dim(n, d) for d in self.deltas)

    def totals(self) -> list:
        return [self.total(n) for n in self.degrees]

    def machine_lines(self) -> list:
        out = []
        for (n, d) in sorted(self.entries):
            e = self.entries[(n, d)]
            out.append(f"H {n} {d.numerator}/{d.denominator} dim={e.dim_h}")
        for n in self.degrees:
            out.append(f"H {n} total dim={self.total(n)}")
        return out


class SliceContext:
    """Caches slices and differential matrices for one (algebra, module,
    flavor) triple."""

    def __init__(self, algebra, module, flavor=REDUCED):
        self.algebra = algebra
        self.module = module
        self.flavor = flavor
        self._slices = {}
        self._mats = {}

    def slice(self, n: int, delta) -> SliceBasis:
        key = (n, Fraction(delta))
        if key not in self._slices:
            self._slices[key] = cochain_slice(
                self.algebra, self.module, n, key[1], self.flavor
            )
        return self._slices[key]

    def matrix(self, n: int, delta):
        key = (n, Fraction(delta))
        if key not in self._mats:
            self._mats[key] = differential_matrix(
                self.slice(n, delta), self.slice(n + 1, delta)
            )
        return self._mats[key]

    def slice_report(self, n: int, delta, with_reps: bool = True) -> SliceReport:
        delta = Fraction(delta)
        sn = self.slice(n, delta)
        dn = self.matrix(n, delta)
        ker = kernel_basis(dn, sn.dim)
        if n >= 1:
            dprev = self.matrix(n - 1, delta)
            sprev = self.slice(n - 1, delta)
            im_cols = [[dprev[r][c] for r in range(sn.dim)] for c in range(sprev.dim)]
            if sn.dim and sprev.dim and dn:
                prod = mat_mul(dn, dprev)
                if not is_zero_matrix(prod):
                    raise ArithmeticError(f"d^2 != 0 on slice ({n}, {delta})")
        else:
            im_cols = []
        solver = SpanSolver([c for c in im_cols if any(c)], sn.dim)
        dim_image = solver.rank
        reps = []
        if with_reps:
            for v in ker:
                if solver.add_vector(v):
                    reps.append(sn.cochain(v))
        dim_h = len(ker) - dim_image
        if with_reps and len(reps) != dim_h:
            raise ArithmeticError("representative extraction mismatch")
        return SliceReport(n, delta, sn.dim, len(ker), dim_image, reps)


def thm_delta_hypotheses(algebra, module) -> tuple:
    """Machine check of the weight-concentration hypotheses: Poisson vertex
    kind, free differential-polynomial generators, a verified Virasoro
    element, and a conformal module."""
    notes = []
    ok = True
    if algebra.kind != PVA:
        ok = False
        notes.append("algebra is not of Poisson vertex kind")
    if any(d.torsion for d in algebra.gens):
        ok = False
        notes.append("torsion generators: not a free differential-polynomial algebra")
    if algebra.virasoro is None:
        ok = False
        notes.append("no Virasoro element designated")
    else:
        rep = check_virasoro(algebra)
        if not rep.ok:
            ok = False
            notes.append("Virasoro check failed")
        if ok:
            bad = conformal_module_violations(algebra, module)
            if bad:
                ok = False
                notes.extend(bad)
    if ok and any(d.weight <= 0 for d in algebra.gens if not d.torsion):
        ok = False
        notes.append("a generator has non-positive conformal weight")
    return ok, notes


def conformal_module_violations(algebra, module) -> list:
    bad = []
    L = algebra.virasoro.element
    for h, decl in enumerate(module.gens):
        v = DiffPoly.gen(module.gens, h)
        if module.zero_mode(L, v) != v.partial():
            bad.append(f"L_(0) != d on module generator {decl.name}")
        if module.first_mode(L, v) != v.scale(decl.weight):
            bad.append(f"module generator {decl.name} is not an L_(1) eigenvector "
                       f"of weight {decl.weight}")
    return bad


def cohomology(algebra, module, degrees, deltas="auto01", flavor=REDUCED,
               with_reps: bool = True) -> CohomologyReport:
    """Dimensions and representatives of the sliced cohomology.

    ``deltas`` is a list of weights, or "auto01": verify the
    weight-concentration hypotheses and total over weights {0, 1} (falling
    back to the same weights per-slice, flagged, when they fail).
    """
    degrees = list(degrees)
    total_mode = deltas == "auto01"
    if total_mode:
        ok, notes = thm_delta_hypotheses(algebra, module)
        deltas = [Fraction(0), Fraction(1)]
    else:
        ok, notes = False, ["per-weight mode: totals cover the listed weights only"]
        deltas = [Fraction(d) for d in deltas]
    ctx = SliceContext(algebra, module, flavor)
    report = CohomologyReport(
        algebra=algebra, module=module, flavor=flavor, deltas=deltas,
        degrees=degrees, total_mode=total_mode, hypothesis_ok=ok,
        hypothesis_notes=notes,
    )
    jobs = [(n, d) for n in degrees for d in deltas]

    def run(job):
        n, d = job
        return job, ctx.slice_report(n, d, with_reps=with_reps)

    for job, rep in map_jobs(run, jobs):
        report.entries[job] = rep
    return report


# ---------------------------------------------------------------------------
# cocycle verification
# ---------------------------------------------------------------------------


@dataclass
class CocycleVerdict:
    is_cocycle: bool
    is_coboundary: bool
    class_coordinates: list
    delta: Fraction
    residual: Cochain | None = None


def verify_cocycle(algebra, module, Y: Cochain, ctx: SliceContext | None = None) -> CocycleVerdict:
    """Check d Y = 0 exactly, decide solvability of Y = d X on the slice
    below, and return the coordinates of [Y] against the computed
    representative basis."""
    comps = energy_decompose(Y)
    if len(comps) != 1:
        raise ValueError("verify_cocycle needs a weight-homogeneous cochain")
    delta = next(iter(comps))
    ctx = ctx or SliceContext(algebra, module, Y.flavor)
    dY = differential(Y)
    residual = None if dY.is_zero() else dY
    n = Y.degree
    sn = ctx.slice(n, delta)
    coords = sn.coords(Y)
    if n >= 1:
        dprev = ctx.matrix(n - 1, delta)
        sprev = ctx.slice(n - 1, delta)
        im_cols = [[dprev[r][c] for r in range(sn.dim)] for c in range(sprev.dim)]
    else:
        im_cols = []
    solver = SpanSolver([c for c in im_cols if any(c)], sn.dim)
    in_image = solver.coordinates(coords) is not None
    class_coords = []
    if residual is None and not in_image:
        rep = ctx.slice_report(n, delta, with_reps=True)
        reps_coords = [sn.coords(r) for r in rep.representatives]
        solver2 = SpanSolver([c for c in im_cols if any(c)] + reps_coords, sn.dim)
        sol = solver2.coordinates(coords)
        nim = solver.nvec
        class_coords = sol[nim:] if sol is not None else []
    return CocycleVerdict(
        is_cocycle=residual is None,
        is_coboundary=(residual is None and in_image),
        class_coordinates=class_coords,
        delta=delta,
        residual=residual,
    )


# ---------------------------------------------------------------------------
# low-degree interpreters
# ---------------------------------------------------------------------------


def achievable_weights(module, cutoff) -> list:
    """Module weights realizable up to the cutoff, stepping through the
    weight lattice of the module generators."""
    cutoff = Fraction(cutoff)
    if not module.gens:
        return [Fraction(0)]
    den = lcm(*[d.weight.denominator for d in module.gens]) if module.gens else 1
    lo = Fraction(0) if module.poly else min(d.weight for d in module.gens)
    out = []
    w = lo
    step = Fraction(1, den)
    while w <= cutoff:
        out.append(w)
        w += step
    return out


def casimirs(algebra, module, weight_cutoff=2, flavor=REDUCED) -> list:
    """Basis of the degree-0 cohomology up to the weight cutoff, as
    0-cochains (classes of module elements)."""
    ctx = SliceContext(algebra, module, flavor)
    out = []
    for d in achievable_weights(module, weight_cutoff):
        rep = ctx.slice_report(0, d, with_reps=True)
        out.extend(rep.representatives)
    return out


@dataclass
class DerivationClass:
    delta: Fraction
    table: dict        # generator name -> DiffPoly (module element)
    cochain: Cochain


def derivations_mod_inner(algebra, module, deltas=(0, 1), flavor=REDUCED) -> list:
    """Representatives of degree-1 cohomology rendered as generator tables;
    the quotient removes exactly the inner part (the image of d)."""
    ctx = SliceContext(algebra, module, flavor)
    out = []
    for d in deltas:
        rep = ctx.slice_report(1, Fraction(d), with_reps=True)
        for Y in rep.representatives:
            table = {}
            for (g,), val in sorted(Y.values.items()):
                table[algebra.gens[g].name] = val.terms.get((0,), DiffPoly.zero(module.gens))
            out.append(DerivationClass(Fraction(d), table, Y))
    return out


# ---------------------------------------------------------------------------
# central extensions
# ---------------------------------------------------------------------------


def restrict_module(module: CoeffModule, old_spec, new_spec, removed_idx: int) -> CoeffModule:
    """The same coefficients viewed over the quotient algebra (torsion
    generators act trivially, so only the index bookkeeping changes)."""
    index_map = {}
    for k in range(len(old_spec.gens)):
        if k == removed_idx:
            continue
        index_map[k] = k - 1 if k > removed_idx else k
    lam = {}
    for (g, h), val in module.lam_table.items():
        if g == removed_idx:
            if val:
                raise ValueError("torsion generator acts nontrivially")
            continue
        lam[(index_map[g], h)] = val
    prod = None
    if module.prod_table is not None:
        prod = {}
        for (g, h), val in module.prod_table.items():
            if g == removed_idx:
                continue
            prod[(index_map[g], h)] = val
    return CoeffModule(
        gens=module.gens, poly=module.poly, action_spec=module.action_spec,
        embed=module.embed, lam_table=lam, prod_table=prod,
        alg_gens=new_spec.gens, name=module.name,
    )


@dataclass
class CentralExtReport:
    h1_full: int
    h1_quot: int
    h2_full: int
    h2_quot: int
    dim_u: int

    @property
    def lhs(self) -> int:
        return (self.h1_full - self.h1_quot) + (self.h2_quot - self.h2_full)

    @property
    def rhs(self) -> int:
        return self.dim_u

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs


def central_ext_relation(spec: AlgebraSpec, cname: str, module: CoeffModule,
                         deltas=(0, 1)) -> CentralExtReport:
    """Compare degree-1 and degree-2 cohomology of an algebra with a torsion
    central generator against its quotient; the difference counts the
    d-kernel of the coefficients, weight by weight."""
    from .algebra import central_quotient

    idx = gen_index(spec.gens, cname)
    quot = central_quotient(spec, cname, Fraction(0))
    mod_q = restrict_module(module, spec, quot, idx)
    deltas = [Fraction(d) for d in deltas]
    ctx_full = SliceContext(spec, module)
    ctx_quot = SliceContext(quot, mod_q)
    h1f = sum(ctx_full.slice_report(1, d, with_reps=False).dim_h for d in deltas)
    h2f = sum(ctx_full.slice_report(2, d, with_reps=False).dim_h for d in deltas)
    h1q = sum(ctx_quot.slice_report(1, d, with_reps=False).dim_h for d in deltas)
    h2q = sum(ctx_quot.slice_report(2, d, with_reps=False).dim_h for d in deltas)
    cw = spec.gens[idx].weight
    dim_u = 0
    for d in deltas:
        w = d - 1 + cw
        dim_u += _dim_partial_kernel(module, w)
    return CentralExtReport(h1f, h1q, h2f, h2q, dim_u)


def _dim_partial_kernel(module, w) -> int:
    from .diffpoly import weight_slice_basis

    basis = weight_slice_basis(module.gens, Fraction(w), linear=not module.poly, nlambda=0)
    if not basis:
        return 0
    target = weight_slice_basis(module.gens, Fraction(w) + 1, linear=not module.poly, nlambda=0)
    tindex = {m: i for i, (_, m) in enumerate(target)}
    rows = [[Fraction(0)] * len(basis) for _ in range(len(target))]
    for pos, (_, m) in enumerate(basis):
        dm = DiffPoly(module.gens, {m: Fraction(1)}).partial()
        for mm, c in dm.terms.items():
            rows[tindex[mm]][pos] += c
    return len(kernel_basis(rows, len(basis)))


# ---------------------------------------------------------------------------
# Lie conformal vs Poisson vertex comparison
# ---------------------------------------------------------------------------


@dataclass
class IsoReport:
    dims_lc: dict
    dims_pv: dict
    matrices_equal: dict

    @property
    def ok(self) -> bool:
        return self.dims_lc == self.dims_pv and all(self.matrices_equal.values())


def lc_pv_isomorphism_check(lc_spec, lc_module, pv_spec, pv_module,
                            degrees=(0, 1, 2), deltas=(0, 1)) -> IsoReport:
    """Build both sliced complexes and compare dimensions and differential
    matrices entry by entry (the slices are parameterized by the same
    generator tuples and value monomials on both sides)."""
    ctx_lc = SliceContext(lc_spec, lc_module)
    ctx_pv = SliceContext(pv_spec, pv_module)
    dims_lc = {}
    dims_pv = {}
    eq = {}
    for n in degrees:
        for d in deltas:
            d = Fraction(d)
            s_lc = ctx_lc.slice(n, d)
            s_pv = ctx_pv.slice(n, d)
            dims_lc[(n, d)] = s_lc.dim
            dims_pv[(n, d)] = s_pv.dim
            eq[(n, d)] = ctx_lc.matrix(n, d) == ctx_pv.matrix(n, d)
    return IsoReport(dims_lc, dims_pv, eq)


# ---------------------------------------------------------------------------
# zero modes on cohomology
# ---------------------------------------------------------------------------


def zero_mode_on_cohomology_trivial(algebra, module, a: DiffPoly, n: int,
                                    delta, ctx: SliceContext | None = None) -> bool:
    """True when a_(0) maps every computed representative of H^(n, delta)
    into the image of d (weight of the target slice shifts by
    weight(a) - 1)."""
    ctx = ctx or SliceContext(algebra, module)
    delta = Fraction(delta)
    wa = a.weight()
    if wa is None:
        raise ValueError("weight-homogeneous element required")
    rep = ctx.slice_report(n, delta, with_reps=True)
    target = delta + wa - 1
    sn_t = ctx.slice(n, target)
    if n >= 1:
        dprev = ctx.matrix(n - 1, target)
        sprev = ctx.slice(n - 1, target)
        im_cols = [[dprev[r][c] for r in range(sn_t.dim)] for c in range(sprev.dim)]
    else:
        im_cols = []
    solver = SpanSolver([c for c in im_cols if any(c)], sn_t.dim)
    for Y in rep.representatives:
        aY = zero_mode_cochain(a, Y)
        if aY.is_zero():
            continue
        coords = sn_t.coords(aY)
        if solver.coordinates(coords) is None:
            return False
    return True
