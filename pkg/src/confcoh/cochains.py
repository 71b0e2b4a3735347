"""Cochains of the reduced and basic complexes, their evaluation on
arbitrary arguments, the cohomology differential, the energy operator, and
the contraction / Lie-derivative calculus of the basic complex.

A cochain stores values only on canonical nondecreasing generator tuples;
evaluation peels derivatives by sesquilinearity, splits products by the
Leibniz rules (Poisson vertex kind), and sorts arguments into canonical
order with the symmetry sign, which is governed by the reversed parities
pbar = 1 - p of the arguments and of the cochain itself.

Value polynomials use variables [0..npars-1] for inert parameters followed
by one slot variable per argument; reduced values are normal forms with the
last slot variable eliminated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement

from .algebra import LCA, PVA, AlgebraSpec, CompositeArgumentError
from .diffpoly import DiffPoly, Mono, mono_parity
from .gens import Universe
from .lambdapoly import LambdaPoly, reduce_last_slot, taylor_shift

REDUCED = "reduced"
BASIC = "basic"


def pbar_gen(universe: Universe, g: int) -> int:
    return 1 - universe[g].parity


def pbar_mono(universe: Universe, m: Mono) -> int:
    return 1 - mono_parity(universe, m)


@dataclass
class Cochain:
    algebra: AlgebraSpec
    module: object                # CoeffModule
    degree: int
    flavor: str = REDUCED
    parity: int = 0               # pbar(Y)
    npars: int = 0
    values: dict = field(default_factory=dict)

    def __post_init__(self):
        nv = self.npars + self.degree
        clean = {}
        for tup, val in self.values.items():
            if val.nvars != nv:
                raise ValueError(
                    f"value on {tup} has {val.nvars} variables, expected {nv}"
                )
            if val:
                clean[tup] = val
        self.values = clean

    # -- basics ---------------------------------------------------------------

    def zero_value(self) -> LambdaPoly:
        return LambdaPoly.zero(self.npars + self.degree, self.module.gens)

    def value(self, tup) -> LambdaPoly:
        return self.values.get(tuple(tup), self.zero_value())

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values.values())

    def map_values(self, fn) -> "Cochain":
        vals = {t: fn(v) for t, v in self.values.items()}
        return Cochain(self.algebra, self.module, self.degree, self.flavor,
                       self.parity, self.npars, vals)

    def __add__(self, other: "Cochain") -> "Cochain":
        if (self.degree, self.flavor, self.npars) != (other.degree, other.flavor, other.npars):
            raise ValueError("cochain shape mismatch")
        vals = dict(self.values)
        for t, v in other.values.items():
            s = vals.get(t)
            vals[t] = v if s is None else s + v
        return Cochain(self.algebra, self.module, self.degree, self.flavor,
                       self.parity, self.npars, vals)

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + other.scale(-1)

    def scale(self, c) -> "Cochain":
        return self.map_values(lambda v: v.scale(c))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Cochain)
            and self.degree == other.degree
            and self.flavor == other.flavor
            and self.npars == other.npars
            and self.values == other.values
        )

    def reduce(self, val: LambdaPoly) -> LambdaPoly:
        if self.flavor == REDUCED and self.degree + 0 >= 1:
            return reduce_last_slot(val, self.npars)
        return val

    def __repr__(self):
        from .deffile import format_lambdapoly

        names = {
            t: format_lambdapoly(v, var_offset=0) for t, v in sorted(self.values.items())
        }
        return (f"Cochain(n={self.degree}, {self.flavor}, pbar={self.parity}, "
                f"values={names})")


def make_cochain(algebra, module, degree, values, flavor=REDUCED, npars=0,
                 parity=None) -> Cochain:
    """Build a cochain, inferring pbar(Y) from any nonzero value: the map
    parity measured in the reversed parities of arguments and values."""
    if parity is None:
        implied = set()
        for tup, val in values.items():
            ps = {c.parity() for c in val.terms.values()}
            ps.discard(None)
            for q in ps:
                implied.add(
                    (1 - q + sum(1 - algebra.gens[g].parity for g in tup)) & 1
                )
        if len(implied) > 1:
            raise ValueError("cochain values mix parities")
        parity = implied.pop() if implied else 0
    return Cochain(algebra, module, degree, flavor, parity, npars, dict(values))


def canonical_tuples(algebra: AlgebraSpec, n: int):
    """Nondecreasing generator tuples carrying cochain values: all of them
    for n = 1 (torsion included), torsion-free for n >= 2."""
    if n == 0:
        return [()]
    N = len(algebra.gens)
    if n == 1:
        return [(i,) for i in range(N)]
    nontorsion = [i for i in range(N) if not algebra.gens[i].torsion]
    return [tuple(t) for t in combinations_with_replacement(nontorsion, n)]


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def evaluate(Y: Cochain, args) -> LambdaPoly:
    """Y_{l_1..l_n}(a_1 x ... x a_n), a LambdaPoly in Y.npars + n variables
    over the module universe (reduced flavor: canonical normal form)."""
    n = Y.degree
    if len(args) != n:
        raise ValueError(f"expected {n} arguments, got {len(args)}")
    if n == 0:
        return Y.value(())
    total = Y.zero_value()
    combos = [(Fraction(1), [])]
    for a in args:
        combos = [
            (c * coeff, monos + [m])
            for c, monos in combos
            for m, coeff in a.terms.items()
        ]
    for scalar, monos in combos:
        piece = _eval_monos(Y, tuple(monos))
        if piece:
            total = total + piece.scale(scalar)
    return total


def _eval_monos(Y: Cochain, monos) -> LambdaPoly:
    uni = Y.algebra.gens
    n = Y.degree
    if any(len(m) == 0 for m in monos):
        return Y.zero_value()  # the unit in any slot kills an n >= 1 cochain
    for i, m in enumerate(monos):
        if len(m) > 1:
            if Y.algebra.kind == LCA:
                raise CompositeArgumentError(
                    "Lie conformal cochains take F[d]-linear arguments"
                )
            var = Y.npars + i
            f, rest = m[:1], m[1:]
            fpoly = DiffPoly(uni, {f: Fraction(1)})
            rpoly = DiffPoly(uni, {rest: Fraction(1)})
            pf = uni[f[0][0]].parity
            pr = sum(uni[g].parity for g, _ in rest) & 1
            prefix = (Y.parity + sum(pbar_mono(uni, monos[k]) for k in range(i))) & 1
            t1 = taylor_shift(
                fpoly,
                _eval_monos(Y, monos[:i] + (rest,) + monos[i + 1:]),
                var,
                mul=Y.module.product,
            )
            if pf and prefix:
                t1 = t1.scale(-1)
            t2 = taylor_shift(
                rpoly,
                _eval_monos(Y, monos[:i] + (f,) + monos[i + 1:]),
                var,
                mul=Y.module.product,
            )
            if pr and ((pf + prefix) & 1):
                t2 = t2.scale(-1)
            return Y.reduce(t1 + t2)
    ks = [m[0][1] for m in monos]
    gens_tuple = tuple(m[0][0] for m in monos)
    val = _eval_gens(Y, gens_tuple)
    if not val:
        return val
    parity_sign = 1
    for i, k in enumerate(ks):
        if k:
            val = val.mul_var(Y.npars + i, k)
            if k & 1:
                parity_sign = -parity_sign
    if parity_sign < 0:
        val = val.scale(-1)
    if any(ks):
        val = Y.reduce(val)
    return val


def _eval_gens(Y: Cochain, gens_tuple) -> LambdaPoly:
    uni = Y.algebra.gens
    n = Y.degree
    if n >= 2 and any(uni[g].torsion for g in gens_tuple):
        return Y.zero_value()
    order = list(range(n))
    work = list(gens_tuple)
    sign = 1
    # bubble sort; each adjacent swap costs (-1)^{pbar pbar}
    changed = True
    while changed:
        changed = False
        for s in range(n - 1):
            if work[s] > work[s + 1]:
                if pbar_gen(uni, work[s]) and pbar_gen(uni, work[s + 1]):
                    sign = -sign
                work[s], work[s + 1] = work[s + 1], work[s]
                order[s], order[s + 1] = order[s + 1], order[s]
                changed = True
    stored = Y.values.get(tuple(work))
    if stored is None or stored.is_zero():
        return Y.zero_value()
    if order == list(range(n)):
        out = stored
    else:
        perm = list(range(Y.npars + n))
        for s, orig in enumerate(order):
            perm[Y.npars + s] = Y.npars + orig
        out = Y.reduce(stored.permute_vars(perm))
    return out.scale(-1) if sign < 0 else out


# ---------------------------------------------------------------------------
# the differential
# ---------------------------------------------------------------------------


def _act_into_var(module, a: DiffPoly, p: LambdaPoly, var: int) -> LambdaPoly:
    """Apply the module lambda-action of a coefficient-wise, with the action
    parameter mapped to variable ``var`` (assumed absent from p)."""
    out = LambdaPoly.zero(p.nvars, module.gens)
    for e, m in p.terms.items():
        acted = module.act(a, m)
        for (k,), mm in acted.terms.items():
            e2 = list(e)
            e2[var] += k
            out._add_term(tuple(e2), mm)
    return out


def differential(Y: Cochain) -> Cochain:
    """The cohomology differential; exact in every coefficient."""
    n = Y.degree
    algebra = Y.algebra
    module = Y.module
    uni = algebra.gens
    values = {}
    for tup in canonical_tuples(algebra, n + 1):
        v = _d_value(Y, tup)
        if v:
            values[tup] = v
    return Cochain(algebra, module, n + 1, Y.flavor, (Y.parity + 1) & 1,
                   Y.npars, values)


def _d_value(Y: Cochain, tup) -> LambdaPoly:
    n = Y.degree
    algebra, module = Y.algebra, Y.module
    uni = algebra.gens
    p = Y.npars
    nv = p + n + 1
    args = [DiffPoly.gen(uni, g) for g in tup]
    pbars = [pbar_gen(uni, g) for g in tup]
    total = LambdaPoly.zero(nv, module.gens)

    for i in range(n + 1):
        gamma = (pbars[i] * (Y.parity + sum(pbars[:i]) + 1) + 1) & 1
        sub = evaluate(Y, args[:i] + args[i + 1:])
        if not sub:
            continue
        mapping = list(range(p)) + [p + (s if s < i else s + 1) for s in range(n)]
        lifted = sub.map_vars(mapping, nv)
        acted = _act_into_var(module, args[i], lifted, p + i)
        if gamma:
            acted = acted.scale(-1)
        total = total + acted

    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            gamma = (
                Y.parity
                + pbars[i] * (sum(pbars[:i]) + 1)
                + pbars[j] * (sum(pbars[:j]) - pbars[i])
            ) & 1
            bracket = algebra.bracket(args[i], args[j])
            if bracket.is_zero():
                continue
            rest = [args[k] for k in range(n + 1) if k not in (i, j)]
            rest_slots = [k for k in range(n + 1) if k not in (i, j)]
            for (e,), coeff in sorted(bracket.terms.items()):
                sub = evaluate(Y, [coeff] + rest)
                if not sub:
                    continue
                # slot 0 of sub is the bracket slot; park it on variable p+i,
                # then substitute that variable by l_i + l_j
                mapping = list(range(p)) + [p + i] + [p + s for s in rest_slots]
                lifted = sub.map_vars(mapping, nv)
                lifted = lifted.subst_var(
                    p + i, [(p + i, Fraction(1)), (p + j, Fraction(1))]
                )
                if e:
                    lifted = lifted.mul_var(p + i, e)
                if gamma:
                    lifted = lifted.scale(-1)
                total = total + lifted

    if Y.flavor == REDUCED:
        total = reduce_last_slot(total, p)
    return total


# ---------------------------------------------------------------------------
# the energy operator
# ---------------------------------------------------------------------------


def first_mode_on_value(module, L_alg: DiffPoly, val: LambdaPoly) -> LambdaPoly:
    return val.map_coeffs(lambda m: module.first_mode(L_alg, m))


def energy_value(Y: Cochain, tup) -> LambdaPoly:
    """(E Y) on one canonical tuple, by the explicit formula
    (E + n) value - sum_i Y(..., L_(1) a_i, ...)."""
    algebra, module = Y.algebra, Y.module
    if algebra.virasoro is None:
        raise ValueError("energy operator needs a designated Virasoro element")
    L = algebra.virasoro.element
    n = Y.degree
    p = Y.npars
    val = Y.value(tup)
    out = val.scale(n)
    out = out + first_mode_on_value(module, L, val)
    for s in range(n):
        out = out + val.deriv_var(p + s).mul_var(p + s)
    args = [DiffPoly.gen(algebra.gens, g) for g in tup]
    for i in range(n):
        la = algebra.nth_product(L, args[i], 1)
        piece = evaluate(Y, args[:i] + [la] + args[i + 1:])
        out = out - piece
    return out


def energy_apply(Y: Cochain) -> Cochain:
    vals = {}
    for tup in set(canonical_tuples(Y.algebra, Y.degree)) | set(Y.values):
        v = energy_value(Y, tup)
        if v:
            vals[tuple(tup)] = v
    return Cochain(Y.algebra, Y.module, Y.degree, Y.flavor, Y.parity, Y.npars, vals)


def energy_decompose(Y: Cochain) -> dict:
    """Split into conformal-weight eigencomponents using the weight grading,
    then verify each against the explicit energy operator.  Returns
    {weight: component}."""
    uni = Y.algebra.gens
    comps: dict = {}
    for tup, val in Y.values.items():
        base = sum((uni[g].weight for g in tup), Fraction(0)) - Y.degree
        for w, part in val.split_weight().items():
            delta = w - base
            comps.setdefault(delta, {})[tup] = part
    out = {}
    for delta, vals in sorted(comps.items()):
        comp = Cochain(Y.algebra, Y.module, Y.degree, Y.flavor, Y.parity,
                       Y.npars, vals)
        check = energy_apply(comp) - comp.scale(delta)
        if not check.is_zero():
            raise ArithmeticError(
                f"energy operator disagrees with the weight grading at {delta}"
            )
        out[delta] = comp
    return out


# ---------------------------------------------------------------------------
# basic-complex calculus
# ---------------------------------------------------------------------------


def partial_cochain(Y: Cochain) -> Cochain:
    """(d + l_1 + ... + l_n) applied to every value (basic flavor)."""
    if Y.flavor != BASIC:
        raise ValueError("the shift by d acts on basic cochains")

    def shift(val: LambdaPoly) -> LambdaPoly:
        out = val.map_coeffs(lambda c: c.partial())
        for s in range(Y.degree):
            out = out + val.mul_var(Y.npars + s)
        return out

    return Y.map_values(shift)


def project_reduced(Y: Cochain) -> Cochain:
    """The quotient map from basic to reduced cochains."""
    if Y.flavor != BASIC:
        raise ValueError("already reduced")
    vals = {}
    for t, v in Y.values.items():
        r = reduce_last_slot(v, Y.npars) if Y.degree >= 1 else v
        if r:
            vals[t] = r
    return Cochain(Y.algebra, Y.module, Y.degree, REDUCED, Y.parity, Y.npars, vals)


def contraction(a: DiffPoly, Y: Cochain) -> Cochain:
    """Slot-0 insertion of a; the lambda of the insertion becomes a new
    inert parameter (the last parameter index).  Reduced cochains contract
    at lambda = 0 instead (no new parameter)."""
    if Y.degree == 0:
        raise ValueError("cannot contract a 0-cochain")
    pa = a.parity()
    if pa is None:
        raise ValueError("contraction needs a parity-homogeneous element")
    sign = -1 if ((1 - pa) and Y.parity) else 1
    n, p = Y.degree, Y.npars
    out_vals = {}
    for tup in canonical_tuples(Y.algebra, n - 1):
        v = evaluate(Y, [a] + [DiffPoly.gen(Y.algebra.gens, g) for g in tup])
        if Y.flavor == REDUCED:
            # insertion at lambda = 0: kill the slot-0 variable, then close
            # the gap; the result is already in normal form
            v = v.eval_var_zero(p).map_vars(_drop_var_mapping(p, p + n), p + n - 1)
        if v:
            out_vals[tuple(tup)] = v
    npars = p if Y.flavor == REDUCED else p + 1
    out = Cochain(Y.algebra, Y.module, n - 1, Y.flavor,
                  (Y.parity + 1 - pa) & 1, npars, out_vals)
    return out.scale(sign) if sign < 0 else out


def _drop_var_mapping(drop: int, nvars: int):
    """map_vars mapping that deletes variable ``drop`` (exponent must be 0)."""
    mapping = []
    for v in range(nvars):
        if v < drop:
            mapping.append(v)
        elif v == drop:
            mapping.append(nvars - 1)  # parked on the last slot; exponent 0
        else:
            mapping.append(v - 1)
    return mapping


def lie_derivative(a: DiffPoly, Y: Cochain) -> Cochain:
    """The lambda-action of an algebra element on a basic cochain; the
    action parameter becomes a new inert parameter (last parameter index)."""
    if Y.flavor != BASIC:
        raise ValueError("the Lie derivative acts on basic cochains")
    pa = a.parity()
    if pa is None:
        raise ValueError("Lie derivative needs a parity-homogeneous element")
    algebra, module = Y.algebra, Y.module
    uni = algebra.gens
    n, p = Y.degree, Y.npars
    nv = p + 1 + n

    def insert_par(val: LambdaPoly) -> LambdaPoly:
        mapping = list(range(p)) + [p + 1 + s for s in range(n)]
        return val.map_vars(mapping, nv)

    out_vals = {}
    for tup in canonical_tuples(algebra, n):
        args = [DiffPoly.gen(uni, g) for g in tup]
        pbars = [pbar_gen(uni, g) for g in tup]
        total = _act_into_var(module, a, insert_par(evaluate(Y, args)), p)
        for i in range(n):
            delta = (pa * (Y.parity + sum(pbars[:i]) + 1) + 1) & 1
            br = algebra.bracket(a, args[i])
            if br.is_zero():
                continue
            for (e,), coeff in sorted(br.terms.items()):
                sub = evaluate(Y, args[:i] + [coeff] + args[i + 1:])
                if not sub:
                    continue
                piece = insert_par(sub)
                piece = piece.subst_var(
                    p + 1 + i, [(p + 1 + i, Fraction(1)), (p, Fraction(1))]
                )
                if e:
                    piece = piece.mul_var(p, e)
                if delta:
                    piece = piece.scale(-1)
                total = total + piece
        if total:
            out_vals[tuple(tup)] = total
    return Cochain(algebra, module, n, BASIC, (Y.parity + pa) & 1, p + 1, out_vals)


def zero_mode_cochain(a: DiffPoly, Y: Cochain) -> Cochain:
    """The zero-mode action a_(0) on a reduced cochain."""
    pa = a.parity()
    algebra, module = Y.algebra, Y.module
    uni = algebra.gens
    n, p = Y.degree, Y.npars
    out_vals = {}
    for tup in set(canonical_tuples(algebra, n)) | set(Y.values):
        args = [DiffPoly.gen(uni, g) for g in tup]
        pbars = [pbar_gen(uni, g) for g in tup]
        total = Y.value(tup).map_coeffs(lambda m: module.zero_mode(a, m))
        for i in range(n):
            delta = (pa * (Y.parity + sum(pbars[:i]) + 1) + 1) & 1
            a0ai = algebra.nth_product(a, args[i], 0)
            if a0ai.is_zero():
                continue
            piece = evaluate(Y, args[:i] + [a0ai] + args[i + 1:])
            if delta:
                piece = piece.scale(-1)
            total = total + piece
        if total:
            out_vals[tuple(tup)] = total
    return Cochain(algebra, module, n, Y.flavor, (Y.parity + pa) & 1, p, out_vals)


def cartan_residual_basic(a: DiffPoly, Y: Cochain) -> Cochain:
    """a_l Y - [iota_l(a), d]Y on the basic complex; zero when the calculus
    is consistent."""
    if Y.flavor != BASIC:
        raise ValueError("basic flavor required")
    pa = a.parity()
    pbar_a = (1 - pa) & 1
    lhs = lie_derivative(a, Y)
    t1 = contraction(a, differential(Y))
    t2 = differential(contraction(a, Y))
    # [iota(a), d] = iota(a) d - (-1)^{pbar(a)} d iota(a)
    rhs = (t1 - t2) if pbar_a == 0 else (t1 + t2)
    return lhs - rhs


def cartan_residual_reduced(a: DiffPoly, Y: Cochain) -> Cochain:
    """a_(0) Y - [iota_0(a), d]Y on the reduced complex."""
    if Y.flavor != REDUCED:
        raise ValueError("reduced flavor required")
    pa = a.parity()
    pbar_a = (1 - pa) & 1
    lhs = zero_mode_cochain(a, Y)
    t1 = contraction(a, differential(Y))
    t2 = differential(contraction(a, Y)) if Y.degree >= 1 else None
    if t2 is None:
        rhs = t1
    else:
        rhs = (t1 - t2) if pbar_a == 0 else (t1 + t2)
    return lhs - rhs
