"""Finite-dimensional conformal-weight slices of cochain spaces.

A slice (n, Delta) is parameterized tuple by tuple: the value on a canonical
generator tuple lives in the weight-(Delta + sum of argument weights - n)
slice of the value polynomial ring, cut down by the stabilizer symmetry
constraints for repeated generators (and the kernel-of-d constraint on
torsion singletons at n = 1).  Degree 0 uses the slice-wise quotient by the
image of d (reduced flavor).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cochains import BASIC, REDUCED, Cochain, canonical_tuples, pbar_gen
from .diffpoly import DiffPoly, mono_parity, weight_slice_basis
from .lambdapoly import LambdaPoly, reduce_last_slot
from .linalg import SpanSolver, kernel_basis, rref


class SliceMembershipError(ValueError):
    """A cochain does not lie in the slice it was compared against."""


@dataclass
class TupleSpace:
    ambient: list                  # [(exps, mono)] value monomials
    index: dict                    # (exps, mono) -> position
    basis: list                    # constrained-subspace vectors (ambient coords)
    solver: SpanSolver | None      # coordinates in the constrained subspace
    reducer: tuple | None = None   # (rref rows, pivots) of a quotiented image

    @property
    def dim(self) -> int:
        return len(self.basis)

    def vectorize(self, val: LambdaPoly, npars: int = 0):
        v = [Fraction(0)] * len(self.ambient)
        for e, c in val.terms.items():
            for m, coeff in c.terms.items():
                key = (e, m)
                pos = self.index.get(key)
                if pos is None:
                    raise SliceMembershipError(
                        f"value term {key} lies outside the slice"
                    )
                v[pos] += coeff
        return v

    def reduce_vec(self, v):
        if self.reducer is None:
            return v
        rows, pivots = self.reducer
        v = list(v)
        for row, pc in zip(rows, pivots):
            if v[pc]:
                q = v[pc]
                v = [a - q * b for a, b in zip(v, row)]
        return v

    def coords(self, val: LambdaPoly):
        v = self.reduce_vec(self.vectorize(val))
        if not any(v):
            return [Fraction(0)] * self.dim
        if self.solver is None:
            raise SliceMembershipError("empty tuple space")
        c = self.solver.coordinates(v)
        if c is None:
            raise SliceMembershipError(
                "value violates the slice constraints (symmetry or torsion)"
            )
        return c


@dataclass
class SliceBasis:
    algebra: object
    module: object
    degree: int
    delta: Fraction
    flavor: str
    tuples: list = field(default_factory=list)
    spaces: dict = field(default_factory=dict)   # tuple -> TupleSpace
    entries: list = field(default_factory=list)  # (tuple, local index) global order

    @property
    def dim(self) -> int:
        return len(self.entries)

    def value_of(self, tup, local: int) -> LambdaPoly:
        space = self.spaces[tup]
        nv = self.degree
        vec = space.basis[local]
        terms: dict = {}
        for pos, c in enumerate(vec):
            if c:
                e, m = space.ambient[pos]
                cur = terms.setdefault(e, {})
                cur[m] = cur.get(m, Fraction(0)) + c
        out = LambdaPoly(nv, self.module.gens)
        for e, mons in terms.items():
            out._add_term(e, DiffPoly(self.module.gens, mons))
        return out

    def basis_cochain(self, k: int) -> Cochain:
        tup, local = self.entries[k]
        val = self.value_of(tup, local)
        parity = self._entry_parity(tup, local)
        return Cochain(self.algebra, self.module, self.degree, self.flavor,
                       parity, 0, {tup: val})

    def _entry_parity(self, tup, local: int) -> int:
        space = self.spaces[tup]
        vec = space.basis[local]
        for pos, c in enumerate(vec):
            if c:
                _, m = space.ambient[pos]
                pv = mono_parity(self.module.gens, m)
                return (1 - pv + sum(1 - self.algebra.gens[g].parity for g in tup)) & 1
        return 0

    def coords(self, Y: Cochain):
        if Y.degree != self.degree or Y.npars:
            raise ValueError("cochain shape mismatch")
        out = []
        for tup in self.tuples:
            out.extend(self.spaces[tup].coords(Y.value(tup)))
        extra = set(Y.values) - set(self.tuples)
        for tup in sorted(extra):
            if Y.values[tup]:
                raise SliceMembershipError(f"nonzero value on unexpected tuple {tup}")
        return out

    def cochain(self, vector) -> Cochain:
        if len(vector) != self.dim:
            raise ValueError("coordinate length mismatch")
        values: dict = {}
        parity = None
        for c, (tup, local) in zip(vector, self.entries):
            if not c:
                continue
            piece = self.value_of(tup, local).scale(c)
            if tup in values:
                values[tup] = values[tup] + piece
            else:
                values[tup] = piece
            p = self._entry_parity(tup, local)
            parity = p if parity is None else parity
            if p != parity:
                raise ValueError("mixed-parity coordinate vector")
        return Cochain(self.algebra, self.module, self.degree, self.flavor,
                       parity or 0, 0, values)


def _module_weight_floor(module) -> Fraction:
    if module.poly:
        return Fraction(0)
    if not module.gens:
        return Fraction(0)
    return min(d.weight for d in module.gens)


def cochain_slice(algebra, module, n: int, delta, flavor: str = REDUCED) -> SliceBasis:
    delta = Fraction(delta)
    sl = SliceBasis(algebra, module, n, delta, flavor)
    uni = algebra.gens
    linear = not module.poly
    nlam_full = n
    nlam_red = max(n - 1, 0)

    for tup in canonical_tuples(algebra, n):
        if flavor == BASIC and n == 1 and uni[tup[0]].torsion:
            continue  # -l Y(C) = Y(dC) = 0 forces Y(C) = 0 without a quotient
        w = delta + sum((uni[g].weight for g in tup), Fraction(0)) - n
        nlam = nlam_full if flavor == BASIC else nlam_red
        pairs = weight_slice_basis(module.gens, w, linear=linear, nlambda=nlam)
        if flavor == REDUCED and n >= 1:
            pairs = [(e + (0,), m) for e, m in pairs]
        if not pairs:
            continue
        ambient = sorted(pairs)
        index = {p: i for i, p in enumerate(ambient)}
        dim_a = len(ambient)

        def to_vec(val):
            v = [Fraction(0)] * dim_a
            for e, c in val.terms.items():
                for m, coeff in c.terms.items():
                    pos = index.get((e, m))
                    if pos is None:
                        raise SliceMembershipError("constraint image left the slice")
                    v[pos] += coeff
            return v

        reducer = None

        if n == 0:
            if flavor == REDUCED:
                # quotient by d of the weight-(w-1) module slice
                below = weight_slice_basis(module.gens, w - 1, linear=linear, nlambda=0)
                image_rows = []
                for _, m in below:
                    dm = DiffPoly(module.gens, {m: Fraction(1)}).partial()
                    if dm:
                        image_rows.append(to_vec(LambdaPoly.const(0, dm)))
                if image_rows:
                    rows, pivots = rref(image_rows, dim_a)
                    reducer = (rows, pivots)
                    pivot_set = set(pivots)
                else:
                    pivot_set = set()
                basis = []
                for pos in range(dim_a):
                    if pos not in pivot_set:
                        v = [Fraction(0)] * dim_a
                        v[pos] = Fraction(1)
                        basis.append(v)
            else:
                basis = []
                for pos in range(dim_a):
                    v = [Fraction(0)] * dim_a
                    v[pos] = Fraction(1)
                    basis.append(v)
        else:
            # stabilizer symmetry for repeated neighbors
            swap_rows = []
            for s in range(n - 1):
                if tup[s] != tup[s + 1]:
                    continue
                sign = -1 if pbar_gen(uni, tup[s]) else 1
                for pos in range(dim_a):
                    e, m = ambient[pos]
                    base = LambdaPoly(n, module.gens, {e: DiffPoly(module.gens, {m: Fraction(1)})})
                    perm = list(range(n))
                    perm[s], perm[s + 1] = perm[s + 1], perm[s]
                    moved = base.permute_vars(perm)
                    if flavor == REDUCED:
                        moved = reduce_last_slot(moved, 0)
                    image = to_vec(moved)
                    row = [Fraction(0)] * dim_a
                    row[pos] = Fraction(1)
                    for t in range(dim_a):
                        row[t] -= sign * image[t]
                    swap_rows.append(row)

            torsion_rows = []
            if n == 1 and uni[tup[0]].torsion:
                # d maps the weight-w slice into the weight-(w+1) slice;
                # collect its matrix rows against the higher slice
                target = weight_slice_basis(module.gens, w + 1, linear=linear, nlambda=0)
                tindex = {m: i for i, (_, m) in enumerate(target)}
                mat = [[Fraction(0)] * dim_a for _ in range(len(target))]
                for pos in range(dim_a):
                    _, m = ambient[pos]
                    dm = DiffPoly(module.gens, {m: Fraction(1)}).partial()
                    for mm, c in dm.terms.items():
                        mat[tindex[mm]][pos] += c
                torsion_rows = [row for row in mat if any(row)]

            rows = swap_rows + torsion_rows
            if rows:
                basis = kernel_basis(rows, dim_a)
            else:
                basis = []
                for pos in range(dim_a):
                    v = [Fraction(0)] * dim_a
                    v[pos] = Fraction(1)
                    basis.append(v)

        if not basis:
            continue
        solver = SpanSolver(basis, dim_a)
        space = TupleSpace(ambient=ambient, index=index, basis=basis,
                           solver=solver, reducer=reducer)
        sl.tuples.append(tup)
        sl.spaces[tup] = space
        for local in range(len(basis)):
            sl.entries.append((tup, local))
    return sl


def differential_matrix(src: SliceBasis, dst: SliceBasis):
    """Matrix of d from the (n, Delta) slice to the (n+1, Delta) slice;
    columns are images of the source basis cochains."""
    from .cochains import differential

    cols = []
    for k in range(src.dim):
        dY = differential(src.basis_cochain(k))
        cols.append(dst.coords(dY))
    rows = [[cols[c][r] for c in range(src.dim)] for r in range(dst.dim)]
    return rows


def energy_matrix(sl: SliceBasis):
    """Matrix of the explicit energy operator on a slice (conformal data
    required); equals delta * identity when the weight grading is sound."""
    from .cochains import energy_apply

    cols = []
    for k in range(sl.dim):
        EY = energy_apply(sl.basis_cochain(k))
        cols.append(sl.coords(EY))
    return [[cols[c][r] for c in range(sl.dim)] for r in range(sl.dim)]
