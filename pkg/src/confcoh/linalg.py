"""Exact linear algebra over the rationals.

Ranks use fraction-free (Bareiss) elimination on integer-cleared rows with a
deterministic pivot choice (lowest row index); solving and kernel extraction
use reduced row echelon form over Fraction.  No floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Optional

Row = list  # list[Fraction]


def rank(rows, ncols: int) -> int:
    """Rank by fraction-free Bareiss elimination on an integer copy."""
    mat = []
    for r in rows:
        den = 1
        for x in r:
            den = lcm(den, Fraction(x).denominator)
        ir = [int(Fraction(x) * den) for x in r]
        g = 0
        for x in ir:
            g = gcd(g, abs(x))
        if g > 1:
            ir = [x // g for x in ir]
        if any(ir):
            mat.append(ir)
    if not mat:
        return 0
    n = len(mat)
    m = ncols
    prev = 1
    rk = 0
    pr = 0
    for pc in range(m):
        piv = None
        for i in range(pr, n):
            if mat[i][pc]:
                piv = i
                break
        if piv is None:
            continue
        if piv != pr:
            mat[pr], mat[piv] = mat[piv], mat[pr]
        p = mat[pr][pc]
        for i in range(pr + 1, n):
            q = mat[i][pc]
            for j in range(pc, m):
                mat[i][j] = (p * mat[i][j] - q * mat[pr][j]) // prev
        prev = p
        pr += 1
        rk += 1
        if pr == n:
            break
    return rk


def rref(rows, ncols: int):
    """Reduced row echelon form.  Returns (reduced_rows, pivot_cols); zero
    rows are dropped.  Pivot search: lowest remaining row index per column."""
    mat = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    pr = 0
    n = len(mat)
    for pc in range(ncols):
        piv = None
        for i in range(pr, n):
            if mat[i][pc]:
                piv = i
                break
        if piv is None:
            continue
        mat[pr], mat[piv] = mat[piv], mat[pr]
        p = mat[pr][pc]
        if p != 1:
            mat[pr] = [x / p for x in mat[pr]]
        for i in range(n):
            if i != pr and mat[i][pc]:
                q = mat[i][pc]
                mat[i] = [a - q * b for a, b in zip(mat[i], mat[pr])]
        pivots.append(pc)
        pr += 1
        if pr == n:
            break
    return mat[:pr], pivots


def kernel_basis(rows, ncols: int):
    """Basis of the right kernel {x : A x = 0}; rows are the rows of A.
    Deterministic: one vector per free column, in column order."""
    red, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in zip(red, pivots):
            v[pc] = -r[fc]
        basis.append(v)
    return basis


class SpanSolver:
    """Incremental echelon form for membership and coordinates in the span
    of a fixed list of vectors."""

    def __init__(self, vectors, ncols: int):
        self.ncols = ncols
        self.rows = []       # echelon rows, each paired with its combination
        self.combos = []     # combo[i][j]: coefficient of vectors[j] in rows[i]
        self.pivots = []
        self.nvec = 0
        for v in vectors:
            self.add_vector(v)

    def add_vector(self, v) -> bool:
        """Insert a vector; returns True if it enlarged the span."""
        r = [Fraction(x) for x in v]
        combo = [Fraction(0)] * self.nvec + [Fraction(1)]
        for row, cmb, pc in zip(self.rows, self.combos, self.pivots):
            if r[pc]:
                q = r[pc]
                r = [a - q * b for a, b in zip(r, row)]
                combo = _combo_sub(combo, cmb, q)
        self.nvec += 1
        for i in range(len(self.combos)):
            self.combos[i] = self.combos[i] + [Fraction(0)]
        pc = next((c for c in range(self.ncols) if r[c]), None)
        if pc is None:
            self._last_dependent = combo
            return False
        p = r[pc]
        r = [x / p for x in r]
        combo = [x / p for x in combo]
        self.rows.append(r)
        self.combos.append(combo)
        self.pivots.append(pc)
        return True

    def coordinates(self, v) -> Optional[list]:
        """Coefficients x with sum x_j vectors_j == v, or None."""
        r = [Fraction(x) for x in v]
        coeff = [Fraction(0)] * self.nvec
        for row, cmb, pc in zip(self.rows, self.combos, self.pivots):
            if r[pc]:
                q = r[pc]
                r = [a - q * b for a, b in zip(r, row)]
                for j, c in enumerate(cmb):
                    coeff[j] += q * c
        if any(r):
            return None
        return coeff

    @property
    def rank(self) -> int:
        return len(self.rows)


def _combo_sub(c1, c2, q):
    out = list(c1)
    for j, c in enumerate(c2):
        out[j] -= q * c
    return out


def mat_mul(a, b):
    """Dense product of row-major matrices."""
    if not a or not b:
        return []
    m = len(b[0])
    out = []
    for row in a:
        acc = [Fraction(0)] * m
        for x, brow in zip(row, b):
            if x:
                for j, y in enumerate(brow):
                    if y:
                        acc[j] += x * y
        out.append(acc)
    return out


def is_zero_matrix(a) -> bool:
    return all(not x for row in a for x in row)
