"""Differential superpolynomials over an exact rational coefficient field.

Monomials are multisets of factors ``(gen_index, k)``, one factor per
occurrence of the k-th derivative of a generator, kept in a fixed canonical
order: generators by declaration index, derivative orders ascending.
Re-sorting a product inserts the Koszul sign -1 for every transposition of
two odd factors; a repeated odd factor kills the monomial.

All coefficients are ``fractions.Fraction``; there is no floating point
anywhere in this package.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator

from .gens import GenDecl, Universe, check_same_universe

Mono = tuple  # tuple[tuple[int, int], ...] sorted factors (gen_index, k)

ONE_MONO: Mono = ()


class UnboundedSliceError(ValueError):
    """A requested weight slice is infinite-dimensional."""


def mono_weight(universe: Universe, mono: Mono) -> Fraction:
    w = Fraction(0)
    for g, k in mono:
        w += universe[g].weight + k
    return w


def mono_parity(universe: Universe, mono: Mono) -> int:
    return sum(universe[g].parity for g, _ in mono) & 1


def mono_mul(universe: Universe, m1: Mono, m2: Mono):
    """Merge two canonical monomials; return (sign, mono) or None if zero."""
    if not m1:
        return 1, m2
    if not m2:
        return 1, m1
    out = []
    sign = 1
    i = j = 0
    # number of odd factors of m1 not yet consumed
    odd_left = sum(universe[g].parity for g, _ in m1)
    n1, n2 = len(m1), len(m2)
    while i < n1 and j < n2:
        if m1[i] <= m2[j]:
            odd_left -= universe[m1[i][0]].parity
            out.append(m1[i])
            i += 1
        else:
            # m2[j] jumps over the remaining factors of m1
            if universe[m2[j][0]].parity and (odd_left & 1):
                sign = -sign
            out.append(m2[j])
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    # a repeated odd factor squares to zero
    for a in range(len(out) - 1):
        if out[a] == out[a + 1] and universe[out[a][0]].parity:
            return None
    return sign, tuple(out)


class DiffPoly:
    """Element of the differential superpolynomial algebra over a universe."""

    __slots__ = ("universe", "terms")

    def __init__(self, universe: Universe, terms: dict | None = None):
        self.universe = universe
        self.terms: dict = {}
        if terms:
            for m, c in terms.items():
                c = Fraction(c)
                if c:
                    self.terms[m] = c

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, universe: Universe) -> "DiffPoly":
        return cls(universe)

    @classmethod
    def one(cls, universe: Universe) -> "DiffPoly":
        return cls(universe, {ONE_MONO: Fraction(1)})

    @classmethod
    def scalar(cls, universe: Universe, c) -> "DiffPoly":
        return cls(universe, {ONE_MONO: Fraction(c)})

    @classmethod
    def gen(cls, universe: Universe, index: int, k: int = 0) -> "DiffPoly":
        decl = universe[index]
        if decl.torsion and k > 0:
            return cls(universe)
        return cls(universe, {((index, k),): Fraction(1)})

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "DiffPoly") -> "DiffPoly":
        check_same_universe(self.universe, other.universe)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, 0) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        out = DiffPoly(self.universe)
        out.terms = terms
        return out

    def __neg__(self) -> "DiffPoly":
        out = DiffPoly(self.universe)
        out.terms = {m: -c for m, c in self.terms.items()}
        return out

    def __sub__(self, other: "DiffPoly") -> "DiffPoly":
        return self + (-other)

    def scale(self, c) -> "DiffPoly":
        c = Fraction(c)
        out = DiffPoly(self.universe)
        if c:
            out.terms = {m: c * v for m, v in self.terms.items()}
        return out

    def __mul__(self, other: "DiffPoly") -> "DiffPoly":
        check_same_universe(self.universe, other.universe)
        uni = self.universe
        terms: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                r = mono_mul(uni, m1, m2)
                if r is None:
                    continue
                sign, m = r
                s = terms.get(m, 0) + sign * c1 * c2
                if s:
                    terms[m] = s
                else:
                    terms.pop(m, None)
        out = DiffPoly(uni)
        out.terms = terms
        return out

    def partial(self) -> "DiffPoly":
        """The even derivation raising one derivative order per Leibniz term."""
        uni = self.universe
        terms: dict = {}
        for m, c in self.terms.items():
            for pos, (g, k) in enumerate(m):
                if uni[g].torsion:
                    continue
                if pos + 1 < len(m) and m[pos + 1] == (g, k):
                    continue  # raise only the last factor of an equal block
                mult = 1
                q = pos
                while q > 0 and m[q - 1] == (g, k):
                    mult += 1
                    q -= 1
                lifted = m[:pos] + ((g, k + 1),) + m[pos + 1:]
                # (g, k+1) sorts directly after the (g, k) block; no odd factor
                # is crossed, so no Koszul sign.  A clash with an existing odd
                # (g, k+1) kills the term.
                lifted = tuple(sorted(lifted))
                if uni[g].parity and lifted.count((g, k + 1)) > 1:
                    continue
                s = terms.get(lifted, 0) + mult * c
                if s:
                    terms[lifted] = s
                else:
                    terms.pop(lifted, None)
        out = DiffPoly(uni)
        out.terms = terms
        return out

    def partial_n(self, n: int) -> "DiffPoly":
        p = self
        for _ in range(n):
            p = p.partial()
        return p

    # -- inspection --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DiffPoly)
            and self.universe == other.universe
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.universe, tuple(sorted(self.terms.items()))))

    def parity(self):
        """Parity if homogeneous, else None."""
        ps = {mono_parity(self.universe, m) for m in self.terms}
        if not ps:
            return None
        return ps.pop() if len(ps) == 1 else None

    def weight(self):
        """Conformal weight if homogeneous, else None."""
        ws = {mono_weight(self.universe, m) for m in self.terms}
        if not ws:
            return None
        return ws.pop() if len(ws) == 1 else None

    def split_weight(self) -> dict:
        out: dict = {}
        for m, c in self.terms.items():
            w = mono_weight(self.universe, m)
            out.setdefault(w, {})[m] = c
        return {w: DiffPoly(self.universe, t) for w, t in sorted(out.items())}

    def is_linear(self) -> bool:
        """True when every monomial is a single factor (an F[d]-combination
        of generators, no constant term)."""
        return all(len(m) == 1 for m in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get(ONE_MONO, Fraction(0))

    def sorted_terms(self) -> Iterator:
        return iter(sorted(self.terms.items()))

    def __repr__(self):
        from .deffile import format_diffpoly

        return f"DiffPoly({format_diffpoly(self)})"


# ---------------------------------------------------------------------------
# weight-slice enumeration
# ---------------------------------------------------------------------------


def _factor_pool(universe: Universe, wmax: Fraction):
    """All factors (g, k) of weight <= wmax, in canonical order."""
    pool = []
    for g, decl in enumerate(universe):
        if decl.torsion:
            if decl.weight <= wmax:
                pool.append(((g, 0), decl.weight, decl.parity))
            continue
        k = 0
        while decl.weight + k <= wmax:
            pool.append(((g, k), decl.weight + k, decl.parity))
            k += 1
    return pool


def slice_monomials(universe: Universe, w: Fraction, linear: bool = False):
    """All canonical monomials of exact total weight w.

    ``linear`` restricts to single-factor monomials (elements of a free or
    torsion F[d]-module spanned by the universe); otherwise full polynomial
    monomials are enumerated, which requires every generator to have
    strictly positive weight.
    """
    w = Fraction(w)
    if linear:
        out = []
        for g, decl in enumerate(universe):
            k = w - decl.weight
            if k.denominator == 1 and k >= 0:
                if decl.torsion and k != 0:
                    continue
                out.append(((g, int(k)),))
        return out

    for decl in universe:
        if decl.weight <= 0:
            raise UnboundedSliceError(
                f"unbounded slice: generator {decl.name!r} has weight "
                f"{decl.weight} <= 0 in a polynomial universe"
            )
    if w < 0:
        return []
    if w == 0:
        return [ONE_MONO]

    pool = _factor_pool(universe, w)
    out = []

    def rec(idx: int, remaining: Fraction, chosen: list):
        if remaining == 0:
            out.append(tuple(chosen))
            return
        if idx >= len(pool):
            return
        factor, fw, par = pool[idx]
        # skip this factor entirely
        rec(idx + 1, remaining, chosen)
        maxmult = 1 if par else int(remaining // fw)
        taken = 0
        while taken < maxmult and remaining - fw * (taken + 1) >= 0:
            taken += 1
            chosen.extend([factor] * 1)
            rec(idx + 1, remaining - fw * taken, chosen)
        for _ in range(taken):
            chosen.pop()

    rec(0, w, [])
    return sorted(set(out))


def weight_slice_basis(
    universe: Universe,
    w: Fraction,
    linear: bool = False,
    nlambda: int = 0,
):
    """Basis of the weight-w slice of (polynomials over the universe) tensor
    (monomials in nlambda lambda-variables, each of weight 1).

    Returns a sorted list of pairs (lambda_exponents, mono).
    """
    w = Fraction(w)
    out = []
    d = 0
    while True:
        rest = w - d
        monos = slice_monomials(universe, rest, linear=linear)
        if monos:
            for exps in _lambda_monomials(nlambda, d):
                for m in monos:
                    out.append((exps, m))
        if nlambda == 0:
            break
        # stop once no coefficient weight <= rest can still be hit
        if rest <= _min_weight(universe, linear):
            break
        d += 1
    return sorted(out)


def _min_weight(universe: Universe, linear: bool) -> Fraction:
    if not linear:
        return Fraction(0)  # the unit
    if not universe:
        return Fraction(0)
    return min(d.weight for d in universe)


def _lambda_monomials(nvars: int, degree: int):
    if nvars == 0:
        return [()] if degree == 0 else []
    out = []

    def rec(i: int, left: int, acc: list):
        if i == nvars - 1:
            out.append(tuple(acc + [left]))
            return
        for e in range(left + 1):
            rec(i + 1, left - e, acc + [e])

    rec(0, degree, [])
    return out
