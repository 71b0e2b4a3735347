"""Polynomials in formal even variables lambda_1..lambda_n with
differential-superpolynomial coefficients, and the normal form modulo the
ideal generated by (partial + lambda_1 + ... + lambda_n).

Variables are positional.  A value attached to an n-cochain uses variables
[0 .. npars-1] for inert parameters (basic-complex calculus only) followed by
[npars .. npars+n-1] for the slot variables; the reduced normal form
eliminates the *last* slot variable.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Callable

from .diffpoly import DiffPoly
from .gens import Universe, check_same_universe

Exps = tuple  # tuple[int, ...] exponent vector


class LambdaPoly:
    """Finite sum of lambda-monomials with DiffPoly coefficients."""

    __slots__ = ("nvars", "universe", "terms")

    def __init__(self, nvars: int, universe: Universe, terms: dict | None = None):
        self.nvars = nvars
        self.universe = universe
        self.terms: dict = {}
        if terms:
            for e, c in terms.items():
                if len(e) != nvars:
                    raise ValueError(f"exponent vector {e} has wrong length")
                if c:
                    self.terms[e] = c

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int, universe: Universe) -> "LambdaPoly":
        return cls(nvars, universe)

    @classmethod
    def const(cls, nvars: int, coeff: DiffPoly) -> "LambdaPoly":
        return cls(nvars, coeff.universe, {(0,) * nvars: coeff})

    @classmethod
    def var(cls, nvars: int, i: int, universe: Universe) -> "LambdaPoly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, universe, {tuple(e): DiffPoly.one(universe)})

    # -- linear structure ---------------------------------------------------

    def _set(self, e: Exps, c: DiffPoly) -> None:
        if c:
            self.terms[e] = c
        else:
            self.terms.pop(e, None)

    def _add_term(self, e: Exps, c: DiffPoly) -> None:
        if e in self.terms:
            self._set(e, self.terms[e] + c)
        elif c:
            self.terms[e] = c

    def __add__(self, other: "LambdaPoly") -> "LambdaPoly":
        if self.nvars != other.nvars:
            raise ValueError("nvars mismatch")
        check_same_universe(self.universe, other.universe)
        out = LambdaPoly(self.nvars, self.universe, dict(self.terms))
        for e, c in other.terms.items():
            out._add_term(e, c)
        return out

    def __neg__(self) -> "LambdaPoly":
        return self.map_coeffs(lambda c: -c)

    def __sub__(self, other: "LambdaPoly") -> "LambdaPoly":
        return self + (-other)

    def scale(self, a) -> "LambdaPoly":
        a = Fraction(a)
        return self.map_coeffs(lambda c: c.scale(a))

    def map_coeffs(self, fn: Callable[[DiffPoly], DiffPoly]) -> "LambdaPoly":
        out = LambdaPoly(self.nvars, self.universe)
        for e, c in self.terms.items():
            out._add_term(e, fn(c))
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LambdaPoly)
            and self.nvars == other.nvars
            and self.universe == other.universe
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, tuple(sorted((e, hash(c)) for e, c in self.terms.items()))))

    def __repr__(self):
        from .deffile import format_lambdapoly

        return f"LambdaPoly({format_lambdapoly(self)})"

    # -- multiplication -----------------------------------------------------

    def mul_var(self, i: int, power: int = 1) -> "LambdaPoly":
        out = LambdaPoly(self.nvars, self.universe)
        for e, c in self.terms.items():
            e2 = list(e)
            e2[i] += power
            out._add_term(tuple(e2), c)
        return out

    def mul_coeff(self, b: DiffPoly, mul=None) -> "LambdaPoly":
        """Left-multiply every coefficient by b (plain, untwisted)."""
        if mul is None:
            mul = lambda x, m: x * m
        return self.map_coeffs(lambda c: mul(b, c))

    def deriv_var(self, i: int) -> "LambdaPoly":
        out = LambdaPoly(self.nvars, self.universe)
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            e2 = list(e)
            e2[i] -= 1
            out._add_term(tuple(e2), c.scale(e[i]))
        return out

    # -- variable plumbing --------------------------------------------------

    def permute_vars(self, perm) -> "LambdaPoly":
        """perm[old] = new index; must be a bijection on range(nvars)."""
        out = LambdaPoly(self.nvars, self.universe)
        for e, c in self.terms.items():
            e2 = [0] * self.nvars
            for old, exp in enumerate(e):
                e2[perm[old]] = exp
            out._add_term(tuple(e2), c)
        return out

    def map_vars(self, mapping, new_nvars: int) -> "LambdaPoly":
        """Injective relabeling old index -> new index into a wider ring."""
        out = LambdaPoly(new_nvars, self.universe)
        for e, c in self.terms.items():
            e2 = [0] * new_nvars
            for old, exp in enumerate(e):
                if exp:
                    e2[mapping[old]] = exp
            out._add_term(tuple(e2), c)
        return out

    def eval_var_zero(self, i: int) -> "LambdaPoly":
        out = LambdaPoly(self.nvars, self.universe)
        for e, c in self.terms.items():
            if e[i] == 0:
                out._add_term(e, c)
        return out

    def subst_var(self, src: int, images, partial_coeff=None) -> "LambdaPoly":
        """Substitute lambda_src -> sum(coeff * lambda_v) + partial_coeff * d,
        where d acts on the coefficients.

        ``images`` is a list of (var_index, Fraction); ``partial_coeff`` is a
        Fraction or None.  The substituted variable may also appear among the
        images (e.g. lambda -> -lambda - d for skewsymmetry).
        """
        out = LambdaPoly(self.nvars, self.universe)
        for e, c in self.terms.items():
            power = e[src]
            e0 = list(e)
            e0[src] = 0
            work = LambdaPoly(self.nvars, self.universe, {tuple(e0): c})
            for _ in range(power):
                nxt = LambdaPoly(self.nvars, self.universe)
                for ee, cc in work.terms.items():
                    for v, a in images:
                        e2 = list(ee)
                        e2[v] += 1
                        nxt._add_term(tuple(e2), cc.scale(a))
                    if partial_coeff is not None:
                        nxt._add_term(ee, cc.partial().scale(partial_coeff))
                work = nxt
            for ee, cc in work.terms.items():
                out._add_term(ee, cc)
        return out

    # -- weight bookkeeping --------------------------------------------------

    def split_weight(self) -> dict:
        """Split into weight-homogeneous components; lambda vars weigh 1."""
        buckets: dict = {}
        for e, c in self.terms.items():
            d = sum(e)
            for w, part in c.split_weight().items():
                buckets.setdefault(w + d, LambdaPoly(self.nvars, self.universe))._add_term(e, part)
        return dict(sorted(buckets.items()))

    def weight(self):
        ws = self.split_weight()
        if not ws:
            return None
        return next(iter(ws)) if len(ws) == 1 else None

    def parity(self):
        ps = {c.parity() for c in self.terms.values()}
        ps.discard(None)
        if not ps:
            return None
        return ps.pop() if len(ps) == 1 else None

    def max_degree(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=0)


# ---------------------------------------------------------------------------
# calculus helpers
# ---------------------------------------------------------------------------


def lp_gather(nvars: int, universe: Universe, pieces) -> LambdaPoly:
    out = LambdaPoly(nvars, universe)
    for p in pieces:
        out = out + p
    return out


def taylor_shift(b: DiffPoly, p: LambdaPoly, i: int, mul=None) -> LambdaPoly:
    """Multiplication by e^{d d/dlambda_i} b: the twisted left product
    sum_k (d^k b) (d/dlambda_i)^k p / k!.

    ``mul(x, m)`` multiplies a coefficient m on the left by the algebra
    element x; it defaults to the plain superpolynomial product.
    """
    if mul is None:
        mul = lambda x, m: x * m
    out = LambdaPoly(p.nvars, p.universe)
    dk = p
    bk = b
    k = 0
    while dk:
        piece = dk.map_coeffs(lambda c, _b=bk: mul(_b, c)).scale(
            Fraction(1, factorial(k))
        )
        for e, c in piece.terms.items():
            out._add_term(e, c)
        dk = dk.deriv_var(i)
        bk = bk.partial()
        k += 1
        if not bk:
            # remaining derivative terms all vanish
            break
    return out


def reduce_last_slot(p: LambdaPoly, npars: int) -> LambdaPoly:
    """Normal form modulo (d + sum of slot variables): eliminate the last
    variable, substituting it by minus the sum of the other slot variables
    minus d acting on the coefficient."""
    last = p.nvars - 1
    if last < npars:
        raise ValueError("no slot variable to reduce")
    images = [(v, Fraction(-1)) for v in range(npars, last)]
    return p.subst_var(last, images, partial_coeff=Fraction(-1))
