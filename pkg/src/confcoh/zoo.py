"""Builtin constructors for the standard algebra and module families:
free (super)bosons, free (super)fermions, affine current algebras, and the
Virasoro algebra, together with their usual coefficient modules.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .algebra import LCA, PVA, AlgebraSpec, VirasoroData, central_quotient, substitute_gen
from .diffpoly import DiffPoly
from .gens import EVEN, ODD, GenDecl, Universe, gen_index, make_universe
from .lambdapoly import LambdaPoly
from .linalg import rref
from .modules import CoeffModule, adjoint_module


# ---------------------------------------------------------------------------
# finite-dimensional Lie (super)algebra data
# ---------------------------------------------------------------------------


@dataclass
class LieAlgebraData:
    names: list
    gram: list                      # N x N rationals
    brackets: dict = field(default_factory=dict)  # (i, j) -> {k: coeff}, i < j
    parities: Optional[list] = None

    def __post_init__(self):
        n = len(self.names)
        self.gram = [[Fraction(x) for x in row] for row in self.gram]
        if self.parities is None:
            self.parities = [EVEN] * n
        self.brackets = {
            key: {k: Fraction(c) for k, c in val.items() if Fraction(c)}
            for key, val in self.brackets.items()
        }

    @property
    def dim(self) -> int:
        return len(self.names)

    def bracket_coeffs(self, i: int, j: int) -> dict:
        """[e_i, e_j] as {k: coeff}, using super-antisymmetry for i >= j.
        Brackets are stored for i < j only, so [x, x] = 0; odd generators
        with nonzero self-bracket are outside the builtin data format."""
        if i < j:
            return self.brackets.get((i, j), {})
        if i == j:
            return {}
        sign = -1 if not (self.parities[i] and self.parities[j]) else 1
        return {k: sign * c for k, c in self.brackets.get((j, i), {}).items()}

    def check(self, skew: bool = False) -> list:
        """Return a list of violated identities (empty = valid data).
        ``skew`` selects the super-skewsymmetric form convention used for
        fermion pairings; the default is the supersymmetric convention of
        bosons and current algebras."""
        bad = []
        n = self.dim
        g = self.gram
        p = self.parities
        # (super)symmetry of the form and parity blocks
        outer = -1 if skew else 1
        for i in range(n):
            for j in range(n):
                if p[i] != p[j] and g[i][j] != 0:
                    bad.append(f"form couples different parities at ({i},{j})")
                if g[i][j] != outer * (-1) ** (p[i] * p[j]) * g[j][i]:
                    bad.append(f"form symmetry fails at ({i},{j})")
        red, piv = rref(self.gram, n)
        if len(piv) != n:
            bad.append("form degenerate")
        # invariance ([a,b]|c) = (a|[b,c])
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    lhs = sum(
                        c * g[m][k] for m, c in self.bracket_coeffs(i, j).items()
                    )
                    rhs = sum(
                        c * g[i][m] for m, c in self.bracket_coeffs(j, k).items()
                    )
                    if lhs != rhs:
                        bad.append(f"form not invariant at ({i},{j},{k})")
        # Jacobi [x,[y,z]] = [[x,y],z] + (-1)^{p(x)p(y)}[y,[x,z]]
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    lhs: dict = {}
                    for m, c in self.bracket_coeffs(j, k).items():
                        for q, c2 in self.bracket_coeffs(i, m).items():
                            lhs[q] = lhs.get(q, Fraction(0)) + c * c2
                    rhs: dict = {}
                    for m, c in self.bracket_coeffs(i, j).items():
                        for q, c2 in self.bracket_coeffs(m, k).items():
                            rhs[q] = rhs.get(q, Fraction(0)) + c * c2
                    sgn = -1 if (p[i] and p[j]) else 1
                    for m, c in self.bracket_coeffs(i, k).items():
                        for q, c2 in self.bracket_coeffs(j, m).items():
                            rhs[q] = rhs.get(q, Fraction(0)) + sgn * c * c2
                    for q in set(lhs) | set(rhs):
                        if lhs.get(q, 0) != rhs.get(q, 0):
                            bad.append(f"Jacobi fails at ({i},{j},{k})")
                            break
        return bad

    def dual_basis_matrix(self) -> list:
        """Columns c^j with (e_i | sum_k c^j_k e_k) = delta_i^j."""
        n = self.dim
        aug = [row[:] + [Fraction(1) if r == c else Fraction(0) for c in range(n)]
               for r, row in enumerate(self.gram)]
        red, piv = rref(aug, 2 * n)
        if piv != list(range(n)):
            raise ValueError("Gram matrix is singular")
        return [[red[r][n + c] for c in range(n)] for r in range(n)]


def sl2_data() -> LieAlgebraData:
    """sl2 with basis (e, h, f) and the trace form of the defining
    representation: (h|h) = 2, (e|f) = 1."""
    return LieAlgebraData(
        names=["e", "h", "f"],
        gram=[[0, 0, 1], [0, 2, 0], [1, 0, 0]],
        brackets={
            (0, 1): {0: Fraction(-2)},          # [e, h] = -2e
            (0, 2): {1: Fraction(1)},           # [e, f] = h
            (1, 2): {2: Fraction(-2)},          # [h, f] = -2f
        },
    )


def abelian_data(n: int, gram=None) -> LieAlgebraData:
    return LieAlgebraData(
        names=[f"u{i+1}" for i in range(n)],
        gram=gram or [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)],
    )


# ---------------------------------------------------------------------------
# algebra families
# ---------------------------------------------------------------------------


def _pair_table_entry(gens: Universe, terms) -> LambdaPoly:
    out = LambdaPoly.zero(1, gens)
    for exp, poly in terms:
        out._add_term((exp,), poly)
    return out


def _quadratic_virasoro(gens: Universe, dualmat, scale: Fraction, deriv_first: bool) -> DiffPoly:
    """(scale) * sum_j u^j u_j, optionally with d on the first factor."""
    n = len(gens)
    L = DiffPoly.zero(gens)
    for j in range(n):
        uj_dual = DiffPoly.zero(gens)
        for k in range(n):
            c = dualmat[k][j]
            if c:
                uj_dual = uj_dual + DiffPoly.gen(gens, k).scale(c)
        if deriv_first:
            uj_dual = uj_dual.partial()
        L = L + uj_dual * DiffPoly.gen(gens, j)
    return L.scale(scale)


def make_free_boson(data: Optional[LieAlgebraData] = None, N: int = 1):
    """Free superboson: the universal Lie conformal algebra (with torsion
    central K) and its Poisson vertex quotient at K = 1, with the quadratic
    Virasoro element and generator weights 1."""
    data = data or abelian_data(N)
    n = data.dim
    gens = make_universe(
        *[GenDecl(nm, data.parities[i], Fraction(1)) for i, nm in enumerate(data.names)],
        GenDecl("K", EVEN, Fraction(0), torsion=True),
    )
    K = n
    table = {}
    for i in range(n):
        for j in range(i, n):
            c = data.gram[i][j]
            if c:
                table[(i, j)] = _pair_table_entry(
                    gens, [(1, DiffPoly.gen(gens, K).scale(c))]
                )
    lca = AlgebraSpec(LCA, gens, table, name="boson")
    pva = central_quotient(AlgebraSpec(PVA, gens, dict(table), name="boson-env"),
                           "K", Fraction(1))
    dualmat = data.dual_basis_matrix()
    pva.virasoro = VirasoroData(
        element=_quadratic_virasoro(pva.gens, dualmat, Fraction(1, 2), deriv_first=False),
        charge=Fraction(0),
    )
    pva.name = "boson-pva"
    return lca, pva


def make_free_fermion(data: Optional[LieAlgebraData] = None, N: int = 1):
    """Free superfermion: generators of weight 1/2 (odd in the standard
    purely-odd case), bracket (a|b) K, Poisson vertex quotient at K = 1."""
    if data is None:
        # purely odd generators; the pairing restricted to the odd part is
        # symmetric, and the identity matrix is a valid choice
        data = LieAlgebraData(
            names=[f"u{i+1}" for i in range(N)],
            gram=[[Fraction(1) if i == j else Fraction(0) for j in range(N)] for i in range(N)],
            parities=[ODD] * N,
        )
    n = data.dim
    gens = make_universe(
        *[GenDecl(nm, data.parities[i], Fraction(1, 2)) for i, nm in enumerate(data.names)],
        GenDecl("K", EVEN, Fraction(0), torsion=True),
    )
    K = n
    table = {}
    for i in range(n):
        for j in range(i, n):
            c = data.gram[i][j]
            if c:
                table[(i, j)] = _pair_table_entry(
                    gens, [(0, DiffPoly.gen(gens, K).scale(c))]
                )
    lca = AlgebraSpec(LCA, gens, table, name="fermion")
    pva = central_quotient(AlgebraSpec(PVA, gens, dict(table), name="fermion-env"),
                           "K", Fraction(1))
    dualmat = data.dual_basis_matrix()
    pva.virasoro = VirasoroData(
        element=_quadratic_virasoro(pva.gens, dualmat, Fraction(1, 2), deriv_first=True),
        charge=Fraction(0),
    )
    pva.name = "fermion-pva"
    return lca, pva


def make_affine(data: LieAlgebraData, level=None):
    """Affine current algebra on a Lie algebra with invariant form:
    [a_l b] = [a, b] + l (a|b) K.  With a numeric nonzero ``level`` the
    Poisson vertex quotient at K = level carries the Sugawara-type Virasoro
    element of charge 0; with level None only the universal pair is built.
    """
    n = data.dim
    gens = make_universe(
        *[GenDecl(nm, data.parities[i], Fraction(1)) for i, nm in enumerate(data.names)],
        GenDecl("K", EVEN, Fraction(0), torsion=True),
    )
    K = n
    table = {}
    for i in range(n):
        for j in range(i, n):
            terms = []
            lie = data.bracket_coeffs(i, j)
            if lie:
                val = DiffPoly.zero(gens)
                for k, c in lie.items():
                    val = val + DiffPoly.gen(gens, k).scale(c)
                terms.append((0, val))
            if data.gram[i][j]:
                terms.append((1, DiffPoly.gen(gens, K).scale(data.gram[i][j])))
            if terms:
                table[(i, j)] = _pair_table_entry(gens, terms)
    lca = AlgebraSpec(LCA, gens, table, name="affine")
    if level is None:
        return lca, None
    level = Fraction(level)
    pva = central_quotient(AlgebraSpec(PVA, gens, dict(table), name="affine-env"),
                           "K", level)
    if level != 0:
        dualmat = data.dual_basis_matrix()
        pva.virasoro = VirasoroData(
            element=_quadratic_virasoro(
                pva.gens, dualmat, Fraction(1, 2) / level, deriv_first=False
            ),
            charge=Fraction(0),
        )
    pva.name = f"affine-pva@{level}"
    return lca, pva


def make_virasoro(charge=None):
    """Virasoro: the universal Lie conformal algebra (generator L of weight
    2 and torsion central C), and with a numeric ``charge`` the Poisson
    vertex quotient at C = charge."""
    gens = make_universe(
        GenDecl("L", EVEN, Fraction(2)),
        GenDecl("C", EVEN, Fraction(0), torsion=True),
    )
    Lp = DiffPoly.gen(gens, 0)
    table = {
        (0, 0): _pair_table_entry(
            gens,
            [
                (0, Lp.partial()),
                (1, Lp.scale(2)),
                (3, DiffPoly.gen(gens, 1).scale(Fraction(1, 12))),
            ],
        )
    }
    lca = AlgebraSpec(
        LCA, gens, table, virasoro=VirasoroData(element=Lp, charge=None), name="virasoro"
    )
    if charge is None:
        return lca, None
    pva = central_quotient(
        AlgebraSpec(PVA, gens, dict(table),
                    virasoro=VirasoroData(element=Lp, charge=None),
                    name="virasoro-env"),
        "C", Fraction(charge),
    )
    pva.name = f"virasoro-pva@c={Fraction(charge)}"
    return lca, pva


def universal_envelope(lca: AlgebraSpec) -> AlgebraSpec:
    """The universal Poisson vertex algebra over a Lie conformal algebra,
    keeping the torsion centrals as polynomial generators."""
    out = AlgebraSpec(PVA, lca.gens, dict(lca.table), virasoro=lca.virasoro,
                      name=(lca.name + "-env") if lca.name else "env")
    return out


# ---------------------------------------------------------------------------
# coefficient modules
# ---------------------------------------------------------------------------


def make_module(kind: str, over: AlgebraSpec, **kw) -> CoeffModule:
    """Standard coefficient modules.

    kind: 'adjoint' | 'trivial' | 'augmentation' | 'M_Delta' (kw: delta)
          | 'M_V' (kw: data — adjoint representation coefficients for a
          current algebra built from the same LieAlgebraData)
    """
    if kind == "adjoint":
        return adjoint_module(over)
    if kind == "trivial":
        mgens = make_universe(GenDecl("m", EVEN, Fraction(0), torsion=True))
        return CoeffModule(gens=mgens, poly=False, alg_gens=over.gens, name="trivial")
    if kind == "augmentation":
        mgens = make_universe(GenDecl("m", EVEN, Fraction(0), torsion=True))
        return CoeffModule(
            gens=mgens, poly=False, alg_gens=over.gens, prod_table={}, name="augmentation"
        )
    if kind == "M_Delta":
        delta = Fraction(kw["delta"])
        mgens = make_universe(GenDecl("v", EVEN, delta))
        li = gen_index(over.gens, "L")
        v = DiffPoly.gen(mgens, 0)
        act = LambdaPoly.const(1, v.partial()) + LambdaPoly.const(1, v.scale(delta)).mul_var(0)
        return CoeffModule(
            gens=mgens,
            poly=False,
            alg_gens=over.gens,
            lam_table={(li, 0): act},
            name=f"M_Delta({delta})",
        )
    if kind == "M_V":
        data: LieAlgebraData = kw["data"]
        n = data.dim
        mgens = make_universe(
            *[GenDecl("v_" + nm, data.parities[i], Fraction(1)) for i, nm in enumerate(data.names)]
        )
        table = {}
        for i in range(n):
            for h in range(n):
                val = DiffPoly.zero(mgens)
                for k, c in data.bracket_coeffs(i, h).items():
                    val = val + DiffPoly.gen(mgens, k).scale(c)
                if val:
                    table[(i, h)] = LambdaPoly.const(1, val)
        return CoeffModule(
            gens=mgens, poly=False, alg_gens=over.gens, lam_table=table, name="M_V(adjoint)"
        )
    raise ValueError(f"unknown module kind {kind!r}")


def specialized_adjoint(universal: AlgebraSpec, quotient: AlgebraSpec,
                        cname: str, value) -> CoeffModule:
    """The quotient algebra as a module over its universal extension: the
    torsion central acts by the scalar ``value`` through the quotient map."""
    value = Fraction(value)
    idx = gen_index(universal.gens, cname)
    index_map = {}
    for k in range(len(universal.gens)):
        if k == idx:
            continue
        index_map[k] = k - 1 if k > idx else k

    def embed(a: DiffPoly) -> DiffPoly:
        return substitute_gen(a, idx, value, quotient.gens, index_map)

    return CoeffModule(
        gens=quotient.gens,
        poly=(quotient.kind == PVA),
        action_spec=quotient,
        embed=embed,
        alg_gens=universal.gens,
        name=f"adjoint@{cname}={value}",
    )
