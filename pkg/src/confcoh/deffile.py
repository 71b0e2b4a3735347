"""The declarative definition-file format and the expression syntax.

Expressions are sums of products of rational numbers, ``lambda`` factors
(``lambda`` alone is the first variable; ``lambda2``, ``lambda3``, ... for
higher slots), derivative factors ``d^k name`` and plain generator names.
The printer emits canonical forms; parse(print(x)) == x on canonical forms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .diffpoly import DiffPoly
from .gens import EVEN, ODD, GenDecl, Universe, gen_index, make_universe
from .lambdapoly import LambdaPoly


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        where = ""
        if line is not None:
            where = f" at line {line}" + (f", column {col}" if col is not None else "")
        super().__init__(message + where)
        self.line = line
        self.col = col


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------


def format_fraction(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _format_factors(universe: Universe, mono) -> list:
    out = []
    for g, k in mono:
        name = universe[g].name
        if k == 0:
            out.append(name)
        elif k == 1:
            out.append(f"d {name}")
        else:
            out.append(f"d^{k} {name}")
    return out


def _format_terms(parts) -> str:
    """parts: list of (Fraction, [factor strings]) already sorted."""
    if not parts:
        return "0"
    chunks = []
    for i, (coeff, factors) in enumerate(parts):
        neg = coeff < 0
        mag = -coeff if neg else coeff
        body = "*".join(([format_fraction(mag)] if (mag != 1 or not factors) else []) + factors)
        if i == 0:
            chunks.append(("-" if neg else "") + body)
        else:
            chunks.append(("- " if neg else "+ ") + body)
    return " ".join(chunks)


def format_diffpoly(p: DiffPoly) -> str:
    parts = [
        (c, _format_factors(p.universe, m)) for m, c in sorted(p.terms.items())
    ]
    return _format_terms(parts)


def format_lambdapoly(p: LambdaPoly, var_offset: int = 0) -> str:
    """var_offset shifts printed lambda indices (parameters print as
    lambda0 when present)."""
    parts = []
    for e, c in sorted(p.terms.items()):
        lam = []
        for i, k in enumerate(e):
            if not k:
                continue
            name = "lambda" if (p.nvars == 1 and var_offset == 0) else f"lambda{i + 1 + var_offset}"
            lam.append(name if k == 1 else f"{name}^{k}")
        for m, coeff in sorted(c.terms.items()):
            parts.append(((e, m), coeff, lam + _format_factors(c.universe, m)))
    parts.sort(key=lambda t: t[0])
    return _format_terms([(coeff, fac) for _, coeff, fac in parts])


# ---------------------------------------------------------------------------
# expression parsing
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*^\[\],=()]))"
)


def tokenize(text: str, line: int | None = None):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            rest = text[pos:].strip()
            if not rest:
                break
            raise ParseError(f"unexpected character {rest[0]!r}", line, pos + 1)
        pos = m.end()
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind) + 1))
    return tokens


class _ExprParser:
    def __init__(self, tokens, universe: Universe, nlambda: int, line=None):
        self.toks = tokens
        self.i = 0
        self.universe = universe
        self.nlambda = nlambda
        self.line = line

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, None)

    def next(self):
        t = self.peek()
        self.i += 1
        return t

    def error(self, msg):
        _, _, col = self.peek()
        raise ParseError(msg, self.line, col)

    def parse(self) -> LambdaPoly:
        out = self.parse_sum()
        if self.i != len(self.toks):
            self.error(f"trailing input {self.peek()[1]!r}")
        return out

    def parse_sum(self) -> LambdaPoly:
        kind, val, _ = self.peek()
        negate = False
        if kind == "op" and val in "+-":
            self.next()
            negate = val == "-"
        total = self.parse_term()
        if negate:
            total = -total
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                term = self.parse_term()
                total = total + (-term if val == "-" else term)
            else:
                return total

    def parse_term(self) -> LambdaPoly:
        acc = LambdaPoly.const(self.nlambda, DiffPoly.one(self.universe))
        first = True
        while True:
            piece = self.parse_factor()
            acc = _lp_mul(acc, piece)
            first = False
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.next()
                continue
            # juxtaposition is not allowed except after 'd'
            if first:
                self.error("empty term")
            return acc

    def parse_factor(self) -> LambdaPoly:
        kind, val, col = self.peek()
        if kind == "number":
            self.next()
            return LambdaPoly.const(
                self.nlambda, DiffPoly.scalar(self.universe, Fraction(val))
            )
        if kind != "name":
            self.error(f"expected a factor, found {val!r}")
        if val == "d":
            self.next()
            k = 1
            if self.peek()[:2] == ("op", "^"):
                self.next()
                nk, nv, _ = self.next()
                if nk != "number" or "/" in nv:
                    self.error("expected an integer derivative order")
                k = int(nv)
            gk, gv, _ = self.next()
            if gk != "name":
                self.error("expected a generator after d")
            return self._gen_factor(gv, k)
        if val.startswith("lambda"):
            self.next()
            suffix = val[len("lambda"):]
            idx = 0 if suffix == "" else int(suffix) - 1
            if not (0 <= idx < self.nlambda):
                raise ParseError(
                    f"lambda index {idx + 1} out of range (n = {self.nlambda})",
                    self.line,
                    col,
                )
            e = 1
            if self.peek()[:2] == ("op", "^"):
                self.next()
                nk, nv, _ = self.next()
                if nk != "number" or "/" in nv:
                    self.error("expected an integer exponent")
                e = int(nv)
            return LambdaPoly.var(self.nlambda, idx, self.universe).mul_var(idx, e - 1)
        self.next()
        e = 1
        if self.peek()[:2] == ("op", "^"):
            self.next()
            nk, nv, _ = self.next()
            if nk != "number" or "/" in nv:
                self.error("expected an integer exponent")
            e = int(nv)
        out = self._gen_factor(val, 0)
        for _ in range(e - 1):
            out = _lp_mul(out, self._gen_factor(val, 0))
        return out

    def _gen_factor(self, name: str, k: int) -> LambdaPoly:
        try:
            idx = gen_index(self.universe, name)
        except KeyError:
            raise ParseError(f"unknown generator {name!r}", self.line) from None
        return LambdaPoly.const(self.nlambda, DiffPoly.gen(self.universe, idx, k))


def _lp_mul(a: LambdaPoly, b: LambdaPoly) -> LambdaPoly:
    out = LambdaPoly.zero(a.nvars, a.universe)
    for e1, c1 in a.terms.items():
        for e2, c2 in b.terms.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out._add_term(e, c1 * c2)
    return out


def parse_expression(text: str, universe: Universe, nlambda: int = 1,
                     line: int | None = None) -> LambdaPoly:
    return _ExprParser(tokenize(text, line), universe, nlambda, line).parse()


def parse_diffpoly(text: str, universe: Universe, line: int | None = None) -> DiffPoly:
    p = parse_expression(text, universe, nlambda=0, line=line)
    return p.terms.get((), DiffPoly.zero(universe))


# ---------------------------------------------------------------------------
# definition files
# ---------------------------------------------------------------------------


@dataclass
class Definition:
    """Parsed contents of a definition file."""

    kind: Optional[str] = None
    name: str = ""
    gen_lines: list = field(default_factory=list)     # (name, parity, weight, torsion)
    bracket_lines: list = field(default_factory=list)  # (a, b, expr text, line)
    virasoro_expr: Optional[str] = None
    virasoro_charge: Optional[Fraction] = None
    module_kind: Optional[str] = None                  # adjoint|trivial|...
    module_delta: Optional[Fraction] = None
    module_gen_lines: list = field(default_factory=list)
    module_action_lines: list = field(default_factory=list)   # (alg, mod, expr, line)
    module_product_lines: list = field(default_factory=list)
    builtin: Optional[dict] = None


_SECTION_WORDS = {"kind", "name", "generators", "brackets", "virasoro", "module", "builtin"}


def parse_definition(text: str) -> Definition:
    d = Definition()
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split()[0]
        if head in _SECTION_WORDS:
            rest = line[len(head):].strip()
            if head == "kind":
                if rest not in ("lca", "pva"):
                    raise ParseError(f"kind must be lca or pva, got {rest!r}", lineno)
                d.kind = rest
                section = None
            elif head == "name":
                d.name = rest
                section = None
            elif head == "generators":
                section = "generators"
            elif head == "brackets":
                section = "brackets"
            elif head == "virasoro":
                _parse_virasoro_line(d, rest, lineno)
                section = None
            elif head == "module":
                section = _parse_module_head(d, rest, lineno)
            elif head == "builtin":
                d.builtin = _parse_builtin_line(rest, lineno)
                section = None
            continue
        if section == "generators":
            d.gen_lines.append(_parse_gen_line(line, lineno))
        elif section == "brackets":
            d.bracket_lines.append(_parse_bracket_line(line, lineno))
        elif section == "module":
            _parse_module_line(d, line, lineno)
        else:
            raise ParseError(f"unexpected line {line!r}", lineno)
    return d


def _parse_gen_line(line: str, lineno: int):
    parts = line.split()
    if len(parts) < 3:
        raise ParseError("generator lines read: <name> even|odd <weight> [torsion]", lineno)
    name, par, weight = parts[0], parts[1], parts[2]
    if par not in ("even", "odd"):
        raise ParseError(f"parity must be even or odd, got {par!r}", lineno)
    torsion = False
    if len(parts) > 3:
        if parts[3] != "torsion" or len(parts) > 4:
            raise ParseError("trailing tokens on generator line", lineno)
        torsion = True
    try:
        w = Fraction(weight)
    except ValueError:
        raise ParseError(f"bad weight {weight!r}", lineno) from None
    return (name, EVEN if par == "even" else ODD, w, torsion)


def _parse_bracket_line(line: str, lineno: int):
    m = re.match(r"^\[\s*([A-Za-z_][\w]*)\s*,\s*([A-Za-z_][\w]*)\s*\]\s*=\s*(.+)$", line)
    if not m:
        raise ParseError("bracket lines read: [a, b] = <expression>", lineno)
    return (m.group(1), m.group(2), m.group(3), lineno)


def _parse_virasoro_line(d: Definition, rest: str, lineno: int):
    m = re.match(r"^(.*?)\s+charge\s+(-?\d+(?:/\d+)?)$", rest)
    if not m:
        raise ParseError("virasoro lines read: virasoro <element> charge <rational>", lineno)
    d.virasoro_expr = m.group(1).strip()
    d.virasoro_charge = Fraction(m.group(2))


def _parse_module_head(d: Definition, rest: str, lineno: int):
    if not rest or rest == "explicit":
        d.module_kind = "explicit"
        return "module"
    if rest == "adjoint" or rest == "trivial" or rest == "augmentation":
        d.module_kind = rest
        return None
    m = re.match(r"^M_Delta\s*=\s*(-?\d+(?:/\d+)?)$", rest)
    if m:
        d.module_kind = "M_Delta"
        d.module_delta = Fraction(m.group(1))
        return None
    raise ParseError(f"unknown module form {rest!r}", lineno)


def _parse_module_line(d: Definition, line: str, lineno: int):
    m = re.match(r"^(action|product)\s+([A-Za-z_]\w*)\s+([A-Za-z_]\w*)\s*=\s*(.+)$", line)
    if m:
        entry = (m.group(2), m.group(3), m.group(4), lineno)
        if m.group(1) == "action":
            d.module_action_lines.append(entry)
        else:
            d.module_product_lines.append(entry)
        return
    d.module_gen_lines.append(_parse_gen_line(line, lineno))


def _parse_builtin_line(rest: str, lineno: int) -> dict:
    parts = rest.split()
    if not parts:
        raise ParseError("builtin lines read: builtin <family> [key value ...]", lineno)
    family = parts[0]
    if len(parts) % 2 != 1:
        raise ParseError("builtin parameters come in key value pairs", lineno)
    params = {}
    for i in range(1, len(parts), 2):
        params[parts[i]] = parts[i + 1]
    return {"family": family, **params}


# ---------------------------------------------------------------------------
# assembling specs from definitions, and printing them back
# ---------------------------------------------------------------------------


def build_from_definition(d: Definition):
    """Return (AlgebraSpec, CoeffModule or None)."""
    from .algebra import AlgebraSpec, VirasoroData
    from .modules import CoeffModule, adjoint_module
    from . import zoo

    if d.builtin is not None:
        spec, mod = _build_builtin(d.builtin)
    else:
        if d.kind is None:
            raise ParseError("missing 'kind lca' or 'kind pva'")
        if not d.gen_lines:
            raise ParseError("missing generators section")
        gens = make_universe(*[GenDecl(*g) for g in d.gen_lines])
        table = {}
        for a, b, expr, lineno in d.bracket_lines:
            i, j = gen_index(gens, a), gen_index(gens, b)
            if i > j:
                raise ParseError(
                    f"bracket table entries use declaration order: [{b}, {a}]", lineno
                )
            table[(i, j)] = parse_expression(expr, gens, nlambda=1, line=lineno)
        vir = None
        if d.virasoro_expr is not None:
            lp = parse_expression(d.virasoro_expr, gens, nlambda=0)
            vir = VirasoroData(
                element=lp.terms.get((), DiffPoly.zero(gens)), charge=d.virasoro_charge
            )
        spec = AlgebraSpec(d.kind, gens, table, virasoro=vir, name=d.name)
        mod = None

    if d.module_kind is None:
        return spec, mod
    if d.module_kind in ("adjoint", "trivial", "augmentation"):
        return spec, zoo.make_module(d.module_kind, spec)
    if d.module_kind == "M_Delta":
        return spec, zoo.make_module("M_Delta", spec, delta=d.module_delta)
    # explicit table module
    mgens = make_universe(*[GenDecl(*g) for g in d.module_gen_lines])
    lam_table = {}
    for a, v, expr, lineno in d.module_action_lines:
        key = (gen_index(spec.gens, a), gen_index(mgens, v))
        lam_table[key] = parse_expression(expr, mgens, nlambda=1, line=lineno)
    prod_table = None
    if d.module_product_lines:
        prod_table = {}
        for a, v, expr, lineno in d.module_product_lines:
            key = (gen_index(spec.gens, a), gen_index(mgens, v))
            prod_table[key] = parse_diffpoly(expr, mgens, line=lineno)
    mod = CoeffModule(
        gens=mgens, poly=False, alg_gens=spec.gens,
        lam_table=lam_table, prod_table=prod_table, name="explicit",
    )
    return spec, mod


def _build_builtin(params: dict):
    from . import zoo

    family = params["family"]
    if family == "virasoro":
        charge = Fraction(params.get("charge", "0"))
        _, pva = zoo.make_virasoro(charge)
        return pva, None
    if family == "virasoro-lca":
        lca, _ = zoo.make_virasoro()
        return lca, None
    if family == "boson":
        n = int(params.get("N", "1"))
        _, pva = zoo.make_free_boson(N=n)
        return pva, None
    if family == "fermion":
        n = int(params.get("N", "1"))
        _, pva = zoo.make_free_fermion(N=n)
        return pva, None
    if family == "affine":
        lie = params.get("lie", "sl2")
        if lie != "sl2":
            raise ParseError(f"unknown builtin Lie algebra {lie!r}")
        level = Fraction(params.get("level", "1"))
        _, pva = zoo.make_affine(zoo.sl2_data(), level)
        return pva, None
    raise ParseError(f"unknown builtin family {family!r}")


def print_definition(spec, mod=None) -> str:
    """Canonical definition-file text for a spec (and optional module)."""
    out = [f"kind {spec.kind}"]
    if spec.name:
        out.append(f"name {spec.name}")
    out.append("generators")
    for g in spec.gens:
        par = "even" if g.parity == EVEN else "odd"
        tors = " torsion" if g.torsion else ""
        out.append(f"  {g.name} {par} {format_fraction(g.weight)}{tors}")
    if spec.table:
        out.append("brackets")
        for (i, j), val in sorted(spec.table.items()):
            out.append(
                f"  [{spec.gens[i].name}, {spec.gens[j].name}] = {format_lambdapoly(val)}"
            )
    if spec.virasoro is not None:
        charge = spec.virasoro.charge
        if charge is not None:
            out.append(
                f"virasoro {format_diffpoly(spec.virasoro.element)} "
                f"charge {format_fraction(charge)}"
            )
    if mod is not None:
        if mod.adjoint:
            out.append("module adjoint")
        elif mod.name == "trivial":
            out.append("module trivial")
        elif mod.name == "augmentation":
            out.append("module augmentation")
        elif mod.name.startswith("M_Delta"):
            delta = mod.gens[0].weight
            out.append(f"module M_Delta={format_fraction(delta)}")
        else:
            out.append("module explicit")
            for g in mod.gens:
                par = "even" if g.parity == EVEN else "odd"
                tors = " torsion" if g.torsion else ""
                out.append(f"  {g.name} {par} {format_fraction(g.weight)}{tors}")
            alg = mod.alg_gens
            for (i, h), val in sorted(mod.lam_table.items()):
                out.append(
                    f"  action {alg[i].name} {mod.gens[h].name} = {format_lambdapoly(val)}"
                )
            if mod.prod_table is not None:
                for (i, h), val in sorted(mod.prod_table.items()):
                    out.append(
                        f"  product {alg[i].name} {mod.gens[h].name} = {format_diffpoly(val)}"
                    )
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# cocycle files
# ---------------------------------------------------------------------------


@dataclass
class CocycleFile:
    degree: int
    weight: Fraction
    values: dict          # tuple of gen indices -> LambdaPoly (full slot vars)


def parse_cocycle(text: str, spec, mod) -> CocycleFile:
    degree = None
    weight = None
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("cocycle"):
            m = re.match(r"^cocycle\s+degree\s+(\d+)\s+weight\s+(-?\d+(?:/\d+)?)$", line)
            if not m:
                raise ParseError("header reads: cocycle degree <n> weight <rational>", lineno)
            degree = int(m.group(1))
            weight = Fraction(m.group(2))
            continue
        m = re.match(r"^value\s+((?:[A-Za-z_]\w*\s+)*[A-Za-z_]\w*)\s*=\s*(.+)$", line)
        if not m:
            raise ParseError("value lines read: value <gen> ... <gen> = <expression>", lineno)
        if degree is None:
            raise ParseError("value line before the cocycle header", lineno)
        names = m.group(1).split()
        if len(names) != degree:
            raise ParseError(f"expected {degree} generators, found {len(names)}", lineno)
        tup = tuple(gen_index(spec.gens, nm) for nm in names)
        if tuple(sorted(tup)) != tup:
            raise ParseError("value tuples are listed in declaration order", lineno)
        values[tup] = parse_expression(m.group(2), mod.gens, nlambda=degree, line=lineno)
    if degree is None:
        raise ParseError("missing cocycle header")
    return CocycleFile(degree=degree, weight=weight, values=values)


def print_cocycle(spec, mod, degree: int, weight, values: dict) -> str:
    out = [f"cocycle degree {degree} weight {format_fraction(Fraction(weight))}"]
    for tup, val in sorted(values.items()):
        names = " ".join(spec.gens[i].name for i in tup)
        out.append(f"value {names} = {format_lambdapoly(val)}")
    return "\n".join(out) + "\n"
