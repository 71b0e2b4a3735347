"""Generator declarations and generator universes.

A *universe* is an ordered tuple of generator declarations.  Every
polynomial, bracket table and coefficient module is built over some
universe; two values can be combined only when their universes agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

EVEN = 0
ODD = 1


@dataclass(frozen=True)
class GenDecl:
    """One generator: name, parity (0 even / 1 odd), conformal weight,
    torsion flag.

    A torsion generator g satisfies ``partial(g) = 0`` and therefore never
    carries derivative symbols ``g^(k)`` with k >= 1.
    """

    name: str
    parity: int = EVEN
    weight: Fraction = Fraction(0)
    torsion: bool = False

    def __post_init__(self):
        if self.parity not in (EVEN, ODD):
            raise ValueError(f"parity must be 0 or 1, got {self.parity}")
        object.__setattr__(self, "weight", Fraction(self.weight))


Universe = tuple  # tuple[GenDecl, ...]


def make_universe(*decls: GenDecl) -> Universe:
    names = [d.name for d in decls]
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate generator names in {names}")
    return tuple(decls)


def gen_index(universe: Universe, name: str) -> int:
    for i, d in enumerate(universe):
        if d.name == name:
            return i
    raise KeyError(f"no generator named {name!r}")


class UniverseMismatch(ValueError):
    """Raised when two values over different universes are combined."""


def check_same_universe(u1: Universe, u2: Universe) -> None:
    if u1 != u2:
        raise UniverseMismatch(
            f"mismatched generator universes: "
            f"{[d.name for d in u1]} vs {[d.name for d in u2]}"
        )
