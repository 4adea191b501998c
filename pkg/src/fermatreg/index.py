"""Index combinatorics for the character pairs (a, b) mod N on Fermat curves.

Valid pairs have a, b, a+b all nonzero mod N.  The unit group (Z/N)^* acts by
h.(a,b) = (ha,hb); a pair is primitive when gcd(N,a,b) = 1, and non-primitive
pairs reduce to level N/gcd.  The half-system

    H = { h unit mod N : <ha> + <hb> < N }     (<x> = representative in 1..N-1)

contains exactly one of h, -h for every unit and has size g = phi(N)/2.

element_set picks which motivic elements (the basic one plus its two
coordinate-permutation twists) span a g-dimensional image, applying the exact
degeneracy rules: twists coincide with each other when a = b, collapse onto
the basic element when a = c or b = c (c = -a-b), vanish for even N unless the
twisted coordinate is even, and for even N a surviving twist is still dropped
when all its trace coefficients vanish (checked exactly in cyclo).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

from .cyclo import euler_phi, units_mod, zeta_trace


class InsufficientElements(Exception):
    """Fewer independent elements than g are available for this (N, a, b)."""


class ElementDescriptor(Enum):
    E = "e"
    E_ALPHA = "e_alpha"
    E_BETA = "e_beta"

    def __lt__(self, other: "ElementDescriptor") -> bool:
        order = [ElementDescriptor.E, ElementDescriptor.E_ALPHA, ElementDescriptor.E_BETA]
        return order.index(self) < order.index(other)


@dataclass(frozen=True)
class FermatIndex:
    """A pair (a, b) mod N with a, b, a+b != 0; residues stored in 1..N-1."""

    N: int
    a: int
    b: int

    def __post_init__(self):
        if self.N < 3:
            raise ValueError("N must be >= 3")
        object.__setattr__(self, "a", self.a % self.N)
        object.__setattr__(self, "b", self.b % self.N)
        if self.a == 0 or self.b == 0 or (self.a + self.b) % self.N == 0:
            raise ValueError(f"(a,b)=({self.a},{self.b}) not admissible mod {self.N}")

    @property
    def c(self) -> int:
        return (-self.a - self.b) % self.N

    @property
    def g(self) -> int:
        return euler_phi(self.N) // 2

    def rep(self, x: int) -> int:
        """Representative <x> in 1..N-1."""
        r = x % self.N
        if r == 0:
            raise ValueError("zero residue has no representative in 1..N-1")
        return r


def h_set(idx: FermatIndex) -> tuple[int, ...]:
    """The half-system H: units h with <ha> + <hb> < N, ascending."""
    n = idx.N
    out = tuple(
        h for h in units_mod(n) if (h * idx.a) % n + (h * idx.b) % n < n
    )
    assert len(out) == idx.g
    return out


def orbit(idx: FermatIndex) -> frozenset[tuple[int, int]]:
    """Unit-group orbit {(ha, hb)} of the pair."""
    n = idx.N
    return frozenset(((h * idx.a) % n, (h * idx.b) % n) for h in units_mod(n))


def is_primitive(idx: FermatIndex) -> bool:
    return math.gcd(idx.N, math.gcd(idx.a, idx.b)) == 1


def reduce_nonprimitive(idx: FermatIndex) -> FermatIndex:
    """The equivalent pair at level N/d, d = gcd(N,a,b) > 1."""
    d = math.gcd(idx.N, math.gcd(idx.a, idx.b))
    if d == 1:
        raise ValueError(f"{idx} is already primitive")
    return FermatIndex(idx.N // d, idx.a // d, idx.b // d)


def _even(idx: FermatIndex, x: int) -> bool:
    # parity of the representative <x>; only meaningful for even N
    return idx.rep(x) % 2 == 0


def _trace_row_vanishes(idx: FermatIndex, twisted: int) -> bool:
    """Exact check that the even-N twist row is identically zero.

    The twist row entries carry the integer factor
    Tr(zeta_N^(<hc> + <h*twisted>/2)); if it is 0 for every h in H the row
    vanishes and the element is useless.
    """
    n = idx.N
    for h in h_set(idx):
        exp = (h * idx.c) % n + ((h * twisted) % n) // 2
        if zeta_trace(n, exp) != 0:
            return False
    return True


@lru_cache(maxsize=None)
def element_set(idx: FermatIndex) -> tuple[ElementDescriptor, ...]:
    """The g element descriptors used to build the regulator matrix.

    Raises InsufficientElements when the known degeneracies leave fewer than
    g independent candidates (this reproduces the excluded cases: every
    primitive pair at N = 8, the (1,1) pairs at N = 7 and 9, all of N = 14
    and 18, and the trace-degenerate N = 12 pairs).
    """
    if not is_primitive(idx):
        raise ValueError(f"{idx} must be primitive; reduce it first")
    g = idx.g
    if g == 1:
        return (ElementDescriptor.E,)
    a, b, c = idx.a, idx.b, idx.c
    candidates: list[ElementDescriptor] = []
    if idx.N % 2 == 1:
        if a == b:
            # the two twists give the same regulator image; keep one
            if a != c:
                candidates.append(ElementDescriptor.E_ALPHA)
        else:
            if a != c:
                candidates.append(ElementDescriptor.E_ALPHA)
            if b != c:
                candidates.append(ElementDescriptor.E_BETA)
    else:
        # even N: a twist exists only for an even twisted coordinate, and a
        # primitive pair has at most one even coordinate
        if _even(idx, b) and a != c and not _trace_row_vanishes(idx, b):
            candidates.append(ElementDescriptor.E_ALPHA)
        if _even(idx, a) and b != c and not _trace_row_vanishes(idx, a):
            candidates.append(ElementDescriptor.E_BETA)
    if len(candidates) < g - 1:
        raise InsufficientElements(
            f"(N,a,b)=({idx.N},{a},{b}): need {g} elements, "
            f"have {1 + len(candidates)}"
        )
    return (ElementDescriptor.E,) + tuple(candidates[: g - 1])
