"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored as rational coefficient vectors in the power basis
1, z, ..., z^(phi(N)-1) of Q[t]/(Phi_N(t)), with z = zeta_N = exp(2*pi*i/N)
under the fixed complex embedding.  The representation is canonical, so two
elements are equal iff their coefficient tuples are equal.

Provides the Galois action sigma_h: z -> z^h for h coprime to N (h = -1 is
complex conjugation), the field norm and trace as products/sums over all
conjugates, numerical embedding at a requested bit precision, and the absolute
discriminant via the conductor-discriminant closed form.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

import mpmath
from mpmath import mpc, mpf

# A Galois automorphism of Q(zeta_N) is determined by a unit residue h mod N
# (sigma_h: zeta -> zeta^h); plain ints are used, validated at the call site.
GaloisAut = int

Rational = Union[int, Fraction]


def euler_phi(n: int) -> int:
    out = 1
    for p, e in factorize(n).items():
        out *= (p - 1) * p ** (e - 1)
    return out


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (inputs here are small)."""
    if n < 1:
        raise ValueError("n must be positive")
    fs: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            fs[d] = fs.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        fs[n] = fs.get(n, 0) + 1
    return fs


def units_mod(n: int) -> tuple[int, ...]:
    """Unit residues 1 <= h < n with gcd(h, n) = 1, ascending."""
    return tuple(h for h in range(1, n + 1) if math.gcd(h, n) == 1)


def _poly_exact_div(num: list[int], den: list[int]) -> list[int]:
    # exact division of integer polynomials, coefficients low -> high
    num = num[:]
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1]
        assert c % den[-1] == 0
        c //= den[-1]
        q[i] = c
        for j, dj in enumerate(den):
            num[i + j] -= c * dj
    assert all(x == 0 for x in num)
    return q


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients (low -> high) of the N-th cyclotomic polynomial Phi_N.

    Computed by exact division of t^N - 1 by the Phi_d for proper divisors d;
    monic of degree phi(N).
    """
    if n < 1:
        raise ValueError("N must be >= 1")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_exact_div(poly, list(cyclotomic_poly(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def power_vector(n: int, k: int) -> tuple[int, ...]:
    """t^k reduced mod Phi_N as an integer vector of length phi(N)."""
    k %= n
    phi_n = cyclotomic_poly(n)
    d = len(phi_n) - 1
    if k < d:
        vec = [0] * d
        vec[k] = 1
        return tuple(vec)
    v = [0] * (k + 1)
    v[k] = 1
    for i in range(k, d - 1, -1):
        c = v[i]
        if c:
            for j in range(d + 1):
                v[i - d + j] -= c * phi_n[j]
    return tuple(v[:d])


class CycElt:
    """An element of Q(zeta_N) in the reduced power basis.

    Coefficients are Fractions; ring operations never leave the integral
    subring Z[zeta_N] when both operands are integral.
    """

    __slots__ = ("level", "coeffs")

    def __init__(self, level: int, coeffs: Sequence[Rational]):
        d = euler_phi(level)
        if len(coeffs) != d:
            raise ValueError(f"need exactly {d} coefficients at level {level}")
        self.level = level
        self.coeffs = tuple(Fraction(c) for c in coeffs)

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_powers(cls, level: int, vec: Iterable[Rational]) -> "CycElt":
        """Build sum vec[k] * zeta^k from an unreduced power vector (any length)."""
        d = euler_phi(level)
        out = [Fraction(0)] * d
        for k, c in enumerate(vec):
            if c:
                pw = power_vector(level, k)
                for j in range(d):
                    if pw[j]:
                        out[j] += pw[j] * Fraction(c)
        return cls(level, out)

    @classmethod
    def zeta(cls, level: int, k: int = 1) -> "CycElt":
        return cls(level, power_vector(level, k))

    @classmethod
    def rational(cls, level: int, value: Rational) -> "CycElt":
        d = euler_phi(level)
        return cls(level, (Fraction(value),) + (Fraction(0),) * (d - 1))

    # -- ring structure ------------------------------------------------------

    def _check(self, other: "CycElt") -> None:
        if self.level != other.level:
            raise ValueError(f"level mismatch: {self.level} vs {other.level}")

    def __add__(self, other) -> "CycElt":
        other = _coerce(other, self.level)
        self._check(other)
        return CycElt(self.level, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other) -> "CycElt":
        other = _coerce(other, self.level)
        self._check(other)
        return CycElt(self.level, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "CycElt":
        return CycElt(self.level, [-a for a in self.coeffs])

    def __mul__(self, other) -> "CycElt":
        if isinstance(other, (int, Fraction)):
            return CycElt(self.level, [a * other for a in self.coeffs])
        self._check(other)
        d = len(self.coeffs)
        conv = [Fraction(0)] * (2 * d - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        conv[i + j] += a * b
        out = list(conv[:d])
        for k in range(d, 2 * d - 1):
            c = conv[k]
            if c:
                pw = power_vector(self.level, k)
                for j in range(d):
                    if pw[j]:
                        out[j] += pw[j] * c
        return CycElt(self.level, out)

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other) -> "CycElt":
        return _coerce(other, self.level) - self

    def __pow__(self, e: int) -> "CycElt":
        if e < 0:
            raise ValueError("negative powers not supported")
        acc = CycElt.rational(self.level, 1)
        base = self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CycElt.rational(self.level, other)
        return (
            isinstance(other, CycElt)
            and self.level == other.level
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.level, self.coeffs))

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __repr__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                if k == 0:
                    terms.append(f"{c}")
                else:
                    terms.append(f"{c}*z{self.level}^{k}" if k > 1 else f"{c}*z{self.level}")
        return " + ".join(terms) if terms else "0"

    # -- predicates ----------------------------------------------------------

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"not a rational element: {self!r}")
        return self.coeffs[0]

    def conjugate(self) -> "CycElt":
        return galois_apply(-1, self)


def _coerce(x, level: int) -> CycElt:
    if isinstance(x, CycElt):
        return x
    if isinstance(x, (int, Fraction)):
        return CycElt.rational(level, x)
    raise TypeError(f"cannot coerce {type(x).__name__} to CycElt")


def galois_apply(h: GaloisAut, z: CycElt) -> CycElt:
    """sigma_h(z), the ring homomorphism with zeta -> zeta^h; needs gcd(h,N)=1."""
    n = z.level
    h %= n
    if math.gcd(h, n) != 1:
        raise ValueError(f"h={h} is not a unit mod {n}")
    d = len(z.coeffs)
    out = [Fraction(0)] * d
    for k, c in enumerate(z.coeffs):
        if c:
            pw = power_vector(n, h * k)
            for j in range(d):
                if pw[j]:
                    out[j] += pw[j] * c
    return CycElt(n, out)


def embed(z: CycElt, prec: int) -> mpc:
    """Complex value of z under zeta_N -> exp(2*pi*i/N), to about prec bits."""
    if prec < 32:
        raise ValueError("prec must be >= 32")
    n = z.level
    with mpmath.workprec(prec + 16 + n.bit_length()):
        total = mpc(0)
        for k, c in enumerate(z.coeffs):
            if c:
                root = mpmath.expjpi(mpf(2 * k) / n)
                total += root * mpf(c.numerator) / c.denominator
        return +total


def elt_norm(z: CycElt) -> Fraction:
    """Field norm: product of sigma_h(z) over all units h mod N."""
    n = z.level
    prod = CycElt.rational(n, 1)
    for h in units_mod(n):
        prod = prod * galois_apply(h, z)
    return prod.as_rational()


def elt_trace(z: CycElt) -> Fraction:
    """Field trace: sum of all conjugates of z."""
    n = z.level
    tot = CycElt.rational(n, 0)
    for h in units_mod(n):
        tot = tot + galois_apply(h, z)
    return tot.as_rational()


def zeta_trace(n: int, k: int) -> int:
    """Trace of zeta_N^k from Q(zeta_N) down to Q (a rational integer)."""
    t = elt_trace(CycElt.zeta(n, k))
    assert t.denominator == 1
    return int(t)


def disc_abs(n: int) -> int:
    """|disc Q(zeta_N)| = N^phi(N) / prod_{p | N} p^(phi(N)/(p-1))."""
    if n < 3:
        raise ValueError("N must be >= 3")
    d = euler_phi(n)
    num = n ** d
    for p in factorize(n):
        q, r = divmod(d, p - 1)
        assert r == 0
        num //= p ** q
    return num
