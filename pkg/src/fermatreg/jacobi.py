"""Jacobi sums, Euler factors and Dirichlet coefficients of the Hecke L-series.

For a prime p not dividing N let f be the order of p mod N and q = p^f, the
size of the residue field at any of the gp = phi(N)/f primes above p.  With a
fixed generator gen of F_q^* and the identification gen^((q-1)/N) -> zeta_N,
the power-residue character is chi(gen^k) = zeta_N^k and the Jacobi sum for
one normalized prime v0 above p is

    j = - sum_(x != 0,1) chi^a(x) chi^b(1-x)   in Z[zeta_N],

an algebraic integer with j * conj(j) = q (checked exactly on every call).
The full Euler factor at p is the Galois-orbit product
prod_h (1 - sigma_h(j) T^f) over coset representatives h of <p> in (Z/N)^*,
which has rational integer coefficients (asserted exactly); expanding the
inverses of these factors multiplicatively yields the Dirichlet coefficients
a_1..a_X, optionally cached on disk.

Finite-field choices are deterministic: F_p uses the least primitive root,
F_(p^f) uses Z/p[t] modulo the first monic irreducible of degree f in the
integer encoding sum c_i p^i, and the generator is the encoding-least
primitive element.  Correctness is independent of these choices (the orbit
product absorbs the choice of prime above p); a generator_rank knob exists so
tests can re-run with the next choices and compare.

hecke_verify checks the principal-ideal formula j((alpha)) =
phi(alpha) * prod_(h in H) sigma_h^(-1)(alpha) exactly for the generators
whose finite-character values phi are tabulated from the source's worked
cases; the prime above p matching (alpha) is located by requiring exactly one
Galois conjugate of the normalized Jacobi sum to satisfy the identity.
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Optional, Sequence

from .cyclo import CycElt, elt_norm, euler_phi, galois_apply, units_mod
from .index import FermatIndex, h_set

CACHE_FORMAT_VERSION = 1
DEFAULT_ENUMERATION_BOUND = 1 << 26


class EnumerationTooLarge(Exception):
    """p^f exceeds the configured enumeration bound."""


@dataclass(frozen=True)
class SplittingData:
    p: int
    f: int   # multiplicative order of p mod N
    gp: int  # number of primes above p, f * gp = phi(N)

    @classmethod
    def create(cls, n: int, p: int) -> "SplittingData":
        if p < 2 or n % p == 0:
            raise ValueError(f"p={p} must be a prime not dividing N={n}")
        f = 1
        x = p % n
        while x != 1:
            x = x * p % n
            f += 1
        return cls(p=p, f=f, gp=euler_phi(n) // f)


@dataclass(frozen=True)
class LocalFactorData:
    p: int
    f: int
    poly: tuple[int, ...]  # coefficients in T = p^(-s), low -> high, poly[0] = 1


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def primes_upto(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, int(n ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = b"\x00" * len(sieve[i * i :: i])
    return [i for i, flag in enumerate(sieve) if flag]


class _PrimeField:
    """Z/p with a discrete-log table on the chosen primitive root."""

    def __init__(self, p: int, generator_rank: int = 0):
        self.p = p
        self.q = p
        fac = _prime_factors(p - 1)
        found = 0
        for g in range(2, p):
            if all(pow(g, (p - 1) // r, p) != 1 for r in fac):
                if found == generator_rank:
                    self.gen = g
                    break
                found += 1
        else:
            raise ValueError(f"no primitive root of rank {generator_rank} mod {p}")
        dlog = [0] * p
        x = 1
        for k in range(p - 1):
            dlog[x] = k
            x = x * self.gen % p
        self.dlog = dlog

    def pair_logs(self):
        """Yield (dlog x, dlog(1-x)) over x in F_p minus {0, 1}."""
        p, dlog = self.p, self.dlog
        for x in range(2, p):
            yield dlog[x], dlog[p + 1 - x]


class _ExtensionField:
    """F_(p^f) = Z/p[t] mod the first monic irreducible of degree f.

    Elements are encoded as integers sum c_i p^i; the dlog table maps every
    nonzero encoding to its index on the chosen generator.
    """

    def __init__(self, p: int, f: int, generator_rank: int = 0, modulus_rank: int = 0):
        self.p = p
        self.f = f
        self.q = q = p ** f
        self.modulus = self._find_irreducible(modulus_rank)
        found = 0
        gen = None
        for enc in range(p, q):  # degree >= 1 suffices: F_p^* never generates
            vec = self._decode(enc)
            if self._order_is_full(vec):
                if found == generator_rank:
                    gen = vec
                    break
                found += 1
        if gen is None:
            raise ValueError("no generator found")
        self.gen = gen
        dlog = [-1] * q
        x = [1] + [0] * (f - 1)
        for k in range(q - 1):
            dlog[self._encode(x)] = k
            x = self._mul(x, gen)
        assert dlog.count(-1) == 1, "generator does not exhaust F_q^*"
        self.dlog = dlog

    def _decode(self, enc: int) -> list[int]:
        out = []
        for _ in range(self.f):
            out.append(enc % self.p)
            enc //= self.p
        return out

    def _encode(self, vec: Sequence[int]) -> int:
        enc = 0
        for c in reversed(vec):
            enc = enc * self.p + c
        return enc

    def _mul(self, u: Sequence[int], v: Sequence[int]) -> list[int]:
        p, f, m = self.p, self.f, self.modulus
        out = [0] * (2 * f - 1)
        for i, ui in enumerate(u):
            if ui:
                for j, vj in enumerate(v):
                    out[i + j] = (out[i + j] + ui * vj) % p
        for i in range(len(out) - 1, f - 1, -1):
            c = out[i]
            if c:
                for j in range(f + 1):
                    out[i - f + j] = (out[i - f + j] - c * m[j]) % p
        return out[:f]

    def _pow(self, u: Sequence[int], e: int) -> list[int]:
        acc = [1] + [0] * (self.f - 1)
        base = list(u)
        while e:
            if e & 1:
                acc = self._mul(acc, base)
            base = self._mul(base, base)
            e >>= 1
        return acc

    def _order_is_full(self, u: Sequence[int]) -> bool:
        one = [1] + [0] * (self.f - 1)
        return all(
            self._pow(u, (self.q - 1) // r) != one
            for r in _prime_factors(self.q - 1)
        )

    def _find_irreducible(self, rank: int) -> list[int]:
        # t^f + (lower part encoded by enc), scanned in encoding order
        found = 0
        for enc in range(self.p ** self.f):
            m = self._decode_raw(enc) + [1]
            if self._is_irreducible(m):
                if found == rank:
                    return m
                found += 1
        raise ValueError("no irreducible modulus found")

    def _decode_raw(self, enc: int) -> list[int]:
        out = []
        for _ in range(self.f):
            out.append(enc % self.p)
            enc //= self.p
        return out

    def _is_irreducible(self, m: Sequence[int]) -> bool:
        # Rabin's test: t^(p^f) = t mod m, and gcd(t^(p^(f/r)) - t, m) = 1
        # for every prime r | f (the inequality alone is not sufficient)
        p, f = self.p, self.f

        def mulmod(u, v):
            out = [0] * (2 * f - 1)
            for i, ui in enumerate(u):
                if ui:
                    for j, vj in enumerate(v):
                        out[i + j] = (out[i + j] + ui * vj) % p
            for i in range(len(out) - 1, f - 1, -1):
                c = out[i]
                if c:
                    for j in range(f + 1):
                        out[i - f + j] = (out[i - f + j] - c * m[j]) % p
            return out[:f]

        def frob_power(e):
            # t^(p^e) mod m by iterated p-th powering
            r = [0, 1] + [0] * (f - 2)
            for _ in range(e):
                acc = [1] + [0] * (f - 1)
                base, ee = r, p
                while ee:
                    if ee & 1:
                        acc = mulmod(acc, base)
                    base = mulmod(base, base)
                    ee >>= 1
                r = acc
            return r

        def strip(u):
            while u and u[-1] == 0:
                u.pop()
            return u

        def poly_rem(a, b):
            a = strip(list(a))
            inv = pow(b[-1], p - 2, p)
            while len(a) >= len(b):
                c = a[-1] * inv % p
                shift = len(a) - len(b)
                for j in range(len(b)):
                    a[shift + j] = (a[shift + j] - c * b[j]) % p
                strip(a)
            return a

        def poly_gcd_is_one(u):
            a, b = strip(list(m)), strip(list(u))
            while b:
                a, b = b, poly_rem(a, b)
            return len(a) == 1

        t_vec = [0, 1] + [0] * (f - 2)
        if frob_power(f) != t_vec:
            return False
        for r in _prime_factors(f):
            diff = list(frob_power(f // r))
            diff[1] = (diff[1] - 1) % p
            if not poly_gcd_is_one(diff):
                return False
        return True

    def pair_logs(self):
        """Yield (dlog x, dlog(1-x)) over x in F_q minus {0, 1}."""
        p, f, dlog = self.p, self.f, self.dlog
        for enc, k1 in enumerate(dlog):
            if k1 < 0:
                continue
            vec = self._decode(enc)
            one_minus = [(1 - vec[0]) % p] + [(-c) % p for c in vec[1:]]
            if not any(one_minus):
                continue  # x = 1
            yield k1, dlog[self._encode(one_minus)]


@lru_cache(maxsize=64)
def _field(p: int, f: int, generator_rank: int = 0, modulus_rank: int = 0):
    if f == 1:
        return _PrimeField(p, generator_rank)
    return _ExtensionField(p, f, generator_rank, modulus_rank)


def jacobi_sum(
    n: int,
    a: int,
    b: int,
    p: int,
    bound: int = DEFAULT_ENUMERATION_BOUND,
    generator_rank: int = 0,
    modulus_rank: int = 0,
) -> CycElt:
    """Jacobi sum at the normalized prime above p, as an element of Z[zeta_N]."""
    idx = FermatIndex(n, a, b)
    split = SplittingData.create(n, p)
    if split.p ** split.f > bound:
        raise EnumerationTooLarge(
            f"p^f = {split.p ** split.f} exceeds bound {bound}"
        )
    fq = _field(p, split.f, generator_rank, modulus_rank)
    # chi(gen^k) = zeta_N^k (N divides q - 1), so the summand for x = gen^k1,
    # 1-x = gen^k2 is zeta_N^(a k1 + b k2)
    counts = [0] * n
    a_, b_ = idx.a, idx.b
    for k1, k2 in fq.pair_logs():
        counts[(a_ * k1 + b_ * k2) % n] += 1
    j = CycElt.from_powers(n, [-c for c in counts])
    # Weil bound, exact form
    assert j * j.conjugate() == fq.q, f"|j|^2 != q at (N,a,b,p)=({n},{a},{b},{p})"
    return j


def local_factor(
    n: int,
    a: int,
    b: int,
    p: int,
    bound: int = DEFAULT_ENUMERATION_BOUND,
    generator_rank: int = 0,
    modulus_rank: int = 0,
) -> LocalFactorData:
    """Euler factor at p: prod over Galois cosets of (1 - sigma_h(j) T^f)."""
    split = SplittingData.create(n, p)
    j0 = jacobi_sum(n, a, b, p, bound, generator_rank, modulus_rank)
    poly: list[CycElt] = [CycElt.rational(n, 1)]
    for h in _coset_reps(n, p):
        jh = galois_apply(h, j0)
        new = [CycElt.rational(n, 0) for _ in range(len(poly) + split.f)]
        for i, coeff in enumerate(poly):
            new[i] = new[i] + coeff
            new[i + split.f] = new[i + split.f] - coeff * jh
        poly = new
    coeffs = []
    for coeff in poly:
        value = coeff.as_rational()  # raises if any coefficient is irrational
        assert value.denominator == 1
        coeffs.append(int(value))
    assert len(coeffs) - 1 == euler_phi(n) and coeffs[0] == 1
    return LocalFactorData(p=p, f=split.f, poly=tuple(coeffs))


def _inverse_series(poly: Sequence[int], k_max: int) -> list[int]:
    inv = [0] * (k_max + 1)
    inv[0] = 1
    for k in range(1, k_max + 1):
        acc = 0
        for i in range(1, min(k, len(poly) - 1) + 1):
            acc += poly[i] * inv[k - i]
        inv[k] = -acc
    return inv


def dirichlet_coeffs(
    n: int,
    a: int,
    b: int,
    x_max: int,
    cache_dir: Optional[str] = None,
    bound: int = DEFAULT_ENUMERATION_BOUND,
) -> list[int]:
    """Dirichlet coefficients a_1..a_X (index 0 unused) of the L-series.

    Only primes with p^f <= X contribute (an Euler factor in T^f starts at
    n = p^f).  Results are cached on disk when cache_dir is given.
    """
    if x_max < 1:
        raise ValueError("X must be >= 1")
    FermatIndex(n, a, b)
    if cache_dir:
        cached = _cache_read(cache_dir, n, a, b, x_max)
        if cached is not None:
            return cached
    coeffs = [0] * (x_max + 1)
    coeffs[1] = 1
    for p in primes_upto(x_max):
        if n % p == 0:
            continue
        split = SplittingData.create(n, p)
        if p ** split.f > x_max:
            continue
        factor = local_factor(n, a, b, p, bound)
        k_max = 0
        while p ** (k_max + 1) <= x_max:
            k_max += 1
        inv = _inverse_series(factor.poly, k_max)
        snapshot = coeffs[:]
        for k in range(1, k_max + 1):
            ck = inv[k]
            if ck == 0:
                continue
            pk = p ** k
            # snapshot entries at multiples of p are still zero here, so this
            # convolution stays multiplicative
            for m in range(1, x_max // pk + 1):
                if snapshot[m]:
                    coeffs[m * pk] += snapshot[m] * ck
    if cache_dir:
        _cache_write(cache_dir, n, a, b, x_max, coeffs)
    return coeffs


# -- coefficient disk cache ---------------------------------------------------
# Text format: header "N a b X version", then one line "n a_n" per 1 <= n <= X.


def _cache_path(cache_dir: str, n: int, a: int, b: int, x_max: int) -> Path:
    return Path(cache_dir) / f"coeffs_{n}_{a}_{b}_{x_max}_v{CACHE_FORMAT_VERSION}.txt"


def _cache_read(cache_dir: str, n, a, b, x_max) -> Optional[list[int]]:
    path = _cache_path(cache_dir, n, a, b, x_max)
    if not path.exists():
        return None
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().split()
        if [int(t) for t in header] != [n, a, b, x_max, CACHE_FORMAT_VERSION]:
            return None
        coeffs = [0] * (x_max + 1)
        for line in fh:
            idx_str, val_str = line.split()
            coeffs[int(idx_str)] = int(val_str)
    return coeffs


def _cache_write(cache_dir: str, n, a, b, x_max, coeffs: Sequence[int]) -> None:
    path = _cache_path(cache_dir, n, a, b, x_max)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="ascii", newline="\n") as fh:
            fh.write(f"{n} {a} {b} {x_max} {CACHE_FORMAT_VERSION}\n")
            for i in range(1, x_max + 1):
                fh.write(f"{i} {coeffs[i]}\n")
        os.replace(tmp, path)  # atomic on POSIX
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- Hecke character data ------------------------------------------------------


def _z(n: int, k: int = 1) -> CycElt:
    return CycElt.zeta(n, k)


def _character_table() -> dict[tuple[int, int, int], tuple[tuple[CycElt, CycElt], ...]]:
    """Worked generators alpha with their finite-character values phi(alpha).

    All entries are transcribed from the source's case computations; zeta_3
    at level 6 is zeta_6^2, zeta_5 at level 10 is zeta_10^2.
    """
    tbl: dict[tuple[int, int, int], list[tuple[CycElt, CycElt]]] = {}
    one6 = CycElt.rational(6, 1)
    z3 = _z(6, 2)
    s6 = -2 * one6 - 3 * z3      # prime of degree one above 7
    t6 = one6 + 4 * z3           # prime of degree one above 13
    tbl[(6, 1, 1)] = [(s6, -z3), (t6, -(z3 ** 2))]
    tbl[(6, 1, 2)] = [(s6, z3 ** 2), (t6, CycElt.rational(6, -1))]
    tbl[(6, 1, 3)] = [(s6, -(z3 ** 2)), (t6, CycElt.rational(6, -1))]
    tbl[(6, 1, 4)] = [(s6, z3), (t6, -(z3 ** 2))]
    tbl[(4, 1, 1)] = [(CycElt.rational(4, 1) - 2 * _z(4), CycElt.rational(4, 1))]
    tbl[(5, 1, 1)] = [(CycElt.rational(5, 2), CycElt.rational(5, -1))]  # 2 inert
    z5 = _z(10, 2)
    alpha10 = CycElt.rational(10, 1) + 2 * z5  # degree one above 11
    tbl[(10, 1, 2)] = [(alpha10, -(z5 ** 4))]
    tbl[(10, 1, 4)] = [(alpha10, CycElt.rational(10, -1))]
    tbl[(10, 1, 6)] = [(alpha10, -(z5 ** 2))]
    alpha12 = CycElt.rational(12, 2) - _z(12)  # degree one above 13
    tbl[(12, 1, 2)] = [(alpha12, -_z(12))]
    tbl[(12, 1, 6)] = [(alpha12, CycElt.rational(12, -1))]
    tbl[(7, 1, 2)] = [(CycElt.rational(7, 3), CycElt.rational(7, -1))]  # 3 inert
    alpha9 = CycElt.rational(9, 1) + _z(9) - _z(9) ** 2  # degree one above 19
    tbl[(9, 1, 2)] = [(alpha9, _z(9, 8))]
    return {key: tuple(val) for key, val in tbl.items()}


CHARACTER_TABLE = _character_table()


def character_entries(n: int, a: int, b: int):
    key = (n, a % n, b % n)
    if key not in CHARACTER_TABLE:
        raise KeyError(f"no tabulated character data for {key}")
    return CHARACTER_TABLE[key]


def stickelberger_product(n: int, a: int, b: int, alpha: CycElt) -> CycElt:
    """prod over h in the half-system of sigma_h^(-1)(alpha)."""
    idx = FermatIndex(n, a, b)
    out = CycElt.rational(n, 1)
    for h in h_set(idx):
        h_inv = pow(h, -1, n)
        out = out * galois_apply(h_inv, alpha)
    return out


def hecke_verify(n: int, a: int, b: int, alpha: CycElt,
                 phi_value: Optional[CycElt] = None) -> bool:
    """Exact check of j((alpha)) = phi(alpha) * Stickelberger product.

    alpha must generate a prime ideal with prime-power norm p^f, p not
    dividing N (degree-one generators and inert rational primes both occur in
    the tabulated data).  phi_value defaults to the table entry for alpha.
    The prime above p attached to (alpha) is pinned down by requiring exactly
    one Galois conjugate of the normalized Jacobi sum to match.
    """
    if alpha.level != n:
        raise ValueError("alpha must live at level N")
    if phi_value is None:
        for gen, phi in character_entries(n, a, b):
            if gen == alpha:
                phi_value = phi
                break
        else:
            raise ValueError(f"alpha={alpha!r} is not a tabulated generator")
    norm = elt_norm_int(alpha)
    p, f = _prime_power(norm)
    split = SplittingData.create(n, p)
    if split.f != f:
        raise ValueError(
            f"norm {norm} = {p}^{f} inconsistent with residue degree {split.f}"
        )
    rhs = phi_value * stickelberger_product(n, a, b, alpha)
    j0 = jacobi_sum(n, a, b, p)
    # distinct conjugate values: the sum can land in a proper subfield, in
    # which case several primes above p share one value and uniqueness only
    # makes sense on values
    values = {galois_apply(h, j0) for h in _coset_reps(n, p)}
    return sum(1 for v in values if v == rhs) == 1


def _coset_reps(n: int, p: int) -> list[int]:
    """Representatives of the cosets of <p> in (Z/N)^*, one per prime above p."""
    subgroup = set()
    x = p % n
    while x not in subgroup:
        subgroup.add(x)
        x = x * p % n
    reps, seen = [], set()
    for h in units_mod(n):
        if h not in seen:
            reps.append(h)
            seen.update(h * s % n for s in subgroup)
    return reps


def elt_norm_int(alpha: CycElt) -> int:
    value = elt_norm(alpha)
    if value.denominator != 1:
        raise ValueError("alpha must be an algebraic integer")
    return abs(int(value))


def _prime_power(m: int) -> tuple[int, int]:
    if m < 2:
        raise ValueError(f"{m} is not a prime power")
    for p in _prime_factors(m):
        f = 0
        while m % p == 0:
            m //= p
            f += 1
        if m != 1:
            raise ValueError("norm is not a prime power")
        return p, f
    raise AssertionError
