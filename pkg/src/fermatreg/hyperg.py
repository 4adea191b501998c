"""Gamma, beta and the specific 3F2 value behind the regulator entries.

Everything is evaluated with mpmath at an explicit bit precision.  The core
quantity is

    f3f2_at1(a, b) = 3F2(a, b, a+b-1; a+b, a+b; 1),

whose terms t_n obey t_(n+1)/t_n = (n+a)(n+b)(n+a+b-1) / ((n+a+b)^2 (n+1))
and decay like C/n^2 (parameter excess 1), far too slowly for plain summation
beyond a few digits.  We sum n0 terms directly and accelerate the tail with
the Euler-Maclaurin expansion of the term law: from the asymptotic series

    log Gamma(n+x) ~ (n+x-1/2) log n - n + log sqrt(2pi)
                     + sum_k (-1)^(k+1) B_(k+1)(x) / (k(k+1) n^k)

the term ratio collapses to t_n = C n^(-2) exp(sum_k q_k n^(-k)) with exact
rational q_k built from Bernoulli polynomials at rational arguments, so

    sum_(n>n0) t_n = C * sum_(j>=0) e_j zeta(2+j, n0+1),

where e_j are the (exact rational) power-series coefficients of the
exponential and zeta is the Hurwitz zeta function.  The series in j is
asymptotic; n0 and the order J are chosen from the precision target and the
last retained term is used as an error sentinel, doubling n0 on failure.

Derived values: f_tilde(a,b) = B(a,b)^2 * f3f2_at1(a,b), and the antisymmetric
combination f_val(N,a,b) = f_tilde(<a>/N,<b>/N) - f_tilde(<-a>/N,<-b>/N) that
populates every regulator matrix.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Union

import mpmath
from mpmath import mpf

from .index import FermatIndex

RationalLike = Union[int, Fraction]


@lru_cache(maxsize=None)
def _bernoulli_numbers(k_max: int) -> tuple[Fraction, ...]:
    # B_0 .. B_kmax via the classical recurrence, exact
    bs = [Fraction(1)]
    for m in range(1, k_max + 1):
        s = Fraction(0)
        for k in range(m):
            s += math.comb(m + 1, k) * bs[k]
        bs.append(-s / (m + 1))
    return tuple(bs)


def bernoulli_poly(k: int, x: Fraction) -> Fraction:
    """B_k(x) for rational x, exact."""
    bs = _bernoulli_numbers(k)
    return sum(
        (math.comb(k, j) * bs[j] * x ** (k - j) for j in range(k + 1)),
        Fraction(0),
    )


def _to_mpf(x: RationalLike) -> mpf:
    x = Fraction(x)
    return mpf(x.numerator) / x.denominator


@lru_cache(maxsize=None)
def gamma_rat(x: RationalLike, prec: int) -> mpf:
    """Gamma(x) for rational x > 0 (any non-pole rational works), to prec bits."""
    x = Fraction(x)
    if x <= 0 and x.denominator == 1:
        raise ValueError(f"Gamma pole at {x}")
    guard = 32 + x.denominator.bit_length()
    with mpmath.workprec(prec + guard):
        return +mpmath.gamma(_to_mpf(x))


def beta(alpha: RationalLike, beta_: RationalLike, prec: int) -> mpf:
    """B(alpha, beta) = Gamma(alpha) Gamma(beta) / Gamma(alpha+beta)."""
    a, b = Fraction(alpha), Fraction(beta_)
    with mpmath.workprec(prec + 32):
        return +(gamma_rat(a, prec + 32) * gamma_rat(b, prec + 32)
                 / gamma_rat(a + b, prec + 32))


@lru_cache(maxsize=None)
def _tail_coeffs(a: Fraction, b: Fraction, order: int) -> tuple[Fraction, ...]:
    # e_j of t_n / C = n^-2 * sum_j e_j n^-j, from exp of the q_k series
    s = a + b
    k_max = order + 1
    q = [Fraction(0)] * (k_max + 1)
    for k in range(1, k_max + 1):
        br = (
            bernoulli_poly(k + 1, a)
            + bernoulli_poly(k + 1, b)
            + bernoulli_poly(k + 1, s - 1)
            - 2 * bernoulli_poly(k + 1, s)
            - bernoulli_poly(k + 1, Fraction(1))
        )
        q[k] = Fraction((-1) ** (k + 1), k * (k + 1)) * br
    # exp of the series: e' = q' * e  =>  j e_j = sum_k k q_k e_(j-k)
    e = [Fraction(0)] * (order + 1)
    e[0] = Fraction(1)
    for j in range(1, order + 1):
        acc = Fraction(0)
        for k in range(1, j + 1):
            acc += k * q[k] * e[j - k]
        e[j] = acc / j
    return tuple(e)


def f3f2_at1(alpha: RationalLike, beta_: RationalLike, prec: int) -> mpf:
    """3F2(a, b, a+b-1; a+b, a+b; 1) for rational a, b in (0, 1), to prec bits."""
    a, b = Fraction(alpha), Fraction(beta_)
    if not (0 < a < 1 and 0 < b < 1):
        raise ValueError("arguments must lie in (0, 1)")
    s = a + b
    if s == 1:
        # upper parameter a+b-1 = 0 terminates the series at its first term
        return mpf(1)
    digits = int(prec / 3.321) + 1
    n0 = max(48, 3 * digits)
    order = max(24, int(1.5 * digits))
    with mpmath.workprec(prec + 48):
        for _ in range(6):
            value, sentinel = _f3f2_em(a, b, n0, order)
            if sentinel <= mpf(2) ** (-(prec + 8)):
                return +value
            n0 *= 2
    raise ArithmeticError(
        f"tail acceleration did not converge for ({a},{b}) at prec={prec}"
    )


def _f3f2_em(a: Fraction, b: Fraction, n0: int, order: int) -> tuple[mpf, mpf]:
    s = a + b
    # partial sum of t_0..t_n0 with the exact rational term ratio
    t = mpf(1)
    total = mpf(1)
    for n in range(n0):
        r = (n + a) * (n + b) * (n + s - 1) / ((n + s) ** 2 * (n + 1))
        t = t * r.numerator / r.denominator
        total += t
    # tail sum_(n>n0) C g(n) with g expanded in 1/n and summed by Hurwitz zeta
    c = (
        gamma_rat(s, mpmath.mp.prec) ** 2
        / (gamma_rat(a, mpmath.mp.prec) * gamma_rat(b, mpmath.mp.prec)
           * gamma_rat(s - 1, mpmath.mp.prec))
    )
    e = _tail_coeffs(a, b, order)
    tail = mpf(0)
    last = mpf(0)
    for j, ej in enumerate(e):
        if ej:
            last = _to_mpf(ej) * mpmath.zeta(2 + j, n0 + 1)
            tail += last
    return total + c * tail, abs(c * last)


def f_tilde(alpha: RationalLike, beta_: RationalLike, prec: int) -> mpf:
    """B(a,b)^2 * 3F2(a, b, a+b-1; a+b, a+b; 1)."""
    with mpmath.workprec(prec + 32):
        return +(beta(alpha, beta_, prec + 32) ** 2
                 * f3f2_at1(Fraction(alpha), Fraction(beta_), prec + 32))


@lru_cache(maxsize=None)
def f_val(n: int, a: int, b: int, prec: int) -> mpf:
    """The antisymmetric hypergeometric value F_N^(a,b).

    F = f_tilde(<a>/N, <b>/N) - f_tilde(<-a>/N, <-b>/N); positive exactly when
    the identity coset lies in the half-system of (a, b).
    """
    idx = FermatIndex(n, a, b)  # validates a, b, a+b != 0
    aa, bb = idx.a, idx.b
    with mpmath.workprec(prec + 32):
        plus = f_tilde(Fraction(aa, n), Fraction(bb, n), prec + 32)
        minus = f_tilde(Fraction(n - aa, n), Fraction(n - bb, n), prec + 32)
        return +(plus - minus)
