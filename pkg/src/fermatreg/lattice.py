"""Integral homology lattice, period pairings and the integral regulator.

The first homology of the (a,b)-piece is free of rank 2g on kappa_0, ...,
kappa_(2g-1), with kappa_n for general n in Z/N given by t^n reduced modulo
Phi_N (so any integer polynomial vanishing at zeta_N is a relation).  Real
conjugation acts by kappa_n -> kappa_(c-n) with c = -a-b, and the minus-part
lattice T is the kernel of (M + I) for that integer matrix M, computed here
by exact unimodular column reduction (kernels of integer matrices in free
modules are saturated; primitivity of the basis is re-checked via the gcd of
its maximal minors).

Periods: integrating the normalized eigenform differences over t = sum t_n
kappa_n gives the purely imaginary value

    2i * Im( sum_n t_n zeta^(hn) (1 - zeta^(ha)) (1 - zeta^(hb)) ),

and D_N^(a,b) is the absolute determinant of that pairing over h in the
half-system against a lattice basis (basis-independent).  The integral
regulator is R~ = (D_N^(a,b) / D_N) * R.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import gcd
from typing import Sequence

import mpmath
from mpmath import mpc, mpf

from .cyclo import euler_phi, power_vector
from .index import FermatIndex, h_set
from .regulator import d_const, r_value


class RankMismatch(Exception):
    """The minus-part lattice does not have the expected rank g."""


@dataclass
class HomologyRep:
    idx: FermatIndex
    dimension: int  # 2g

    def kappa(self, n: int) -> tuple[int, ...]:
        """kappa_n as an integer vector on the basis kappa_0..kappa_(2g-1)."""
        return power_vector(self.idx.N, n)


def homology(idx: FermatIndex) -> HomologyRep:
    return HomologyRep(idx=idx, dimension=euler_phi(idx.N))


def f_infty_matrix(idx: FermatIndex) -> list[list[int]]:
    """Matrix of real conjugation, kappa_n -> kappa_(c-n); an involution."""
    rep = homology(idx)
    d = rep.dimension
    cols = [rep.kappa((idx.c - n) % idx.N) for n in range(d)]
    m = [[cols[j][i] for j in range(d)] for i in range(d)]
    assert _mat_mul(m, m) == _identity(d), "conjugation matrix is not an involution"
    return m


def _identity(d: int) -> list[list[int]]:
    return [[int(i == j) for j in range(d)] for i in range(d)]


def _mat_mul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    d = len(a)
    return [
        [sum(a[i][k] * b[k][j] for k in range(d)) for j in range(d)]
        for i in range(d)
    ]


def integer_kernel(a: list[list[int]]) -> list[list[int]]:
    """Basis of {x in Z^n : A x = 0} by unimodular column elimination.

    Column operations (recorded in U) bring A to a column echelon form; the
    columns of U under the zero columns of AU form a kernel basis.  Kernels
    are saturated sublattices, so no extra saturation step is needed.
    """
    rows = len(a)
    n = len(a[0]) if rows else 0
    work = [row[:] for row in a]
    u = _identity(n)

    def col_axpy(j, k, q):  # col_j -= q * col_k
        for i in range(rows):
            work[i][j] -= q * work[i][k]
        for i in range(n):
            u[i][j] -= q * u[i][k]

    def col_swap(j, k):
        for i in range(rows):
            work[i][j], work[i][k] = work[i][k], work[i][j]
        for i in range(n):
            u[i][j], u[i][k] = u[i][k], u[i][j]

    lead = 0
    for i in range(rows):
        if lead >= n:
            break
        # gcd-reduce the row segment [lead..] to a single pivot column
        while True:
            nz = [j for j in range(lead, n) if work[i][j] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda j: abs(work[i][j]))
            if piv != lead:
                col_swap(lead, piv)
            done = True
            for j in range(lead + 1, n):
                if work[i][j] != 0:
                    q = work[i][j] // work[i][lead]
                    col_axpy(j, lead, q)
                    if work[i][j] != 0:
                        done = False
            if done:
                break
        if work[i][lead] != 0:
            lead += 1
    kernel = []
    for j in range(lead, n):
        if all(work[i][j] == 0 for i in range(rows)):
            kernel.append([u[i][j] for i in range(n)])
    return kernel


def t_lattice_basis(idx: FermatIndex) -> list[tuple[int, ...]]:
    """Z-basis of the minus-part lattice T (rank g), in kappa coordinates."""
    m = f_infty_matrix(idx)
    d = len(m)
    a = [[m[i][j] + int(i == j) for j in range(d)] for i in range(d)]
    basis = integer_kernel(a)
    if len(basis) != idx.g:
        raise RankMismatch(f"kernel rank {len(basis)} != g = {idx.g} at {idx}")
    assert _basis_is_primitive(basis), "kernel basis is not primitive"
    return [tuple(v) for v in basis]


def _basis_is_primitive(basis: Sequence[Sequence[int]]) -> bool:
    g = len(basis)
    n = len(basis[0])
    minors = []
    for cols in combinations(range(n), g):
        sub = [[basis[i][j] for j in cols] for i in range(g)]
        minors.append(_int_det(sub))
    acc = 0
    for v in minors:
        acc = gcd(acc, v)
    return acc == 1


def _int_det(m: list[list[int]]) -> int:
    # fraction-free Gaussian elimination (Bareiss)
    m = [row[:] for row in m]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def in_lattice(basis: Sequence[Sequence[int]], vec: Sequence[int]) -> bool:
    """Whether vec lies in the Z-span of basis (exact).

    Solves sum_i x_i basis_i = vec over Z: a kernel vector of the augmented
    column system with last coordinate +-1 is exactly such a solution.
    """
    g = len(basis)
    n = len(vec)
    a = [[basis[i][j] for i in range(g)] for j in range(n)]
    aug = [row + [vec[j]] for j, row in enumerate(a)]
    for k in integer_kernel(aug):
        if k[-1] in (1, -1):
            return True
    return False


def period_pairing(
    idx: FermatIndex, t: Sequence[int], h: int, prec: int
) -> mpc:
    """Integral over t of the conjugation-odd eigenform difference for h."""
    n = idx.N
    ha, hb = (h * idx.a) % n, (h * idx.b) % n
    with mpmath.workprec(prec + 32):
        zeta = lambda k: mpmath.expjpi(mpf(2 * (k % n)) / n)
        w = (1 - zeta(ha)) * (1 - zeta(hb))
        p = mpc(0)
        for m, tm in enumerate(t):
            if tm:
                p += tm * zeta(h * m) * w
        return +(2j * mpmath.im(p))


def period_det(idx: FermatIndex, prec: int) -> mpf:
    """D_N^(a,b): |det| of the period pairing over H x lattice basis."""
    basis = t_lattice_basis(idx)
    hs = h_set(idx)
    g = idx.g
    with mpmath.workprec(prec + 32):
        m = mpmath.matrix(g, g)
        for i, h in enumerate(hs):
            for j, vec in enumerate(basis):
                m[i, j] = period_pairing(idx, vec, h, prec + 32)
        return +abs(mpmath.det(m))


def r_tilde(idx: FermatIndex, prec: int) -> mpf:
    """Integral regulator R~ = (D_N^(a,b) / D_N) * R."""
    with mpmath.workprec(prec + 32):
        scale = period_det(idx, prec + 32) / d_const(idx.N, prec + 32)
        return +(scale * r_value(idx, prec + 32))
