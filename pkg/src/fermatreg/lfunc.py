"""Completed Hecke L-function via a smoothed approximate functional equation.

The completed function Lambda(s) = A^s Gamma(s)^g L(s), with scale
A = sqrt(d_N * N(conductor)) / (2 pi)^g, is entire of weight 2
(Lambda(s) = eps * Lambda(2-s), eps = +-1).  Against the smoothing kernel

    G_s(y) = (1/2 pi i) Int_(Re z = c) Gamma(z)^g y^(-z) / (z - s) dz,

standard contour shifting gives, for every stretch t > 0,

    Lambda(s) = t^s sum_n a_n G_s(n t / A)
              + eps * t^(s-2) sum_n a_n G_(2-s)(n / (A t)),

and the kernel decays like exp(-g y^(1/g)), so both sums truncate.  The
contour integral is evaluated by the trapezoid rule on a fixed vertical line
Re z = c = 3 (error exp(-2 pi d / h) for a strip of analyticity of width d;
poles sit at z = s in [0,2] and at z = 0, so d = 1 with margin); the rule and
the truncation length are chosen from the bit target, and the truncation
point is found by sampling the kernel.

Evaluation is node-major: with nodes z_j = c + i j h shared by both sums, the
coefficient data enters only through E_j = sum_n a_n n^(-z_j), computed once
per case and reused for every (s, t), which makes solving for eps and
evaluating Lambda(2) cheap.  eps is solved numerically from two stretches at
s = 3/2 (the source leaves the sign open per case), and

    L*(0) = eps * d_N N(f) / (2 pi)^(2g) * L(2),   L(2) = Lambda(2) / A^2.

Conductor norms are tabulated from the source's case data; for pairs outside
the table an explicit norm may be passed (a functional-equation-driven search
over candidate norms, checking two-stretch self-consistency, would extend
this, but is out of scope).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Optional, Sequence

import mpmath
from mpmath import mpc, mpf

from . import jacobi
from .cyclo import disc_abs
from .index import FermatIndex


class UnknownConductor(Exception):
    """No tabulated conductor norm for this (N, a, b)."""


class ContourTooClose(Exception):
    """The contour line is too close to the pole at z = s."""


class CoefficientShortfall(Exception):
    """Supplied coefficients do not reach the required truncation point."""

    def __init__(self, required: int, available: int):
        super().__init__(f"need coefficients up to {required}, have {available}")
        self.required = required
        self.available = available


class EpsilonIndeterminate(Exception):
    """The two-stretch linear system for the root number is degenerate."""


# Conductor ideal norms N(f) and CM-type notes, from the worked cases.  The
# (2,*) rows share the L-function (hence conductor) of a listed partner with
# an even twisted coordinate.
CONDUCTOR_TABLE: dict[tuple[int, int, int], tuple[int, str]] = {
    (3, 1, 1): (9, "s1"),
    (4, 1, 1): (16, "s1"),
    (4, 1, 2): (8, "s1"),
    (5, 1, 1): (25, "s1+s3"),
    (6, 1, 1): (144, "s1"),
    (6, 1, 2): (12, "s1"),
    (6, 1, 3): (48, "s1"),
    (6, 1, 4): (36, "s1"),
    (6, 2, 3): (12, "s1"),
    (7, 1, 2): (7, "s1+s2+s4"),
    (9, 1, 2): (81, "s1+s2+s5"),
    (10, 1, 2): (400, "s1+s7"),
    (10, 1, 4): (80, "s1+s7"),
    (10, 1, 6): (400, "s1+s3"),
    (10, 2, 5): (80, "s1+s7"),
    (12, 1, 2): (576, "s1+s7"),
    (12, 1, 6): (576, "s1+s5"),
    (12, 2, 3): (576, "s1+s7"),
}


@dataclass
class FunctionalEqData:
    idx: FermatIndex
    g: int
    degree: int            # 2g
    disc: int              # d_N
    conductor_norm: int    # N(f)
    scale: mpf             # A = sqrt(d_N N(f)) / (2 pi)^g
    weight: int = 2
    epsilon: Optional[int] = None


def conductor_norm(n: int, a: int, b: int) -> int:
    key = (n, a % n, b % n)
    if key not in CONDUCTOR_TABLE:
        raise UnknownConductor(f"no conductor data for (N,a,b)={key}")
    return CONDUCTOR_TABLE[key][0]


def functional_eq_data(
    idx: FermatIndex, prec: int, conductor: Optional[int] = None
) -> FunctionalEqData:
    nf = conductor if conductor is not None else conductor_norm(idx.N, idx.a, idx.b)
    d = disc_abs(idx.N)
    g = idx.g
    with mpmath.workprec(prec + 32):
        scale = +(mpmath.sqrt(mpf(d * nf)) / (2 * mpmath.pi) ** g)
        return FunctionalEqData(
            idx=idx, g=g, degree=2 * g, disc=d, conductor_norm=nf, scale=scale
        )


# -- contour machinery ---------------------------------------------------------


def _contour_params(g: int, prec: int, c: mpf) -> tuple[mpf, int]:
    """Trapezoid step h and one-sided node count J for a bit target."""
    nats = (prec + 16) * mpmath.log(2)
    h = 2 * mpmath.pi / nats  # strip of analyticity has width >= 1 here
    t_max = 2 * (nats + 10) / (g * mpmath.pi)
    for _ in range(20):  # absorb the polynomial factor |t|^(g(c-1/2))
        t_max = 2 * (nats + 10 + g * (c - 0.5) * mpmath.log(t_max + 3)) / (g * mpmath.pi)
    return h, int(t_max / h) + 1


def kernel_G(s, y, g: int, prec: int, c=None, step_scale: float = 1.0) -> mpc:
    """G_s(y) by trapezoidal quadrature on the line Re z = c.

    The default c = max(Re s, 0) + 3/2 keeps unit distance from the poles;
    an explicit c closer than 1/4 to Re s is rejected.  step_scale < 1
    refines the step (used by the self-consistency tests).
    """
    if y <= 0:
        raise ValueError("y must be positive")
    with mpmath.workprec(prec + 32):
        s = mpc(s)
        if c is None:
            c = mpf(max(mpmath.re(s), 0)) + mpf(3) / 2
        else:
            c = mpf(c)
        if abs(c - mpmath.re(s)) < 0.25:
            raise ContourTooClose(f"c={c} too close to Re s={mpmath.re(s)}")
        h, j_max = _contour_params(g, prec, c)
        h = h * mpf(step_scale)
        j_max = int(j_max / step_scale) + 1
        y = mpf(y)
        lny = mpmath.log(y)
        total = mpmath.gamma(c) ** g * mpmath.exp(-c * lny) / (c - s)
        for j in range(1, j_max + 1):
            z = c + 1j * h * j
            term = mpmath.gamma(z) ** g * mpmath.exp(-z * lny) / (z - s)
            zbar = mpmath.conj(z)
            term += mpmath.gamma(zbar) ** g * mpmath.exp(-zbar * lny) / (zbar - s)
            total += term
        return +(total * h / (2 * mpmath.pi))


def _truncation_point(g: int, scale: mpf, prec: int, t_extreme: mpf) -> int:
    """Smallest n beyond which the kernel terms are below the bit target.

    Samples kernel_G on a geometric grid (spec'd adaptive rule) and requires
    |G_2(y)| * (A y)^(3/2) below 2^(-prec-16); the power covers the
    coefficient growth |a_n| <= sqrt(n) d_2g(n).
    """
    with mpmath.workprec(prec + 32):
        target = mpf(2) ** (-(prec + 16))
        y = mpf(4)
        while True:
            bound = abs(kernel_G(2, y, g, prec)) * (scale * y * t_extreme + 2) ** mpf(1.5)
            if bound < target:
                break
            y *= mpf(1.3)
        return int(mpmath.ceil(y * scale * t_extreme)) + 1


class _Evaluator:
    """Per-case AFE state: contour nodes, Gamma powers, coefficient sums E_j."""

    def __init__(self, idx: FermatIndex, prec: int, conductor: Optional[int],
                 coeffs: Optional[Sequence[int]], cache_dir: Optional[str],
                 t_extreme: mpf):
        self.idx = idx
        self.prec = prec
        with mpmath.workprec(prec + 32):
            self.fe = functional_eq_data(idx, prec, conductor)
            g = self.fe.g
            self.n_max = _truncation_point(g, self.fe.scale, prec, t_extreme)
            if coeffs is not None:
                if len(coeffs) - 1 < self.n_max:
                    raise CoefficientShortfall(self.n_max, len(coeffs) - 1)
                self.coeffs = list(coeffs)
            else:
                self.coeffs = jacobi.dirichlet_coeffs(
                    idx.N, idx.a, idx.b, self.n_max, cache_dir=cache_dir
                )
            self._node_cache: dict[int, tuple] = {}

    def _nodes(self, c: int):
        """Gamma powers and coefficient sums E_j = sum_n a_n n^(-c-ijh) at c."""
        cached = self._node_cache.get(c)
        if cached is not None:
            return cached
        g = self.fe.g
        h, j_max = _contour_params(g, self.prec, mpf(c))
        gamma_pow = [mpmath.gamma(c + 1j * h * j) ** g for j in range(j_max + 1)]
        e = [mpc(0)] * (j_max + 1)
        for n in range(1, self.n_max + 1):
            a_n = self.coeffs[n]
            if a_n == 0:
                continue
            ln_n = mpmath.log(n)
            base = mpc(a_n * mpmath.exp(-c * ln_n))
            rot = mpmath.exp(-1j * h * ln_n)
            for j in range(j_max + 1):
                e[j] += base
                base *= rot
        entry = (mpf(h), j_max, gamma_pow, e)
        self._node_cache[c] = entry
        return entry

    @staticmethod
    def _pick_c(s) -> int:
        # integer contour abscissa at distance >= 1 to the right of the pole
        return max(3, int(mpmath.floor(mpmath.re(s) + mpf(1) / 2)) + 1)

    def kernel_sum(self, s, tau) -> mpf:
        """sum_n a_n G_s(n tau), real for real s (coefficients are real)."""
        c = self._pick_c(s)
        h, j_max, gamma_pow, e = self._nodes(c)
        ln_tau = mpmath.log(tau)
        total = gamma_pow[0] * mpmath.exp(-c * ln_tau) / (c - s) * e[0]
        for j in range(1, j_max + 1):
            z = c + 1j * h * j
            total += 2 * mpmath.re(
                gamma_pow[j] * mpmath.exp(-z * ln_tau) / (z - s) * e[j]
            )
        total = total * h / (2 * mpmath.pi)
        assert abs(mpmath.im(total)) < mpf(2) ** (-self.prec // 2), "sum not real"
        return mpmath.re(total)

    def sums(self, s, t) -> tuple[mpf, mpf]:
        s, t = mpf(s), mpf(t)
        a = self.fe.scale
        s1 = mpmath.power(t, s) * self.kernel_sum(s, t / a)
        s2 = mpmath.power(t, s - 2) * self.kernel_sum(2 - s, 1 / (a * t))
        return +s1, +s2


_EVALUATORS: dict[tuple, _Evaluator] = {}
_EVALUATOR_LOCK = threading.Lock()

_STRETCHES = (mpf(1), mpf(13) / 10)  # stretches for the root-number solve


def _evaluator(idx: FermatIndex, prec: int, conductor=None, coeffs=None,
               cache_dir=None) -> _Evaluator:
    key = (idx.N, idx.a, idx.b, prec, conductor)
    with _EVALUATOR_LOCK:
        ev = _EVALUATORS.get(key)
    if ev is None or (coeffs is not None):
        with mpmath.workprec(prec + 32):
            t_extreme = max(max(_STRETCHES), 1 / min(_STRETCHES))
            ev = _Evaluator(idx, prec, conductor, coeffs, cache_dir, t_extreme)
        if coeffs is None:
            with _EVALUATOR_LOCK:
                _EVALUATORS[key] = ev
    return ev


def lambda_at(idx: FermatIndex, s, t_stretch, prec: int,
              conductor: Optional[int] = None,
              coeffs: Optional[Sequence[int]] = None,
              cache_dir: Optional[str] = None) -> tuple[mpf, mpf]:
    """The two AFE sums (S1, S2); Lambda(s) = S1 + eps * S2 for any stretch."""
    with mpmath.workprec(prec + 32):
        ev = _evaluator(idx, prec, conductor, coeffs, cache_dir)
        return ev.sums(s, t_stretch)


def solve_epsilon(idx: FermatIndex, prec: int,
                  conductor: Optional[int] = None,
                  cache_dir: Optional[str] = None) -> int:
    """Root number from two stretches at s = 3/2; must round to +-1."""
    with mpmath.workprec(prec + 32):
        ev = _evaluator(idx, prec, conductor, cache_dir=cache_dir)
        s0 = mpf(3) / 2
        s1a, s2a = ev.sums(s0, _STRETCHES[0])
        s1b, s2b = ev.sums(s0, _STRETCHES[1])
        den = s2b - s2a
        scale = max(abs(s2a), abs(s2b), mpf(1))
        if abs(den) < scale * mpf(2) ** (-prec // 2):
            raise EpsilonIndeterminate("stretch system is numerically singular")
        eps = (s1a - s1b) / den
        if abs(abs(eps) - 1) > mpf("1e-5"):
            raise EpsilonIndeterminate(f"|eps| = {mpmath.nstr(abs(eps), 10)} not 1")
        value = 1 if eps > 0 else -1
        ev.fe.epsilon = value
        return value


def l_star_zero(idx: FermatIndex, prec: int,
                conductor: Optional[int] = None,
                cache_dir: Optional[str] = None) -> mpf:
    """L*(0) = lim L(s)/s^g = eps * d_N N(f) / (2 pi)^(2g) * L(2)."""
    with mpmath.workprec(prec + 32):
        eps = solve_epsilon(idx, prec, conductor, cache_dir)
        ev = _evaluator(idx, prec, conductor, cache_dir=cache_dir)
        s1, s2 = ev.sums(2, 1)
        lam2 = s1 + eps * s2
        # L(2) = Lambda(2) / (A^2 Gamma(2)^g); the prefactor is exactly A^2
        l2 = lam2 / (ev.fe.scale ** 2)
        value = eps * mpf(ev.fe.disc * ev.fe.conductor_norm) * l2
        value /= (2 * mpmath.pi) ** (2 * ev.fe.g)
        return +value
