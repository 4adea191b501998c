"""Case orchestration: compute both sides, take the ratio, recognize it.

verify_case runs the full pipeline for one (N, a, b): element selection,
regulator R, period determinant D_ab, integral regulator R~, L*(0) via the
AFE, the ratio R~/L*(0), and continued-fraction recognition of the ratio as
a rational number.  Structural obstructions (insufficient elements, unknown
conductor, indeterminate root number) come back as failed reports, not
exceptions.  table_run executes the 18 built-in reference rows and compares
each recognized rational against the expected value.

Recognition scans the continued-fraction convergents of the computed ratio
for the first denominator <= q_max within tolerance, with a stability guard
on the following convergent.  Reports serialize to CSV and JSON; the JSON
body excludes timestamps/timings and carries its own SHA-256 so identical
configurations produce identical bodies.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath
from mpmath import mpf

from .index import (
    ElementDescriptor,
    FermatIndex,
    InsufficientElements,
    element_set,
    h_set,
    is_primitive,
)
from .lattice import period_det, r_tilde
from .lfunc import EpsilonIndeterminate, UnknownConductor, l_star_zero, solve_epsilon
from .regulator import r_value

CACHE_ENV_VAR = "FERMATREG_CACHE_DIR"

# Expected recognized ratios R~/L*(0) for the 18 reference rows.
EXPECTED_RATIOS: dict[tuple[int, int, int], Fraction] = {
    (3, 1, 1): Fraction(18),
    (4, 1, 1): Fraction(4),
    (4, 1, 2): Fraction(8),
    (6, 1, 1): Fraction(-1),
    (6, 1, 2): Fraction(6),
    (6, 1, 3): Fraction(1),
    (6, 1, 4): Fraction(1),
    (6, 2, 3): Fraction(2),
    (5, 1, 1): Fraction(100),
    (10, 1, 2): Fraction(1, 2),
    (10, 1, 4): Fraction(2),
    (10, 1, 6): Fraction(1),
    (10, 2, 5): Fraction(4),
    (12, 1, 2): Fraction(4, 3),
    (12, 1, 6): Fraction(-8, 3),
    (12, 2, 3): Fraction(4, 3),
    (7, 1, 2): Fraction(2744),   # 2^3 * 7^3
    (9, 1, 2): Fraction(72),     # 2^3 * 3^2
}

TABLE_CASES = tuple(EXPECTED_RATIOS)


@dataclass
class RunConfig:
    digits: int = 15
    q_max: int = 10 ** 6
    tol_exp: Optional[int] = None      # tolerance 10^-(digits-5) if None
    cache_dir: Optional[str] = None    # falls back to $FERMATREG_CACHE_DIR
    parallelism: int = 1
    conductor_override: Optional[int] = None  # for pairs outside the table

    def __post_init__(self):
        if self.digits < 8:
            raise ValueError("digits must be >= 8")

    @property
    def tolerance_exponent(self) -> int:
        return self.tol_exp if self.tol_exp is not None else self.digits - 5

    @property
    def effective_cache_dir(self) -> Optional[str]:
        return self.cache_dir or os.environ.get(CACHE_ENV_VAR) or None

    @property
    def prec(self) -> int:
        # working bits for the requested decimal digits plus guard
        return int((self.digits + 6) * 3.3220) + 8


@dataclass
class CaseReport:
    N: int
    a: int
    b: int
    digits: int
    g: Optional[int] = None
    h: tuple[int, ...] = ()
    elements: tuple[str, ...] = ()
    r: Optional[mpf] = None
    d_ab: Optional[mpf] = None
    r_tilde: Optional[mpf] = None
    l_star: Optional[mpf] = None
    ratio: Optional[mpf] = None
    recognized: Optional[Fraction] = None
    residual: Optional[mpf] = None
    epsilon: Optional[int] = None
    failure: Optional[str] = None      # structural failure kind, if any
    message: Optional[str] = None
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.failure is None

    def matches_expected(self) -> Optional[bool]:
        expected = EXPECTED_RATIOS.get((self.N, self.a, self.b))
        if expected is None:
            return None
        return self.recognized == expected


def rational_recognize(x: mpf, q_max: int, tol: mpf) -> Optional[Fraction]:
    """First continued-fraction convergent p/q with q <= q_max and |x - p/q| < tol.

    A hit is kept only if the next convergent's denominator exceeds q_max/10
    or fails the tolerance itself (stability guard against accidental locks);
    a terminating expansion counts as stable.
    """
    if not mpmath.isfinite(x):
        raise ValueError("x must be finite")
    num, den = mpmath.libmp.to_rational(mpmath.mpf(x)._mpf_)
    exact = Fraction(int(num), int(den))
    # convergents of the exact dyadic value
    a0 = exact.numerator // exact.denominator
    rest = exact - a0
    p_prev, q_prev, p_cur, q_cur = 1, 0, a0, 1
    convergents = [Fraction(p_cur, q_cur)]
    while rest != 0 and q_cur <= q_max * 10:
        rest = 1 / rest
        a_k = rest.numerator // rest.denominator
        rest -= a_k
        p_prev, q_prev, p_cur, q_cur = p_cur, q_cur, a_k * p_cur + p_prev, a_k * q_cur + q_prev
        convergents.append(Fraction(p_cur, q_cur))
    for i, cand in enumerate(convergents):
        if cand.denominator > q_max:
            break
        if abs(x - _to_mpf(cand)) < tol:
            if i + 1 >= len(convergents):
                return cand  # expansion terminated: x is exactly cand
            nxt = convergents[i + 1]
            if nxt.denominator > q_max // 10 or abs(x - _to_mpf(nxt)) >= tol:
                return cand
            return None  # next convergent still locks: ambiguous, reject
    return None


def _to_mpf(q: Fraction) -> mpf:
    return mpf(q.numerator) / q.denominator


def verify_case(n: int, a: int, b: int, config: Optional[RunConfig] = None) -> CaseReport:
    """Full verification record for one pair; failures are reported, not raised."""
    config = config or RunConfig()
    report = CaseReport(N=n, a=a % n, b=b % n, digits=config.digits)
    prec = config.prec
    try:
        idx = FermatIndex(n, a, b)
    except ValueError as exc:
        report.failure, report.message = "InvalidIndex", str(exc)
        return report
    if not is_primitive(idx):
        report.failure = "NotPrimitive"
        report.message = "reduce to level N/gcd(N,a,b) first"
        return report
    report.g = idx.g
    report.h = h_set(idx)
    clock = time.perf_counter
    try:
        report.elements = tuple(e.value for e in element_set(idx))
    except InsufficientElements as exc:
        report.failure, report.message = "InsufficientElements", str(exc)
        return report
    with mpmath.workprec(prec):
        t0 = clock()
        report.r = r_value(idx, prec)
        report.d_ab = period_det(idx, prec)
        report.r_tilde = r_tilde(idx, prec)
        t1 = clock()
        report.timings["regulator"] = t1 - t0
        try:
            report.epsilon = solve_epsilon(
                idx, prec,
                conductor=config.conductor_override,
                cache_dir=config.effective_cache_dir,
            )
            report.l_star = l_star_zero(
                idx, prec,
                conductor=config.conductor_override,
                cache_dir=config.effective_cache_dir,
            )
        except UnknownConductor as exc:
            report.failure, report.message = "UnknownConductor", str(exc)
            return report
        except EpsilonIndeterminate as exc:
            report.failure, report.message = "EpsilonIndeterminate", str(exc)
            return report
        t2 = clock()
        report.timings["lfunction"] = t2 - t1
        report.ratio = report.r_tilde / report.l_star
        tol = mpf(10) ** (-config.tolerance_exponent)
        report.recognized = rational_recognize(report.ratio, config.q_max, tol)
        if report.recognized is not None:
            report.residual = abs(report.ratio - _to_mpf(report.recognized))
        report.timings["total"] = clock() - t0
    return report


def _run_one(args) -> CaseReport:
    n, a, b, config = args
    return verify_case(n, a, b, config)


def table_run(config: Optional[RunConfig] = None) -> list[CaseReport]:
    """All 18 reference rows, optionally in parallel processes."""
    config = config or RunConfig()
    jobs = [(n, a, b, config) for (n, a, b) in TABLE_CASES]
    if config.parallelism > 1:
        with ProcessPoolExecutor(max_workers=config.parallelism) as pool:
            return list(pool.map(_run_one, jobs))
    return [_run_one(job) for job in jobs]


# -- serialization --------------------------------------------------------------

CSV_COLUMNS = [
    "N", "a", "b", "g", "H", "D_ab", "R", "R_tilde", "L_star",
    "ratio", "recognized", "residual", "epsilon",
]


def _fmt(x, digits: int) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, str)):
        return str(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
    return mpmath.nstr(x, digits, strip_zeros=False)


def report_csv_row(report: CaseReport) -> str:
    d = report.digits
    fields = [
        report.N, report.a, report.b, report.g,
        " ".join(map(str, report.h)),
        _fmt(report.d_ab, d), _fmt(report.r, d), _fmt(report.r_tilde, d),
        _fmt(report.l_star, d), _fmt(report.ratio, d),
        _fmt(report.recognized, d), _fmt(report.residual, 3),
        "" if report.epsilon is None else str(report.epsilon),
    ]
    return ",".join(_fmt(f, d) if not isinstance(f, str) else f for f in fields)


def reports_to_csv(reports: list[CaseReport]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    lines += [report_csv_row(r) for r in reports]
    return "\n".join(lines) + "\n"


def report_body(report: CaseReport) -> dict:
    """Deterministic JSON body (no timings/timestamps)."""
    return {
        "N": report.N, "a": report.a, "b": report.b,
        "digits": report.digits,
        "g": report.g,
        "H": list(report.h),
        "elements": list(report.elements),
        "R": _fmt(report.r, report.digits),
        "D_ab": _fmt(report.d_ab, report.digits),
        "R_tilde": _fmt(report.r_tilde, report.digits),
        "L_star": _fmt(report.l_star, report.digits),
        "ratio": _fmt(report.ratio, report.digits),
        "recognized": _fmt(report.recognized, report.digits) or None,
        "residual": _fmt(report.residual, 3) or None,
        "epsilon": report.epsilon,
        "failure": report.failure,
        "message": report.message,
    }


def reports_to_json(reports: list[CaseReport]) -> str:
    body = [report_body(r) for r in reports]
    canonical = json.dumps(body, sort_keys=True, separators=(",", ":"))
    payload = {
        "body": body,
        "body_sha256": hashlib.sha256(canonical.encode()).hexdigest(),
        "meta": {
            "generated_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
            "timings": [r.timings for r in reports],
        },
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"
