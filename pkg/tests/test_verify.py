import json
import subprocess
import sys
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mpf

from fermatreg.verify import (
    CaseReport,
    RunConfig,
    rational_recognize,
    report_body,
    reports_to_csv,
    reports_to_json,
    table_run,
    verify_case,
)


def test_rational_recognize_simple():
    with mpmath.workprec(120):
        assert rational_recognize(mpf("0.5"), 10 ** 6, mpf("1e-10")) == Fraction(1, 2)
        x = mpf(2) / 3 + mpf("1e-30")
        assert rational_recognize(x, 10 ** 6, mpf("1e-20")) == Fraction(2, 3)
        negative = -mpf(8) / 3 + mpf("1e-25")
        assert rational_recognize(negative, 10 ** 6, mpf("1e-15")) == Fraction(-8, 3)


def test_rational_recognize_pi_misses():
    with mpmath.workprec(200):
        assert rational_recognize(+mpmath.pi, 10 ** 6, mpf("1e-20")) is None
        # oracle: every convergent of pi below 1e6 misses by far more than 1e-20
        num, den = mpmath.libmp.to_rational(mpmath.mpf(+mpmath.pi)._mpf_)
        frac = Fraction(int(num), int(den))
        p0, q0, p1, q1 = 1, 0, frac.numerator // frac.denominator, 1
        rest = frac - p1
        while q1 <= 10 ** 6 and rest:
            assert abs(+mpmath.pi - mpf(p1) / q1) > mpf("1e-20")
            rest = 1 / rest
            a = rest.numerator // rest.denominator
            rest -= a
            p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0


@given(st.integers(-50, 50), st.integers(1, 999))
@settings(max_examples=60, deadline=None)
def test_rational_recognize_roundtrip(p, q):
    with mpmath.workprec(140):
        x = mpf(p) / q + mpf(2) ** -120
        got = rational_recognize(x, 10 ** 6, mpf("1e-25"))
        assert got == Fraction(p, q)


def test_rational_recognize_respects_q_max():
    with mpmath.workprec(120):
        x = mpf(1) / 1000003  # prime above the default bound would be found
        assert rational_recognize(x, 10 ** 6, mpf("1e-20")) is None
        assert rational_recognize(x, 2 * 10 ** 6, mpf("1e-20")) == Fraction(1, 1000003)


def test_run_config_defaults():
    config = RunConfig()
    assert config.digits == 15
    assert config.tolerance_exponent == 10
    assert config.q_max == 10 ** 6
    with pytest.raises(ValueError):
        RunConfig(digits=5)


def test_verify_case_g1_row():
    rep = verify_case(3, 1, 1)
    assert rep.ok and rep.recognized == 18
    assert rep.matches_expected() is True
    assert rep.epsilon == 1
    assert rep.residual < mpf("1e-8")
    assert rep.elements == ("e",)
    assert rep.h == (1,)


def test_verify_case_structured_failures():
    rep = verify_case(8, 1, 2)
    assert not rep.ok and rep.failure == "InsufficientElements"
    rep = verify_case(5, 1, 2)  # admissible pair, but no tabulated conductor
    assert not rep.ok and rep.failure == "UnknownConductor"
    rep = verify_case(6, 2, 2)
    assert not rep.ok and rep.failure == "NotPrimitive"
    rep = verify_case(5, 1, 4)
    assert not rep.ok and rep.failure == "InvalidIndex"


def test_verify_case_conductor_override():
    # (5,1,2) shares its L-series with (5,1,1) (odd-N symmetry), norm 25
    config = RunConfig(conductor_override=25)
    rep = verify_case(5, 1, 2, config)
    assert rep.ok and rep.recognized is not None
    assert rep.matches_expected() is None  # not a reference row


def test_report_serialization_deterministic():
    rep1 = verify_case(4, 1, 2)
    rep2 = verify_case(4, 1, 2)
    body1, body2 = report_body(rep1), report_body(rep2)
    assert body1 == body2
    js1 = json.loads(reports_to_json([rep1]))
    js2 = json.loads(reports_to_json([rep2]))
    assert js1["body"] == js2["body"]
    assert js1["body_sha256"] == js2["body_sha256"]
    csv_text = reports_to_csv([rep1])
    lines = csv_text.strip().split("\n")
    assert lines[0].startswith("N,a,b,g,H,D_ab,R,R_tilde,L_star")
    assert lines[1].startswith("4,1,2,1,1,")


def test_table_run_parallel_smoke(monkeypatch):
    import fermatreg.verify as verify_mod

    monkeypatch.setattr(verify_mod, "TABLE_CASES", ((3, 1, 1), (4, 1, 2)))
    serial = verify_mod.table_run(RunConfig())
    parallel = verify_mod.table_run(RunConfig(parallelism=2))
    assert [r.recognized for r in serial] == [r.recognized for r in parallel]
    assert [report_body(r) for r in serial] == [report_body(r) for r in parallel]


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "fermatreg.cli", *args],
        capture_output=True,
        text=True,
        timeout=600,
    )


def test_cli_verify_known_row(tmp_path):
    out = tmp_path / "row.json"
    proc = run_cli("verify", "--N", "3", "--a", "1", "--b", "1",
                   "--json", str(out))
    assert proc.returncode == 0, proc.stderr
    assert "recognized = 18" in proc.stdout
    payload = json.loads(out.read_text())
    assert payload["body"][0]["recognized"] == "18"


def test_cli_verify_structural_failure_exit_3():
    proc = run_cli("verify", "--N", "8", "--a", "1", "--b", "2")
    assert proc.returncode == 3
    assert "InsufficientElements" in proc.stdout


def test_cli_verify_mismatch_exit_2():
    # (10,1,2) computes an honest ratio of 1, differing from the reference 1/2
    proc = run_cli("verify", "--N", "10", "--a", "1", "--b", "2")
    assert proc.returncode == 2


def test_cli_coeffs_prefill(tmp_path):
    proc = run_cli("coeffs", "--N", "3", "--a", "1", "--b", "1",
                   "--upto", "500", "--cache-dir", str(tmp_path))
    assert proc.returncode == 0, proc.stderr
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    header = files[0].read_text().split("\n", 1)[0]
    assert header == "3 1 1 500 1"


def test_cli_cache_env_var(tmp_path, monkeypatch):
    monkeypatch.setenv("FERMATREG_CACHE_DIR", str(tmp_path))
    config = RunConfig()
    assert config.effective_cache_dir == str(tmp_path)
