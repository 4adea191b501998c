import mpmath
import pytest
from mpmath import mpf

from fermatreg.hyperg import f_val
from fermatreg.index import ElementDescriptor, FermatIndex
from fermatreg.regulator import d_const, r_value, reg_matrix, row_coefficient

PREC = 120


def close(x, y, bits):
    return abs(x - y) < mpf(2) ** -bits


@pytest.mark.parametrize(
    "n,expected",
    [
        (3, "sqrt(3)"),
        (4, "2"),
        (5, "5"),
        (7, "7*sqrt(7)"),
        (9, "9*sqrt(3)"),
        (12, "2*sqrt(3)"),
    ],
)
def test_d_const_reference(n, expected):
    with mpmath.workprec(PREC + 16):
        want = eval(expected, {"sqrt": mpmath.sqrt})
        assert close(d_const(n, PREC), want, 100)


def test_d_const_conjugate_levels():
    # the underlying field is the same for N and 2N when N is odd
    with mpmath.workprec(PREC + 16):
        assert close(d_const(3, PREC), d_const(6, PREC), 100)
        assert close(d_const(5, PREC), d_const(10, PREC), 100)
        assert close(d_const(7, PREC), d_const(14, PREC), 100)


def test_row_coefficient_basic_row():
    idx = FermatIndex(9, 1, 2)
    for h in (1, 2, 5):
        scalar, fidx = row_coefficient(idx, ElementDescriptor.E, h, PREC)
        assert scalar == 1
        assert fidx == (h % 9, 2 * h % 9)


def test_row_coefficient_odd_alpha():
    idx = FermatIndex(7, 1, 2)
    scalar, fidx = row_coefficient(idx, ElementDescriptor.E_ALPHA, 1, PREC)
    with mpmath.workprec(PREC + 16):
        want = mpmath.sinpi(mpf(4) / 7) / mpmath.sinpi(mpf(1) / 7)
        assert close(scalar, want, 100)
    assert fidx == (4, 2)
    # h = 4 flips sign: <hb> = 1 is odd
    scalar, fidx = row_coefficient(idx, ElementDescriptor.E_ALPHA, 4, PREC)
    assert scalar < 0 and fidx == (2, 1)


def test_row_coefficient_even_alpha():
    # twist scalar Tr(z^(<hc>+<hb>/2)) * sin ratio; Tr(zeta_10^8) = -1
    idx = FermatIndex(10, 1, 2)
    scalar, fidx = row_coefficient(idx, ElementDescriptor.E_ALPHA, 1, PREC)
    with mpmath.workprec(PREC + 16):
        want = -mpmath.sinpi(mpf(7) / 10) / mpmath.sinpi(mpf(1) / 10)
        assert close(scalar, want, 100)
    assert fidx == (7, 2)


def test_row_coefficient_even_beta():
    idx = FermatIndex(10, 2, 5)
    scalar, fidx = row_coefficient(idx, ElementDescriptor.E_BETA, 1, PREC)
    with mpmath.workprec(PREC + 16):
        want = -mpmath.sinpi(mpf(3) / 10)  # Tr(zeta_10^4) = -1, sin(5pi/10) = 1
        assert close(scalar, want, 100)
    assert fidx == (2, 3)


def test_row_coefficient_inadmissible():
    idx = FermatIndex(10, 1, 2)  # only the alpha twist is admissible
    with pytest.raises(ValueError):
        row_coefficient(idx, ElementDescriptor.E_BETA, 1, PREC)


def test_r_value_reference_4_1_1():
    with mpmath.workprec(200):
        want = mpf("3.3173289967638281780989923863189664030737625416964")
        got = r_value(FermatIndex(4, 1, 1), 180)
        assert abs(got - want) < mpf(10) ** -48


def test_r_value_5_1_1_matches_explicit_matrix():
    idx = FermatIndex(5, 1, 1)
    with mpmath.workprec(PREC + 16):
        s = lambda k: mpmath.sinpi(mpf(k) / 5)
        m = mpmath.matrix(
            [
                [f_val(5, 1, 1, PREC), -(s(3) / s(1)) * f_val(5, 3, 1, PREC)],
                [f_val(5, 2, 2, PREC), (s(1) / s(2)) * f_val(5, 1, 2, PREC)],
            ]
        )
        explicit = d_const(5, PREC) / ((2 * mpmath.pi) ** 2 * 25) * abs(mpmath.det(m))
        assert close(r_value(idx, PREC), explicit, PREC - 16)


def test_r_value_7_1_2_cubic_identity():
    # det collapses to (s^3 + t^3 + u^3 - 3stu) / (56 (2 pi)^3)
    with mpmath.workprec(PREC + 32):
        s = f_val(7, 1, 2, PREC) / mpmath.sinpi(mpf(4) / 7)
        t = -f_val(7, 2, 4, PREC) / mpmath.sinpi(mpf(1) / 7)
        u = f_val(7, 4, 1, PREC) / mpmath.sinpi(mpf(2) / 7)
        identity = (s ** 3 + t ** 3 + u ** 3 - 3 * s * t * u) / (
            56 * (2 * mpmath.pi) ** 3
        )
        assert close(r_value(FermatIndex(7, 1, 2), PREC), identity, PREC - 20)


def test_r_value_orbit_invariance():
    with mpmath.workprec(PREC + 16):
        base = r_value(FermatIndex(7, 1, 2), PREC)
        for h in (2, 4):
            assert close(r_value(FermatIndex(7, h, 2 * h), PREC), base, PREC - 20)


def test_reg_matrix_shape_and_f_indices():
    idx = FermatIndex(9, 1, 2)
    mat = reg_matrix(idx, 64)
    assert len(mat.entries) == 3 and all(len(row) == 3 for row in mat.entries)
    assert mat.cols == (1, 2, 5)
    from fermatreg.index import orbit

    # twist rows draw their F-indices from the coordinate-permuted partners
    # [c,b] and [a,c] of the orbit, not from [a,b] itself
    allowed = set(orbit(idx))
    allowed |= set(orbit(FermatIndex(9, idx.c, idx.b)))
    allowed |= set(orbit(FermatIndex(9, idx.a, idx.c)))
    for element in mat.rows:
        for h in mat.cols:
            _, fidx = row_coefficient(idx, element, h, 64)
            assert fidx in allowed


def test_reg_matrix_basic_row_positive():
    for case in [(5, 1, 1), (10, 2, 5), (12, 1, 6)]:
        mat = reg_matrix(FermatIndex(*case), 64)
        assert all(entry > 0 for entry in mat.entries[0])
