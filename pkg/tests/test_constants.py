import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from yamabe_thresholds.constants import (
    MAX_DIMENSION,
    conformal_laplacian_coefficient,
    gamma_half_integer,
    sphere_constants,
    sphere_volume,
    spin_renormalize,
    yamabe_sphere,
    yamabe_sphere_mp,
)


@pytest.mark.parametrize("n", range(1, 60))
def test_gamma_matches_math_gamma(n):
    x = Fraction(n, 2)
    assert gamma_half_integer(x) == pytest.approx(math.gamma(n / 2), rel=1e-14)


@pytest.mark.parametrize("bad", [0, -1, 0.3, Fraction(1, 3), "x"])
def test_gamma_rejects_non_half_integers(bad):
    with pytest.raises(ValueError):
        gamma_half_integer(bad)


def test_low_dimensional_volumes():
    assert sphere_volume(1) == pytest.approx(2 * math.pi, rel=1e-15)
    assert sphere_volume(2) == pytest.approx(4 * math.pi, rel=1e-15)
    assert sphere_volume(3) == pytest.approx(2 * math.pi ** 2, rel=1e-15)


def test_yamabe_s3_closed_form():
    assert yamabe_sphere(3) == pytest.approx(6 * 2 ** (2 / 3) * math.pi ** (4 / 3), rel=1e-15)
    assert abs(yamabe_sphere(3) - 43.823233) < 1e-6


@pytest.mark.parametrize("m", [3, 7, 15, 40, 120])
def test_float_agrees_with_extended_precision(m):
    assert yamabe_sphere(m) == pytest.approx(float(yamabe_sphere_mp(m)), rel=1e-13)
    with mpmath.workdps(30):
        assert float(yamabe_sphere_mp(m, dps=60)) == pytest.approx(float(yamabe_sphere_mp(m)), rel=1e-15)


@given(st.integers(min_value=3, max_value=MAX_DIMENSION))
def test_killing_spinor_renormalizes_to_yamabe(m):
    lam = 0.5 * m * sphere_volume(m) ** (1.0 / m)
    assert spin_renormalize(m, lam) == pytest.approx(yamabe_sphere(m), rel=1e-12)


@pytest.mark.parametrize("m", [2, 0, MAX_DIMENSION + 1, 3.5, True])
def test_dimension_checks(m):
    with pytest.raises(ValueError):
        yamabe_sphere(m)


def test_negative_lambda_rejected():
    with pytest.raises(ValueError):
        spin_renormalize(5, -1.0)


def test_sphere_constants_exponents():
    sc = sphere_constants(6)
    assert sc.a == Fraction(5, 1)
    assert sc.p == Fraction(3, 1) and sc.p_star == Fraction(3, 2)
    assert sc.q == Fraction(12, 5) and sc.q_star == Fraction(12, 7)
    assert 1 / sc.p + 1 / sc.p_star == 1 and 1 / sc.q + 1 / sc.q_star == 1
    assert conformal_laplacian_coefficient(6) == float(sc.a)
