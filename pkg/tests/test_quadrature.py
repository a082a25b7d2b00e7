import math

import pytest
from scipy.integrate import quad

from yamabe_thresholds._quadrature import QuadratureError, adaptive_simpson


@pytest.mark.parametrize("f,a,b", [
    (math.sin, 0.0, math.pi),
    (lambda t: math.sin(t) ** 7, 0.0, 2.0),
    (math.exp, -1.0, 3.0),
    (lambda t: 1.0 / (1.0 + t * t), 0.0, 10.0),
])
def test_against_scipy_quad(f, a, b):
    expected, _ = quad(f, a, b, epsabs=0.0, epsrel=1e-12, limit=200)
    assert adaptive_simpson(f, a, b) == pytest.approx(expected, rel=1e-11, abs=1e-12)


def test_orientation_and_empty_interval():
    assert adaptive_simpson(math.cos, 1.0, 1.0) == 0.0
    assert adaptive_simpson(math.cos, 1.0, 0.0) == pytest.approx(-math.sin(1.0), rel=1e-12)


def test_budget_exhaustion_raises():
    with pytest.raises(QuadratureError):
        adaptive_simpson(lambda t: math.sin(1.0 / t) if t else 0.0, 0.0, 1.0, max_depth=8)
