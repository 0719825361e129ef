import numpy as np
import pytest

from boostcav.quadrature import QuadratureError, gauss_legendre, gauss_legendre_2d


def test_polynomial_exact():
    value, err = gauss_legendre(lambda x: x**2, 0.0, 2.0)
    assert abs(value - 8.0 / 3.0) < 1e-14
    assert err < 1e-13


def test_oscillatory_sine_squared():
    # int_0^1 sin^2(20 pi x) dx = 1/2
    value, _ = gauss_legendre(lambda x: np.sin(20 * np.pi * x) ** 2, 0.0, 1.0, oscillations=20)
    assert abs(value - 0.5) < 1e-13


def test_complex_phase_integral():
    # int_0^1 e^{i a x} dx = (e^{ia} - 1)/(ia)
    a = 7.3
    value, _ = gauss_legendre(lambda x: np.exp(1j * a * x), 0.0, 1.0, oscillations=3)
    expected = (np.exp(1j * a) - 1.0) / (1j * a)
    assert abs(value - expected) < 1e-13


def test_error_estimate_reported_on_failure():
    # A kink converges too slowly for the doubling budget at tight rtol.
    with pytest.raises(QuadratureError) as exc:
        gauss_legendre(lambda x: np.abs(x - np.sqrt(2) / 2), 0.0, 1.0,
                       rtol=1e-15, max_doublings=2)
    assert exc.value.estimate > 0.0


def test_2d_separable_product():
    # int over [0,1]^2 of sin(pi x) sin(pi y) = (2/pi)^2
    value, _ = gauss_legendre_2d(
        lambda x, y: np.sin(np.pi * x) * np.sin(np.pi * y), (0.0, 1.0), (0.0, 1.0)
    )
    assert abs(value - (2.0 / np.pi) ** 2) < 1e-13


def test_2d_mixed_nonseparable():
    # int_0^1 int_0^1 x y^2 cos(x y) dxdy has no separable shortcut; compare
    # against a dense trapezoid reference.
    xs = np.linspace(0.0, 1.0, 2001)
    ys = np.linspace(0.0, 1.0, 2001)
    grid = xs[:, None] * ys[None, :] ** 2 * np.cos(xs[:, None] * ys[None, :])
    ref = np.trapezoid(np.trapezoid(grid, ys, axis=1), xs)
    value, _ = gauss_legendre_2d(
        lambda x, y: x * y**2 * np.cos(x * y), (0.0, 1.0), (0.0, 1.0)
    )
    assert abs(value - ref) < 5e-7
