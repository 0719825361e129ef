"""Normalized spacetime mode functions of the moving Dirichlet cavity.

Every mode in all three schemes is an exponential phase times a sine whose
phase and argument are affine in (t, x):

    u(t, x) = N * exp(i*(th_t*t + th_x*x)) * sin(s_t*t + s_x*x)

which makes all derivatives closed-form. The spatial normalization N fixes
unit L2 norm over the instantaneous cavity at any lab time.

Scheme coefficients (k = n*pi/L, g = gamma):

    galileo-lab       th = k*(v*x - t),            s = k*(x - v*t),   N = sqrt(2/L)
    galileo-comoving  th = -k*t,                   s = k*(x - v*t),   N = sqrt(2/L)
    lorentz           th = -k*g*(t - v*x),         s = k*g*(x - v*t), N = sqrt(2*g/L)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cavity import Cavity1D, Cavity2D, Scheme
from .quadrature import gauss_legendre

__all__ = [
    "OutsideCavityError",
    "SpacetimeMode",
    "SpacetimeMode2D",
    "mode",
    "mode_2d",
    "mode_frequency",
    "lab_phase_frequency",
    "normalization",
    "eval_mode",
    "mode_frequency_2d",
    "wavenumber_x",
    "wavenumber_y",
    "eval_mode_2d",
    "boundary_residual",
    "kg_residual",
    "comoving_kg_residual",
    "canonical_norm",
    "gram_matrix",
    "spatial_overlap_matrix",
    "finite_difference_derivatives",
]


class OutsideCavityError(ValueError):
    """Point lies outside the instantaneous cavity; modes are defined inside only."""


def _check_index(n: int, name: str = "n") -> None:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"mode index {name} must be a positive integer, got {n!r}")


_WALL_SLACK = 1e-12  # relative slack when classifying a point as inside


@dataclass(frozen=True)
class SpacetimeMode:
    """One normalized 1D cavity mode; evaluation plus closed-form derivatives."""

    scheme: Scheme
    cavity: Cavity1D
    n: int

    def __post_init__(self) -> None:
        _check_index(self.n)

    # -- spectral data ----------------------------------------------------
    @property
    def base_frequency(self) -> float:
        """n*pi/L, the proper-frame standing-wave frequency."""
        return self.n * math.pi / self.cavity.proper_length

    @property
    def comoving_frequency(self) -> float:
        """The expansion frequency entering the 1/(2w') vacuum prefactor."""
        if self.scheme is Scheme.GALILEO_LAB_PRIOR:
            return (1.0 - self.cavity.velocity**2) * self.base_frequency
        return self.base_frequency

    @property
    def lab_phase_frequency(self) -> float:
        """Coefficient of -t in the total lab-frame phase at fixed x."""
        if self.scheme is Scheme.LORENTZ_EXACT:
            return self.cavity.gamma() * self.base_frequency
        return self.base_frequency

    @property
    def normalization(self) -> float:
        if self.scheme is Scheme.LORENTZ_EXACT:
            return math.sqrt(2.0 * self.cavity.gamma() / self.cavity.proper_length)
        return math.sqrt(2.0 / self.cavity.proper_length)

    # -- affine phase/argument coefficients -------------------------------
    @property
    def _coeffs(self) -> tuple[float, float, float, float]:
        """(th_t, th_x, s_t, s_x)."""
        k = self.base_frequency
        v = self.cavity.velocity
        if self.scheme is Scheme.GALILEO_LAB_PRIOR:
            return -k, v * k, -v * k, k
        if self.scheme is Scheme.GALILEO_COMOVING_PRIOR:
            return -k, 0.0, -v * k, k
        g = self.cavity.gamma()
        return -k * g, k * g * v, -k * g * v, k * g

    # -- geometry ----------------------------------------------------------
    def walls(self, t: float) -> tuple[float, float]:
        return self.cavity.walls(self.scheme, t)

    def contains(self, t: float, x) -> np.ndarray:
        left, right = self.walls(t)
        slack = _WALL_SLACK * (right - left)
        x = np.asarray(x, dtype=float)
        return (x >= left - slack) & (x <= right + slack)

    def _require_inside(self, t: float, x) -> None:
        if not np.all(self.contains(t, x)):
            left, right = self.walls(t)
            raise OutsideCavityError(
                f"x outside instantaneous cavity [{left:.6g}, {right:.6g}] at t={t:.6g}"
            )

    # -- evaluation ---------------------------------------------------------
    def value(self, t: float, x, *, check: bool = True):
        if check:
            self._require_inside(t, x)
        th_t, th_x, s_t, s_x = self._coeffs
        x = np.asarray(x, dtype=float)
        return self.normalization * np.exp(1j * (th_t * t + th_x * x)) * np.sin(s_t * t + s_x * x)

    __call__ = value

    def d_dt(self, t: float, x):
        th_t, th_x, s_t, s_x = self._coeffs
        x = np.asarray(x, dtype=float)
        ph = np.exp(1j * (th_t * t + th_x * x))
        s = s_t * t + s_x * x
        return self.normalization * ph * (1j * th_t * np.sin(s) + s_t * np.cos(s))

    def d_dx(self, t: float, x):
        th_t, th_x, s_t, s_x = self._coeffs
        x = np.asarray(x, dtype=float)
        ph = np.exp(1j * (th_t * t + th_x * x))
        s = s_t * t + s_x * x
        return self.normalization * ph * (1j * th_x * np.sin(s) + s_x * np.cos(s))

    def d2_dt2(self, t: float, x):
        th_t, th_x, s_t, s_x = self._coeffs
        x = np.asarray(x, dtype=float)
        ph = np.exp(1j * (th_t * t + th_x * x))
        s = s_t * t + s_x * x
        return self.normalization * ph * (
            -(th_t**2 + s_t**2) * np.sin(s) + 2j * th_t * s_t * np.cos(s)
        )

    def d2_dx2(self, t: float, x):
        th_t, th_x, s_t, s_x = self._coeffs
        x = np.asarray(x, dtype=float)
        ph = np.exp(1j * (th_t * t + th_x * x))
        s = s_t * t + s_x * x
        return self.normalization * ph * (
            -(th_x**2 + s_x**2) * np.sin(s) + 2j * th_x * s_x * np.cos(s)
        )

    def d2_dtdx(self, t: float, x):
        th_t, th_x, s_t, s_x = self._coeffs
        x = np.asarray(x, dtype=float)
        ph = np.exp(1j * (th_t * t + th_x * x))
        s = s_t * t + s_x * x
        return self.normalization * ph * (
            -(th_t * th_x + s_t * s_x) * np.sin(s) + 1j * (th_t * s_x + th_x * s_t) * np.cos(s)
        )


@dataclass(frozen=True)
class SpacetimeMode2D:
    """Exact-contraction mode of the moving rectangle (boost along x)."""

    cavity: Cavity2D
    n: int
    m: int

    def __post_init__(self) -> None:
        _check_index(self.n, "n")
        _check_index(self.m, "m")

    @property
    def wavenumber_x(self) -> float:
        return self.n * math.pi / self.cavity.proper_length_x

    @property
    def wavenumber_y(self) -> float:
        return self.m * math.pi / self.cavity.proper_length_y

    @property
    def frequency(self) -> float:
        return math.hypot(self.wavenumber_x, self.wavenumber_y)

    # The vacuum prefactor frequency; proper-frame value, velocity independent.
    comoving_frequency = frequency

    @property
    def normalization(self) -> float:
        g = self.cavity.gamma()
        return 2.0 * math.sqrt(g / (self.cavity.proper_length_x * self.cavity.proper_length_y))

    @property
    def _coeffs(self) -> tuple[float, float, float, float]:
        g = self.cavity.gamma()
        v = self.cavity.velocity
        w = self.frequency
        k = self.wavenumber_x
        return -w * g, w * g * v, -k * g * v, k * g

    def walls_x(self, t: float) -> tuple[float, float]:
        return self.cavity.walls_x(t)

    def contains(self, t: float, x, y) -> np.ndarray:
        left, right = self.walls_x(t)
        b = self.cavity.proper_length_y
        sx = _WALL_SLACK * (right - left)
        sy = _WALL_SLACK * b
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return (x >= left - sx) & (x <= right + sx) & (y >= -sy) & (y <= b + sy)

    def value(self, t: float, x, y, *, check: bool = True):
        if check and not np.all(self.contains(t, x, y)):
            raise OutsideCavityError("(x, y) outside the instantaneous cavity")
        th_t, th_x, s_t, s_x = self._coeffs
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        ph = np.exp(1j * (th_t * t + th_x * x))
        return self.normalization * ph * np.sin(s_t * t + s_x * x) * np.sin(self.wavenumber_y * y)

    __call__ = value

    def d_dt(self, t: float, x, y):
        th_t, th_x, s_t, s_x = self._coeffs
        ph = np.exp(1j * (th_t * t + th_x * np.asarray(x, dtype=float)))
        s = s_t * t + s_x * np.asarray(x, dtype=float)
        return (
            self.normalization
            * ph
            * (1j * th_t * np.sin(s) + s_t * np.cos(s))
            * np.sin(self.wavenumber_y * np.asarray(y, dtype=float))
        )

    def d_dx(self, t: float, x, y):
        th_t, th_x, s_t, s_x = self._coeffs
        ph = np.exp(1j * (th_t * t + th_x * np.asarray(x, dtype=float)))
        s = s_t * t + s_x * np.asarray(x, dtype=float)
        return (
            self.normalization
            * ph
            * (1j * th_x * np.sin(s) + s_x * np.cos(s))
            * np.sin(self.wavenumber_y * np.asarray(y, dtype=float))
        )

    def d_dy(self, t: float, x, y):
        th_t, th_x, s_t, s_x = self._coeffs
        ph = np.exp(1j * (th_t * t + th_x * np.asarray(x, dtype=float)))
        s = s_t * t + s_x * np.asarray(x, dtype=float)
        p = self.wavenumber_y
        return self.normalization * ph * np.sin(s) * p * np.cos(p * np.asarray(y, dtype=float))


def mode(scheme: Scheme, cavity: Cavity1D, n: int) -> SpacetimeMode:
    return SpacetimeMode(scheme, cavity, n)


def mode_2d(cavity: Cavity2D, n: int, m: int) -> SpacetimeMode2D:
    return SpacetimeMode2D(cavity, n, m)


# ---------------------------------------------------------------------------
# thin functional wrappers
# ---------------------------------------------------------------------------

def mode_frequency(scheme: Scheme, cavity: Cavity1D, n: int) -> float:
    """Comoving/expansion frequency w'_n used in the vacuum sum rule."""
    return mode(scheme, cavity, n).comoving_frequency


def lab_phase_frequency(scheme: Scheme, cavity: Cavity1D, n: int) -> float:
    return mode(scheme, cavity, n).lab_phase_frequency


def normalization(scheme: Scheme, cavity: Cavity1D, n: int) -> float:
    return mode(scheme, cavity, n).normalization


def eval_mode(scheme: Scheme, cavity: Cavity1D, n: int, t: float, x: float) -> complex:
    return complex(mode(scheme, cavity, n).value(t, x))


def mode_frequency_2d(cavity: Cavity2D, n: int, m: int) -> float:
    return mode_2d(cavity, n, m).frequency


def wavenumber_x(cavity: Cavity2D, n: int) -> float:
    _check_index(n, "n")
    return n * math.pi / cavity.proper_length_x


def wavenumber_y(cavity: Cavity2D, m: int) -> float:
    _check_index(m, "m")
    return m * math.pi / cavity.proper_length_y


def eval_mode_2d(cavity: Cavity2D, n: int, m: int, t: float, x: float, y: float) -> complex:
    return complex(mode_2d(cavity, n, m).value(t, x, y))


def boundary_residual(scheme: Scheme, cavity: Cavity1D, n: int, t: float) -> tuple[complex, complex]:
    """Mode values at the two instantaneous walls; zero for Dirichlet walls."""
    u = mode(scheme, cavity, n)
    left, right = u.walls(t)
    return complex(u.value(t, left, check=False)), complex(u.value(t, right, check=False))


def kg_residual(scheme: Scheme, cavity: Cavity1D, n: int, t: float, x: float) -> float:
    """|governing PDE applied to the mode| from closed-form second derivatives.

    galileo-lab and lorentz modes solve the plain lab-frame wave equation;
    galileo-comoving modes solve the Galileo-shifted operator
    (d_t + v d_x)^2 - d_x^2.
    """
    u = mode(scheme, cavity, n)
    u._require_inside(t, x)
    utt = u.d2_dt2(t, x)
    uxx = u.d2_dx2(t, x)
    if scheme is Scheme.GALILEO_COMOVING_PRIOR:
        v = cavity.velocity
        r = utt + 2.0 * v * u.d2_dtdx(t, x) + (v * v - 1.0) * uxx
    else:
        r = utt - uxx
    return float(abs(r))


def comoving_kg_residual(cavity: Cavity1D, n: int, x_comoving: float) -> float:
    """Cavity-frame check of the galileo-lab scheme's drifted spatial ODE.

    Applies (1 - v^2) f'' - 2 i v w' f' + w'^2 f to the spatial profile
    f(x') = exp(i v k x') sin(k x'); must vanish.
    """
    _check_index(n)
    k = n * math.pi / cavity.proper_length
    v = cavity.velocity
    wp = (1.0 - v * v) * k
    xp = float(x_comoving)
    ph = np.exp(1j * v * k * xp)
    f = ph * np.sin(k * xp)
    fp = ph * (1j * v * k * np.sin(k * xp) + k * np.cos(k * xp))
    fpp = ph * (-(v * v + 1.0) * k * k * np.sin(k * xp) + 2j * v * k * k * np.cos(k * xp))
    return float(abs((1.0 - v * v) * fpp - 2j * v * wp * fp + wp * wp * f))


# ---------------------------------------------------------------------------
# orthogonality
# ---------------------------------------------------------------------------

def canonical_norm(scheme: Scheme, cavity: Cavity1D, n: int) -> float:
    """Diagonal of the scheme's conserved sesquilinear pairing (analytic)."""
    k = n * math.pi / cavity.proper_length
    if scheme is Scheme.LORENTZ_EXACT:
        return 2.0 * cavity.gamma() * k
    return 2.0 * k


def _paired_derivative(scheme: Scheme, u: SpacetimeMode, t: float, x):
    # The first-order time operator D whose current the scheme conserves.
    if scheme is Scheme.GALILEO_COMOVING_PRIOR:
        return u.d_dt(t, x) + u.cavity.velocity * u.d_dx(t, x)
    return u.d_dt(t, x)


def gram_matrix(
    scheme: Scheme,
    cavity: Cavity1D,
    n_modes: int,
    t: float,
    *,
    rtol: float = 1e-12,
) -> np.ndarray:
    """Mode Gram matrix under the scheme's conserved pairing; the identity.

    Entry (n, m) is  i * int( conj(u_n) D u_m - u_m conj(D u_n) ) dx  over
    the instantaneous cavity, divided by sqrt of the analytic diagonals,
    with D the scheme's conserved first-order time operator (d_t for the
    wave-equation schemes, d_t + v d_x for galileo-comoving).

    The naive equal-time overlap int u_n conj(u_m) dx is *not* diagonal for
    the moving cavity (the mode phases mix t and x); see
    spatial_overlap_matrix for that diagnostic. The conserved pairing is
    slice-independent, which is what makes the orthonormality statement
    exact at every lab time.
    """
    if n_modes < 1:
        raise ValueError("n_modes must be >= 1")
    us = [mode(scheme, cavity, n) for n in range(1, n_modes + 1)]
    left, right = cavity.walls(scheme, t)
    norms = np.array([canonical_norm(scheme, cavity, n) for n in range(1, n_modes + 1)])
    gram = np.empty((n_modes, n_modes), dtype=complex)
    for i, un in enumerate(us):
        for j, um in enumerate(us):
            def density(x, un=un, um=um):
                return 1j * (
                    np.conj(un.value(t, x, check=False)) * _paired_derivative(scheme, um, t, x)
                    - um.value(t, x, check=False) * np.conj(_paired_derivative(scheme, un, t, x))
                )

            value, _ = gauss_legendre(
                density,
                left,
                right,
                oscillations=un.n + um.n,
                rtol=rtol,
                atol=1e-14 * math.sqrt(norms[i] * norms[j]),
            )
            gram[i, j] = value / math.sqrt(norms[i] * norms[j])
    return gram


def spatial_overlap_matrix(
    scheme: Scheme,
    cavity: Cavity1D,
    n_modes: int,
    t: float,
    *,
    rtol: float = 1e-12,
) -> np.ndarray:
    """Literal equal-time overlaps int u_n conj(u_m) dx (unit diagonal).

    Off-diagonal entries are nonzero for the galileo-lab and lorentz
    families: on a fixed-t slice their phases retain x-dependence that no
    measure choice can cancel. They grow as O(v) between modes of opposite
    parity and O(v^2) between modes of equal parity. Kept as a diagnostic
    of exactly that time-space mixing; gram_matrix holds the conserved
    pairing that is exactly diagonal.
    """
    if n_modes < 1:
        raise ValueError("n_modes must be >= 1")
    us = [mode(scheme, cavity, n) for n in range(1, n_modes + 1)]
    left, right = cavity.walls(scheme, t)
    overlap = np.empty((n_modes, n_modes), dtype=complex)
    for i, un in enumerate(us):
        for j, um in enumerate(us):
            def density(x, un=un, um=um):
                return un.value(t, x, check=False) * np.conj(um.value(t, x, check=False))

            value, _ = gauss_legendre(
                density, left, right, oscillations=un.n + um.n, rtol=rtol, atol=1e-15
            )
            overlap[i, j] = value
    return overlap


def finite_difference_derivatives(
    scheme: Scheme, cavity: Cavity1D, n: int, t: float, x: float, h: float | None = None
) -> tuple[complex, complex]:
    """Central-difference (du/dt, du/dx) cross-check for the closed forms."""
    u = mode(scheme, cavity, n)
    if h is None:
        h = 1e-5 * cavity.proper_length
    ut = (u.value(t + h, x, check=False) - u.value(t - h, x, check=False)) / (2 * h)
    ux = (u.value(t, x + h, check=False) - u.value(t, x - h, check=False)) / (2 * h)
    return complex(ut), complex(ux)
