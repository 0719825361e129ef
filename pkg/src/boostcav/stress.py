"""Per-mode vacuum stress-tensor integrals over the instantaneous cavity.

Convention (canonical massless scalar, fixed by the static limit):

    T00 = (|d_t phi|^2 + |d_x phi|^2 [+ |d_y phi|^2]) / 2
    T01 = -Re( d_t phi * conj(d_x phi) )

and the vacuum expectation of any mode bilinear B is the per-mode sum

    <0| B |0> = sum_n  B(u_n, conj(u_n)) / (2 w'_n)

with w'_n the scheme's comoving/expansion frequency. At v = 0 this makes
the per-mode energy exactly w_n / 2, which pins every factor.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .cavity import Cavity1D, Cavity2D, Scheme
from .modes import SpacetimeMode, SpacetimeMode2D, mode, mode_2d
from .quadrature import gauss_legendre, gauss_legendre_2d

__all__ = [
    "PrefactorRule",
    "StressConvention",
    "DEFAULT_CONVENTION",
    "PerModeEM",
    "NotProportionalError",
    "CoefficientFit",
    "per_mode_em",
    "per_mode_em_2d",
    "per_mode_coefficients",
    "per_mode_em_2d_law",
    "coefficient_extract",
]


class PrefactorRule(enum.Enum):
    """Which frequency enters the 1/(2w') vacuum prefactor.

    SCHEME is the validated choice. The others are deliberate fault
    injections for negative-control tests: LAB_PHASE uses the lab-frame
    phase frequency (wrong for moving cavities), DOUBLED uses 2 w' (breaks
    the static limit outright).
    """

    SCHEME = "scheme"
    LAB_PHASE = "lab-phase"
    DOUBLED = "doubled"


@dataclass(frozen=True)
class StressConvention:
    """Component rules and sum-rule prefactor for the vacuum stress tensor.

    momentum_sign multiplies the canonical T01 = -Re(dt phi conj(dx phi));
    +1 makes a boosted negative-energy cavity carry momentum opposite to
    its velocity. It exists (with the prefactor rule) so the verification
    suite can inject deliberate faults.
    """

    momentum_sign: float = 1.0
    prefactor_rule: PrefactorRule = PrefactorRule.SCHEME


DEFAULT_CONVENTION = StressConvention()


@dataclass(frozen=True)
class PerModeEM:
    """Cavity-integrated energy/momentum contribution of a single mode."""

    n: int
    energy: float
    momentum: float
    quad_error: float
    m: int | None = None


class NotProportionalError(RuntimeError):
    """Per-mode results failed the e_n proportional-to-w_n factorization."""

    def __init__(self, message: str, ratios: np.ndarray):
        super().__init__(message)
        self.ratios = ratios


@dataclass(frozen=True)
class CoefficientFit:
    """Velocity-dependent per-mode coefficients: e_n = c_E w_n/2, p_n = c_P w_n/2."""

    c_energy: float
    c_momentum: float
    n_dispersion: float
    t_dispersion: float


def _prefactor_frequency(u: SpacetimeMode | SpacetimeMode2D, convention: StressConvention) -> float:
    if convention.prefactor_rule is PrefactorRule.LAB_PHASE:
        if isinstance(u, SpacetimeMode2D):
            return u.cavity.gamma() * u.frequency
        return u.lab_phase_frequency
    w = u.frequency if isinstance(u, SpacetimeMode2D) else u.comoving_frequency
    if convention.prefactor_rule is PrefactorRule.DOUBLED:
        return 2.0 * w
    return w


def per_mode_em(
    scheme: Scheme,
    cavity: Cavity1D,
    n: int,
    t: float = 0.0,
    *,
    convention: StressConvention = DEFAULT_CONVENTION,
) -> PerModeEM:
    """Quadrature of the per-mode T00 and T01 over the instantaneous cavity.

    Returns the contributions

        e_n = int (|u_t|^2 + |u_x|^2) / (4 w')  dx
        p_n = -int Re(u_t conj(u_x)) / (2 w')   dx

    with closed-form derivatives and a convergence-checked Gauss-Legendre
    quadrature. Both are time independent; t only picks the slice.
    """
    u = mode(scheme, cavity, n)
    wp = _prefactor_frequency(u, convention)
    left, right = u.walls(t)

    def energy_density(x):
        ut = u.d_dt(t, x)
        ux = u.d_dx(t, x)
        return (np.abs(ut) ** 2 + np.abs(ux) ** 2) / (4.0 * wp)

    def momentum_density(x):
        ut = u.d_dt(t, x)
        ux = u.d_dx(t, x)
        return -convention.momentum_sign * np.real(ut * np.conj(ux)) / (2.0 * wp)

    scale = max(1.0, u.base_frequency)
    e, e_err = gauss_legendre(
        energy_density, left, right, oscillations=n, rtol=1e-14, atol=1e-13 * scale
    )
    p, p_err = gauss_legendre(
        momentum_density, left, right, oscillations=n, rtol=1e-14, atol=1e-13 * scale
    )
    return PerModeEM(n=n, energy=float(np.real(e)), momentum=float(np.real(p)),
                     quad_error=float(max(e_err, p_err)))


def per_mode_em_2d(
    cavity: Cavity2D,
    n: int,
    m: int,
    t: float = 0.0,
    *,
    convention: StressConvention = DEFAULT_CONVENTION,
) -> PerModeEM:
    """2D analogue of per_mode_em with the transverse gradient in T00."""
    u = mode_2d(cavity, n, m)
    wp = _prefactor_frequency(u, convention)
    left, right = u.walls_x(t)
    b = cavity.proper_length_y

    def energy_density(x, y):
        ut = u.d_dt(t, x, y)
        ux = u.d_dx(t, x, y)
        uy = u.d_dy(t, x, y)
        return (np.abs(ut) ** 2 + np.abs(ux) ** 2 + np.abs(uy) ** 2) / (4.0 * wp)

    def momentum_density(x, y):
        ut = u.d_dt(t, x, y)
        ux = u.d_dx(t, x, y)
        return -convention.momentum_sign * np.real(ut * np.conj(ux)) / (2.0 * wp)

    scale = max(1.0, u.frequency)
    e, e_err = gauss_legendre_2d(
        energy_density, (left, right), (0.0, b),
        oscillations_x=n, oscillations_y=m, rtol=1e-14, atol=1e-13 * scale,
    )
    p, p_err = gauss_legendre_2d(
        momentum_density, (left, right), (0.0, b),
        oscillations_x=n, oscillations_y=m, rtol=1e-14, atol=1e-13 * scale,
    )
    return PerModeEM(n=n, m=m, energy=float(np.real(e)), momentum=float(np.real(p)),
                     quad_error=float(max(e_err, p_err)))


def per_mode_coefficients(scheme: Scheme, velocity: float) -> tuple[float, float]:
    """Closed-form (c_E, c_P) the quadrature must reproduce, per scheme.

    Defined by e_n = c_E * w_n / 2 and p_n = c_P * w_n / 2 with w_n = n pi / L.
    """
    v = velocity
    if scheme is Scheme.GALILEO_LAB_PRIOR:
        return (1.0 + v * v) / (1.0 - v * v), 2.0 * v / (1.0 - v * v)
    if scheme is Scheme.GALILEO_COMOVING_PRIOR:
        return 1.0 + v * v / 2.0, v
    g2 = 1.0 / (1.0 - v * v)
    return g2 * (1.0 + v * v), 2.0 * g2 * v


def per_mode_em_2d_law(cavity: Cavity2D, n: int, m: int) -> tuple[float, float]:
    """Closed-form 2D per-mode law: the oracle the quadrature is checked against.

        e_nm = [gamma^2 (1+v^2) (w^2 + k^2) + p^2] / (4 w)
        p_nm = gamma^2 v (w^2 + k^2) / (2 w)
    """
    u = mode_2d(cavity, n, m)
    v = cavity.velocity
    g2 = 1.0 / (1.0 - v * v)
    w = u.frequency
    k2 = u.wavenumber_x**2
    p2 = u.wavenumber_y**2
    e = (g2 * (1.0 + v * v) * (w * w + k2) + p2) / (4.0 * w)
    p = g2 * v * (w * w + k2) / (2.0 * w)
    return e, p


def coefficient_extract(
    scheme: Scheme,
    cavity: Cavity1D,
    n_max: int,
    t_samples: tuple[float, ...] = (0.0, 0.37),
    *,
    convention: StressConvention = DEFAULT_CONVENTION,
    dispersion_limit: float = 1e-8,
) -> CoefficientFit:
    """Fit the n- and t-independent coefficients from per-mode quadrature.

    Fits e_n = c_E * (n pi / L)/2 and p_n = c_P * (n pi / L)/2 over all mode
    indices and time samples; raises NotProportionalError when the relative
    dispersion exceeds dispersion_limit (the factorization claim fails).
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    if len(t_samples) < 2:
        raise ValueError("need at least two time samples")
    half_w = np.array([n * math.pi / cavity.proper_length / 2.0 for n in range(1, n_max + 1)])
    e_ratio = np.empty((len(t_samples), n_max))
    p_ratio = np.empty((len(t_samples), n_max))
    for it, t in enumerate(t_samples):
        for n in range(1, n_max + 1):
            pm = per_mode_em(scheme, cavity, n, t, convention=convention)
            e_ratio[it, n - 1] = pm.energy / half_w[n - 1]
            p_ratio[it, n - 1] = pm.momentum / half_w[n - 1]
    c_e = float(np.mean(e_ratio))
    c_p = float(np.mean(p_ratio))
    scale = max(abs(c_e), abs(c_p), 1e-300)
    # dispersion across n at fixed t, and across t at fixed n
    n_disp = max(
        float(np.max(np.ptp(e_ratio, axis=1))), float(np.max(np.ptp(p_ratio, axis=1)))
    ) / scale
    t_disp = max(
        float(np.max(np.ptp(e_ratio, axis=0))), float(np.max(np.ptp(p_ratio, axis=0)))
    ) / scale
    if max(n_disp, t_disp) > dispersion_limit:
        raise NotProportionalError(
            f"per-mode ratios disperse beyond {dispersion_limit:g} "
            f"(n: {n_disp:.3e}, t: {t_disp:.3e})",
            np.stack([e_ratio, p_ratio]),
        )
    return CoefficientFit(c_energy=c_e, c_momentum=c_p, n_dispersion=n_disp, t_dispersion=t_disp)
