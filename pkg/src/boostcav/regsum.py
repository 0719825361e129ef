"""Finite parts of divergent spectral sums.

Three independent routes:

  * exact zeta assignment for linear-in-n sums (sum n -> -1/12),
  * exponential-cutoff evaluation S(eps) = sum c e^{-eps w} followed by a
    least-squares fit of the divergent powers of 1/eps, keeping the eps^0
    constant,
  * an Abel-Plana integral representation for the 1D static sum.

Cross-agreement of the routes is the package's strongest regularization
check; nothing here ever regularizes velocity-dependent sums directly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

import numpy as np
from scipy.integrate import quad

__all__ = [
    "RegMethod",
    "RegConfig",
    "FinitePart",
    "FitError",
    "SequenceSummand",
    "Linear1DSummand",
    "Rect2DSummand",
    "RECT2D_WEIGHTS",
    "geometric_schedule",
    "cutoff_finite_part",
    "rect_finite_parts",
    "zeta_linear_sum",
    "abel_plana_m0",
]


class RegMethod(enum.Enum):
    ZETA_EXACT = "zeta"
    EXPONENTIAL_CUTOFF = "cutoff"
    ABEL_PLANA = "abel-plana"

    @classmethod
    def from_label(cls, label: str) -> "RegMethod":
        for member in cls:
            if member.value == label:
                return member
        valid = ", ".join(m.value for m in cls)
        raise ValueError(f"unknown regularization method {label!r} (expected: {valid})")


class FitError(RuntimeError):
    """Divergence fit rejected (ill-conditioned design or bad schedule)."""


def geometric_schedule(
    omega_min: float, *, hi: float = 0.2, lo: float = 0.01, points: int = 8
) -> tuple[float, ...]:
    """Strictly decreasing cutoff schedule, dimensionless [lo, hi] in 1/omega_min."""
    if omega_min <= 0:
        raise ValueError("omega_min must be positive")
    if not (0 < lo < hi) or points < 4:
        raise ValueError("need 0 < lo < hi and at least 4 points")
    return tuple(np.geomspace(hi, lo, points) / omega_min)


@dataclass(frozen=True)
class RegConfig:
    """Method selection plus the cutoff-fit schedule and power basis.

    divergent_powers are the 1/eps^k terms fitted alongside the constant;
    positive_powers add eps^{+k} stabilizer columns (they vanish at eps -> 0
    but absorbing them sharpens the constant by orders of magnitude).
    truncation_damping terminates each sum once e^{-eps w} drops below it.
    """

    method: RegMethod
    epsilon_schedule: tuple[float, ...] = ()
    divergent_powers: tuple[int, ...] = (2,)
    positive_powers: tuple[int, ...] = ()
    truncation_damping: float = 1e-18
    condition_limit: float = 1e12

    def __post_init__(self) -> None:
        if self.method is RegMethod.EXPONENTIAL_CUTOFF:
            eps = self.epsilon_schedule
            if len(eps) < 4:
                raise ValueError("cutoff schedule needs at least 4 points")
            if any(e2 >= e1 for e1, e2 in zip(eps, eps[1:])) or eps[-1] <= 0:
                raise ValueError("cutoff schedule must be strictly decreasing and positive")
            if not self.divergent_powers:
                raise ValueError("cutoff fitting needs at least one divergent power")
        if not (0 < self.truncation_damping < 1):
            raise ValueError("truncation_damping must lie in (0, 1)")

    # -- convenience constructors ------------------------------------------
    @staticmethod
    def zeta() -> "RegConfig":
        return RegConfig(method=RegMethod.ZETA_EXACT)

    @staticmethod
    def abel_plana() -> "RegConfig":
        return RegConfig(method=RegMethod.ABEL_PLANA)

    @staticmethod
    def cutoff_1d(omega_min: float, **schedule_kw) -> "RegConfig":
        """Working 1D default: {eps^-2} divergent, {eps^2, eps^4} stabilizers."""
        return RegConfig(
            method=RegMethod.EXPONENTIAL_CUTOFF,
            epsilon_schedule=geometric_schedule(omega_min, **schedule_kw),
            divergent_powers=(2,),
            positive_powers=(2, 4),
        )

    @staticmethod
    def cutoff_2d(omega_min: float, **schedule_kw) -> "RegConfig":
        """Working 2D default: bulk/perimeter/corner divergences, {eps, eps^2} stabilizers."""
        schedule_kw.setdefault("hi", 0.25)
        schedule_kw.setdefault("lo", 0.02)
        return RegConfig(
            method=RegMethod.EXPONENTIAL_CUTOFF,
            epsilon_schedule=geometric_schedule(omega_min, **schedule_kw),
            divergent_powers=(3, 2, 1),
            positive_powers=(1, 2),
        )

    def halved(self) -> "RegConfig":
        """Same config with every cutoff halved (robustness checks)."""
        return RegConfig(
            method=self.method,
            epsilon_schedule=tuple(e / 2.0 for e in self.epsilon_schedule),
            divergent_powers=self.divergent_powers,
            positive_powers=self.positive_powers,
            truncation_damping=self.truncation_damping,
            condition_limit=self.condition_limit,
        )


@dataclass(frozen=True)
class FinitePart:
    """Extracted eps^0 constant with an error estimate and fit diagnostics."""

    value: float
    error_estimate: float
    method: RegMethod
    fitted_divergent_coeffs: tuple[float, ...] = ()
    fit_residual: float = 0.0
    condition_number: float = 0.0

    def __post_init__(self) -> None:
        if math.isnan(self.value):
            raise ValueError("finite part is NaN")


# ---------------------------------------------------------------------------
# summands
# ---------------------------------------------------------------------------

class SequenceSummand:
    """Explicit finite (or truncatable) sequence of (coefficient, frequency)."""

    def __init__(self, coefficients: Sequence[float], frequencies: Sequence[float]):
        c = np.asarray(coefficients, dtype=float)
        w = np.asarray(frequencies, dtype=float)
        if c.shape != w.shape or c.ndim != 1:
            raise ValueError("coefficients and frequencies must be equal-length 1D")
        if np.any(w <= 0):
            raise ValueError("frequencies must be positive")
        self._c = c
        self._w = w
        self.omega_min = float(np.min(w))

    def blocks(self, omega_cap: float) -> Iterator[tuple[np.ndarray, np.ndarray]]:
        keep = self._w <= omega_cap
        yield self._c[keep], self._w[keep]


class Linear1DSummand:
    """c_n = weight * n pi / L on the 1D Dirichlet spectrum w_n = n pi / L."""

    def __init__(self, proper_length: float, weight: float = 0.5):
        if proper_length <= 0:
            raise ValueError("proper_length must be positive")
        self.step = math.pi / proper_length
        self.weight = weight
        self.omega_min = self.step

    def blocks(self, omega_cap: float) -> Iterator[tuple[np.ndarray, np.ndarray]]:
        n_max = int(omega_cap / self.step)
        w = np.arange(1, n_max + 1, dtype=float) * self.step
        yield self.weight * w, w


# Per-mode weights of the boosted-rectangle decomposition as functions of
# (k, p, w): the energy/momentum laws are linear combinations of these sums.
RECT2D_WEIGHTS: dict[str, Callable] = {
    "S_omega": lambda k, p, w: 0.5 * w,                  # static energy  sum w/2
    "S_k": lambda k, p, w: k * k / (2.0 * w),            # sum k^2/(2w)
    "U": lambda k, p, w: (w * w + k * k) / (4.0 * w),    # longitudinal part
    "W": lambda k, p, w: p * p / (4.0 * w),              # transverse part
}


class Rect2DSummand:
    """One named weight on the rectangle spectrum w_nm = sqrt(k_n^2 + p_m^2)."""

    def __init__(self, a: float, b: float, weight: str = "S_omega"):
        if a <= 0 or b <= 0:
            raise ValueError("side lengths must be positive")
        if weight not in RECT2D_WEIGHTS:
            raise ValueError(f"unknown weight {weight!r}; options: {sorted(RECT2D_WEIGHTS)}")
        self.a = a
        self.b = b
        self.weight = weight
        self.omega_min = math.hypot(math.pi / a, math.pi / b)

    def blocks(self, omega_cap: float) -> Iterator[tuple[np.ndarray, np.ndarray]]:
        fn = RECT2D_WEIGHTS[self.weight]
        for k, p, w in _rect_rows(self.a, self.b, omega_cap):
            yield fn(k, p, w), w


def _rect_rows(a: float, b: float, omega_cap: float):
    """Rows of the rectangle spectrum below omega_cap, ascending n then m."""
    kx_step = math.pi / a
    ky_step = math.pi / b
    n_max = int(omega_cap / kx_step)
    for n in range(1, n_max + 1):
        k = n * kx_step
        remainder = omega_cap * omega_cap - k * k
        if remainder <= ky_step * ky_step:
            break
        m_max = int(math.sqrt(remainder) / ky_step)
        p = np.arange(1, m_max + 1, dtype=float) * ky_step
        w = np.sqrt(k * k + p * p)
        yield np.full_like(p, k), p, w


# ---------------------------------------------------------------------------
# cutoff evaluation and divergence fit
# ---------------------------------------------------------------------------

def _sum_at(summand, eps: float, damping: float) -> float:
    omega_cap = -math.log(damping) / eps
    total = 0.0
    for c, w in summand.blocks(omega_cap):
        total += float(np.sum(c * np.exp(-eps * w)))
    return total


def _solve_scaled_lstsq(design: np.ndarray, y: np.ndarray, condition_limit: float):
    """Column-scaled least squares in extended precision; returns coefficients."""
    scale = np.max(np.abs(design), axis=0)
    scaled = design / scale
    cond = float(np.linalg.cond(scaled.astype(float)))
    if cond > condition_limit:
        raise FitError(
            f"divergence-fit design matrix condition number {cond:.3e} exceeds "
            f"{condition_limit:.1e}; use a wider or shorter schedule"
        )
    a = scaled.astype(np.longdouble)
    rhs = y.astype(np.longdouble)
    ata = a.T @ a
    atb = a.T @ rhs
    coeffs = _gauss_solve(ata, atb)
    return (coeffs / scale.astype(np.longdouble)).astype(np.longdouble), cond


def _gauss_solve(mat: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    # numpy.linalg does not accept longdouble; the systems here are tiny.
    m = mat.copy()
    r = rhs.copy()
    size = m.shape[0]
    for col in range(size):
        pivot = col + int(np.argmax(np.abs(m[col:, col])))
        if m[pivot, col] == 0:
            raise FitError("singular divergence-fit system")
        if pivot != col:
            m[[col, pivot]] = m[[pivot, col]]
            r[[col, pivot]] = r[[pivot, col]]
        factor = m[col + 1:, col] / m[col, col]
        m[col + 1:] -= factor[:, None] * m[col]
        r[col + 1:] -= factor * r[col]
    out = np.zeros_like(r)
    for col in range(size - 1, -1, -1):
        out[col] = (r[col] - m[col, col + 1:] @ out[col + 1:]) / m[col, col]
    return out


def _fit_constant(eps: np.ndarray, values: np.ndarray, config: RegConfig):
    powers = [-int(p) for p in config.divergent_powers] + [0] + [int(p) for p in config.positive_powers]
    design = np.stack([eps.astype(np.longdouble) ** float(q) for q in powers], axis=1)
    coeffs, cond = _solve_scaled_lstsq(design, values, config.condition_limit)
    model = design @ coeffs
    residual = float(np.max(np.abs(model - values.astype(np.longdouble))))
    n_div = len(config.divergent_powers)
    noise = _extraction_noise(design, values, n_div)
    return coeffs, powers, residual, cond, n_div, noise


def _extraction_noise(design: np.ndarray, values: np.ndarray, index: int) -> float:
    """Propagated float64 rounding of the data through the (linear) fit.

    The constant is a linear functional a0 = sum_i d_i y_i of the summed
    data; each y_i carries accumulation rounding O(eps_mach |y_i|), which
    the divergent columns amplify. This bounds that contribution and is
    what makes small-eps schedules *worse* beyond a point.
    """
    scale = np.max(np.abs(design), axis=0)
    a = (design / scale).astype(np.longdouble)
    ata = a.T @ a
    basis = np.zeros(a.shape[1], dtype=np.longdouble)
    basis[index] = 1.0
    z = _gauss_solve(ata, basis)
    dual = a @ z  # sensitivities of the scaled constant to each data point
    per_point = 16.0 * np.finfo(float).eps * np.abs(values.astype(np.longdouble))
    return float(np.sum(np.abs(dual) * per_point) / scale[index])


def cutoff_finite_part(summand, config: RegConfig) -> FinitePart:
    """Exponential-cutoff finite part of sum_n c_n with damping e^{-eps w_n}.

    Evaluates S(eps) over the schedule (each sum truncated once the damping
    factor falls below config.truncation_damping), fits

        S(eps) = sum_k a_k eps^{-k} + a_0 + stabilizer terms,

    and returns a_0. The error estimate combines the fit residual with a
    refit restricted to the small-eps half of the schedule.
    """
    if config.method is not RegMethod.EXPONENTIAL_CUTOFF:
        raise ValueError("cutoff_finite_part requires an EXPONENTIAL_CUTOFF config")
    eps = np.asarray(config.epsilon_schedule, dtype=float)

    saturated = _saturated_sum(summand, eps[-1], config.truncation_damping)
    if saturated is not None:
        # Absolutely convergent (finite below every cutoff): the damped sums
        # carry no divergence and the eps -> 0 limit is the plain sum.
        return FinitePart(
            value=saturated,
            error_estimate=0.0,
            method=config.method,
            fitted_divergent_coeffs=tuple(0.0 for _ in config.divergent_powers),
            fit_residual=0.0,
            condition_number=1.0,
        )

    values = np.array([_sum_at(summand, e, config.truncation_damping) for e in eps])
    coeffs, powers, residual, cond, n_div, noise = _fit_constant(eps, values, config)
    a0 = float(coeffs[n_div])

    n_params = len(powers)
    lower = slice(len(eps) - max(n_params + 1, len(eps) // 2), len(eps))
    if lower.stop - lower.start >= n_params and lower.start > 0:
        coeffs_lo, *_ = _fit_constant(eps[lower], values[lower], config)
        refit_shift = abs(float(coeffs_lo[n_div]) - a0)
    else:
        refit_shift = 0.0
    # the estimate must also cover nearby schedules: one eps-halving scales
    # the raw sums (hence the extraction noise) by 2^{leading power}
    error = refit_shift + residual + 2.0 ** max(config.divergent_powers) * noise
    return FinitePart(
        value=a0,
        error_estimate=float(error),
        method=config.method,
        fitted_divergent_coeffs=tuple(float(c) for c in coeffs[:n_div]),
        fit_residual=residual,
        condition_number=cond,
    )


def _saturated_sum(summand, eps_min: float, damping: float) -> float | None:
    """Undamped total when the summand is already finite below the cutoffs.

    Detected by the term count not growing when the frequency cap is pushed
    25% past the schedule's most permissive truncation point (any infinite
    polynomial-density spectrum gains terms there).
    """
    cap = -math.log(damping) / eps_min
    count_near = sum(len(w) for _, w in summand.blocks(cap))
    blocks_past = list(summand.blocks(1.25 * cap))
    count_past = sum(len(w) for _, w in blocks_past)
    if count_past != count_near:
        return None
    return float(sum(float(np.sum(c)) for c, _ in blocks_past))


def rect_finite_parts(a: float, b: float, config: RegConfig) -> dict[str, FinitePart]:
    """All four rectangle finite parts from a single pass over the spectrum.

    Identical schedules and truncation for every weight, so linear
    identities between the sums (U + W = S_omega, U - W = S_k) survive the
    fit exactly and their errors correlate.
    """
    if config.method is not RegMethod.EXPONENTIAL_CUTOFF:
        raise ValueError("rect_finite_parts requires an EXPONENTIAL_CUTOFF config")
    eps = np.asarray(config.epsilon_schedule, dtype=float)
    names = list(RECT2D_WEIGHTS)
    table = np.zeros((len(eps), len(names)))
    for i, e in enumerate(eps):
        omega_cap = -math.log(config.truncation_damping) / e
        acc = np.zeros(len(names))
        for k, p, w in _rect_rows(a, b, omega_cap):
            damp = np.exp(-e * w)
            for j, name in enumerate(names):
                acc[j] += float(np.sum(RECT2D_WEIGHTS[name](k, p, w) * damp))
        table[i] = acc
    out: dict[str, FinitePart] = {}
    for j, name in enumerate(names):
        coeffs, powers, residual, cond, n_div, noise = _fit_constant(eps, table[:, j], config)
        n_params = len(powers)
        lower = slice(len(eps) - max(n_params + 1, len(eps) // 2), len(eps))
        if lower.stop - lower.start >= n_params and lower.start > 0:
            coeffs_lo, *_ = _fit_constant(eps[lower], table[lower, j], config)
            refit_shift = abs(float(coeffs_lo[n_div]) - float(coeffs[n_div]))
        else:
            refit_shift = 0.0
        out[name] = FinitePart(
            value=float(coeffs[n_div]),
            error_estimate=float(
                refit_shift + residual + 2.0 ** max(config.divergent_powers) * noise
            ),
            method=config.method,
            fitted_divergent_coeffs=tuple(float(c) for c in coeffs[:n_div]),
            fit_residual=residual,
            condition_number=cond,
        )
    return out


# ---------------------------------------------------------------------------
# exact and integral routes
# ---------------------------------------------------------------------------

def zeta_linear_sum(slope: float) -> float:
    """Regularized value of sum_{n>=1} slope*n, i.e. slope * (-1/12)."""
    return -slope / 12.0


def abel_plana_m0(proper_length: float, *, tol: float = 1e-12) -> float:
    """Static cavity energy -pi/(24 L) via the Abel-Plana sum-minus-integral.

    The regularized sum_n n equals -2 int_0^inf t/(e^{2 pi t} - 1) dt; with
    the half-sum-of-frequencies weight this yields
    m0 = -(pi/L) int_0^inf t/(e^{2 pi t} - 1) dt.
    """
    if proper_length <= 0:
        raise ValueError("proper_length must be positive")

    def integrand(t: float) -> float:
        if t == 0.0:
            return 1.0 / (2.0 * math.pi)
        decay = math.exp(-2.0 * math.pi * t)  # overflow-safe form of t/(e^{2pi t}-1)
        return t * decay / (1.0 - decay)

    value, abserr = quad(integrand, 0.0, np.inf, epsabs=1e-15, epsrel=1e-13, limit=200)
    if abserr > tol:
        raise FitError(f"Abel-Plana integral tolerance not met (abserr {abserr:.2e})")
    return -(math.pi / proper_length) * value
