import math

import pytest

from boostcav.cavity import Cavity2D
from boostcav import rect2d
from boostcav.rect2d import (
    Route2D,
    UnderdeterminedError,
    boosted_em_2d,
    finite_parts,
    mass_shell_probe_2d,
    static_limit_report,
    subtraction_solver_2d,
)

ZETA3 = 1.2020569031595943


@pytest.fixture(scope="module")
def square_parts():
    return finite_parts(Cavity2D(1.0, 1.0, 0.0))


class TestStaticLimit:
    def test_per_mode_route_recovers_rest_energy(self, square_parts):
        res = boosted_em_2d(Cavity2D(1.0, 1.0, 0.0), Route2D.PER_MODE, parts=square_parts)
        budget = 2.0 * (res.energy_error + square_parts.S_omega.error_estimate)
        assert abs(res.energy - res.static_energy) <= max(budget, 1e-12)
        assert res.momentum == 0.0

    def test_grouped_route_misses_by_s_k(self, square_parts):
        report = static_limit_report(Cavity2D(1.0, 1.0, 0.0))
        gap = report.entries[0].value_a - report.entries[0].value_b
        assert abs(gap - square_parts.S_k.value) <= 5.0 * (
            square_parts.S_k.error_estimate + square_parts.S_omega.error_estimate
        )
        assert abs(gap) > 100.0 * square_parts.S_k.error_estimate


class TestShellProbe:
    def test_rest_velocity_row(self, square_parts):
        rows = mass_shell_probe_2d(Cavity2D(1.0, 1.0, 0.0), [0.0], parts=square_parts)
        assert abs(rows[0].residual) <= rows[0].residual_error

    def test_residual_matches_analytic_law(self, square_parts):
        rows = mass_shell_probe_2d(Cavity2D(1.0, 1.0, 0.0), [0.2, 0.4, 0.6],
                                   parts=square_parts)
        e_m = square_parts.S_omega.value
        budget = 4.0 * abs(e_m) * (
            square_parts.U.error_estimate + square_parts.W.error_estimate
            + square_parts.S_omega.error_estimate
        )
        for row in rows:
            assert abs(row.residual - row.predicted_residual) <= budget

    def test_square_residual_beyond_error_bars(self, square_parts):
        rows = mass_shell_probe_2d(Cavity2D(1.0, 1.0, 0.0), [0.6], parts=square_parts)
        assert abs(rows[0].residual) > 10.0 * rows[0].residual_error


class TestSubtractionSolver:
    def test_both_branches_zero_the_residual(self, square_parts):
        sol = subtraction_solver_2d(Cavity2D(1.0, 1.0, 0.0), [0.2, 0.4, 0.6],
                                    parts=square_parts)
        names = {br.name for br in sol.branches}
        assert names == {"zero-transverse-part", "zero-longitudinal-part"}
        for br in sol.branches:
            assert br.max_rel_residual <= 1e-10

    def test_branch_shifts_cancel_the_parts(self, square_parts):
        sol = subtraction_solver_2d(Cavity2D(1.0, 1.0, 0.0), [0.2, 0.4, 0.6],
                                    parts=square_parts)
        by_name = {br.name: br for br in sol.branches}
        assert abs(by_name["zero-transverse-part"].delta_W + square_parts.W.value) < 1e-15
        assert abs(by_name["zero-longitudinal-part"].delta_U + square_parts.U.value) < 1e-15

    def test_single_point_underdetermined(self, square_parts):
        with pytest.raises(UnderdeterminedError):
            subtraction_solver_2d(Cavity2D(1.0, 1.0, 0.0), [0.5], parts=square_parts)

    def test_zero_velocities_do_not_count(self, square_parts):
        with pytest.raises(UnderdeterminedError):
            subtraction_solver_2d(Cavity2D(1.0, 1.0, 0.0), [0.0, 0.2, 0.4],
                                  parts=square_parts)


class TestGeometry:
    def test_swap_symmetry_at_rest(self):
        em_ab = rect2d.static_energy_2d(Cavity2D(1.0, 2.0, 0.0))
        em_ba = rect2d.static_energy_2d(Cavity2D(2.0, 1.0, 0.0))
        assert abs(em_ab.value - em_ba.value) <= 5.0 * (
            em_ab.error_estimate + em_ba.error_estimate
        )

    def test_swap_asymmetry_under_boost(self):
        moving_ab = boosted_em_2d(Cavity2D(1.0, 2.0, 0.5))
        moving_ba = boosted_em_2d(Cavity2D(2.0, 1.0, 0.5))
        gap = abs(moving_ab.energy - moving_ba.energy)
        assert gap > 10.0 * (moving_ab.energy_error + moving_ba.energy_error)


@pytest.fixture(scope="module")
def wide_parts():
    return finite_parts(Cavity2D(1.0, 30.0, 0.0))


class TestWideCavityAsymptotics:
    """Strip-limit closed forms: per unit transverse length,

        E_m/b  -> -zeta(3)/(16 pi a^2)
        S_k/b  -> -zeta(3)/(8 pi a^2)    (so U/E_m -> 3/2, W/E_m -> -1/2)

    The transverse finite part W never vanishes in the wide limit; it
    approaches -E_m/2. These targets come from the continuum transverse
    integral with the longitudinal sum continued at its integer arguments
    (sum n^2 log n -> zeta(3)/(4 pi^2)), matching the known strip energy.
    """

    def test_rest_energy_tracks_strip_density(self, wide_parts):
        expected = -ZETA3 * 30.0 / (16.0 * math.pi) + math.pi / 48.0
        assert abs(wide_parts.S_omega.value - expected) < 5e-3 * abs(expected)

    def test_longitudinal_and_transverse_shares(self, wide_parts):
        e_m = wide_parts.S_omega.value
        assert abs(wide_parts.U.value / e_m - 1.5) < 0.06
        assert abs(wide_parts.W.value / e_m + 0.5) < 0.06

    def test_transverse_part_positive_and_large(self, wide_parts):
        # the wide-cavity transverse finite part is comparable to |E_m|, not
        # a vanishing correction
        assert wide_parts.W.value > 0.25 * abs(wide_parts.S_omega.value)

    def test_wide_cavity_shell_residual_stays_finite(self, wide_parts):
        # with U/E_m -> 3/2 and W/E_m -> -1/2, the relative shell residual at
        # v = 0.6 tends to -(3/2)(gamma^2(1+v^2) - 1) = -1.6875 instead of 0
        rows = mass_shell_probe_2d(Cavity2D(1.0, 30.0, 0.0), [0.6], parts=wide_parts)
        e_m = wide_parts.S_omega.value
        rel = rows[0].residual / e_m**2
        assert -2.1 < rel < -1.6
        budget = 4.0 * abs(e_m) * (
            wide_parts.U.error_estimate + wide_parts.W.error_estimate
            + wide_parts.S_omega.error_estimate
        )
        assert abs(rows[0].residual - rows[0].predicted_residual) <= budget
