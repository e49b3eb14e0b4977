import math

import numpy as np
import pytest

from fermicool.gaussian import binary_entropy, fermi_occupation
from fermicool.master_eq import (
    NoCrossingError,
    SweepSchedule,
    cumulative_heat,
    find_half_population_time,
    find_zero_crossing,
    heat_dissipated,
    integrate_population,
    sweep_heat_curve,
)

LN2 = math.log(2.0)

# t_f for relaxation at constant eps = 1, Gamma = 1 from n0 = 1:
# solve f + (1 - f) exp(-t) = 1/2 with f = f(1); frozen from the closed form
CONST_EPS_TF = 1.1518223259470273


def constant_schedule(eps: float, tau: float = 1e-9) -> SweepSchedule:
    """Effectively constant energy: a vanishing sweep window before the hold.

    Callers must pass an explicit dt; the default step is tied to tau.
    """
    return SweepSchedule(eps - 1e-12, eps, tau)


class TestSweepSchedule:
    def test_linear_then_held(self):
        s = SweepSchedule(-5.0, 1.0, 10.0)
        assert s.energy(0.0) == -5.0
        assert s.energy(5.0) == pytest.approx(-2.0)
        assert s.energy(10.0) == 1.0
        assert s.energy(25.0) == 1.0

    def test_vectorized_energy(self):
        s = SweepSchedule(-5.0, 1.0, 10.0)
        assert np.allclose(s.energy([0.0, 10.0, 20.0]), [-5.0, 1.0, 1.0])

    def test_validation(self):
        with pytest.raises(ValueError, match="eps1 < eps2"):
            SweepSchedule(1.0, -5.0, 10.0)
        with pytest.raises(ValueError, match="tau > 0"):
            SweepSchedule(-5.0, 1.0, 0.0)


class TestIntegratePopulation:
    def test_constant_energy_matches_closed_form(self):
        # n(t) = f + (n0 - f) exp(-Gamma t)
        traj = integrate_population(constant_schedule(1.0), 0.05, dt=0.1,
                                    threshold=None, max_time=100.0)
        f = fermi_occupation(1.0)
        exact = f + (1.0 - f) * np.exp(-0.05 * traj.times)
        assert np.abs(traj.populations - exact).max() < 1e-8

    def test_half_population_time_constant_energy(self):
        traj = integrate_population(constant_schedule(1.0), 0.05, dt=0.1)
        assert find_half_population_time(traj) == pytest.approx(
            CONST_EPS_TF / 0.05, rel=1e-5
        )

    def test_adiabatic_limit_follows_fermi_function(self):
        schedule = SweepSchedule(-5.0, 1.0, 100.0 / 0.05)
        traj = integrate_population(schedule, 0.05, threshold=None, max_time=schedule.tau)
        # the population lags the instantaneous equilibrium by ~ d(eps)/dt / Gamma
        assert np.abs(
            traj.populations - fermi_occupation(traj.energies)
        ).max() < 0.02

    def test_dimensionless_scaling(self):
        # only Gamma*tau matters: rescaled runs give identical -Q
        q = []
        for gamma in (0.01, 0.05):
            schedule = SweepSchedule(-5.0, 1.0, 10.0 / gamma)
            q.append(heat_dissipated(integrate_population(schedule, gamma)))
        assert q[0] == pytest.approx(q[1], abs=1e-9)

    def test_step_halving_converges(self):
        schedule = SweepSchedule(-5.0, 1.0, 10.0 / 0.02)
        coarse = heat_dissipated(integrate_population(schedule, 0.02, dt=0.5))
        fine = heat_dissipated(integrate_population(schedule, 0.02, dt=0.25))
        assert abs(coarse - fine) < 1e-6

    def test_threshold_crossing_bracketed(self):
        traj = integrate_population(constant_schedule(1.0), 0.05, dt=0.1)
        assert traj.populations[-1] <= 0.5
        assert traj.populations[-2] > 0.5

    def test_no_crossing_raises(self):
        # holding at eps = -5 keeps the population near 1
        with pytest.raises(NoCrossingError):
            integrate_population(SweepSchedule(-5.0, -4.9, 10.0), 0.05, max_time=50.0)

    def test_strong_coupling_warns(self):
        with pytest.warns(UserWarning, match="weak"):
            integrate_population(constant_schedule(1.0), 0.5, dt=0.02)

    def test_coarse_dt_rejected(self):
        with pytest.raises(ValueError, match="too coarse"):
            integrate_population(constant_schedule(1.0), 0.05, dt=1.0)

    def test_bad_inputs_rejected(self):
        with pytest.raises(ValueError, match="gamma"):
            integrate_population(constant_schedule(1.0), -0.1)
        with pytest.raises(ValueError, match="population"):
            integrate_population(constant_schedule(1.0), 0.05, n0=1.5)


class TestHeat:
    def test_instant_quench_heat(self):
        # a sweep much faster than the relaxation: the population is still 1
        # when the energy reaches eps2 = 1, then -Q -> -eps2 * (1 - 1/2)
        schedule = SweepSchedule(-5.0, 1.0, 0.001 / 0.02)
        traj = integrate_population(schedule, 0.02)
        assert heat_dissipated(traj) == pytest.approx(0.5, abs=2e-3)

    def test_quasistatic_limit_heat(self):
        # slow sweep approaches -Q = -[ln 2 - h(f(eps1))]
        schedule = SweepSchedule(-5.0, 1.0, 100.0 / 0.02)
        traj = integrate_population(schedule, 0.02)
        target = -(LN2 - binary_entropy(fermi_occupation(-5.0)))
        assert heat_dissipated(traj) == pytest.approx(target, abs=0.01)
        assert heat_dissipated(traj) == pytest.approx(-0.6569, abs=2e-3)

    def test_second_law_along_trajectory(self):
        schedule = SweepSchedule(-5.0, 1.0, 10.0 / 0.02)
        traj = integrate_population(schedule, 0.02, threshold=None,
                                    max_time=schedule.tau)
        sigma = (
            binary_entropy(traj.populations[-1])
            - binary_entropy(traj.populations[0])
            + cumulative_heat(traj)[-1]
        )
        assert sigma >= -1e-6

    def test_cumulative_heat_consistent_with_total(self):
        traj = integrate_population(constant_schedule(1.0), 0.05, dt=0.1)
        t_f = find_half_population_time(traj)
        cum = cumulative_heat(traj)
        interp = np.interp(t_f, traj.times, cum)
        assert heat_dissipated(traj) == pytest.approx(interp, abs=1e-6)


class TestSweepHeatCurve:
    def test_monotone_in_sweep_time(self):
        rows = sweep_heat_curve(-5.0, 1.0, 0.02, [0.5, 2.0, 8.0, 32.0])
        values = [q for _, q in rows]
        assert values == sorted(values, reverse=True)

    def test_fast_positive_slow_negative(self):
        rows = dict(sweep_heat_curve(-5.0, 1.0, 0.02, [0.5, 32.0]))
        assert rows[0.5] > 0.0
        assert rows[32.0] < 0.0

    def test_empty_list_rejected(self):
        with pytest.raises(ValueError, match="nonempty"):
            sweep_heat_curve(-5.0, 1.0, 0.02, [])


class TestFindZeroCrossing:
    def test_linear_interpolation(self):
        assert find_zero_crossing([(1.0, 1.0), (3.0, -1.0)]) == pytest.approx(2.0)

    def test_no_sign_change(self):
        assert find_zero_crossing([(1.0, 1.0), (3.0, 0.5)]) is None

    def test_exact_zero_sample(self):
        assert find_zero_crossing([(1.0, 0.0), (3.0, -1.0)]) == 1.0

    def test_model_crossing_location(self):
        # frozen behavior of this rate-equation model on the standard sweep
        rows = sweep_heat_curve(-5.0, 1.0, 0.02, np.geomspace(1.0, 8.0, 16))
        assert find_zero_crossing(rows) == pytest.approx(2.574, abs=0.02)
