"""Rate-equation model of the driven system mode.

Integrates n_S' = -Gamma * [n_S - f(eps_S(t))] for a linear energy sweep
and computes the dissipated heat -Q = -int eps_S(t) n_S'(t) dt up to the
time t_f at which the population first reaches 1/2.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid

from .gaussian import fermi_occupation


class NoCrossingError(RuntimeError):
    """Population never reached the switch-off threshold."""


@dataclass(frozen=True)
class SweepSchedule:
    """Piecewise-linear system energy: eps1 -> eps2 over [0, tau], then held."""

    eps1: float
    eps2: float
    tau: float

    def __post_init__(self):
        if not self.eps1 < self.eps2:
            raise ValueError(f"require eps1 < eps2, got {self.eps1} >= {self.eps2}")
        if not self.tau > 0:
            raise ValueError(f"require tau > 0, got {self.tau}")

    def energy(self, t):
        t = np.asarray(t, dtype=float)
        frac = np.clip(t / self.tau, 0.0, 1.0)
        e = self.eps1 + (self.eps2 - self.eps1) * frac
        if e.ndim == 0:
            return float(e)
        return e


@dataclass
class PopulationTrajectory:
    times: np.ndarray
    populations: np.ndarray
    energies: np.ndarray
    dt: float
    gamma: float
    schedule: SweepSchedule

    def rhs(self) -> np.ndarray:
        """ODE right-hand side at the sample points (exact, no differencing)."""
        return -self.gamma * (self.populations - fermi_occupation(self.energies))


def integrate_population(
    schedule: SweepSchedule,
    gamma: float,
    n0: float = 1.0,
    dt: float | None = None,
    threshold: float | None = 0.5,
    max_time: float | None = None,
) -> PopulationTrajectory:
    """Fixed-step RK4 integration of the linear relaxation ODE.

    Stops at the first sample with n_S <= threshold (that sample is kept so
    the crossing is bracketed), or raises NoCrossingError at max_time.
    Pass threshold=None to integrate to max_time unconditionally.
    """
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    if gamma > 0.1:
        warnings.warn(
            f"gamma={gamma} is not small compared to k_B*T; the rate equation "
            "assumes weak system-reservoir coupling",
            stacklevel=2,
        )
    if not 0.0 <= n0 <= 1.0:
        raise ValueError(f"initial population {n0} outside [0, 1]")
    if dt is None:
        dt = min(0.01 / gamma, schedule.tau / 1000.0)
    elif dt > 0.01 / gamma * (1 + 1e-12):
        raise ValueError(f"dt={dt} too coarse; require dt <= 0.01/gamma = {0.01 / gamma}")
    if max_time is None:
        max_time = schedule.tau + 20.0 / gamma

    nsteps = int(np.ceil(max_time / dt))
    # precompute the Fermi factor on the full and half grids
    t_grid = dt * np.arange(nsteps + 1)
    f_full = fermi_occupation(schedule.energy(t_grid)).tolist()
    f_half = fermi_occupation(schedule.energy(t_grid[:-1] + 0.5 * dt)).tolist()

    ns = [float(n0)]
    n = float(n0)
    g = float(gamma)
    kmax = nsteps
    crossed = threshold is not None and n <= threshold
    k = 0
    while not crossed and k < kmax:
        f0, fm, f1 = f_full[k], f_half[k], f_full[k + 1]
        k1 = -g * (n - f0)
        k2 = -g * (n + 0.5 * dt * k1 - fm)
        k3 = -g * (n + 0.5 * dt * k2 - fm)
        k4 = -g * (n + dt * k3 - f1)
        n = n + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        k += 1
        ns.append(n)
        if threshold is not None and n <= threshold:
            crossed = True

    if threshold is not None and not crossed:
        raise NoCrossingError(
            f"population never reached {threshold} before t={max_time} "
            f"(final n_S={n:.6f})"
        )

    times = t_grid[: len(ns)]
    populations = np.clip(np.array(ns), 0.0, 1.0)
    return PopulationTrajectory(
        times=times,
        populations=populations,
        energies=np.asarray(schedule.energy(times)),
        dt=dt,
        gamma=gamma,
        schedule=schedule,
    )


def find_half_population_time(traj: PopulationTrajectory, threshold: float = 0.5) -> float:
    """Linear-interpolated time at which the population first reaches threshold."""
    n = traj.populations
    below = np.nonzero(n <= threshold)[0]
    if below.size == 0:
        raise NoCrossingError(f"trajectory never reaches {threshold}")
    i = int(below[0])
    if i == 0:
        return 0.0
    if not n[i - 1] > threshold:
        raise ValueError("population not monotone across the crossing bracket")
    t0, t1 = traj.times[i - 1], traj.times[i]
    return float(t0 + (t1 - t0) * (n[i - 1] - threshold) / (n[i - 1] - n[i]))


def heat_dissipated(traj: PopulationTrajectory, threshold: float = 0.5) -> float:
    """-Q = -int_0^{t_f} eps_S(t) n_S'(t) dt, trapezoidal in time.

    n_S' is evaluated from the ODE right-hand side; the final partial step
    is handled by linear interpolation of the integrand to t_f.
    """
    t_f = find_half_population_time(traj, threshold)
    n = traj.populations
    i = int(np.nonzero(n <= threshold)[0][0])
    if i == 0:
        return 0.0
    g = traj.energies * traj.rhs()
    full = trapezoid(g[:i], traj.times[:i])
    frac = (t_f - traj.times[i - 1]) / (traj.times[i] - traj.times[i - 1])
    g_tf = g[i - 1] + (g[i] - g[i - 1]) * frac
    partial = (t_f - traj.times[i - 1]) * 0.5 * (g[i - 1] + g_tf)
    return float(-(full + partial))


def cumulative_heat(traj: PopulationTrajectory) -> np.ndarray:
    """-Q(t) at every sample time (cumulative trapezoid of -eps * n')."""
    g = traj.energies * traj.rhs()
    return -cumulative_trapezoid(g, traj.times, initial=0.0)


def sweep_heat_curve(
    eps1: float,
    eps2: float,
    gamma: float,
    gamma_tau_values,
    n0: float = 1.0,
    dt: float | None = None,
) -> list[tuple[float, float]]:
    """Table of (Gamma*tau, -Q) over a list of dimensionless sweep times."""
    gt = list(gamma_tau_values)
    if not gt:
        raise ValueError("gamma_tau list must be nonempty")
    rows = []
    for gtau in gt:
        schedule = SweepSchedule(eps1, eps2, float(gtau) / gamma)
        traj = integrate_population(schedule, gamma, n0=n0, dt=dt)
        rows.append((float(gtau), heat_dissipated(traj)))
    return rows


def find_zero_crossing(rows) -> float | None:
    """Interpolated Gamma*tau at which -Q changes sign, or None."""
    for (x0, y0), (x1, y1) in zip(rows, rows[1:]):
        if y0 == 0.0:
            return float(x0)
        if y0 * y1 < 0:
            return float(x0 + (x1 - x0) * y0 / (y0 - y1))
    if rows and rows[-1][1] == 0.0:
        return float(rows[-1][0])
    return None
