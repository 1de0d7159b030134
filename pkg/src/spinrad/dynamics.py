"""Spin-down of a rotating body from its spontaneous radiation.

Energy balance I Omega dOmega/dt = -P(Omega) drives the trajectory; the
radiated power is an expensive double integral, so it is memoized on a
logarithmic grid of rotation rates and interpolated with a cubic spline
(log-log where the power is everywhere positive).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline

from .constants import C, HBAR
from .errors import DomainError, StiffnessError, UnsupportedChannelError
from .materials import DielectricModel
from .radiation import QuadratureConfig, power_cylinder, power_sphere
from .scattering import REGIME_GUARD
from .thermal import ThermalState


@dataclass(frozen=True)
class BodySpec:
    """Rotating body: geometry plus kinematic and thermal state."""

    kind: str  # "sphere" | "cylinder"
    radius: float
    length: float | None = None
    angular_velocity: float = 0.0
    temperature: float = 0.0
    environment_temperature: float = 0.0

    def __post_init__(self):
        if self.kind not in ("sphere", "cylinder"):
            raise DomainError(f"body kind must be 'sphere' or 'cylinder', got {self.kind!r}")
        if not (self.radius > 0.0):
            raise DomainError("body radius must be positive")
        if self.kind == "cylinder":
            if self.length is None or not (self.length > 0.0):
                raise DomainError("cylinder needs length > 0")
        if self.angular_velocity < 0.0:
            raise DomainError("angular velocity must be non-negative")
        if self.temperature < 0.0 or self.environment_temperature < 0.0:
            raise DomainError("temperatures must be non-negative")

    def thermal_state(self) -> ThermalState:
        return ThermalState(
            temperature=self.temperature,
            environment_temperature=self.environment_temperature,
            angular_velocity=self.angular_velocity,
        )


@dataclass(frozen=True)
class SpinDownScenario:
    body: BodySpec
    moment_of_inertia: float
    model: DielectricModel
    omega0: float
    t_end: float

    def __post_init__(self):
        if not (self.moment_of_inertia > 0.0):
            raise DomainError("moment of inertia must be positive")
        if not (self.omega0 > 0.0):
            raise DomainError("initial angular velocity must be positive")
        if not (self.t_end > 0.0):
            raise DomainError("t_end must be positive")
        guard = self.omega0 * self.body.radius / C
        if guard >= REGIME_GUARD:
            raise DomainError(
                f"Omega0*R/c = {guard:.4g} violates the slow-rotation guard "
                f"{REGIME_GUARD}; spin-down only shrinks Omega, so the whole "
                "trajectory would be outside validity"
            )


@dataclass(frozen=True)
class SpinDownTrajectory:
    """Sampled trajectory (t, Omega, P) plus the decade spin-down time."""

    t: np.ndarray = field(repr=False)
    omega: np.ndarray = field(repr=False)
    power: np.ndarray = field(repr=False)
    t10: float = math.nan  # time for Omega to reach Omega(0)/10, nan if not reached


def spin_down_timescale(scenario: SpinDownScenario) -> float:
    """Order-of-magnitude spin-down time (I/hbar) c^3 / (L R^2 Omega^3).

    Only defined for cylinders (the estimate is a nanotube one); the
    dimensionless prefactor is taken as exactly 1.
    """
    body = scenario.body
    if body.kind != "cylinder":
        raise UnsupportedChannelError(
            "spin-down timescale estimate applies to cylinder bodies only"
        )
    return (
        scenario.moment_of_inertia
        / HBAR
        * C**3
        / (body.length * body.radius**2 * scenario.omega0**3)
    )


class _PowerTable:
    """P(Omega) memoized on a log grid with cubic interpolation."""

    def __init__(self, scenario, cfg, points_per_decade, override):
        self._scenario = scenario
        self._cfg = cfg
        self._per_decade = points_per_decade
        self._override = override
        self._lo = scenario.omega0 / 10.0 ** 1.5
        self._hi = scenario.omega0
        self._build()

    def _power_at(self, omega_rot: float) -> float:
        sc = self._scenario
        body = sc.body
        if body.kind == "cylinder":
            res = power_cylinder(
                sc.model, body.radius, body.length, omega_rot, self._cfg,
                mode="linear_in_t", override_regime_guard=self._override,
            )
        else:
            res = power_sphere(
                sc.model, body.radius, omega_rot, ThermalState(), self._cfg,
                override_regime_guard=self._override,
            )
        return res.total_power

    def _build(self):
        n = max(4, int(round(self._per_decade * math.log10(self._hi / self._lo))) + 1)
        grid = np.geomspace(self._lo, self._hi, n)
        values = np.array([self._power_at(w) for w in grid])
        self._grid = grid
        self._values = values
        if np.all(values > 0.0):
            self._spline = CubicSpline(np.log(grid), np.log(values))
            self._positive = True
        elif np.all(values == 0.0):
            self._spline = None
            self._positive = False
        else:
            self._spline = CubicSpline(np.log(grid), values)
            self._positive = False

    @property
    def floor(self) -> float:
        return self._lo

    def extend_down(self) -> None:
        self._lo /= 10.0
        self._build()

    def __call__(self, omega_rot: float) -> float:
        if self._spline is None:
            return 0.0
        x = math.log(min(max(omega_rot, self._lo), self._hi))
        if self._positive:
            return math.exp(float(self._spline(x)))
        return max(float(self._spline(x)), 0.0)


def integrate_spin_down(
    scenario: SpinDownScenario,
    cfg: QuadratureConfig | None = None,
    *,
    samples: int = 20001,
    rtol: float = 1e-10,
    points_per_decade: int = 24,
    override_regime_guard: bool = False,
) -> SpinDownTrajectory:
    """Integrate the energy-balance ODE with an adaptive embedded RK45 pair.

    Omega(t) is strictly decreasing whenever the body radiates; the sampled
    trajectory is dense enough for trapezoidal energy bookkeeping.
    """
    cfg = cfg or QuadratureConfig()
    table = _PowerTable(scenario, cfg, points_per_decade, override_regime_guard)
    inertia = scenario.moment_of_inertia
    omega0 = scenario.omega0
    target10 = omega0 / 10.0

    def rhs(t, y):
        w = y[0]
        return (-table(w) / (inertia * w),)

    def hit_floor(t, y):
        return y[0] - table.floor * 1.05

    hit_floor.terminal = True
    hit_floor.direction = -1

    def hit_tenth(t, y):
        return y[0] - target10

    hit_tenth.terminal = False
    hit_tenth.direction = -1

    segments = []
    t_now, w_now = 0.0, omega0
    t10 = math.nan
    for _ in range(12):  # each retry extends the power table one decade down
        sol = solve_ivp(
            rhs,
            (t_now, scenario.t_end),
            (w_now,),
            method="RK45",
            rtol=rtol,
            atol=omega0 * 1e-14,
            dense_output=True,
            events=(hit_floor, hit_tenth),
        )
        if not sol.success:
            raise StiffnessError(f"spin-down integration failed: {sol.message}")
        segments.append(sol)
        if math.isnan(t10) and sol.t_events[1].size:
            t10 = float(sol.t_events[1][0])
        if sol.status == 1 and sol.t_events[0].size:  # hit the table floor
            t_now = float(sol.t_events[0][0])
            w_now = float(sol.y_events[0][0][0])
            table.extend_down()
            continue
        break
    else:
        raise StiffnessError("spin-down trajectory left the tabulated power range")

    t_final = segments[-1].t[-1]
    t_grid = np.linspace(0.0, t_final, samples)
    omega_grid = np.empty_like(t_grid)
    for seg in segments:
        mask = (t_grid >= seg.t[0]) & (t_grid <= seg.t[-1])
        if np.any(mask):
            omega_grid[mask] = seg.sol(t_grid[mask])[0]
    power_grid = np.array([table(w) for w in omega_grid])
    return SpinDownTrajectory(t=t_grid, omega=omega_grid, power=power_grid, t10=t10)


TRAJECTORY_CSV_HEADER = "t_s,Omega_rad_s,P_W"


def write_trajectory_csv(path, trajectory: SpinDownTrajectory) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(TRAJECTORY_CSV_HEADER + "\n")
        for t, w, p in zip(trajectory.t, trajectory.omega, trajectory.power):
            fh.write(f"{float(t)!r},{float(w)!r},{float(p)!r}\n")
