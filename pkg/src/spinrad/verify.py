"""Built-in verification suites behind the `verify` CLI subcommand.

Each suite exercises an identity the library must satisfy independently of
any particular scenario: wave flux normalization, response-function
symmetries, the superradiant window, and agreement between independent
evaluation paths of the same radiated power.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import C, HBAR, K_B
from .errors import PathConsistencyError
from .materials import ConstantLoss, Drude, Lorentz, epsilon, sphere_polarizability
from .radiation import QuadratureConfig, photon_spectrum, power_cylinder, power_sphere, SphereChannels
from .scattering import ChannelId
from .thermal import ThermalState, bose_occupation, thermal_weight
from .waves import all_wave_indices, flux_bracket


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    threshold: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        out = f"{status} {self.name}: measured {self.measured:.3e}, limit {self.threshold:.3e}"
        if self.detail:
            out += f" ({self.detail})"
        return out


def flux_identity_suite(n_theta: int = 32, n_phi: int = 32) -> list[CheckResult]:
    """flux_bracket(a, b) = delta_ab for every l <= 2 pair at three radii."""
    omega = 1.0e9
    indices = all_wave_indices(2)
    results = []
    for factor in (1.0, 2.0, 5.0):
        r = factor * C / omega
        worst = 0.0
        for a in indices:
            for b in indices:
                expected = 1.0 if a == b else 0.0
                val = flux_bracket(a, b, omega, r, n_theta, n_phi)
                worst = max(worst, abs(val - expected))
        results.append(
            CheckResult(
                name=f"flux_identity[r={factor:g}c/w]",
                passed=worst < 1e-8,
                measured=worst,
                threshold=1e-8,
                detail=f"{len(indices)**2} wave pairs",
            )
        )
    return results


def _builtin_models():
    return {
        "drude": Drude(plasma_frequency=1.37e16, damping=4.1e13),
        "lorentz": Lorentz(oscillator_strength=1.2, resonance=8.0e15, damping=5.0e13),
        "constant_loss": ConstantLoss(eps_real=2.0, eps_imag=0.5),
    }


def oddness_suite() -> list[CheckResult]:
    """Reflection symmetries of eps, alpha, the thermal weight and n_T."""
    results = []
    grid = np.geomspace(1e10, 1e16, 61)
    for name, model in _builtin_models().items():
        worst = 0.0
        for w in grid:
            e_plus = epsilon(model, float(w))
            e_minus = epsilon(model, float(-w))
            scale = max(abs(e_plus), 1.0)
            worst = max(worst, abs(e_minus - e_plus.conjugate()) / scale)
            a_plus = sphere_polarizability(model, 1e-8, float(w))
            a_minus = sphere_polarizability(model, 1e-8, float(-w))
            a_scale = max(abs(a_plus), 1e-300)
            worst = max(worst, abs(a_minus - a_plus.conjugate()) / a_scale)
        results.append(
            CheckResult(
                name=f"response_reflection[{name}]",
                passed=worst < 1e-14,
                measured=worst,
                threshold=1e-14,
            )
        )
    temperature = 300.0
    w_scale = K_B * temperature / HBAR
    worst_a = 0.0
    worst_n = 0.0
    for factor in np.geomspace(0.01, 50.0, 40):
        w = factor * w_scale
        a_plus = thermal_weight(w, temperature)
        a_minus = thermal_weight(-w, temperature)
        worst_a = max(worst_a, abs(a_plus + a_minus) / abs(a_plus))
        n_plus = bose_occupation(w, temperature)
        n_minus = bose_occupation(-w, temperature)
        worst_n = max(
            worst_n, abs(n_minus + 1.0 + n_plus) / max(1.0, abs(n_plus))
        )
    results.append(
        CheckResult(
            name="thermal_weight_odd",
            passed=worst_a < 1e-12,
            measured=worst_a,
            threshold=1e-12,
        )
    )
    results.append(
        CheckResult(
            name="occupation_reflection",
            passed=worst_n < 1e-12,
            measured=worst_n,
            threshold=1e-12,
        )
    )
    return results


def window_suite(grid_points: int = 1000) -> list[CheckResult]:
    """dN/dw vanishes above the window edge and |S| > 1 inside it."""
    angular_velocity = 1.0e9
    radius = 1.0e-8
    results = []
    channel = ChannelId(m=1, pol="E", l=1)
    for name, model in _builtin_models().items():
        provider = SphereChannels(model, radius, angular_velocity)
        above = angular_velocity * (1.0 + (np.arange(grid_points) + 1.0) / grid_points)
        worst_above = max(
            abs(photon_spectrum(channel, provider, angular_velocity, float(w)))
            for w in above
        )
        inside = angular_velocity * (np.arange(grid_points) + 0.5) / grid_points
        # photon_spectrum inside the window is exactly |S|^2 - 1
        min_gain = min(
            photon_spectrum(channel, provider, angular_velocity, float(w))
            for w in inside
        )
        ok = worst_above == 0.0 and min_gain > 0.0
        results.append(
            CheckResult(
                name=f"superradiant_window[{name}]",
                passed=ok,
                measured=worst_above if worst_above > 0 else -min_gain,
                threshold=0.0,
                detail=f"{grid_points} points above and inside the window",
            )
        )
    return results


def path_consistency_suite() -> list[CheckResult]:
    """Trace-engine power against the closed-form integrals, both bodies."""
    cfg = QuadratureConfig()
    model = ConstantLoss(eps_real=2.0, eps_imag=0.5)
    results = []
    try:
        sphere = power_sphere(model, 1.0e-8, 1.0e9, ThermalState(), cfg)
        rel = sphere.path_relative_difference
        results.append(
            CheckResult(
                name="path_consistency[sphere]",
                passed=rel is not None and rel < 1e-6,
                measured=math.nan if rel is None else rel,
                threshold=1e-6,
            )
        )
    except PathConsistencyError as exc:
        results.append(
            CheckResult(
                name="path_consistency[sphere]",
                passed=False, measured=math.inf, threshold=1e-6, detail=str(exc),
            )
        )
    try:
        cylinder = power_cylinder(model, 1.0e-8, 1.0e-6, 1.0e9, cfg)
        rel = cylinder.path_relative_difference
        results.append(
            CheckResult(
                name="path_consistency[cylinder]",
                passed=rel is not None and rel < 1e-8,
                measured=math.nan if rel is None else rel,
                threshold=1e-8,
            )
        )
    except PathConsistencyError as exc:
        results.append(
            CheckResult(
                name="path_consistency[cylinder]",
                passed=False, measured=math.inf, threshold=1e-8, detail=str(exc),
            )
        )
    return results


def run_all() -> list[CheckResult]:
    checks = []
    checks.extend(flux_identity_suite())
    checks.extend(oddness_suite())
    checks.extend(window_suite())
    checks.extend(path_consistency_suite())
    return checks
