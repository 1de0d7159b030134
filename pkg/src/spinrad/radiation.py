"""Radiated power and photon spectra of rotating bodies.

The central routine is :func:`trace_power`, which integrates

    P = int_0^inf (dw / 2 pi) hbar w  sum_channels
        [n_T(w - Omega m) - n_T0(w)] Tr[I - S^dag S]

over frequency with adaptive Gauss-Kronrod panels split at every window
edge Omega*m.  Sphere and cylinder front ends evaluate the same quantity
through independent closed-form expressions and refuse to return results
when the two paths disagree.

At zero temperature each channel radiates only inside its superradiant
window 0 < w < Omega*m, where the spectral photon flux is
dN/dw = |S|^2 - 1 > 0.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from .constants import C, HBAR, K_B
from .errors import (
    DomainError,
    PathConsistencyError,
    QuadratureAccuracyError,
)
from .materials import DielectricModel, cylinder_surface_factor, sphere_polarizability
from .quadrature import integrate_adaptive
from .scattering import (
    ChannelId,
    SMatrixBlock,
    check_sphere_regime,
    sphere_S_general,
    sphere_T_general,
)
from .thermal import ThermalState, occupation_difference

# width of the Boltzmann tail kept beyond the last window edge at finite T
_THERMAL_TAIL = 40.0
_MAX_WINDOW_SPLITS = 128

SPHERE_PATH_TOL = 1e-6
CYLINDER_PATH_TOL = 1e-8

_MODES = ("full_s", "linear_in_t")


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and domain-control knobs for the frequency integrals."""

    rel_tol: float = 1e-10
    abs_floor: float = 0.0  # watts
    max_panels: int = 4000
    split_points: tuple[float, ...] = ()

    def __post_init__(self):
        if self.rel_tol <= 0:
            raise DomainError("rel_tol must be positive")
        if self.max_panels < 1:
            raise DomainError("max_panels must be >= 1")


@dataclass(frozen=True)
class TruncationReport:
    highest_m: int
    channels_evaluated: int
    total_panels: int
    kz_nodes: int | None = None


@dataclass(frozen=True)
class ChannelSpectrum:
    channel: ChannelId
    omega: np.ndarray = field(repr=False)
    dP_domega: np.ndarray = field(repr=False)
    dN_domega: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class RadiationResult:
    total_power: float
    per_channel: dict
    quadrature_error: float
    truncation: TruncationReport
    spectra: tuple[ChannelSpectrum, ...] = ()
    closed_form_power: float | None = None
    path_relative_difference: float | None = None


class SphereChannels:
    """Channel provider for the electric-dipole response of a small sphere."""

    def __init__(
        self,
        model: DielectricModel,
        radius: float,
        angular_velocity: float,
        override_regime_guard: bool = False,
    ):
        if not (radius > 0.0):
            raise DomainError("sphere radius must be positive")
        if angular_velocity < 0.0:
            raise DomainError("angular velocity must be non-negative")
        self.model = model
        self.radius = radius
        self.angular_velocity = angular_velocity
        self.override_regime_guard = override_regime_guard

    def channels(self) -> tuple[ChannelId, ...]:
        return tuple(ChannelId(m=m, pol="E", l=1) for m in (-1, 0, 1))

    def omega_support(self, channel: ChannelId):
        return None

    def block(self, channel: ChannelId, omega: float) -> SMatrixBlock:
        s = sphere_S_general(
            self.model,
            self.radius,
            self.angular_velocity,
            omega,
            channel.l if channel.l is not None else 1,
            channel.m,
            override_regime_guard=self.override_regime_guard,
        )
        return SMatrixBlock(channel=channel, omega=omega, S=np.array([[s]]))

    def t_block(self, channel: ChannelId, omega: float) -> np.ndarray:
        t = sphere_T_general(
            self.model,
            self.radius,
            self.angular_velocity,
            omega,
            channel.l if channel.l is not None else 1,
            channel.m,
            override_regime_guard=self.override_regime_guard,
        )
        return np.array([[t]])


def _t_matrix(provider, channel: ChannelId, omega: float) -> np.ndarray:
    """T block of a channel, taken directly from the provider when it can
    supply one (analytic bodies) and from (S - I)/2 otherwise (tabulated
    data carries S at its own input precision anyway)."""
    t_block = getattr(provider, "t_block", None)
    if t_block is not None:
        return np.atleast_2d(np.asarray(t_block(channel, omega), dtype=complex))
    S = provider.block(channel, omega).S
    return 0.5 * (S - np.eye(S.shape[0], dtype=complex))


def _deficiency_trace_from_t(T: np.ndarray, mode: str) -> float:
    """Tr[I - S^dag S] for S = I + 2T, evaluated without forming S.

    Equals -4 Re Tr T - 4 sum |T_ij|^2; the linear-in-T variant keeps only
    the first term.
    """
    linear = -4.0 * float(np.trace(T).real)
    if mode == "linear_in_t":
        return linear
    return linear - 4.0 * float(np.sum(np.abs(T) ** 2))


def _channel_domain(m: int, state: ThermalState, support):
    T, T0 = state.temperature, state.environment_temperature
    omega_rot = state.angular_velocity
    if T == 0.0 and T0 == 0.0:
        if m >= 1 and omega_rot > 0.0:
            lo, hi = 0.0, omega_rot * m
        else:
            return None
    else:
        lo = 0.0
        hi = omega_rot * max(m, 0) + _THERMAL_TAIL * K_B * max(T, T0) / HBAR
        if hi <= 0.0:
            return None
    if support is not None:
        lo = max(lo, support[0])
        hi = min(hi, support[1])
        if hi <= lo:
            return None
    return lo, hi


def _window_splits(lo: float, hi: float, state: ThermalState, cfg: QuadratureConfig):
    splits = [p for p in cfg.split_points if lo < p < hi]
    omega_rot = state.angular_velocity
    if omega_rot > 0.0:
        j = 1
        while j <= _MAX_WINDOW_SPLITS:
            edge = omega_rot * j
            if edge >= hi:
                break
            if edge > lo:
                splits.append(edge)
            j += 1
    return tuple(splits)


def _channel_power(provider, channel: ChannelId, state, cfg, mode):
    domain = _channel_domain(channel.m, state, provider.omega_support(channel))
    if domain is None:
        return 0.0, 0.0, 0
    lo, hi = domain

    def integrand(w):
        occ = occupation_difference(w, channel.m, state)
        if occ == 0.0:
            return 0.0
        T = _t_matrix(provider, channel, w)
        return (HBAR / (2.0 * math.pi)) * w * occ * _deficiency_trace_from_t(T, mode)

    try:
        res = integrate_adaptive(
            integrand,
            lo,
            hi,
            rel_tol=cfg.rel_tol,
            abs_floor=cfg.abs_floor,
            max_panels=cfg.max_panels,
            split_points=_window_splits(lo, hi, state, cfg),
        )
    except QuadratureAccuracyError as exc:
        raise QuadratureAccuracyError(
            f"channel {channel}: {exc}",
            partial_value=exc.partial_value,
            partial_error=exc.partial_error,
        ) from exc
    return res.value, res.error, res.panels


def _channel_spectrum(provider, channel, state, cfg, mode, points):
    domain = _channel_domain(channel.m, state, provider.omega_support(channel))
    if domain is None or points <= 0:
        return None
    lo, hi = domain
    # midpoint grid: never touches w = 0 or a window edge
    omega = lo + (hi - lo) * (np.arange(points) + 0.5) / points
    dN = np.empty(points)
    for i, w in enumerate(omega):
        occ = occupation_difference(float(w), channel.m, state)
        if occ == 0.0:
            dN[i] = 0.0
        else:
            T = _t_matrix(provider, channel, float(w))
            dN[i] = occ * _deficiency_trace_from_t(T, mode)
    dP = (HBAR / (2.0 * math.pi)) * omega * dN
    return ChannelSpectrum(channel=channel, omega=omega, dP_domega=dP, dN_domega=dN)


def trace_power(
    provider,
    state: ThermalState,
    cfg: QuadratureConfig,
    *,
    mode: str = "full_s",
    threads: int = 1,
    spectrum_points: int = 0,
) -> RadiationResult:
    """Channel-summed radiated power through the scattering-deficiency trace.

    Channels are processed in order of increasing |m|; the m sum stops once
    two consecutive m groups contribute less than rel_tol times the running
    total (window edges scale with m but Boltzmann weights decide which m
    dominate at finite temperature, so truncation goes by measured
    contribution, not by a fixed cutoff).
    """
    if mode not in _MODES:
        raise DomainError(f"mode must be one of {_MODES}")
    channels = sorted(provider.channels(), key=lambda c: c.sort_key())
    if not channels:
        raise DomainError("channel provider yields no channels")

    groups: dict[int, list[ChannelId]] = {}
    for ch in channels:
        groups.setdefault(ch.m, []).append(ch)
    ordered_m = sorted(groups, key=lambda m: (abs(m), m))

    per_channel: dict[ChannelId, float] = {}
    errors: list[float] = []
    panels_total = 0
    highest_m = 0
    running = 0.0
    consecutive_negligible = 0
    evaluated: list[ChannelId] = []

    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        for m in ordered_m:
            group = groups[m]
            if pool is not None:
                results = list(
                    pool.map(
                        lambda ch: _channel_power(provider, ch, state, cfg, mode),
                        group,
                    )
                )
            else:
                results = [_channel_power(provider, ch, state, cfg, mode) for ch in group]
            group_value = math.fsum(r[0] for r in results)
            for ch, (val, err, pan) in zip(group, results):
                per_channel[ch] = val
                errors.append(err)
                panels_total += pan
                evaluated.append(ch)
            highest_m = max(highest_m, abs(m))
            threshold = max(cfg.rel_tol * abs(running), cfg.abs_floor)
            if running != 0.0 and abs(group_value) < threshold:
                consecutive_negligible += 1
            else:
                consecutive_negligible = 0
            running = math.fsum(per_channel[ch] for ch in evaluated)
            if consecutive_negligible >= 2:
                break
    finally:
        if pool is not None:
            pool.shutdown(wait=True)

    ordered_channels = sorted(per_channel, key=lambda c: c.sort_key())
    total = math.fsum(per_channel[ch] for ch in ordered_channels)
    quad_error = math.fsum(sorted(errors))

    spectra = []
    if spectrum_points > 0:
        for ch in ordered_channels:
            spec = _channel_spectrum(provider, ch, state, cfg, mode, spectrum_points)
            if spec is not None:
                spectra.append(spec)

    return RadiationResult(
        total_power=total,
        per_channel={ch: per_channel[ch] for ch in ordered_channels},
        quadrature_error=quad_error,
        truncation=TruncationReport(
            highest_m=highest_m,
            channels_evaluated=len(evaluated),
            total_panels=panels_total,
        ),
        spectra=tuple(spectra),
    )


def photon_spectrum(
    channel: ChannelId,
    provider,
    angular_velocity: float,
    omega: float,
    *,
    mode: str = "full_s",
) -> float:
    """Zero-temperature photon flux dN/dw of one channel at one frequency.

    Theta(Omega m - w) * Tr[S^dag S - I]: zero outside the superradiant
    window (including its edge), positive inside for lossy bodies.
    """
    if mode not in _MODES:
        raise DomainError(f"mode must be one of {_MODES}")
    if channel.m < 1 or omega <= 0.0 or omega >= angular_velocity * channel.m:
        return 0.0
    T = _t_matrix(provider, channel, omega)
    return -_deficiency_trace_from_t(T, mode)


def _empty_result(channel: ChannelId | None = None, kz_nodes: int | None = None):
    per = {} if channel is None else {channel: 0.0}
    return RadiationResult(
        total_power=0.0,
        per_channel=per,
        quadrature_error=0.0,
        truncation=TruncationReport(
            highest_m=0, channels_evaluated=len(per), total_panels=0, kz_nodes=kz_nodes
        ),
    )


def _relative_difference(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    if scale == 0.0:
        return 0.0
    return abs(a - b) / scale


def power_sphere(
    model: DielectricModel,
    radius: float,
    angular_velocity: float,
    state: ThermalState,
    cfg: QuadratureConfig,
    *,
    override_regime_guard: bool = False,
    threads: int = 1,
    spectrum_points: int = 0,
) -> RadiationResult:
    """Radiated power of a small rotating sphere.

    Runs the generic channel trace (dipole channels, linear-in-T deficiency
    to match the order at which the sphere amplitude is itself valid) and,
    at zero temperature, also the closed-form frequency integral

        P = (4 hbar / 3 pi c^3) int_0^Omega dw w^4 |Im alpha(w - Omega)|.

    Both values are reported; disagreement beyond 1e-6 relative raises a
    consistency error.
    """
    eff_state = ThermalState(
        temperature=state.temperature,
        environment_temperature=state.environment_temperature,
        angular_velocity=angular_velocity,
    )
    provider = SphereChannels(model, radius, angular_velocity, override_regime_guard)
    result = trace_power(
        provider,
        eff_state,
        cfg,
        mode="linear_in_t",
        threads=threads,
        spectrum_points=spectrum_points,
    )
    zero_t = state.temperature == 0.0 and state.environment_temperature == 0.0
    if not zero_t or angular_velocity <= 0.0:
        return result

    def closed_integrand(w):
        alpha = sphere_polarizability(model, radius, w - angular_velocity)
        loss = -alpha.imag
        if loss < 0.0:
            raise PathConsistencyError(
                f"sphere loss factor turned negative at omega = {w:.6g} "
                "(passivity violated)"
            )
        return (4.0 * HBAR / (3.0 * math.pi * C**3)) * w**4 * loss

    closed = integrate_adaptive(
        closed_integrand,
        0.0,
        angular_velocity,
        rel_tol=cfg.rel_tol,
        abs_floor=cfg.abs_floor,
        max_panels=cfg.max_panels,
        split_points=cfg.split_points,
    )
    rel = _relative_difference(result.total_power, closed.value)
    if rel > SPHERE_PATH_TOL:
        raise PathConsistencyError(
            f"sphere trace power {result.total_power:.9e} W and closed form "
            f"{closed.value:.9e} W disagree by {rel:.3e} relative "
            f"(> {SPHERE_PATH_TOL})",
            first=result.total_power,
            second=closed.value,
        )
    return replace(result, closed_form_power=closed.value, path_relative_difference=rel)


@lru_cache(maxsize=8)
def _leggauss(n: int):
    nodes, weights = np.polynomial.legendre.leggauss(n)
    return nodes, weights


def _cylinder_kz_sum(model, radius, angular_velocity, omega, mode, kz_nodes, override):
    """Integral over propagating kz of sum_PP' (|delta + 2T|^2 - delta)."""
    check_sphere_regime(model, radius, angular_velocity, omega, 1, override)
    f = cylinder_surface_factor(model, omega - angular_velocity)
    pref = 0.25j * math.pi * f * radius * radius
    w_c = omega / C
    nodes, weights = _leggauss(kz_nodes)
    kz = w_c * nodes  # scaled to [-w/c, w/c]
    t_mm = pref * w_c * w_c * np.ones_like(kz)
    t_ee = pref * kz * kz
    t_me = pref * w_c * kz
    linear = 4.0 * (t_mm.real + t_ee.real)
    if mode == "linear_in_t":
        vals = linear
    else:
        vals = linear + 4.0 * (
            np.abs(t_mm) ** 2 + np.abs(t_ee) ** 2 + 2.0 * np.abs(t_me) ** 2
        )
    return w_c * float(np.sum(weights * vals))


def power_cylinder(
    model: DielectricModel,
    radius: float,
    length: float,
    angular_velocity: float,
    cfg: QuadratureConfig,
    mode: str = "linear_in_t",
    *,
    override_regime_guard: bool = False,
    kz_nodes: int = 32,
    spectrum_points: int = 0,
) -> RadiationResult:
    """Zero-temperature radiated power of a thin rotating cylinder (m = 1).

    ``linear_in_t`` integrates 2(Re T_MM + Re T_EE) over the propagating
    axial wavenumbers and must match the closed form

        P = (2 hbar L R^2 / 3 pi c^3) int_0^Omega dw w^4 |Im (eps-1)/(eps+1)|

    to 1e-8 relative; ``full_s`` keeps the complete |delta + 2T|^2 sum,
    whose relative excess over the linear result shrinks as R^2.
    """
    if mode not in _MODES:
        raise DomainError(f"mode must be one of {_MODES}")
    if not (radius > 0.0 and length > 0.0):
        raise DomainError("cylinder needs radius > 0 and length > 0")
    channel = ChannelId(m=1, pol="ME")
    if angular_velocity <= 0.0:
        return _empty_result(channel, kz_nodes)

    def integrand(w):
        s = _cylinder_kz_sum(
            model, radius, angular_velocity, w, mode, kz_nodes, override_regime_guard
        )
        return (HBAR * w / (2.0 * math.pi)) * (length / (2.0 * math.pi)) * s

    res = integrate_adaptive(
        integrand,
        0.0,
        angular_velocity,
        rel_tol=cfg.rel_tol,
        abs_floor=cfg.abs_floor,
        max_panels=cfg.max_panels,
        split_points=cfg.split_points,
    )

    def closed_integrand(w):
        loss = -cylinder_surface_factor(model, w - angular_velocity).imag
        if loss < 0.0:
            raise PathConsistencyError(
                f"cylinder loss factor turned negative at omega = {w:.6g} "
                "(passivity violated)"
            )
        return (2.0 * HBAR * length * radius**2 / (3.0 * math.pi * C**3)) * w**4 * loss

    closed = integrate_adaptive(
        closed_integrand,
        0.0,
        angular_velocity,
        rel_tol=cfg.rel_tol,
        abs_floor=cfg.abs_floor,
        max_panels=cfg.max_panels,
        split_points=cfg.split_points,
    )
    rel = _relative_difference(res.value, closed.value)
    if mode == "linear_in_t" and rel > CYLINDER_PATH_TOL:
        raise PathConsistencyError(
            f"cylinder kz-resolved power {res.value:.9e} W and closed form "
            f"{closed.value:.9e} W disagree by {rel:.3e} relative "
            f"(> {CYLINDER_PATH_TOL})",
            first=res.value,
            second=closed.value,
        )

    spectra = ()
    if spectrum_points > 0:
        omega = angular_velocity * (np.arange(spectrum_points) + 0.5) / spectrum_points
        dN = np.array(
            [
                (length / (2.0 * math.pi))
                * _cylinder_kz_sum(
                    model, radius, angular_velocity, float(w), mode, kz_nodes,
                    override_regime_guard,
                )
                for w in omega
            ]
        )
        dP = (HBAR / (2.0 * math.pi)) * omega * dN
        spectra = (
            ChannelSpectrum(channel=channel, omega=omega, dP_domega=dP, dN_domega=dN),
        )

    return RadiationResult(
        total_power=res.value,
        per_channel={channel: res.value},
        quadrature_error=res.error,
        truncation=TruncationReport(
            highest_m=1,
            channels_evaluated=1,
            total_panels=res.panels + closed.panels,
            kz_nodes=kz_nodes,
        ),
        spectra=spectra,
        closed_form_power=closed.value,
        path_relative_difference=rel,
    )


def static_radiation(
    provider,
    state: ThermalState,
    cfg: QuadratureConfig,
    *,
    threads: int = 1,
    spectrum_points: int = 0,
) -> RadiationResult:
    """Thermal emission/absorption balance of a non-rotating body.

    P = int_0^inf (dw/2pi) hbar w (n_T - n_T0) sum_channels Tr[I - S^dag S];
    positive when the body is hotter than the environment.
    """
    if state.angular_velocity != 0.0:
        raise DomainError("static_radiation requires angular_velocity = 0")
    return trace_power(
        provider,
        state,
        cfg,
        mode="full_s",
        threads=threads,
        spectrum_points=spectrum_points,
    )


SPECTRUM_CSV_HEADER = (
    "omega_rad_s,dP_domega_W_per_rad_s,dN_domega_per_s_per_rad_s,channel_m,channel_P"
)


def write_spectrum_csv(path, result: RadiationResult) -> None:
    """Write sampled spectra, one row per (channel, frequency)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(SPECTRUM_CSV_HEADER + "\n")
        for spec in result.spectra:
            ch = spec.channel
            for w, dp, dn in zip(spec.omega, spec.dP_domega, spec.dN_domega):
                fh.write(f"{float(w)!r},{float(dp)!r},{float(dn)!r},{ch.m},{ch.pol}\n")
