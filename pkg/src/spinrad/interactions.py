"""Radiation-mediated torque and shear force on a small static test object.

A rotating sphere radiates only through its (l=1, m=1, E) channel at zero
temperature.  Translating that outgoing wave to a test object a distance d
away on the x axis and scattering it once yields a torque about z,

    M = (hbar c^2 / 8 pi d^2) int_0^Omega dw w^-2 (|S|^2 - 1)(1 - |s|^2),

and a tangential force along y,

    F_y = (hbar / 32 pi d) int_0^Omega dw (|S|^2 - 1)(1 - Re s),

where S and s are the rotator and test-object (1,1,E) amplitudes.  Both are
positive for passive lossy objects: the rotator drags its neighbourhood
along.  Only the first reflection is kept, and the static (zero-point)
part of the field correlations contributes to neither quantity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import C, HBAR
from .errors import DomainError, QuadratureAccuracyError, RegimeError
from .materials import DielectricModel, sphere_polarizability
from .quadrature import integrate_adaptive
from .radiation import QuadratureConfig
from .scattering import REGIME_GUARD, ChannelId

_SEPARATION_GUARD = 10.0

_ROTATOR_CHANNEL = ChannelId(m=1, pol="E", l=1)


@dataclass(frozen=True)
class TestObject:
    """Small static absorber: a polarizability model plus its position."""

    model: DielectricModel
    radius: float
    separation: float

    def __post_init__(self):
        if not (self.radius > 0.0):
            raise DomainError("test object needs radius > 0")
        if not (self.separation > 0.0):
            raise DomainError("test object needs separation > 0")


@dataclass(frozen=True)
class InteractionResult:
    torque: float  # N m, about z
    shear_force: float  # N, along y
    torque_error: float
    force_error: float


def translation_coefficients(omega: float, separation: float) -> tuple[complex, complex]:
    """Leading translation coefficients of the (1,1,E) outgoing wave.

    Returns (U_EE, U_ME): the overlap with the regular (1,1,E) wave at the
    shifted origin, h_0^(1)(w d / c), and with the regular (1,0,M) wave,
    (sqrt(2) w d / 4 c) h_0^(1)(w d / c).
    """
    from .waves import spherical_hankel1

    if not (omega > 0.0 and separation > 0.0):
        raise DomainError("translation coefficients need omega > 0 and separation > 0")
    h0 = spherical_hankel1(0, omega * separation / C)
    u_ee = h0
    u_me = (math.sqrt(2.0) * omega * separation / (4.0 * C)) * h0
    return u_ee, u_me


def stress_element(omega: float) -> float:
    """Stress-tensor contraction between the (1,0,M) and (1,1,E) waves.

    The closed-form frequency dependence is -pi c / (2 sqrt(2) w); it is the
    piece that turns the translated two-wave overlap into the tangential
    force integrand.
    """
    if not (omega > 0.0):
        raise DomainError("stress_element needs omega > 0")
    return -math.pi * C / (2.0 * math.sqrt(2.0) * omega)


def test_T_11E(
    test: TestObject, omega: float, *, override_regime_guard: bool = False
) -> complex:
    """(1,1,E) T amplitude i (2/3)(w/c)^3 beta(w) of the static test object."""
    if not (omega > 0.0):
        raise DomainError("test_T_11E needs omega > 0")
    size = omega * test.radius / C
    if size >= REGIME_GUARD and not override_regime_guard:
        raise RegimeError(
            f"regime guard violated: omega*r_test/c = {size:.4g} >= {REGIME_GUARD}"
        )
    beta = sphere_polarizability(test.model, test.radius, omega)
    return 1j * (2.0 / 3.0) * (omega / C) ** 3 * beta


def test_S_11E(
    test: TestObject, omega: float, *, override_regime_guard: bool = False
) -> complex:
    """(1,1,E) scattering amplitude of the static test object."""
    return 1.0 + 2.0 * test_T_11E(
        test, omega, override_regime_guard=override_regime_guard
    )


def _check_separation(provider, test: TestObject, separation: float) -> None:
    if not (separation > 0.0):
        raise DomainError("separation must be positive")
    largest = test.radius
    rotator_radius = getattr(provider, "radius", None)
    if rotator_radius is not None:
        largest = max(largest, rotator_radius)
    if separation <= _SEPARATION_GUARD * largest:
        raise RegimeError(
            f"separation {separation:.4g} m must exceed {_SEPARATION_GUARD} x the "
            f"largest body radius ({largest:.4g} m) for the one-reflection result"
        )


def _rotator_t(provider, omega: float) -> complex:
    t_block = getattr(provider, "t_block", None)
    if t_block is not None:
        return complex(t_block(_ROTATOR_CHANNEL, omega)[0][0])
    return 0.5 * (complex(provider.block(_ROTATOR_CHANNEL, omega).S[0, 0]) - 1.0)


def _rotator_gain(provider, omega: float, linearized: bool) -> float:
    # |S|^2 - 1 for S = 1 + 2T, without the roundoff of forming S
    t = _rotator_t(provider, omega)
    gain = 4.0 * t.real
    if not linearized:
        gain += 4.0 * abs(t) ** 2
    return gain


def torque_on_test(
    provider,
    test: TestObject,
    angular_velocity: float,
    separation: float | None = None,
    cfg: QuadratureConfig | None = None,
    *,
    linearized: bool = True,
    override_regime_guard: bool = False,
) -> float:
    """Torque (N m) exerted on the test object by the rotator's radiation."""
    value, _ = _torque_with_error(
        provider, test, angular_velocity, separation, cfg,
        linearized=linearized, override_regime_guard=override_regime_guard,
    )
    return value


def _torque_with_error(
    provider, test, angular_velocity, separation, cfg, *, linearized, override_regime_guard
):
    d = test.separation if separation is None else separation
    cfg = cfg or QuadratureConfig()
    _check_separation(provider, test, d)
    if angular_velocity <= 0.0:
        return 0.0, 0.0
    prefactor = HBAR * C * C / (8.0 * math.pi * d * d)

    def integrand(w):
        gain = _rotator_gain(provider, w, linearized)
        t_test = test_T_11E(test, w, override_regime_guard=override_regime_guard)
        absorb = -4.0 * t_test.real  # 1 - |s|^2 to linear order
        if not linearized:
            absorb -= 4.0 * abs(t_test) ** 2
        return prefactor * gain * absorb / (w * w)

    try:
        res = integrate_adaptive(
            integrand, 0.0, angular_velocity,
            rel_tol=cfg.rel_tol, abs_floor=cfg.abs_floor,
            max_panels=cfg.max_panels, split_points=cfg.split_points,
        )
    except QuadratureAccuracyError as exc:
        raise QuadratureAccuracyError(
            f"torque integral: {exc}",
            partial_value=exc.partial_value, partial_error=exc.partial_error,
        ) from exc
    return res.value, res.error


def shear_force_on_test(
    provider,
    test: TestObject,
    angular_velocity: float,
    separation: float | None = None,
    cfg: QuadratureConfig | None = None,
    *,
    linearized: bool = True,
    s_10m: complex = 1.0,
    override_regime_guard: bool = False,
) -> float:
    """Tangential (y) force in newtons on the test object.

    ``s_10m`` is the magnetic-dipole amplitude of the test object, fixed to
    exactly 1 for non-magnetic bodies; pass a different value to probe the
    sensitivity of that approximation through the unapproximated two-channel
    combination 1 - Re[conj(s_10M) s_11E].
    """
    value, _ = _force_with_error(
        provider, test, angular_velocity, separation, cfg,
        linearized=linearized, s_10m=s_10m,
        override_regime_guard=override_regime_guard,
    )
    return value


def _force_with_error(
    provider, test, angular_velocity, separation, cfg, *,
    linearized, s_10m, override_regime_guard,
):
    d = test.separation if separation is None else separation
    cfg = cfg or QuadratureConfig()
    _check_separation(provider, test, d)
    if angular_velocity <= 0.0:
        return 0.0, 0.0
    prefactor = HBAR / (32.0 * math.pi * d)

    s_10m = complex(s_10m)

    def integrand(w):
        gain = _rotator_gain(provider, w, linearized)
        t_test = test_T_11E(test, w, override_regime_guard=override_regime_guard)
        # 1 - Re[conj(s_10M) s_11E] with s_11E = 1 + 2T, kept cancellation-free;
        # for s_10M = 1 this is exactly -2 Re T = (4/3)(w/c)^3 Im beta
        drag = (1.0 - s_10m.conjugate().real) - 2.0 * (s_10m.conjugate() * t_test).real
        return prefactor * gain * drag

    try:
        res = integrate_adaptive(
            integrand, 0.0, angular_velocity,
            rel_tol=cfg.rel_tol, abs_floor=cfg.abs_floor,
            max_panels=cfg.max_panels, split_points=cfg.split_points,
        )
    except QuadratureAccuracyError as exc:
        raise QuadratureAccuracyError(
            f"shear force integral: {exc}",
            partial_value=exc.partial_value, partial_error=exc.partial_error,
        ) from exc
    return res.value, res.error


def radiation_interaction(
    provider,
    test: TestObject,
    angular_velocity: float,
    separation: float | None = None,
    cfg: QuadratureConfig | None = None,
    *,
    linearized: bool = True,
    override_regime_guard: bool = False,
) -> InteractionResult:
    """Torque and shear force together, with quadrature error estimates."""
    torque, torque_err = _torque_with_error(
        provider, test, angular_velocity, separation, cfg,
        linearized=linearized, override_regime_guard=override_regime_guard,
    )
    force, force_err = _force_with_error(
        provider, test, angular_velocity, separation, cfg,
        linearized=linearized, s_10m=1.0,
        override_regime_guard=override_regime_guard,
    )
    return InteractionResult(
        torque=torque, shear_force=force,
        torque_error=torque_err, force_error=force_err,
    )


def presimplified_shear_integrand(
    omega: float,
    separation: float,
    s_rotator: complex,
    s_test: complex,
    s_10m: complex = 1.0,
) -> float:
    """Shear-force integrand assembled from its translation/stress pieces.

    Combines the translated two-wave overlap U_ME conj(U_EE), the stress
    contraction (whose closed form carries the surface-integral factor pi,
    divided back out here) and the test-object amplitudes:

        (hbar / 4 pi) (w/c)^2 (|S|^2 - 1) Re[U_ME conj(U_EE)]
            * (-stress_element / pi) * (1 - Re[conj(s_10M) s_11E])

    which reduces to the integrand of :func:`shear_force_on_test`,
    hbar (|S|^2 - 1)(1 - Re s) / (32 pi d), identically in omega and d.
    """
    u_ee, u_me = translation_coefficients(omega, separation)
    overlap = (u_me * u_ee.conjugate()).real
    gain = abs(s_rotator) ** 2 - 1.0
    drag = 1.0 - (complex(s_10m).conjugate() * complex(s_test)).real
    return (
        (HBAR / (4.0 * math.pi))
        * (omega / C) ** 2
        * gain
        * overlap
        * (-stress_element(omega) / math.pi)
        * drag
    )


INTERACTION_CSV_HEADER = "d_m,Omega_rad_s,M_Nm,Fy_N"


def write_interaction_csv(path, rows) -> None:
    """Write sweep rows of (separation, angular velocity, torque, force)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(INTERACTION_CSV_HEADER + "\n")
        for d, omega_rot, torque, force in rows:
            fh.write(
                f"{float(d)!r},{float(omega_rot)!r},{float(torque)!r},{float(force)!r}\n"
            )
