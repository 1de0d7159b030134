"""Bose-Einstein occupation algebra for rotating, two-temperature problems.

The single quantity every radiation formula needs is the shifted-argument
occupation difference n_T(omega - Omega*m) - n_T0(omega); at zero
temperature on both sides it degenerates to minus the indicator of the
superradiant window 0 < omega < Omega*m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import HBAR, K_B
from .errors import DomainError, PoleError

# exp() overflows well before this; occupations are exactly 0 / -1 beyond it
_EXP_CUTOFF = 700.0


@dataclass(frozen=True)
class ThermalState:
    """Body temperature, environment temperature and rotation rate."""

    temperature: float = 0.0
    environment_temperature: float = 0.0
    angular_velocity: float = 0.0

    def __post_init__(self):
        if self.temperature < 0 or self.environment_temperature < 0:
            raise DomainError("temperatures must be non-negative")
        if self.angular_velocity < 0:
            raise DomainError("angular velocity must be non-negative")


def bose_occupation(omega: float, temperature: float) -> float:
    """n_T(omega) = 1/(exp(hbar omega / kB T) - 1) at a signed frequency.

    At T = 0 this is the limit value: 0 for omega > 0 and -1 for omega < 0.
    Satisfies n_T(-omega) = -1 - n_T(omega).
    """
    if temperature < 0:
        raise DomainError("temperature must be non-negative")
    if temperature == 0.0:
        if omega > 0.0:
            return 0.0
        if omega < 0.0:
            return -1.0
        raise PoleError("bose_occupation undefined at omega = 0, T = 0")
    if omega == 0.0:
        raise PoleError(
            "bose_occupation has a pole at omega = 0 for T > 0; "
            "use occupation_difference for the removable combination"
        )
    x = HBAR * omega / (K_B * temperature)
    if x > _EXP_CUTOFF:
        return 0.0
    if x < -_EXP_CUTOFF:
        return -1.0
    return 1.0 / math.expm1(x)


def thermal_weight(omega: float, temperature: float) -> float:
    """Source-fluctuation weight 2 hbar (n_T(omega) + 1/2); odd in omega."""
    return 2.0 * HBAR * (bose_occupation(omega, temperature) + 0.5)


def occupation_difference(omega: float, m: int, state: ThermalState) -> float:
    """n_T(omega - Omega*m) - n_T0(omega) for omega > 0.

    At T = T0 = 0 this equals -1 inside the superradiant window
    0 < omega < Omega*m, 0 outside, and 0 exactly at the window edge
    (the edge has zero measure and the physical integrand vanishes there).

    For T > 0 the body-side occupation has a pole at omega = Omega*m; at
    that exact point the window-side limit marker -inf is returned.  The
    quadrature engine splits its panels there and never samples the point.
    """
    if not (omega > 0.0):
        raise DomainError("occupation_difference is defined for omega > 0")
    shifted = omega - state.angular_velocity * m
    T = state.temperature
    if T == 0.0:
        if shifted > 0.0:
            n_body = 0.0
        elif shifted < 0.0:
            n_body = -1.0
        else:
            n_body = 0.0
    elif shifted == 0.0:
        return -math.inf
    else:
        n_body = bose_occupation(shifted, T)
    n_env = bose_occupation(omega, state.environment_temperature)
    return n_body - n_env
