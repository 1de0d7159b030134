"""Dielectric response models and the derived small-body response factors.

All models return eps(omega) on the whole real frequency axis with the
reality condition eps(-omega) = conj(eps(omega)) built in, so callers can
evaluate at negative (co-rotating) frequencies without special cases.
Passivity (Im eps > 0 for omega > 0) is required of every model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ChannelFileError, DomainError, SingularityError, TabulationRangeError

_POLE_TOL = 1e-9


@dataclass(frozen=True)
class Vacuum:
    """eps identically 1: the no-scatterer reference (exempt from passivity)."""


@dataclass(frozen=True)
class Drude:
    """eps(w) = 1 - wp^2 / (w (w + i gamma))."""

    plasma_frequency: float
    damping: float

    def __post_init__(self):
        if self.plasma_frequency <= 0 or self.damping <= 0:
            raise DomainError("Drude model needs plasma_frequency > 0 and damping > 0")


@dataclass(frozen=True)
class Lorentz:
    """Single oscillator: eps(w) = 1 + f w0^2 / (w0^2 - w^2 - i gamma w)."""

    oscillator_strength: float
    resonance: float
    damping: float

    def __post_init__(self):
        if self.oscillator_strength <= 0 or self.resonance <= 0 or self.damping <= 0:
            raise DomainError("Lorentz model needs positive strength, resonance, damping")


@dataclass(frozen=True)
class ConstantLoss:
    """eps(w) = eps_real + i sign(w) eps_imag; a flat-loss toy response."""

    eps_real: float
    eps_imag: float

    def __post_init__(self):
        if self.eps_imag <= 0:
            raise DomainError("ConstantLoss needs eps_imag > 0")


@dataclass(frozen=True)
class LinearLossToy:
    """Defines the response factors directly: Im alpha(w)/R^3 = coefficient * w.

    The cylinder surface factor is taken as i * coefficient * w as well, so a
    single toy covers both geometries.  It makes the radiated-power integrals
    polynomial (hence exactly integrable) and is non-physical at large
    frequency; it carries no dielectric function of its own.
    """

    coefficient: float  # seconds

    def __post_init__(self):
        if self.coefficient <= 0:
            raise DomainError("LinearLossToy needs coefficient > 0")


@dataclass(frozen=True)
class TabulatedDielectric:
    """Sampled eps on a strictly increasing omega > 0 grid.

    Negative frequencies extend by reflection; evaluation interpolates
    linearly on Re and Im separately and refuses to extrapolate.
    """

    omega: np.ndarray = field(repr=False)
    eps: np.ndarray = field(repr=False)

    def __post_init__(self):
        w = np.asarray(self.omega, dtype=float)
        e = np.asarray(self.eps, dtype=complex)
        if w.ndim != 1 or e.shape != w.shape or w.size < 2:
            raise DomainError("tabulated model needs matching 1-d grids, >= 2 points")
        if w[0] <= 0 or np.any(np.diff(w) <= 0):
            raise DomainError("tabulated grid must be strictly increasing and > 0")
        if np.any(e.imag <= 0):
            raise DomainError("tabulated model violates passivity (Im eps <= 0)")
        object.__setattr__(self, "omega", w)
        object.__setattr__(self, "eps", e)


DielectricModel = Vacuum | Drude | Lorentz | ConstantLoss | LinearLossToy | TabulatedDielectric


def _epsilon_positive(model: DielectricModel, w: float) -> complex:
    if isinstance(model, Vacuum):
        return complex(1.0, 0.0)
    if isinstance(model, Drude):
        return 1.0 - model.plasma_frequency**2 / (w * complex(w, model.damping))
    if isinstance(model, Lorentz):
        w0 = model.resonance
        return 1.0 + model.oscillator_strength * w0 * w0 / complex(
            w0 * w0 - w * w, -model.damping * w
        )
    if isinstance(model, ConstantLoss):
        return complex(model.eps_real, model.eps_imag)
    if isinstance(model, TabulatedDielectric):
        if w < model.omega[0] or w > model.omega[-1]:
            raise TabulationRangeError(
                f"omega = {w:.6g} outside tabulated range "
                f"[{model.omega[0]:.6g}, {model.omega[-1]:.6g}]"
            )
        re = float(np.interp(w, model.omega, model.eps.real))
        im = float(np.interp(w, model.omega, model.eps.imag))
        return complex(re, im)
    if isinstance(model, LinearLossToy):
        raise DomainError(
            "LinearLossToy defines polarizability and surface factors directly; "
            "it has no dielectric function"
        )
    raise DomainError(f"unknown dielectric model {type(model).__name__}")


def epsilon(model: DielectricModel, omega: float) -> complex:
    """Complex dielectric function at a signed frequency (rad/s)."""
    if omega < 0.0:
        return _epsilon_positive(model, -omega).conjugate()
    if omega == 0.0:
        if isinstance(model, Drude):
            raise DomainError("Drude dielectric function diverges at omega = 0")
        if isinstance(model, ConstantLoss):
            return complex(model.eps_real, 0.0)
        if isinstance(model, Lorentz):
            return complex(1.0 + model.oscillator_strength, 0.0)
        # Tabulated grids start above zero; the toy has no epsilon at all.
        return _epsilon_positive(model, 0.0)
    return _epsilon_positive(model, omega)


def sphere_polarizability(model: DielectricModel, radius: float, omega: float) -> complex:
    """Small-sphere electric polarizability (eps-1)/(eps+2) * R^3, in m^3."""
    if not (radius > 0.0):
        raise DomainError("sphere_polarizability needs radius > 0")
    if isinstance(model, LinearLossToy):
        return complex(0.0, model.coefficient * omega) * radius**3
    eps = epsilon(model, omega)
    if abs(eps + 2.0) < _POLE_TOL:
        raise SingularityError(
            f"eps = {eps:.6g} sits on the sphere surface-mode pole eps = -2"
        )
    return (eps - 1.0) / (eps + 2.0) * radius**3


def cylinder_surface_factor(model: DielectricModel, omega: float) -> complex:
    """Thin-cylinder response factor (eps-1)/(eps+1), dimensionless."""
    if isinstance(model, LinearLossToy):
        return complex(0.0, model.coefficient * omega)
    eps = epsilon(model, omega)
    if abs(eps + 1.0) < _POLE_TOL:
        raise SingularityError(
            f"eps = {eps:.6g} sits on the cylinder surface-mode pole eps = -1"
        )
    return (eps - 1.0) / (eps + 1.0)


_CSV_HEADER = "omega_rad_s,eps_re,eps_im"


def load_tabulated_dielectric(path) -> TabulatedDielectric:
    """Read a tabulated dielectric from CSV with header omega_rad_s,eps_re,eps_im."""
    omegas: list[float] = []
    eps: list[complex] = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != _CSV_HEADER:
            raise ChannelFileError(
                f"{path}:1: expected header '{_CSV_HEADER}', got '{header}'"
            )
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise ChannelFileError(f"{path}:{lineno}: expected 3 columns")
            try:
                w, re, im = (float(p) for p in parts)
            except ValueError as exc:
                raise ChannelFileError(f"{path}:{lineno}: {exc}") from exc
            if omegas and w <= omegas[-1]:
                raise ChannelFileError(
                    f"{path}:{lineno}: omega grid must be strictly increasing"
                )
            if w <= 0:
                raise ChannelFileError(f"{path}:{lineno}: omega must be > 0")
            if im <= 0:
                raise ChannelFileError(f"{path}:{lineno}: passivity needs eps_im > 0")
            omegas.append(w)
            eps.append(complex(re, im))
    if len(omegas) < 2:
        raise ChannelFileError(f"{path}: need at least 2 grid rows")
    return TabulatedDielectric(omega=np.array(omegas), eps=np.array(eps))


def sqrt_abs_epsilon(model: DielectricModel, omega: float) -> float:
    """|sqrt(eps(omega))|, used by the slow-rotation validity guards.

    The toy model carries no dielectric function; treat it as vacuum-like
    for guard purposes.
    """
    if isinstance(model, LinearLossToy):
        return 1.0
    return math.sqrt(abs(epsilon(model, omega)))
