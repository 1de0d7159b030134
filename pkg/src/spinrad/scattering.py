"""Channel-resolved scattering matrices of slowly rotating bodies.

Analytic blocks cover the leading partial waves of a small sphere (1x1,
electric dipole) and a thin cylinder (2x2 in the M/E polarization basis,
m = 1).  Rotation enters only through the co-rotating frequency shift of
the dielectric argument; the explicit velocity operators are dropped, which
is what the small-radius validity guards protect.

Arbitrary externally computed channels can be supplied as a tabulated JSON
set and fed to the same trace engine.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .constants import C
from .errors import (
    ChannelFileError,
    DomainError,
    RegimeError,
    UnsupportedChannelError,
)
from .materials import DielectricModel, sphere_polarizability, cylinder_surface_factor, sqrt_abs_epsilon

REGIME_GUARD = 0.3


@dataclass(frozen=True)
class ChannelId:
    """Partial-wave label: axial index m, polarization content, optional l, k_z.

    ``pol`` is "M", "E", or "ME" for a mixed-polarization block.
    """

    m: int
    pol: str
    l: int | None = None
    kz: float | None = None

    def __post_init__(self):
        if self.pol not in ("M", "E", "ME"):
            raise DomainError(f"polarization must be 'M', 'E' or 'ME', got {self.pol!r}")
        if self.l is not None and (self.l < 1 or self.l < abs(self.m)):
            raise DomainError(f"sphere channels need l >= max(1, |m|), got {self}")

    @property
    def dim(self) -> int:
        return 2 if self.pol == "ME" else 1

    def sort_key(self):
        return (abs(self.m), self.m, self.l if self.l is not None else -1,
                self.pol, self.kz if self.kz is not None else 0.0)


@dataclass(frozen=True)
class SMatrixBlock:
    """Square scattering block of one channel at one frequency."""

    channel: ChannelId
    omega: float
    S: np.ndarray = field(repr=False)

    def __post_init__(self):
        S = np.atleast_2d(np.asarray(self.S, dtype=complex))
        d = self.channel.dim
        if S.shape != (d, d):
            raise DomainError(
                f"S block shape {S.shape} does not match channel dimension {d}"
            )
        if not np.all(np.isfinite(S)):
            raise DomainError("S block has non-finite entries")
        object.__setattr__(self, "S", S)


def check_sphere_regime(
    model: DielectricModel,
    radius: float,
    angular_velocity: float,
    omega: float,
    m: int,
    override: bool = False,
) -> None:
    """Validate the small-radius expansion: wR/c < 0.3 and |sqrt(eps)| ΩR/c < 0.3."""
    if override:
        return
    size = omega * radius / C
    if size >= REGIME_GUARD:
        raise RegimeError(
            f"regime guard violated: omega*R/c = {size:.4g} >= {REGIME_GUARD}"
        )
    if angular_velocity > 0.0:
        shifted = omega - angular_velocity * m
        if shifted != 0.0:
            spin = sqrt_abs_epsilon(model, shifted) * angular_velocity * radius / C
            if spin >= REGIME_GUARD:
                raise RegimeError(
                    f"regime guard violated: |sqrt(eps)|*Omega*R/c = {spin:.4g} "
                    f">= {REGIME_GUARD}"
                )


def sphere_T_general(
    model: DielectricModel,
    radius: float,
    angular_velocity: float,
    omega: float,
    l: int,
    m: int,
    *,
    override_regime_guard: bool = False,
) -> complex:
    """Electric-dipole T amplitude i (2/3)(w/c)^3 alpha(w - Omega m).

    Only l = 1 is analytically supported; the co-rotating frequency shift is
    the entire effect of rotation at this order.  Downstream deficiency
    traces work from T rather than S = 1 + 2T: |T| is routinely below
    double-precision resolution of S - 1.
    """
    if l != 1:
        raise UnsupportedChannelError(
            f"analytic sphere channels support l = 1 only, requested l = {l}"
        )
    if abs(m) > 1:
        raise UnsupportedChannelError(f"l = 1 requires |m| <= 1, requested m = {m}")
    if not (omega > 0.0):
        raise DomainError("sphere scattering amplitudes need omega > 0")
    check_sphere_regime(model, radius, angular_velocity, omega, m, override_regime_guard)
    alpha = sphere_polarizability(model, radius, omega - angular_velocity * m)
    return 1j * (2.0 / 3.0) * (omega / C) ** 3 * alpha


def sphere_S_general(
    model: DielectricModel,
    radius: float,
    angular_velocity: float,
    omega: float,
    l: int,
    m: int,
    *,
    override_regime_guard: bool = False,
) -> complex:
    """Electric-dipole scattering amplitude S = 1 + i (4/3)(w/c)^3 alpha(w - Omega m)."""
    return 1.0 + 2.0 * sphere_T_general(
        model, radius, angular_velocity, omega, l, m,
        override_regime_guard=override_regime_guard,
    )


def sphere_S_11E(
    model: DielectricModel,
    radius: float,
    angular_velocity: float,
    omega: float,
    *,
    override_regime_guard: bool = False,
) -> complex:
    """The (l=1, m=1, E) amplitude, the only radiating channel at T = 0."""
    return sphere_S_general(
        model, radius, angular_velocity, omega, 1, 1,
        override_regime_guard=override_regime_guard,
    )


def cylinder_T_block(
    model: DielectricModel,
    radius: float,
    angular_velocity: float,
    omega: float,
    kz: float,
    m: int = 1,
    *,
    override_regime_guard: bool = False,
) -> np.ndarray:
    """Thin-cylinder 2x2 T block in the (M, E) basis for the m = 1 channel.

    Entries are (i pi / 4) f R^2 times {w^2/c^2, w kz/c; w kz/c, kz^2} with
    f = (eps(w - Omega) - 1)/(eps(w - Omega) + 1); polarizations mix through
    the off-diagonal terms, which vanish at kz = 0.  S block = I + 2 T.
    """
    if m != 1:
        raise UnsupportedChannelError(
            f"analytic cylinder blocks support m = 1 only, requested m = {m}"
        )
    if not (radius > 0.0):
        raise DomainError("cylinder_T_block needs radius > 0")
    check_sphere_regime(model, radius, angular_velocity, omega, m, override_regime_guard)
    f = cylinder_surface_factor(model, omega - angular_velocity)
    pref = 0.25j * math.pi * f * radius * radius
    w_c = omega / C
    return np.array(
        [
            [pref * w_c * w_c, pref * w_c * kz],
            [pref * w_c * kz, pref * kz * kz],
        ],
        dtype=complex,
    )


def deficiency(block: SMatrixBlock) -> np.ndarray:
    """I - S^dagger S, symmetrized to remove roundoff skew; Hermitian.

    Positive semidefinite for absorptive channels, negative in superradiant
    windows where |S| exceeds one.
    """
    S = block.S
    H = np.eye(S.shape[0], dtype=complex) - S.conj().T @ S
    return 0.5 * (H + H.conj().T)


@dataclass(frozen=True)
class TabulatedChannel:
    channel: ChannelId
    omega: np.ndarray = field(repr=False)
    S: np.ndarray = field(repr=False)  # (n_omega, d, d) complex

    def __post_init__(self):
        w = np.asarray(self.omega, dtype=float)
        S = np.asarray(self.S, dtype=complex)
        d = self.channel.dim
        if w.ndim != 1 or w.size < 2:
            raise DomainError("tabulated channel needs >= 2 frequency samples")
        if np.any(np.diff(w) <= 0):
            raise DomainError("tabulated channel grid must be strictly increasing")
        if S.shape != (w.size, d, d):
            raise DomainError(
                f"tabulated channel S shape {S.shape} != ({w.size}, {d}, {d})"
            )
        object.__setattr__(self, "omega", w)
        object.__setattr__(self, "S", S)


class TabulatedChannelSet:
    """Channel provider backed by sampled S matrices, linear in Re/Im."""

    def __init__(self, channels: list[TabulatedChannel]):
        if not channels:
            raise ChannelFileError("tabulated channel set is empty")
        self._channels = tuple(
            sorted(channels, key=lambda tc: tc.channel.sort_key())
        )

    @property
    def entries(self) -> tuple[TabulatedChannel, ...]:
        return self._channels

    def channels(self) -> tuple[ChannelId, ...]:
        return tuple(tc.channel for tc in self._channels)

    def _find(self, channel: ChannelId) -> TabulatedChannel:
        for tc in self._channels:
            if tc.channel == channel:
                return tc
        raise UnsupportedChannelError(f"channel {channel} not in tabulated set")

    def omega_support(self, channel: ChannelId):
        tc = self._find(channel)
        return float(tc.omega[0]), float(tc.omega[-1])

    def block(self, channel: ChannelId, omega: float) -> SMatrixBlock:
        tc = self._find(channel)
        if omega < tc.omega[0] or omega > tc.omega[-1]:
            raise DomainError(
                f"omega = {omega:.6g} outside tabulated support of {channel}"
            )
        d = channel.dim
        S = np.empty((d, d), dtype=complex)
        for i in range(d):
            for j in range(d):
                re = np.interp(omega, tc.omega, tc.S[:, i, j].real)
                im = np.interp(omega, tc.omega, tc.S[:, i, j].imag)
                S[i, j] = complex(re, im)
        return SMatrixBlock(channel=channel, omega=omega, S=S)


def _channel_from_record(rec: dict, where: str) -> TabulatedChannel:
    try:
        m = int(rec["m"])
        pols = rec["polarizations"]
        l = rec.get("l")
        kz = rec.get("kz")
        omega = np.asarray(rec["omega"], dtype=float)
        s_re = np.asarray(rec["S_re"], dtype=float)
        s_im = np.asarray(rec["S_im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ChannelFileError(f"{where}: {exc!r}") from exc
    if pols == ["M", "E"]:
        pol = "ME"
    elif pols in (["E"], ["M"]):
        pol = pols[0]
    else:
        raise ChannelFileError(
            f"{where}: polarizations must be ['E'], ['M'] or ['M','E'], got {pols}"
        )
    channel = ChannelId(
        m=m, pol=pol,
        l=None if l is None else int(l),
        kz=None if kz is None else float(kz),
    )
    d = channel.dim
    if s_re.shape != (omega.size, d, d) or s_im.shape != (omega.size, d, d):
        raise ChannelFileError(
            f"{where}: S_re/S_im must have shape ({omega.size}, {d}, {d}), "
            f"got {s_re.shape} and {s_im.shape}"
        )
    try:
        return TabulatedChannel(channel=channel, omega=omega, S=s_re + 1j * s_im)
    except DomainError as exc:
        raise ChannelFileError(f"{where}: {exc}") from exc


def load_tabulated_channels(path) -> TabulatedChannelSet:
    """Load a tabulated S-matrix channel set from its JSON document."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ChannelFileError(f"{path}:{exc.lineno}: {exc.msg}") from exc
    if not isinstance(doc, dict) or "channels" not in doc:
        raise ChannelFileError(f"{path}: top-level object must contain 'channels'")
    records = doc["channels"]
    if not isinstance(records, list) or not records:
        raise ChannelFileError(f"{path}: 'channels' must be a non-empty list")
    channels = [
        _channel_from_record(rec, f"{path}: channels[{i}]")
        for i, rec in enumerate(records)
    ]
    return TabulatedChannelSet(channels)


def dump_tabulated_channels(channel_set: TabulatedChannelSet, path) -> None:
    """Write a channel set back to the JSON schema (exact round trip)."""
    records = []
    for tc in channel_set.entries:
        ch = tc.channel
        records.append(
            {
                "m": ch.m,
                "l": ch.l,
                "polarizations": ["M", "E"] if ch.pol == "ME" else [ch.pol],
                "kz": ch.kz,
                "omega": [float(w) for w in tc.omega],
                "S_re": tc.S.real.tolist(),
                "S_im": tc.S.imag.tolist(),
            }
        )
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({"channels": records}, fh, indent=1, sort_keys=True)
        fh.write("\n")
