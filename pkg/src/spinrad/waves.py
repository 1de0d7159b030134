"""Spherical Bessel/Hankel functions and outgoing vector spherical waves.

The vector waves are the magnetic (M) and electric (E) multipole fields built
from one and two curls of ``h_l(kr) Y_lm(theta, phi) x`` and normalized so
that the surface-flux bracket :func:`flux_bracket` evaluates to exactly
``delta_ab`` for any pair of outgoing waves, independent of the radius of the
integration sphere.

Only ``l <= 2`` vector waves are supported: the slow-rotation results this
package targets never need more, and the low orders admit explicit Cartesian
solid-harmonic expressions that are cheap and exactly differentiable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import C
from .errors import DomainError

MAX_BESSEL_ORDER = 8
MAX_WAVE_ORDER = 2

_SERIES_TERMS = 40


@dataclass(frozen=True)
class WaveIndex:
    """Angular momentum / polarization label of a vector spherical wave.

    ``pol`` is "M" (magnetic, TE) or "E" (electric, TM).
    """

    l: int
    m: int
    pol: str

    def __post_init__(self):
        if self.pol not in ("M", "E"):
            raise DomainError(f"polarization must be 'M' or 'E', got {self.pol!r}")
        if self.l < 1:
            raise DomainError(f"vector waves need l >= 1, got l={self.l}")
        if abs(self.m) > self.l:
            raise DomainError(f"|m| <= l required, got l={self.l}, m={self.m}")


@dataclass(frozen=True)
class FieldSample:
    """Electric field and its curl at one point, Cartesian components."""

    position: np.ndarray
    E: np.ndarray
    curl_E: np.ndarray


def _double_factorial(n: int) -> float:
    out = 1.0
    while n > 1:
        out *= n
        n -= 2
    return out


def _bessel_j_series(l: int, x: float) -> float:
    # Ascending series: j_l(x) = x^l/(2l+1)!! * sum_k (-x^2/2)^k / (k! (2l+3)...(2l+2k+1))
    term = x**l / _double_factorial(2 * l + 1)
    total = term
    for k in range(1, _SERIES_TERMS):
        term *= -(x * x) / (2.0 * k * (2 * l + 2 * k + 1))
        total += term
        if abs(term) < 1e-18 * abs(total):
            break
    return total


def spherical_bessel_j(l: int, x: float) -> float:
    """Spherical Bessel function j_l(x) for 0 <= l <= 8.

    Uses the ascending series for x < l (upward recurrence is unstable
    there) and upward recurrence from the l = 0, 1 closed forms otherwise.
    """
    if not 0 <= l <= MAX_BESSEL_ORDER:
        raise DomainError(f"spherical_bessel_j supports 0 <= l <= {MAX_BESSEL_ORDER}")
    if not math.isfinite(x):
        raise DomainError("argument must be finite")
    if x == 0.0:
        return 1.0 if l == 0 else 0.0
    if abs(x) < l:
        return _bessel_j_series(l, x)
    j_prev = math.sin(x) / x
    if l == 0:
        return j_prev
    j_cur = math.sin(x) / (x * x) - math.cos(x) / x
    for n in range(1, l):
        j_prev, j_cur = j_cur, (2 * n + 1) / x * j_cur - j_prev
    return j_cur


def spherical_bessel_y(l: int, x: float) -> float:
    """Spherical Neumann function y_l(x); upward recurrence is stable here."""
    if not 0 <= l <= MAX_BESSEL_ORDER:
        raise DomainError(f"spherical_bessel_y supports 0 <= l <= {MAX_BESSEL_ORDER}")
    if x == 0.0:
        raise DomainError("y_l diverges at x = 0")
    y_prev = -math.cos(x) / x
    if l == 0:
        return y_prev
    y_cur = -math.cos(x) / (x * x) - math.sin(x) / x
    for n in range(1, l):
        y_prev, y_cur = y_cur, (2 * n + 1) / x * y_cur - y_prev
    return y_cur


def spherical_hankel1(l: int, x: float) -> complex:
    """Outgoing spherical Hankel function h_l^(1)(x) = j_l(x) + i y_l(x), x > 0."""
    if not 0 <= l <= MAX_BESSEL_ORDER:
        raise DomainError(f"spherical_hankel1 supports 0 <= l <= {MAX_BESSEL_ORDER}")
    if not (x > 0.0):
        raise DomainError("spherical_hankel1 requires x > 0")
    return complex(spherical_bessel_j(l, x), spherical_bessel_y(l, x))


def spherical_hankel1_deriv(l: int, x: float) -> complex:
    """d/dx h_l^(1)(x) via h_l' = h_{l-1} - (l+1)/x h_l (l >= 1)."""
    if l == 0:
        # h_0' = -h_1
        return -spherical_hankel1(1, x)
    return spherical_hankel1(l - 1, x) - (l + 1) / x * spherical_hankel1(l, x)


# Solid harmonics r^l Y_lm as homogeneous Cartesian polynomials, with their
# gradients.  Condon-Shortley phase, orthonormal on the unit sphere.

_C10 = math.sqrt(3.0 / (4.0 * math.pi))
_C11 = math.sqrt(3.0 / (8.0 * math.pi))
_C20 = 0.25 * math.sqrt(5.0 / math.pi)
_C21 = 0.5 * math.sqrt(15.0 / (2.0 * math.pi))
_C22 = 0.25 * math.sqrt(15.0 / (2.0 * math.pi))


def _solid_harmonic(l: int, m: int, pos: np.ndarray):
    """Return (P, gradP) with P = r^l Y_lm, both per point; pos is (N, 3)."""
    x, y, z = pos[:, 0], pos[:, 1], pos[:, 2]
    zero = np.zeros_like(x)
    one = np.ones_like(x)
    if (l, m) == (1, 0):
        P = _C10 * z
        grad = np.stack([zero, zero, _C10 * one], axis=1)
    elif (l, m) == (1, 1):
        P = -_C11 * (x + 1j * y)
        grad = np.stack([-_C11 * one, -1j * _C11 * one, zero], axis=1)
    elif (l, m) == (1, -1):
        P = _C11 * (x - 1j * y)
        grad = np.stack([_C11 * one, -1j * _C11 * one, zero], axis=1)
    elif (l, m) == (2, 0):
        P = _C20 * (2.0 * z * z - x * x - y * y)
        grad = np.stack([-2.0 * _C20 * x, -2.0 * _C20 * y, 4.0 * _C20 * z], axis=1)
    elif (l, m) == (2, 1):
        P = -_C21 * z * (x + 1j * y)
        grad = np.stack([-_C21 * z, -1j * _C21 * z, -_C21 * (x + 1j * y)], axis=1)
    elif (l, m) == (2, -1):
        P = _C21 * z * (x - 1j * y)
        grad = np.stack([_C21 * z, -1j * _C21 * z, _C21 * (x - 1j * y)], axis=1)
    elif (l, m) == (2, 2):
        P = _C22 * (x + 1j * y) ** 2
        grad = np.stack(
            [2.0 * _C22 * (x + 1j * y), 2j * _C22 * (x + 1j * y), zero], axis=1
        )
    elif (l, m) == (2, -2):
        P = _C22 * (x - 1j * y) ** 2
        grad = np.stack(
            [2.0 * _C22 * (x - 1j * y), -2j * _C22 * (x - 1j * y), zero], axis=1
        )
    else:
        raise DomainError(f"solid harmonic (l={l}, m={m}) not available (l <= 2)")
    return P.astype(complex), grad.astype(complex)


def _wave_building_blocks(l: int, m: int, k: float, pos: np.ndarray):
    """Curl building blocks of psi = h_l(kr) Y_lm at each position.

    Returns (V1, V2) with V1 = grad(psi) x pos (one curl of psi*pos) and
    V2 = grad(r d_r psi + psi) + k^2 psi pos (two curls of psi*pos).
    """
    r = np.sqrt(np.sum(pos * pos, axis=1))
    if np.any(r == 0.0):
        raise DomainError("vector waves are singular at the origin")
    z = k * r
    h = np.array([spherical_hankel1(l, v) for v in z])
    hp = np.array([spherical_hankel1_deriv(l, v) for v in z])

    P, gradP = _solid_harmonic(l, m, pos)
    rl = r**l
    Y = P / rl
    rhat = pos / r[:, None]
    gradY = gradP / rl[:, None] - (l * P / r ** (l + 2))[:, None] * pos

    psi = h * Y
    grad_psi = (k * hp * Y)[:, None] * rhat + h[:, None] * gradY
    V1 = np.cross(grad_psi, pos)

    # w(r) = z h' + h satisfies w'(r) = -k (z - l(l+1)/z) h via the Bessel ODE
    w = z * hp + h
    wprime = -k * (z - l * (l + 1) / z) * h
    grad_wY = (wprime * Y)[:, None] * rhat + w[:, None] * gradY
    V2 = grad_wY + (k * k * psi)[:, None] * pos
    return V1, V2


def outgoing_wave_fields(idx: WaveIndex, omega: float, positions: np.ndarray):
    """Vectorized outgoing wave: (E, curl E) as (N, 3) complex arrays."""
    if idx.l > MAX_WAVE_ORDER:
        raise DomainError(f"outgoing waves support l <= {MAX_WAVE_ORDER}")
    if not (omega > 0.0):
        raise DomainError("outgoing waves require omega > 0")
    pos = np.asarray(positions, dtype=float)
    squeeze = pos.ndim == 1
    pos = np.atleast_2d(pos)
    k = omega / C
    V1, V2 = _wave_building_blocks(idx.l, idx.m, k, pos)
    scale = 1.0 / math.sqrt(idx.l * (idx.l + 1))
    if idx.pol == "M":
        amp = math.sqrt(k) * scale
        E, curl = amp * V1, amp * V2
    else:
        amp = -1j * scale / math.sqrt(k)
        E, curl = amp * V2, amp * (k * k) * V1
    if squeeze:
        return E[0], curl[0]
    return E, curl


def outgoing_wave(idx: WaveIndex, omega: float, position) -> FieldSample:
    """Outgoing vector wave (field and curl) at a single point."""
    pos = np.asarray(position, dtype=float)
    E, curl = outgoing_wave_fields(idx, omega, pos)
    return FieldSample(position=pos, E=E, curl_E=curl)


def _sphere_grid(r: float, n_theta: int, n_phi: int):
    u, wu = np.polynomial.legendre.leggauss(n_theta)  # u = cos(theta)
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
    w_phi = 2.0 * math.pi / n_phi
    st = np.sqrt(1.0 - u * u)
    ct = u
    x = np.outer(st, np.cos(phi)).ravel()
    y = np.outer(st, np.sin(phi)).ravel()
    z = np.outer(ct, np.ones_like(phi)).ravel()
    pts = r * np.stack([x, y, z], axis=1)
    weights = (np.outer(wu, np.full(n_phi, w_phi))).ravel()
    return pts, weights


def flux_bracket(
    a: WaveIndex,
    b: WaveIndex,
    omega: float,
    r: float,
    n_theta: int = 32,
    n_phi: int = 32,
) -> complex:
    """Surface-flux overlap of two outgoing waves on a sphere of radius r.

    Computes (i/2) * closed-surface integral of
    ``(curl E_a) x E_b* + E_a x (curl E_b*)`` dotted into the outward
    normal, with Gauss-Legendre nodes in cos(theta) and a uniform
    (trapezoidal, exact for periodic integrands) rule in phi.  Equals
    ``delta_ab`` for correctly normalized outgoing pairs, at any radius.
    """
    if n_theta < 16 or n_phi < 16:
        raise DomainError("flux_bracket needs quadrature orders >= 16")
    if not (r > 0.0):
        raise DomainError("flux_bracket needs r > 0")
    pts, weights = _sphere_grid(r, n_theta, n_phi)
    Ea, Ca = outgoing_wave_fields(a, omega, pts)
    Eb, Cb = outgoing_wave_fields(b, omega, pts)
    vec = np.cross(Ca, np.conj(Eb)) + np.cross(Ea, np.conj(Cb))
    rhat = pts / r
    radial = np.sum(vec * rhat, axis=1)
    total = np.sum(weights * radial)
    return 0.5j * r * r * total


def all_wave_indices(l_max: int = MAX_WAVE_ORDER):
    """All (l, m, pol) labels with 1 <= l <= l_max, deterministic order."""
    out = []
    for l in range(1, l_max + 1):
        for m in range(-l, l + 1):
            for pol in ("M", "E"):
                out.append(WaveIndex(l=l, m=m, pol=pol))
    return out
