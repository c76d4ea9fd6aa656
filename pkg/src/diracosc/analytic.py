"""Closed-form results for the 2+1 Dirac oscillator.

Natural units: hbar = mc^2 = 1, oscillator width Delta = 1, omega = xi.
Everything here is written directly from the formulas and imports nothing
from the numerical modules, so it can serve as an independent oracle.
Time arguments may be scalars or numpy arrays.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "RamseyParams",
    "exact_energy",
    "nr_energy",
    "eigen_coefficients",
    "zb_amplitude",
    "zb_exact",
    "zb_first_order",
    "zb_time_avg",
    "first_order_visibility",
    "ramsey_envelope",
    "ramsey_sx",
    "orbit",
    "circular_orbit",
    "mixed_state_statics",
]


def exact_energy(xi: float, n_l: int) -> float:
    return math.sqrt(1.0 + 4.0 * xi * n_l)


def nr_energy(xi: float, n_l: int) -> float:
    """Leading correction 1 + 2 xi n_l to the rest energy."""
    return 1.0 + 2.0 * xi * n_l


def eigen_coefficients(xi: float, n_l: int) -> tuple[float, float]:
    """(alpha, beta) = (sqrt((E+1)/2E), sqrt((E-1)/2E))."""
    e = exact_energy(xi, n_l)
    return math.sqrt((e + 1) / (2 * e)), math.sqrt((e - 1) / (2 * e))


def zb_amplitude(xi: float, n_l: int) -> float:
    return 4 * xi * n_l / (1 + 4 * xi * n_l)


def _zb(n_l, amplitude, freq, t):
    osc = amplitude * np.sin(freq * np.asarray(t, dtype=float)) ** 2
    lz = -osc - (n_l - 1)
    sz = osc - 0.5
    jz = np.full_like(osc, 0.5 - n_l)
    return lz, sz, jz


def zb_exact(xi: float, n_l: int, t):
    """Spin-orbit oscillations from |n_l - 1>|down>: (Lz, Sz, Jz) at time t.

    The oscillation frequency is the block energy sqrt(1 + 4 xi n_l).
    """
    if n_l < 1:
        raise ValueError("n_l must be >= 1")
    return _zb(n_l, zb_amplitude(xi, n_l), exact_energy(xi, n_l), t)


def zb_first_order(xi: float, n_l: int, t):
    """Leading-order oscillation: amplitude 4 xi n_l at frequency 1 + 2 xi n_l."""
    if n_l < 1:
        raise ValueError("n_l must be >= 1")
    return _zb(n_l, 4 * xi * n_l, nr_energy(xi, n_l), t)


def zb_time_avg(xi: float, n_l: int) -> tuple[float, float, float]:
    if n_l < 1:
        raise ValueError("n_l must be >= 1")
    return (-2 * xi * n_l - (n_l - 1), 2 * xi * n_l - 0.5, 0.5 - n_l)


def first_order_visibility(xi: float, n_l: int) -> float:
    return 4 * xi * n_l


@dataclass(frozen=True)
class RamseyParams:
    """Coherent amplitude z = |z| e^{i phi}, spinor weights, and xi."""

    z: complex
    alpha: complex
    beta: complex
    xi: float

    def __post_init__(self):
        w = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(w - 1) > 1e-14:
            raise ValueError(f"|alpha|^2 + |beta|^2 = {w!r}, expected 1")

    @property
    def phase(self) -> float:
        return cmath.phase(self.z)

    @property
    def omega0(self) -> float:
        return 1.0

    @property
    def omega1(self) -> float:
        return 1.0 + 2.0 * self.xi


def ramsey_envelope(rp: RamseyParams, t):
    """|alpha* beta| exp(-2 |z|^2 sin^2(2 w t)), the fringe visibility.

    The exponent is the modulus of the overlap <z e^{-2iwt}|z e^{+2iwt}>;
    it carries sin squared, so the envelope is periodic with period pi/(2w).
    """
    t = np.asarray(t, dtype=float)
    return abs(np.conj(rp.alpha) * rp.beta) * np.exp(
        -2 * abs(rp.z) ** 2 * np.sin(2 * rp.xi * t) ** 2
    )


def ramsey_sx(rp: RamseyParams, t):
    """<Sx>(t) = V(t) cos[(W0 + W1) t + |z|^2 sin(4 w t) + arg(alpha* beta)]."""
    t = np.asarray(t, dtype=float)
    cross = np.conj(rp.alpha) * rp.beta
    phase = (rp.omega0 + rp.omega1) * t + abs(rp.z) ** 2 * np.sin(4 * rp.xi * t) + np.angle(cross)
    return ramsey_envelope(rp, t) * np.cos(phase)


def orbit(rp: RamseyParams, t):
    """(<x>, <y>) for the coherent-state Ramsey evolution."""
    t = np.asarray(t, dtype=float)
    r, ph = abs(rp.z), rp.phase
    wa, wb = abs(rp.alpha) ** 2, abs(rp.beta) ** 2
    arg = 2 * rp.xi * t
    x = r * (wa * np.cos(arg - ph) + wb * np.cos(arg + ph))
    y = r * (wb * np.sin(arg + ph) - wa * np.sin(arg - ph))
    return x, y


def circular_orbit(z: complex, xi: float, t):
    """Orbit of |z>|up>: a circle of radius |z|."""
    t = np.asarray(t, dtype=float)
    r, ph = abs(z), cmath.phase(z)
    return r * np.cos(2 * xi * t - ph), -r * np.sin(2 * xi * t - ph)


def mixed_state_statics(n_l: int, alpha: complex, beta: complex) -> tuple[float, float, float]:
    """(Lz, Sz, Jz) of alpha |n_l>|up> + beta |n_l-1>|down>.

    Stationary under the effective Hamiltonian.  Jz equals 1/2 - n_l for
    any normalized weights.
    """
    if n_l < 1:
        raise ValueError("n_l must be >= 1")
    wa, wb = abs(alpha) ** 2, abs(beta) ** 2
    if abs(wa + wb - 1) > 1e-14:
        raise ValueError(f"|alpha|^2 + |beta|^2 = {wa + wb!r}, expected 1")
    lz = -(n_l - wb)
    sz = 0.5 * (wa - wb)
    return lz, sz, 0.5 - n_l
