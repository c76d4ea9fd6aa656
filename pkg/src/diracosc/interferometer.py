"""Mach-Zehnder view of the block propagator and its expansion in xi*n_l.

In block ``n_l`` the Hamiltonian is ``h = E exp(-i theta sx) sz exp(i theta sx)``
with ``tan(2 theta) = eta = 2 sqrt(xi n_l)`` and ``E = sqrt(1 + eta^2)``, so

    U(t) = exp(-i theta sx) exp(-i phi(t) sz) exp(i theta sx),   phi = E t.

The entrance splitter is ``exp(i theta sx)``, the exit splitter its adjoint.

Expanding the splitters in x = xi*n_l at fixed phi gives

    U = cos(phi) + sum_j T_j,

where ``T_0 = -i sin(phi) sz`` is the bare dephaser and, for j >= 1,

    even j = 2k:   T_j = 2i sin(phi) c_j x^k sz
    odd  j = 2k+1: T_j = 2  sin(phi) c_j x^(k+1/2) [[0, -1], [1, 0]]

The odd-order matrix is the restriction of sigma- A_k - sigma+ A_k† with
A_k = a_l (a_l† a_l)^k, up to the factor n_l^(k+1/2).  The coefficients c_j
come from exact rational Taylor series of (1 + 4x)^(-1/2):

    c_j = {-1, +1, +2, -3, -6, +10, +20, -35, ...}   (j = 1, 2, 3, ...)
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import fockspace as fs
from .dynamics import ObservableRecord, TimeGrid
from .fockspace import FockSpace, Operator
from .model import ModelParams, subspace_block

__all__ = [
    "MzFactors",
    "SeriesKind",
    "SeriesTerm",
    "mz_factorize",
    "beam_splitter",
    "dephaser",
    "inverse_sqrt_series",
    "series_coefficients",
    "series_term_block",
    "perturbative_U",
    "exact_U",
    "generalized_ajc_operator",
    "full_space_term",
    "first_order_series",
    "visibility",
    "MAX_SERIES_ORDER",
    "CONVERGENCE_RADIUS",
]

MAX_SERIES_ORDER = 12
CONVERGENCE_RADIUS = 0.25

SZ = np.array([[1, 0], [0, -1]], dtype=complex)
# restriction of sigma- A_k - sigma+ A_k† to (|n>|up>, |n-1>|down>), per n^(k+1/2)
AJC_BLOCK = np.array([[0, -1], [1, 0]], dtype=complex)


def beam_splitter(theta: float) -> np.ndarray:
    """exp(i theta sx) = [[cos, i sin], [i sin, cos]]."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, 1j * s], [1j * s, c]])


def dephaser(phi: float) -> np.ndarray:
    """exp(-i phi sz): opposite phases in the two arms."""
    return np.diag([np.exp(-1j * phi), np.exp(1j * phi)])


@dataclass(frozen=True)
class MzFactors:
    n_l: int
    eta: float
    theta: float
    energy: float

    def phi(self, t: float) -> float:
        return self.energy * t

    @property
    def bs_in(self) -> np.ndarray:
        return beam_splitter(self.theta)

    @property
    def bs_out(self) -> np.ndarray:
        return self.bs_in.conj().T

    def dephaser(self, t: float) -> np.ndarray:
        return dephaser(self.phi(t))

    def product(self, t: float) -> np.ndarray:
        return self.bs_out @ self.dephaser(t) @ self.bs_in


def mz_factorize(xi: float, n_l: int) -> MzFactors:
    if n_l < 1:
        raise ValueError("n_l must be >= 1")
    eta = 2.0 * math.sqrt(xi * n_l)
    return MzFactors(n_l, eta, 0.5 * math.atan(eta), math.sqrt(1.0 + eta * eta))


def exact_U(xi: float, n_l: int, t: float) -> np.ndarray:
    """exp(-i h t) from the spectral form cos(Et) - i sin(Et) h/E."""
    h = subspace_block(ModelParams(xi), n_l).h
    e = math.sqrt(1 + 4 * xi * n_l)
    return math.cos(e * t) * np.eye(2) - 1j * math.sin(e * t) / e * h


class SeriesKind(enum.Enum):
    STARK = "stark"  # sigma_z, even orders
    RAMSEY = "ramsey"  # spin-flipping, odd orders


@dataclass(frozen=True)
class SeriesTerm:
    """Term of order (xi n_l)^(order/2)."""

    order: int
    kind: SeriesKind
    coefficient: Fraction


def inverse_sqrt_series(terms: int) -> list[Fraction]:
    """Taylor coefficients of (1 + 4x)^(-1/2), exact."""
    coeffs = [Fraction(1)]
    for m in range(1, terms):
        coeffs.append(coeffs[-1] * (Fraction(-1, 2) - (m - 1)) / m * 4)
    return coeffs


def series_coefficients(max_order: int) -> list[SeriesTerm]:
    """Generated coefficients c_1 .. c_max_order.

    Even order 2k: coefficient of x^k in sin^2(theta) = (1 - (1+4x)^(-1/2))/2.
    Odd order 2k+1: minus the coefficient of x^(k+1/2) in
    sin(theta)cos(theta) = sqrt(x) (1+4x)^(-1/2).
    """
    if not 0 <= max_order <= MAX_SERIES_ORDER:
        raise ValueError(f"max_order must lie in 0..{MAX_SERIES_ORDER}")
    inv = inverse_sqrt_series(max_order // 2 + 1)
    out = []
    for j in range(1, max_order + 1):
        k, odd = divmod(j, 2)
        if odd:
            out.append(SeriesTerm(j, SeriesKind.RAMSEY, -inv[k]))
        else:
            out.append(SeriesTerm(j, SeriesKind.STARK, -inv[k] / 2))
    return out


def series_term_block(term: SeriesTerm | None, xi: float, n_l: int, t: float) -> np.ndarray:
    """2x2 matrix of one term in block ``n_l``; ``None`` is the bare dephaser T_0."""
    f = mz_factorize(xi, n_l)
    s = math.sin(f.phi(t))
    if term is None:
        return -1j * s * SZ
    x = xi * n_l
    weight = float(term.coefficient) * x ** (term.order / 2)
    if term.kind is SeriesKind.STARK:
        return 2j * s * weight * SZ
    return 2 * s * weight * AJC_BLOCK


def perturbative_U(xi: float, n_l: int, t: float, max_order: int) -> np.ndarray:
    """Block propagator with the splitters expanded through (xi n_l)^(max_order/2).

    The dephasing angle phi = sqrt(1 + 4 xi n_l) t is kept exact.
    """
    if n_l < 1:
        raise ValueError("n_l must be >= 1")
    x = xi * n_l
    if x >= CONVERGENCE_RADIUS:
        raise ValueError(
            f"xi*n_l = {x:.6g} lies outside the convergence disc |xi n_l| < 1/4 "
            "of the splitter expansion"
        )
    phi = mz_factorize(xi, n_l).phi(t)
    u = math.cos(phi) * np.eye(2, dtype=complex) + series_term_block(None, xi, n_l, t)
    for term in series_coefficients(max_order):
        u = u + series_term_block(term, xi, n_l, t)
    return u


def generalized_ajc_operator(space: FockSpace, k: int) -> Operator:
    """A_k = a_l (a_l† a_l)^k; A_k |n> = n^k sqrt(n) |n-1>."""
    if k < 0:
        raise ValueError("k must be >= 0")
    a = fs.ladder_left(space, "annihilate").matrix
    n = space.n_l.astype(float)
    return Operator(a @ np.diag(n**k).astype(complex), space, label=f"A_{k}")


def _block_sin_phi(space: FockSpace, xi: float, t: float) -> np.ndarray:
    # block index: n_l for spin up, n_l + 1 for spin down
    b = space.n_l + (space.spin == 1)
    return np.sin(np.sqrt(1.0 + 4.0 * xi * b) * t)


def full_space_term(space: FockSpace, order: int, xi: float, t: float) -> Operator:
    """Order-``order`` term of the propagator on the whole truncated space.

    Even order 2k: lambda sin(phi) diag((a†a)^k, -(a a†)^k)
    Odd order 2k+1: lambda sin(phi) (sigma- A_k - sigma+ A_k†)

    with lambda_0 = -i, lambda_2k = 2i c_2k xi^k, lambda_2k+1 = 2 c_2k+1 xi^(k+1/2).
    sin(phi) is evaluated per invariant block.  The down-spin state at the
    cutoff has no partner in the truncated space and is not reproduced.
    """
    if not 0 <= order <= MAX_SERIES_ORDER:
        raise ValueError(f"order must lie in 0..{MAX_SERIES_ORDER}")
    k, odd = divmod(order, 2)
    n = space.n_l.astype(float)
    up = space.spin == 0
    if odd:
        A = generalized_ajc_operator(space, k).matrix
        sp = fs.spin_operator(space, "raise").matrix
        sm = fs.spin_operator(space, "lower").matrix
        op = sm @ A - sp @ A.conj().T
    else:
        # (a a†)^k = (N + 1)^k
        op = np.diag(np.where(up, n**k, -((n + 1) ** k))).astype(complex)
    if order == 0:
        lam = -1j
    else:
        c = float(series_coefficients(order)[-1].coefficient)
        lam = (2 if odd else 2j) * c * xi ** (order / 2)
    m = lam * (_block_sin_phi(space, xi, t)[:, None] * op)
    return Operator(m, space, label=f"U^{order}")


def first_order_series(xi: float, n_l: int, grid: TimeGrid, max_order: int = 1) -> list[ObservableRecord]:
    """Observables of |n_l - 1>|down> under the truncated-series propagator.

    The truncated series is unitary only to the retained order.  The
    transition probability P = |<n_l, up|U|n_l-1, down>|^2 is taken from the
    series and the initial level keeps 1 - P, so every record is normalized.
    The two levels differ in n_l, so Sx, x and y vanish identically.
    """
    times = grid.times()
    recs = []
    for t in times:
        u = perturbative_U(xi, n_l, t, max_order)
        p = min(abs(u[0, 1]) ** 2, 1.0)
        recs.append(
            ObservableRecord(
                t=float(t),
                Lz=-(n_l - 1) - p,
                Sz=p - 0.5,
                Jz=0.5 - n_l,
                Sx=0.0,
                x=0.0,
                y=0.0,
                norm=1.0,
            )
        )
    return recs


def visibility(signal: Sequence[float]) -> float:
    """|(max - min) / (max + min)| of an interference signal."""
    s = np.asarray(signal, dtype=float)
    hi, lo = s.max(), s.min()
    if hi + lo == 0:
        raise ZeroDivisionError("signal extrema sum to zero; visibility undefined")
    return float(abs((hi - lo) / (hi + lo)))
