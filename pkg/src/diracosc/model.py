"""Hamiltonians of the 2+1 Dirac oscillator and its exact spectrum.

In natural units (hbar = mc^2 = 1) the oscillator frequency equals the
relativistic parameter ``xi``.  The Dirac oscillator is the
anti-Jaynes-Cummings model

    H = g sigma+ a_l† + g* sigma- a_l + sigma_z,    g = 2i sqrt(xi),

which is block diagonal over the two-level subspaces
``span{|n_l>|up>, |n_l - 1>|down>}`` (n_l >= 1) plus the uncoupled vacuum
``|0>|up>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fockspace as fs
from .fockspace import FockSpace, Operator, Spin, StateVector

__all__ = [
    "ModelParams",
    "SubspaceBlock",
    "EigenPair",
    "SpectrumLine",
    "ajc_hamiltonian",
    "effective_nr_hamiltonian",
    "klein_gordon_nr_hamiltonian",
    "oscillator_2d_hamiltonian",
    "exact_energy",
    "exact_spectrum",
    "exact_eigenstates",
    "subspace_block",
    "restrict_to_block",
]

SIGMA_Y = np.array([[0, -1j], [1j, 0]])
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True)
class ModelParams:
    """Relativistic parameter xi = hbar*omega / mc^2 and the basis cutoffs.

    ``xi = 0`` is accepted (decoupled limit).  Nothing enforces
    ``xi * cutoff_l << 1``; callers probe the breakdown on purpose.
    """

    xi: float
    cutoff_r: int = 0
    cutoff_l: int = 64

    def __post_init__(self):
        if not math.isfinite(self.xi) or self.xi < 0:
            raise ValueError(f"xi must be a finite non-negative number, got {self.xi}")

    @property
    def omega(self) -> float:
        return self.xi

    @property
    def detuning(self) -> float:
        return 1.0

    @property
    def coupling(self) -> complex:
        return 2j * math.sqrt(self.xi)

    def eta(self, n_l: int) -> float:
        return 2.0 * math.sqrt(self.xi * n_l)

    def space(self) -> FockSpace:
        return fs.build_space(self.cutoff_r, self.cutoff_l)


@dataclass(frozen=True)
class SubspaceBlock:
    n_l: int
    eta: float
    h: np.ndarray

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.h)


@dataclass(frozen=True)
class EigenPair:
    energy: float
    alpha: float
    beta: float
    state: StateVector


@dataclass(frozen=True)
class SpectrumLine:
    n_l: int
    sign: int
    analytic: float
    numeric: float

    @property
    def gap(self) -> float:
        return abs(self.numeric - self.analytic)


def ajc_hamiltonian(p: ModelParams, space: FockSpace | None = None) -> Operator:
    space = space or p.space()
    al = fs.ladder_left(space, "annihilate").matrix
    ald = fs.ladder_left(space, "create").matrix
    sp = fs.spin_operator(space, "raise").matrix
    sm = fs.spin_operator(space, "lower").matrix
    sz = fs.spin_operator(space, "sz").matrix
    g = p.coupling
    m = g * (sp @ ald) + np.conj(g) * (sm @ al) + p.detuning * sz
    return Operator(m, space, hermitian=True, label="H_ajc", tag="ajc", xi=p.xi)


def effective_nr_hamiltonian(p: ModelParams, space: FockSpace | None = None) -> Operator:
    """diag(1 + 2 xi a†a, -1 - 2 xi a a†) in the spin basis.

    a a† is taken as N + 1 (the canonical commutator), so the down-spin level
    at the cutoff is not distorted by truncation.
    """
    space = space or p.space()
    n = space.n_l.astype(float)
    up = space.spin == 0
    diag = np.where(up, 1.0 + p.xi * (2 * n), -1.0 - p.xi * (2 * (n + 1)))
    return Operator(np.diag(diag.astype(complex)), space, hermitian=True, label="H_eff", tag="diagonal", xi=p.xi)


def oscillator_2d_hamiltonian(p: ModelParams, space: FockSpace | None = None) -> Operator:
    """Isotropic 2D oscillator hbar*omega (a_r†a_r + a_l†a_l + 1)."""
    space = space or p.space()
    levels = space.n_r + space.n_l + 1
    return Operator(np.diag(p.xi * levels.astype(complex)), space, hermitian=True, label="H_ho")


def klein_gordon_nr_hamiltonian(p: ModelParams, space: FockSpace | None = None) -> Operator:
    """Non-relativistic limit from the Klein-Gordon reduction.

    Upper spinor: mc^2 + H_ho - hbar*omega - omega*Lz.
    Lower spinor: -mc^2 - (H_ho + hbar*omega - omega*Lz).

    Each bracket is assembled in units of hbar*omega from integer-valued
    diagonals before scaling by xi, so the result is exactly reproducible.
    """
    space = space or p.space()
    ho_quanta = (space.n_r + space.n_l + 1).astype(float)
    lz = (space.n_r - space.n_l).astype(float)
    upper = ho_quanta - 1 - lz
    lower = ho_quanta + 1 - lz
    up = space.spin == 0
    diag = np.where(up, 1.0 + p.xi * upper, -1.0 - p.xi * lower)
    return Operator(np.diag(diag.astype(complex)), space, hermitian=True, label="H_kg", tag="diagonal", xi=p.xi)


def exact_energy(xi: float, n_l: int) -> float:
    return math.sqrt(1.0 + 4.0 * xi * n_l)


def exact_spectrum(p: ModelParams, n_max: int) -> list[SpectrumLine]:
    """Analytic ±sqrt(1 + 4 xi n_l) against eigenvalues of the truncated H.

    Each analytic level is paired with the nearest numerical eigenvalue.
    """
    if n_max > p.cutoff_l:
        raise ValueError(f"n_max = {n_max} exceeds cutoff_l = {p.cutoff_l}")
    evals = np.linalg.eigvalsh(ajc_hamiltonian(p).matrix)
    lines = []
    for n in range(n_max + 1):
        e = exact_energy(p.xi, n)
        for sign in (+1, -1):
            target = sign * e
            near = evals[np.argmin(np.abs(evals - target))]
            lines.append(SpectrumLine(n, sign, target, float(near)))
    return lines


def _alpha_beta(energy: float) -> tuple[float, float]:
    return math.sqrt((energy + 1) / (2 * energy)), math.sqrt((energy - 1) / (2 * energy))


def exact_eigenstates(p: ModelParams, n_l: int, n_r: int = 0):
    """Positive- and negative-energy eigenstates in block ``n_l``.

    |+E> = alpha |n_l>|up> - i beta |n_l-1>|down>
    |-E> = beta  |n_l>|up> + i alpha |n_l-1>|down>

    ``n_l = 0`` has only the uncoupled state |0>|up> at energy +1 and yields
    a one-element tuple.
    """
    space = p.space()
    if n_l == 0:
        state = space.basis_state(n_r, 0, Spin.UP)
        return (EigenPair(1.0, 1.0, 0.0, state),)
    if not 1 <= n_l <= p.cutoff_l:
        raise ValueError(f"n_l must lie in 0..{p.cutoff_l}, got {n_l}")
    e = exact_energy(p.xi, n_l)
    a, b = _alpha_beta(e)
    i_up, i_dn = space.block_indices(n_l, n_r)
    plus = np.zeros(space.dim, dtype=complex)
    minus = np.zeros(space.dim, dtype=complex)
    plus[i_up], plus[i_dn] = a, -1j * b
    minus[i_up], minus[i_dn] = b, 1j * a
    return (
        EigenPair(e, a, b, StateVector(plus, space)),
        EigenPair(-e, a, b, StateVector(minus, space)),
    )


def subspace_block(p: ModelParams, n_l: int) -> SubspaceBlock:
    """h = sigma_z - eta sigma_y on (|n_l>|up>, |n_l-1>|down>)."""
    if n_l < 1:
        raise ValueError("subspace blocks exist for n_l >= 1")
    eta = p.eta(n_l)
    return SubspaceBlock(n_l, eta, SIGMA_Z - eta * SIGMA_Y)


def restrict_to_block(op: Operator, n_l: int, n_r: int = 0) -> np.ndarray:
    """2x2 matrix of ``op`` on (|n_l>|up>, |n_l-1>|down>)."""
    idx = list(op.space.block_indices(n_l, n_r))
    return np.array(op.matrix[np.ix_(idx, idx)])
