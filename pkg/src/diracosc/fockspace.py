"""Truncated chiral Fock space tensored with a two-component spinor.

Basis states are labelled ``|n_r, n_l, spin>`` with ``0 <= n_r <= cutoff_r``,
``0 <= n_l <= cutoff_l`` and ``spin`` in ``{up, down}``.  The flat index runs
spin fastest, then ``n_l``, then ``n_r``::

    index = (n_r * (cutoff_l + 1) + n_l) * 2 + spin

Natural units are used throughout (hbar = mc^2 = 1, oscillator width = 1).
All matrices are dense complex arrays; they are marked read-only after
construction.
"""

from __future__ import annotations

import enum
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import stats

__all__ = [
    "Spin",
    "BasisLabel",
    "FockSpace",
    "StateVector",
    "Operator",
    "build_space",
    "ladder_left",
    "ladder_right",
    "spin_operator",
    "angular_momentum",
    "position_operator",
    "number_left",
    "coherent_amplitudes",
    "coherent_left",
    "coherent_tail_mass",
    "required_cutoff",
    "expectation",
    "COHERENT_TAIL_TOL",
]

COHERENT_TAIL_TOL = 1e-12
HERMITIAN_TOL = 1e-13


class Spin(enum.IntEnum):
    UP = 0
    DOWN = 1


@dataclass(frozen=True)
class BasisLabel:
    n_r: int
    n_l: int
    spin: Spin


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class FockSpace:
    """Index bookkeeping for the truncated (n_r, n_l, spin) basis."""

    cutoff_r: int
    cutoff_l: int

    @property
    def dim(self) -> int:
        return (self.cutoff_r + 1) * (self.cutoff_l + 1) * 2

    def index(self, n_r: int, n_l: int, spin: Spin | int) -> int:
        if not (0 <= n_r <= self.cutoff_r and 0 <= n_l <= self.cutoff_l):
            raise IndexError(
                f"|n_r={n_r}, n_l={n_l}> outside cutoffs "
                f"({self.cutoff_r}, {self.cutoff_l})"
            )
        return (n_r * (self.cutoff_l + 1) + n_l) * 2 + int(spin)

    def label(self, index: int) -> BasisLabel:
        if not 0 <= index < self.dim:
            raise IndexError(f"index {index} outside 0..{self.dim - 1}")
        mode, spin = divmod(index, 2)
        n_r, n_l = divmod(mode, self.cutoff_l + 1)
        return BasisLabel(n_r, n_l, Spin(spin))

    def labels(self) -> list[BasisLabel]:
        return [self.label(i) for i in range(self.dim)]

    # Quantum numbers of every basis vector, as flat integer arrays.
    @property
    def n_r(self) -> np.ndarray:
        return np.repeat(np.arange(self.cutoff_r + 1), 2 * (self.cutoff_l + 1))

    @property
    def n_l(self) -> np.ndarray:
        return np.tile(np.repeat(np.arange(self.cutoff_l + 1), 2), self.cutoff_r + 1)

    @property
    def spin(self) -> np.ndarray:
        return np.tile(np.array([0, 1]), (self.cutoff_r + 1) * (self.cutoff_l + 1))

    def block_indices(self, n_l: int, n_r: int = 0) -> tuple[int, int]:
        """Flat indices of ``|n_l>|up>`` and ``|n_l - 1>|down>``."""
        if n_l < 1:
            raise ValueError("invariant two-level blocks start at n_l = 1")
        return self.index(n_r, n_l, Spin.UP), self.index(n_r, n_l - 1, Spin.DOWN)

    def basis_state(self, n_r: int, n_l: int, spin: Spin | int) -> "StateVector":
        amps = np.zeros(self.dim, dtype=complex)
        amps[self.index(n_r, n_l, spin)] = 1.0
        return StateVector(amps, self)

    def identity(self) -> "Operator":
        return Operator(np.eye(self.dim, dtype=complex), self, hermitian=True, label="1")


def build_space(cutoff_r: int, cutoff_l: int) -> FockSpace:
    """Create the truncated basis.

    >>> build_space(1, 2).dim
    12
    """
    if int(cutoff_r) != cutoff_r or int(cutoff_l) != cutoff_l:
        raise TypeError("cutoffs must be integers")
    cutoff_r, cutoff_l = int(cutoff_r), int(cutoff_l)
    if cutoff_r < 0:
        raise ValueError(f"cutoff_r must be >= 0, got {cutoff_r}")
    if cutoff_l < 1:
        raise ValueError(f"cutoff_l must be >= 1, got {cutoff_l}")
    # python ints do not overflow; the index type numpy uses does
    if (cutoff_r + 1) * (cutoff_l + 1) * 2 > min(sys.maxsize, np.iinfo(np.intp).max):
        raise OverflowError(
            f"dimension of cutoffs ({cutoff_r}, {cutoff_l}) overflows the index type"
        )
    return FockSpace(cutoff_r, cutoff_l)


@dataclass(frozen=True)
class StateVector:
    amplitudes: np.ndarray
    space: FockSpace

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).copy()
        if amps.shape != (self.space.dim,):
            raise ValueError(
                f"amplitude vector has shape {amps.shape}, space dim is {self.space.dim}"
            )
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalize(self) -> "StateVector":
        nrm = self.norm()
        if nrm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.amplitudes / nrm, self.space)

    def inner(self, other: "StateVector") -> complex:
        """<self|other>."""
        _check_same_space(self.space, other.space)
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: "StateVector") -> float:
        return abs(self.inner(other)) ** 2


@dataclass(frozen=True, eq=False)
class Operator:
    """Dense operator on a :class:`FockSpace`.

    ``tag`` marks operators with known structure (``"ajc"`` for the
    Dirac-oscillator Hamiltonian, ``"diagonal"``) so propagation can take a
    closed-form path; ``xi`` records the coupling for tagged Hamiltonians.
    """

    matrix: np.ndarray
    space: FockSpace
    hermitian: bool = False
    label: str = ""
    tag: Optional[str] = None
    xi: Optional[float] = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.space.dim, self.space.dim):
            raise ValueError(f"matrix shape {m.shape} does not match dim {self.space.dim}")
        object.__setattr__(self, "matrix", _frozen(m))
        if self.hermitian and self.hermiticity_error() > HERMITIAN_TOL * max(
            1.0, float(np.abs(m).max(initial=0.0))
        ):
            raise ValueError(f"operator {self.label!r} flagged hermitian but is not")

    def hermiticity_error(self) -> float:
        return float(np.abs(self.matrix - self.matrix.conj().T).max(initial=0.0))

    def dag(self) -> "Operator":
        return Operator(self.matrix.conj().T, self.space, self.hermitian, self.label + "†")

    def apply(self, psi: StateVector) -> StateVector:
        _check_same_space(self.space, psi.space)
        return StateVector(self.matrix @ psi.amplitudes, self.space)

    def __matmul__(self, other: "Operator") -> "Operator":
        _check_same_space(self.space, other.space)
        return Operator(self.matrix @ other.matrix, self.space, label=f"{self.label}{other.label}")

    def __add__(self, other: "Operator") -> "Operator":
        _check_same_space(self.space, other.space)
        return Operator(
            self.matrix + other.matrix,
            self.space,
            hermitian=self.hermitian and other.hermitian,
            label=f"({self.label}+{other.label})",
        )

    def __sub__(self, other: "Operator") -> "Operator":
        _check_same_space(self.space, other.space)
        return Operator(
            self.matrix - other.matrix,
            self.space,
            hermitian=self.hermitian and other.hermitian,
            label=f"({self.label}-{other.label})",
        )

    def __mul__(self, scalar: complex) -> "Operator":
        herm = self.hermitian and complex(scalar).imag == 0
        return Operator(self.matrix * scalar, self.space, hermitian=herm, label=self.label)

    __rmul__ = __mul__


def _check_same_space(a: FockSpace, b: FockSpace) -> None:
    if a != b:
        raise ValueError(f"dimension mismatch: {a} vs {b}")


def _mode_operator(space: FockSpace, mode: str, create: bool) -> np.ndarray:
    """a or a† on one chiral mode, identity elsewhere.  a† is hard-truncated."""
    dim = space.dim
    n = space.n_l if mode == "l" else space.n_r
    cutoff = space.cutoff_l if mode == "l" else space.cutoff_r
    m = np.zeros((dim, dim), dtype=complex)
    src = np.arange(dim)
    if create:
        ok = n < cutoff
        shift = 2 if mode == "l" else 2 * (space.cutoff_l + 1)
        m[src[ok] + shift, src[ok]] = np.sqrt(n[ok] + 1)
    else:
        ok = n > 0
        shift = 2 if mode == "l" else 2 * (space.cutoff_l + 1)
        m[src[ok] - shift, src[ok]] = np.sqrt(n[ok])
    return m


def _ladder(space: FockSpace, mode: str, kind: str) -> Operator:
    if kind not in ("annihilate", "create"):
        raise ValueError(f"kind must be 'annihilate' or 'create', got {kind!r}")
    create = kind == "create"
    name = f"a_{mode}" + ("†" if create else "")
    return Operator(_mode_operator(space, mode, create), space, label=name)


def ladder_left(space: FockSpace, kind: str) -> Operator:
    """a_l (``kind="annihilate"``) or a_l† (``kind="create"``)."""
    return _ladder(space, "l", kind)


def ladder_right(space: FockSpace, kind: str) -> Operator:
    return _ladder(space, "r", kind)


def number_left(space: FockSpace) -> Operator:
    return Operator(np.diag(space.n_l.astype(complex)), space, hermitian=True, label="N_l")


_PAULI = {
    "sx": np.array([[0, 1], [1, 0]], dtype=complex),
    "sy": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "sz": np.array([[1, 0], [0, -1]], dtype=complex),
    "raise": np.array([[0, 1], [0, 0]], dtype=complex),
    "lower": np.array([[0, 0], [1, 0]], dtype=complex),
}


def spin_operator(space: FockSpace, kind: str) -> Operator:
    """Pauli matrix (or sigma^±) on the spinor, identity on the modes.

    ``raise`` is |up><down| and ``lower`` is |down><up|.  Spin angular
    momentum components are half of these (see :func:`angular_momentum`).
    """
    try:
        s = _PAULI[kind]
    except KeyError:
        raise ValueError(f"unknown spin operator {kind!r}; use one of {sorted(_PAULI)}")
    modes = (space.cutoff_r + 1) * (space.cutoff_l + 1)
    return Operator(
        np.kron(np.eye(modes), s), space, hermitian=kind in ("sx", "sy", "sz"), label=kind
    )


def angular_momentum(space: FockSpace, kind: str) -> Operator:
    """Lz = n_r - n_l, Sz = sigma_z/2, Sx = sigma_x/2, Jz = Lz + Sz (hbar = 1)."""
    if kind == "Lz":
        lz = (space.n_r - space.n_l).astype(complex)
        return Operator(np.diag(lz), space, hermitian=True, label="Lz", tag="diagonal")
    if kind == "Sz":
        sz = np.where(space.spin == 0, 0.5, -0.5).astype(complex)
        return Operator(np.diag(sz), space, hermitian=True, label="Sz", tag="diagonal")
    if kind == "Sx":
        return Operator(0.5 * spin_operator(space, "sx").matrix, space, hermitian=True, label="Sx")
    if kind == "Jz":
        m = angular_momentum(space, "Lz").matrix + angular_momentum(space, "Sz").matrix
        return Operator(m, space, hermitian=True, label="Jz", tag="diagonal")
    raise ValueError(f"unknown angular momentum {kind!r}; use Lz, Sz, Sx or Jz")


def position_operator(space: FockSpace, kind: str) -> Operator:
    """x = (a_r + a_r† + a_l + a_l†)/2,  y = i(a_r - a_r† - a_l + a_l†)/2."""
    ar = _mode_operator(space, "r", False)
    al = _mode_operator(space, "l", False)
    if kind == "x":
        m = 0.5 * (ar + ar.conj().T + al + al.conj().T)
    elif kind == "y":
        m = 0.5j * (ar - ar.conj().T - al + al.conj().T)
    else:
        raise ValueError(f"unknown position component {kind!r}; use 'x' or 'y'")
    return Operator(m, space, hermitian=True, label=kind)


def coherent_tail_mass(z: complex, cutoff: int) -> float:
    """Poisson weight of n > cutoff for a coherent state of amplitude z."""
    return float(stats.poisson.sf(cutoff, abs(z) ** 2))


def required_cutoff(z: complex, tol: float = COHERENT_TAIL_TOL) -> int:
    mean = abs(z) ** 2
    c = max(1, int(np.ceil(4 * mean)))
    while coherent_tail_mass(z, c) >= tol:
        c += 1
    return c


def coherent_amplitudes(z: complex, cutoff: int) -> np.ndarray:
    """e^{-|z|^2/2} z^n / sqrt(n!) for n = 0..cutoff, without renormalization."""
    c = np.empty(cutoff + 1, dtype=complex)
    c[0] = np.exp(-abs(z) ** 2 / 2)
    for n in range(1, cutoff + 1):
        c[n] = c[n - 1] * z / np.sqrt(n)
    return c


def coherent_left(space: FockSpace, z: complex, spinor=(1.0, 0.0)) -> StateVector:
    """Left-handed coherent state |z> (n_r = 0) times the given spinor.

    Raises ``ValueError`` when |z|^2 > cutoff_l/4 or when the discarded
    Poisson tail exceeds 1e-12; the message names the smallest cutoff that
    would be accepted.
    """
    z = complex(z)
    tail = coherent_tail_mass(z, space.cutoff_l)
    if abs(z) ** 2 > space.cutoff_l / 4 or tail >= COHERENT_TAIL_TOL:
        need = required_cutoff(z)
        raise ValueError(
            f"coherent amplitude |z|^2 = {abs(z) ** 2:.6g} needs cutoff_l >= {need} "
            f"(have {space.cutoff_l}, truncated tail mass {tail:.3g})"
        )
    up, down = complex(spinor[0]), complex(spinor[1])
    orb = coherent_amplitudes(z, space.cutoff_l)
    orb /= np.linalg.norm(orb)
    amps = np.zeros(space.dim, dtype=complex)
    base = space.index(0, 0, Spin.UP)
    amps[base : base + 2 * (space.cutoff_l + 1) : 2] = up * orb
    amps[base + 1 : base + 2 * (space.cutoff_l + 1) : 2] = down * orb
    return StateVector(amps, space)


def expectation(op: Operator, psi: StateVector) -> complex | float:
    """<psi|A|psi>; returns a float for hermitian operators."""
    _check_same_space(op.space, psi.space)
    v = psi.amplitudes
    val = complex(np.vdot(v, op.matrix @ v))
    if op.hermitian:
        if abs(val.imag) > 1e-12 * max(1.0, abs(val)):
            raise ArithmeticError(f"<{op.label}> has imaginary residue {val.imag:.3g}")
        return val.real
    return val
