"""Exact unitary evolution and observable time series.

Three propagation routes share one interface:

* ``eig``: dense Hermitian eigendecomposition, valid for any Hamiltonian;
* ``block``: closed-form 2x2 rotations for the anti-Jaynes-Cummings
  Hamiltonian, one per invariant subspace;
* ``diagonal``: elementwise phases for diagonal Hamiltonians.

``method="auto"`` picks the closed form whenever the operator's tag allows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Sequence

import numpy as np

from . import fockspace as fs
from .fockspace import FockSpace, Operator, Spin, StateVector
from .model import ModelParams, effective_nr_hamiltonian, ajc_hamiltonian

__all__ = [
    "ObservableRecord",
    "TimeGrid",
    "Propagator",
    "propagate",
    "observable_series",
    "series_columns",
    "time_average",
    "ramsey_initial_state",
    "ramsey_reference_state",
    "ramsey_run",
    "zitterbewegung_initial_state",
    "zitterbewegung_period",
]

NORM_TOL = 1e-10
MIN_AVERAGE_PERIODS = 10


@dataclass(frozen=True)
class ObservableRecord:
    t: float
    Lz: float
    Sz: float
    Jz: float
    Sx: float
    x: float
    y: float
    norm: float


COLUMNS = tuple(f.name for f in fields(ObservableRecord))


@dataclass(frozen=True)
class TimeGrid:
    t0: float
    t1: float
    samples: int

    def __post_init__(self):
        if not self.t1 > self.t0:
            raise ValueError(f"time grid needs t1 > t0, got [{self.t0}, {self.t1}]")
        if self.samples < 2:
            raise ValueError(f"time grid needs at least 2 samples, got {self.samples}")

    def times(self) -> np.ndarray:
        return np.linspace(self.t0, self.t1, self.samples)


class Propagator:
    """exp(-i H t) for one Hamiltonian, with any set-up work done once."""

    def __init__(self, H: Operator, method: str = "auto"):
        if not H.hermitian:
            raise ValueError(f"Hamiltonian {H.label!r} is not hermitian")
        if method == "auto":
            method = {"ajc": "block", "diagonal": "diagonal"}.get(H.tag, "eig")
        if method == "block" and (H.tag != "ajc" or H.xi is None):
            raise ValueError("block propagation needs a Hamiltonian from ajc_hamiltonian")
        if method == "diagonal" and np.count_nonzero(H.matrix - np.diag(np.diag(H.matrix))):
            raise ValueError("diagonal propagation needs a diagonal Hamiltonian")
        self.H = H
        self.space = H.space
        self.method = method
        if method == "eig":
            self._evals, self._evecs = np.linalg.eigh(H.matrix)
        elif method == "diagonal":
            self._diag = np.diag(H.matrix).real.copy()
        elif method == "block":
            self._setup_blocks(H.xi)
        else:
            raise ValueError(f"unknown propagation method {method!r}")

    def _setup_blocks(self, xi: float) -> None:
        sp = self.space
        ups, dns, ns = [], [], []
        for n_r in range(sp.cutoff_r + 1):
            for n in range(1, sp.cutoff_l + 1):
                i, j = sp.block_indices(n, n_r)
                ups.append(i)
                dns.append(j)
                ns.append(n)
        self._up = np.array(ups, dtype=int)
        self._dn = np.array(dns, dtype=int)
        eta = 2.0 * np.sqrt(xi * np.array(ns, dtype=float))
        self._energy = np.sqrt(1.0 + eta**2)
        self._eta = eta
        # uncoupled: |n_r, 0, up> at +1 and the truncated |n_r, cutoff, down> at -1
        self._single_up = np.array([sp.index(r, 0, Spin.UP) for r in range(sp.cutoff_r + 1)])
        self._single_dn = np.array(
            [sp.index(r, sp.cutoff_l, Spin.DOWN) for r in range(sp.cutoff_r + 1)]
        )

    def apply(self, psi: StateVector, t: float) -> StateVector:
        return StateVector(self.evolve(psi, [t])[0], self.space)

    def evolve(self, psi: StateVector, times: Sequence[float]) -> np.ndarray:
        """Amplitudes at each time, shape (len(times), dim)."""
        if psi.space != self.space:
            raise ValueError("state and Hamiltonian live on different spaces")
        v = psi.amplitudes
        t = np.asarray(times, dtype=float)[:, None]
        if self.method == "eig":
            coeff = self._evecs.conj().T @ v
            return (np.exp(-1j * t * self._evals) * coeff) @ self._evecs.T
        if self.method == "diagonal":
            return np.exp(-1j * t * self._diag) * v
        return self._evolve_blocks(v, t)

    def _evolve_blocks(self, v: np.ndarray, t: np.ndarray) -> np.ndarray:
        # U = cos(E t) - i sin(E t) h / E with h = [[1, i eta], [-i eta, -1]]
        out = np.empty((t.shape[0], v.size), dtype=complex)
        c = np.cos(self._energy * t)
        s = np.sin(self._energy * t) / self._energy
        a, b = v[self._up], v[self._dn]
        out[:, self._up] = (c - 1j * s) * a + (s * self._eta) * b
        out[:, self._dn] = -(s * self._eta) * a + (c + 1j * s) * b
        out[:, self._single_up] = np.exp(-1j * t) * v[self._single_up]
        out[:, self._single_dn] = np.exp(1j * t) * v[self._single_dn]
        return out


def propagate(psi0: StateVector, H: Operator, t: float, method: str = "auto") -> StateVector:
    """psi(t) = exp(-i H t) psi0."""
    return Propagator(H, method).apply(psi0, t)


class _Observables:
    def __init__(self, space: FockSpace):
        self.lz = (space.n_r - space.n_l).astype(float)
        self.sz = np.where(space.spin == 0, 0.5, -0.5)
        self.sx = fs.angular_momentum(space, "Sx").matrix
        self.x = fs.position_operator(space, "x").matrix
        self.y = fs.position_operator(space, "y").matrix

    def records(self, times: np.ndarray, states: np.ndarray) -> list[ObservableRecord]:
        prob = np.abs(states) ** 2
        norm2 = prob.sum(axis=1)
        lz = prob @ self.lz
        sz = prob @ self.sz

        def mean(op):
            return np.einsum("ti,ij,tj->t", states.conj(), op, states).real

        sx, x, y = mean(self.sx), mean(self.x), mean(self.y)
        return [
            ObservableRecord(
                t=float(times[k]),
                Lz=float(lz[k]),
                Sz=float(sz[k]),
                Jz=float(lz[k] + sz[k]),
                Sx=float(sx[k]),
                x=float(x[k]),
                y=float(y[k]),
                norm=float(np.sqrt(norm2[k])),
            )
            for k in range(len(times))
        ]


def observable_series(
    psi0: StateVector, H: Operator, grid: TimeGrid, method: str = "auto"
) -> list[ObservableRecord]:
    """Expectation values of Lz, Sz, Jz, Sx, x, y at every grid point."""
    if abs(psi0.norm() - 1.0) > NORM_TOL:
        raise ValueError(f"initial state is not normalized (norm {psi0.norm():.15g})")
    times = grid.times()
    states = Propagator(H, method).evolve(psi0, times)
    return _Observables(psi0.space).records(times, states)


def series_columns(series: Sequence[ObservableRecord]) -> dict[str, np.ndarray]:
    return {name: np.array([getattr(r, name) for r in series]) for name in COLUMNS}


def time_average(series: Sequence[ObservableRecord], period: float) -> ObservableRecord:
    """Column means over a series spanning at least ten ``period``\\ s.

    ``period`` is the slowest oscillation period the caller expects in the
    signal.  The arithmetic mean of uniform samples carries an O(1/N)
    bias from the incomplete last cycle; ten periods keep it below a
    percent of the oscillation amplitude.
    """
    if len(series) < 2:
        raise ValueError("time average needs at least two records")
    span = series[-1].t - series[0].t
    need = MIN_AVERAGE_PERIODS * period
    if span < need:
        raise ValueError(
            f"series spans t = {span:.6g}; averaging needs at least {need:.6g} "
            f"({MIN_AVERAGE_PERIODS} periods of {period:.6g})"
        )
    cols = series_columns(series)
    return ObservableRecord(**{k: float(np.mean(v)) for k, v in cols.items()})


def _check_spinor(alpha: complex, beta: complex) -> None:
    w = abs(alpha) ** 2 + abs(beta) ** 2
    if abs(w - 1.0) > 1e-12:
        raise ValueError(f"spinor weights must satisfy |alpha|^2 + |beta|^2 = 1, got {w:.15g}")


def ramsey_initial_state(z: complex, alpha: complex, beta: complex, space: FockSpace) -> StateVector:
    """|z_l> (alpha |up> + beta |down>)."""
    _check_spinor(alpha, beta)
    return fs.coherent_left(space, z, (alpha, beta))


def ramsey_reference_state(
    z: complex, alpha: complex, beta: complex, p: ModelParams, t: float
) -> StateVector:
    """Spin-conditioned coherent states expected under the effective Hamiltonian.

    alpha e^{-i W0 t} |z e^{-2i w t}>|up> + beta e^{+i W1 t} |z e^{+2i w t}>|down>
    with W0 = 1, W1 = 1 + 2 xi and w = xi.
    """
    space = p.space()
    w0, w1 = 1.0, 1.0 + 2.0 * p.xi
    up = fs.coherent_left(space, z * np.exp(-2j * p.omega * t), (1, 0)).amplitudes
    dn = fs.coherent_left(space, z * np.exp(2j * p.omega * t), (0, 1)).amplitudes
    amps = alpha * np.exp(-1j * w0 * t) * up + beta * np.exp(1j * w1 * t) * dn
    return StateVector(amps, space)


def ramsey_run(
    z: complex,
    alpha: complex,
    beta: complex,
    p: ModelParams,
    grid: TimeGrid,
    hamiltonian: str = "effective",
) -> list[ObservableRecord]:
    """Evolve a coherent state with a mixed spinor and record observables."""
    if hamiltonian == "effective":
        H = effective_nr_hamiltonian(p)
    elif hamiltonian == "exact":
        H = ajc_hamiltonian(p)
    else:
        raise ValueError(f"hamiltonian must be 'exact' or 'effective', got {hamiltonian!r}")
    psi0 = ramsey_initial_state(z, alpha, beta, H.space)
    return observable_series(psi0, H, grid)


def zitterbewegung_initial_state(p: ModelParams, n_l: int) -> StateVector:
    """|n_l - 1>|down>, the state whose spin and orbit oscillate."""
    if not 1 <= n_l <= p.cutoff_l:
        raise ValueError(f"n_l must lie in 1..{p.cutoff_l}, got {n_l}")
    return p.space().basis_state(0, n_l - 1, Spin.DOWN)


def zitterbewegung_period(xi: float, n_l: int) -> float:
    """Period pi/E of sin^2(E t) in block n_l."""
    return math.pi / math.sqrt(1.0 + 4.0 * xi * n_l)
