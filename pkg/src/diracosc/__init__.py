"""Simulation of the 2+1 Dirac oscillator in its anti-Jaynes-Cummings form."""

from .fockspace import build_space, coherent_left, expectation
from .model import ModelParams, ajc_hamiltonian, effective_nr_hamiltonian
from .dynamics import TimeGrid, observable_series, propagate

__version__ = "0.1.0"
