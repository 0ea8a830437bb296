"""Closed-form two-level dynamics for the driven ground-Rydberg transition.

Under strong blockade the collective excitation of N atoms (N = 1, 2)
reduces to a two-level problem with coupling sqrt(N)*Omega and detuning
delta.  These closed forms serve as independent oracles for the matrix
propagators and as the building blocks of the ideal (infinite-blockade)
gate.
"""

from __future__ import annotations

import numpy as np

__all__ = ["effective_rabi", "return_amplitude", "excitation_amplitude"]


def effective_rabi(n_atoms: int, omega: complex, delta: float) -> float:
    """Generalized Rabi frequency sqrt(N*|Omega|^2 + delta^2) in rad/s."""
    return float(np.sqrt(n_atoms * abs(omega) ** 2 + delta**2))


def return_amplitude(n_atoms: int, omega: complex, delta: float, t: float) -> complex:
    """Amplitude for the collective ground state to return to itself.

    Equals cos(W t / 2) + i (delta / W) sin(W t / 2) with
    W = effective_rabi(n_atoms, omega, delta).
    """
    w = effective_rabi(n_atoms, omega, delta)
    half = 0.5 * w * t
    if w == 0.0:
        return complex(1.0)
    return complex(np.cos(half) + 1j * (delta / w) * np.sin(half))


def excitation_amplitude(n_atoms: int, omega: complex, delta: float, t: float) -> complex:
    """Amplitude for transfer into the (collective) singly excited state.

    Equals -i sqrt(N) conj(Omega) / W * sin(W t / 2).
    """
    w = effective_rabi(n_atoms, omega, delta)
    if w == 0.0:
        return complex(0.0)
    return complex(-1j * np.sqrt(n_atoms) * np.conj(omega) / w * np.sin(0.5 * w * t))
