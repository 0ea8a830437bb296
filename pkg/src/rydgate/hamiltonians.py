"""Hamiltonians for two driven three-level atoms with a Rydberg blockade.

Each atom has levels |0>, |1>, |r>.  A single laser couples |1> to |r>
with strength Omega and detuning delta; |0> is dark.  The frame used
throughout ("natural frame") puts both ground levels at zero energy and
|r> at delta + d_i per atom, where d_i is a quasi-static per-atom shift
(e.g. Doppler).  The doubly excited state picks up the blockade energy
Delta_rr on top of the two single-atom detunings.

Two-atom basis ordering is |a1 a2> with levels ordered (0, 1, r) and
index 3*a1 + a2:

    0:|00>  1:|01>  2:|0r>  3:|10>  4:|11>  5:|1r>  6:|r0>  7:|r1>  8:|rr>

The computational subspace is {0, 1, 3, 4}.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import erf

__all__ = [
    "COMPUTATIONAL_INDICES",
    "SINGLE_RYDBERG_INDICES",
    "DOUBLE_RYDBERG_INDEX",
    "PulseParams",
    "AtomDetunings",
    "h_single",
    "h_symmetric_pair",
    "h_effective_pair",
    "h_full",
    "shaped_omega",
    "drive_envelope",
]

COMPUTATIONAL_INDICES = (0, 1, 3, 4)
SINGLE_RYDBERG_INDICES = (2, 5, 6, 7)
DOUBLE_RYDBERG_INDEX = 8

SQUARE = "square"
ERF = "erf"


@dataclass(frozen=True)
class PulseParams:
    """Physical drive parameters, all angular frequencies in rad/s.

    Parameters
    ----------
    omega : complex
        Rabi coupling between |1> and |r>.  A complex phase is allowed;
        all bundled reference reproductions use real positive Omega.
    delta : float
        Laser detuning of the |1> -> |r> transition.  Sign significant.
    delta_rr : float
        Blockade shift of the doubly excited state |rr>.
    duration : float
        Pulse duration T_G in seconds.
    shape : {"square", "erf"}
        Square pulse, or smooth switching edges built from error
        functions with characteristic time `delta_t`.
    delta_t : float, optional
        Edge time constant in seconds; required for the erf shape.
    """

    omega: complex
    delta: float
    delta_rr: float
    duration: float
    shape: str = SQUARE
    delta_t: float | None = None

    def __post_init__(self) -> None:
        if self.duration < 0:
            raise ValueError(f"duration must be >= 0, got {self.duration}")
        if self.shape not in (SQUARE, ERF):
            raise ValueError(f"unknown pulse shape {self.shape!r}")
        if self.shape == ERF and (self.delta_t is None or self.delta_t <= 0):
            raise ValueError("erf shape requires delta_t > 0")

    @property
    def xi(self) -> float:
        """Dimensionless drive ratio |Omega| / |delta|."""
        if self.delta == 0:
            raise ZeroDivisionError("xi undefined for delta = 0")
        return abs(self.omega) / abs(self.delta)


@dataclass(frozen=True)
class AtomDetunings:
    """Additive per-atom shifts of the |r> level (Doppler), rad/s."""

    d1: float = 0.0
    d2: float = 0.0


def h_single(p: PulseParams) -> np.ndarray:
    """Single-atom Hamiltonian in the basis {|1>, |r>}.

    Returns 0.5 * [[-delta, Omega], [conj(Omega), delta]], the symmetric
    (traceless) frame.  The natural frame used by `h_full` is this matrix
    plus (delta/2) * identity.
    """
    return 0.5 * np.array(
        [[-p.delta, p.omega], [np.conj(p.omega), p.delta]], dtype=complex
    )


def h_symmetric_pair(p: PulseParams) -> np.ndarray:
    """Symmetric two-atom Hamiltonian in {|11>, (|r1>+|1r>)/sqrt2, |rr>}.

    The collective coupling carries the sqrt(2) enhancement; the |rr>
    entry (2*Delta_rr + 3*delta)/2 equals the natural-frame value
    2*delta + Delta_rr shifted by -delta/2 along the diagonal.
    """
    w = p.omega * np.sqrt(2.0)
    return 0.5 * np.array(
        [
            [-p.delta, w, 0.0],
            [np.conj(w), p.delta, w],
            [0.0, np.conj(w), 2.0 * p.delta_rr + 3.0 * p.delta],
        ],
        dtype=complex,
    )


def h_effective_pair(p: PulseParams) -> np.ndarray:
    """Blockade-limit effective 2x2 for {|11>, symmetric single excitation}.

    Adiabatic elimination of |rr> for |Delta_rr| >> |Omega| leaves a
    two-level system with coupling sqrt(2)*Omega.
    """
    w = p.omega * np.sqrt(2.0)
    return 0.5 * np.array([[-p.delta, w], [np.conj(w), p.delta]], dtype=complex)


def _h_atom(omega: complex, delta: float, shift: float) -> np.ndarray:
    h = np.zeros((3, 3), dtype=complex)
    h[1, 2] = 0.5 * omega
    h[2, 1] = 0.5 * np.conj(omega)
    h[2, 2] = delta + shift
    return h


def h_full(p: PulseParams, d: AtomDetunings = AtomDetunings()) -> np.ndarray:
    """Full 9x9 two-atom Hamiltonian in the natural frame.

    Per atom i: ground levels at zero, |r> at delta + d_i, coupling
    Omega/2 between |1> and |r>; plus Delta_rr on |rr><rr|.  No term
    couples distinct computational states, so the computational block of
    the propagator is diagonal for every parameter choice.
    """
    eye = np.eye(3)
    h = np.kron(_h_atom(p.omega, p.delta, d.d1), eye)
    h += np.kron(eye, _h_atom(p.omega, p.delta, d.d2))
    h[DOUBLE_RYDBERG_INDEX, DOUBLE_RYDBERG_INDEX] += p.delta_rr
    return h


def shaped_omega(t, p: PulseParams):
    """Time-dependent coupling Omega(t) for the erf-edge pulse shape.

    Rising edge: (Omega/2) * [1 + erf(t / (sqrt2 * delta_t) - 3)] for
    t < T_G/2, mirrored about the pulse midpoint for t >= T_G/2.  The
    offset of 3 sigma makes Omega(0) negligible (~1e-5 of Omega).
    """
    if p.shape != ERF:
        raise ValueError("shaped_omega requires the erf pulse shape")
    t = np.asarray(t, dtype=float)
    s = np.sqrt(2.0) * p.delta_t
    rising = 1.0 + erf(t / s - 3.0)
    falling = 1.0 + erf((p.duration - t) / s - 3.0)
    out = 0.5 * p.omega * np.where(t < 0.5 * p.duration, rising, falling)
    return out if out.ndim else out[()]


def drive_envelope(t, p: PulseParams):
    """Omega(t) for either pulse shape (constant Omega for square)."""
    if p.shape == SQUARE:
        t = np.asarray(t, dtype=float)
        out = np.full(t.shape, p.omega, dtype=complex) if t.ndim else p.omega
        return out
    return shaped_omega(t, p)
