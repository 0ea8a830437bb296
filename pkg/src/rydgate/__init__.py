"""Single-pulse Rydberg-blockade controlled-phase gates on two atom qubits.

Find approximate pulse-parameter solutions, simulate the full two-atom
dynamics, quantify gate fidelities, and evaluate robustness to noise.
"""

from .analytic import effective_rabi, excitation_amplitude, return_amplitude
from .gates import (
    FLIP_ON_00,
    FLIP_ON_11,
    FidelityReport,
    GateMatrix,
    Histogram,
    TargetGate,
    align_global_phase,
    extract_gate,
    fidelity_report,
    ideal_gate,
    make_histogram,
    min_fidelity,
    sample_states,
    state_fidelities,
    state_fidelity,
)
from .hamiltonians import (
    COMPUTATIONAL_INDICES,
    AtomDetunings,
    PulseParams,
    drive_envelope,
    h_effective_pair,
    h_full,
    h_single,
    h_symmetric_pair,
    shaped_omega,
)
from .noise import (
    BlockadeSweepResult,
    MCReport,
    NoiseConfig,
    NoiseDraws,
    blockade_sweep,
    doppler_sweep,
    monte_carlo,
    noise_sweep,
    run_trial,
)
from .propagation import (
    ConvergenceError,
    NonHermitianError,
    evolve_time_dependent,
    propagator,
)
from .search import (
    ShapedOptimum,
    SolutionCandidate,
    f_value,
    g_value,
    gate_time,
    optimize_shaped,
    scan,
)
from .simulate import population_trace, simulate_gate

__version__ = "0.1.0"

__all__ = [
    "AtomDetunings",
    "BlockadeSweepResult",
    "COMPUTATIONAL_INDICES",
    "ConvergenceError",
    "FLIP_ON_00",
    "FLIP_ON_11",
    "FidelityReport",
    "GateMatrix",
    "Histogram",
    "MCReport",
    "NoiseConfig",
    "NoiseDraws",
    "NonHermitianError",
    "PulseParams",
    "ShapedOptimum",
    "SolutionCandidate",
    "TargetGate",
    "align_global_phase",
    "blockade_sweep",
    "doppler_sweep",
    "drive_envelope",
    "effective_rabi",
    "evolve_time_dependent",
    "excitation_amplitude",
    "extract_gate",
    "f_value",
    "fidelity_report",
    "g_value",
    "gate_time",
    "h_effective_pair",
    "h_full",
    "h_single",
    "h_symmetric_pair",
    "ideal_gate",
    "make_histogram",
    "min_fidelity",
    "monte_carlo",
    "noise_sweep",
    "optimize_shaped",
    "population_trace",
    "propagator",
    "return_amplitude",
    "run_trial",
    "sample_states",
    "scan",
    "shaped_omega",
    "simulate_gate",
    "state_fidelities",
    "state_fidelity",
]
