"""Single trapped atom exchanging spin and orbital angular momentum with a Laguerre-Gaussian beam."""

from lgatom.analysis import (
    INTERNAL,
    TRAP,
    entanglement_entropy,
    momentum_distribution,
    partial_trace,
    probe_discrimination,
    schmidt,
)
from lgatom.dynamics import (
    CompositeBasis,
    DriveSpec,
    PulseStep,
    StateVector,
    build_full_hamiltonian,
    build_rwa_hamiltonian,
    evolve_full,
    evolve_rwa,
    pi_pulse_time,
    run_schedule,
)
from lgatom.internal_ladder import InternalLadder
from lgatom.trap_fock import FockBasis, FockLabel, OperatorMatrix, build_basis

__version__ = "0.1.0"

__all__ = [
    "INTERNAL", "TRAP", "entanglement_entropy", "momentum_distribution", "partial_trace",
    "probe_discrimination", "schmidt", "CompositeBasis", "DriveSpec", "PulseStep", "StateVector",
    "build_full_hamiltonian", "build_rwa_hamiltonian", "evolve_full", "evolve_rwa", "pi_pulse_time",
    "run_schedule", "InternalLadder", "FockBasis", "FockLabel", "OperatorMatrix", "build_basis",
]
