"""Interaction-picture dynamics of the atom driven by a circularly polarized LG beam.

Composite index = level * trap_size + trap_index (internal-major). Units hbar = nu = 1.

Phase convention: the coefficient of a^{|l|} sigma^dag in the RWA Hamiltonian is
-(1/2) eta^|l| Omega e^{-i phi}, which makes a resonant pulse on |m+1>|0,0> give
cos(theta)|m+1>|0,0> + i e^{i phi} sin(theta)|m>|chi_{|l|}> with theta = eta^|l| Omega t / 2.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from math import comb
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from lgatom.internal_ladder import InternalLadder, angular_momentum_internal, lowering_operator
from lgatom.trap_fock import (
    BasisMismatchError,
    FockBasis,
    FockLabel,
    OperatorMatrix,
    angular_momentum_trap,
    annihilate_minus,
    annihilate_plus,
    total_number,
)

log = logging.getLogger(__name__)

NORM_TOL = 1e-9


class NormError(RuntimeError):
    """State norm left its tolerance band."""


class IntegrationError(RuntimeError):
    """Adaptive integrator failed (step-size underflow or similar)."""


class RWAValidityWarning(UserWarning):
    pass


@dataclass(frozen=True)
class CompositeBasis:
    internal: InternalLadder
    trap: FockBasis

    @property
    def size(self) -> int:
        return self.internal.level_count * self.trap.size

    @property
    def tag(self) -> str:
        return f"composite[{self.internal.tag}x{self.trap.tag}]"

    def index(self, level: int, label) -> int:
        if not 0 <= level < self.internal.level_count:
            raise IndexError(f"level {level} out of range")
        return level * self.trap.size + self.trap.index(label)

    def split(self, i: int) -> tuple[int, FockLabel]:
        level, j = divmod(i, self.trap.size)
        return level, self.trap.label(j)

    def lift_internal(self, op: OperatorMatrix) -> OperatorMatrix:
        if op.basis_tag != self.internal.tag:
            raise BasisMismatchError(f"{op.basis_tag} is not {self.internal.tag}")
        return OperatorMatrix(self.tag, np.kron(op.entries, np.eye(self.trap.size)))

    def lift_trap(self, op: OperatorMatrix) -> OperatorMatrix:
        if op.basis_tag != self.trap.tag:
            raise BasisMismatchError(f"{op.basis_tag} is not {self.trap.tag}")
        return OperatorMatrix(self.tag, np.kron(np.eye(self.internal.level_count), op.entries))

    def product(self, internal_op: OperatorMatrix, trap_op: OperatorMatrix) -> OperatorMatrix:
        return OperatorMatrix(self.tag, np.kron(internal_op.entries, trap_op.entries))

    def product_state(self, internal_amps, trap_amps) -> "StateVector":
        return StateVector(self.tag, np.kron(np.asarray(internal_amps, dtype=complex), np.asarray(trap_amps, dtype=complex)))

    def basis_state(self, level: int, label) -> "StateVector":
        v = np.zeros(self.size, dtype=complex)
        v[self.index(level, label)] = 1.0
        return StateVector(self.tag, v)

    # observables
    def L_trap(self) -> OperatorMatrix:
        return self.lift_trap(angular_momentum_trap(self.trap))

    def l_internal(self) -> OperatorMatrix:
        return self.lift_internal(angular_momentum_internal(self.internal))

    def N_trap(self) -> OperatorMatrix:
        return self.lift_trap(total_number(self.trap))

    def level_projector(self, level: int) -> OperatorMatrix:
        p = np.zeros((self.internal.level_count,) * 2, dtype=complex)
        p[level, level] = 1.0
        return self.lift_internal(OperatorMatrix(self.internal.tag, p))


@dataclass(frozen=True, eq=False)
class StateVector:
    basis_tag: str
    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=complex)
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)
        check_norm(a, "creation")

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def overlap(self, other: "StateVector") -> complex:
        if other.basis_tag != self.basis_tag:
            raise BasisMismatchError(f"{self.basis_tag} vs {other.basis_tag}")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: "StateVector") -> float:
        return abs(self.overlap(other)) ** 2

    def expect(self, op: OperatorMatrix) -> float:
        if op.basis_tag != self.basis_tag:
            raise BasisMismatchError(f"{op.basis_tag} vs {self.basis_tag}")
        return op.expectation(self.amplitudes).real

    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def check_norm(amps: np.ndarray, where: str, tol: float = NORM_TOL) -> None:
    n = np.linalg.norm(amps)
    if abs(n - 1.0) > tol:
        raise NormError(f"norm {n!r} off by {abs(n - 1):.3e} at {where}")


@dataclass(frozen=True)
class DriveSpec:
    l: int
    rabi_magnitude: float
    rabi_phase: float = 0.0
    eta: float = 0.1
    detuning: float = 0.0

    def __post_init__(self):
        if self.eta <= 0:
            raise ValueError("eta must be positive (eta = 0 is the point-particle limit)")
        if self.rabi_magnitude < 0:
            raise ValueError("rabi magnitude must be nonnegative")
        if self.eta ** abs(self.l) * self.rabi_magnitude >= 0.1:
            warnings.warn(
                f"eta^|l| Omega = {self.effective_rabi:.3g} is not << nu; RWA may be poor",
                RWAValidityWarning,
                stacklevel=3,
            )

    @property
    def effective_rabi(self) -> float:
        """eta^|l| Omega, the sideband Rabi frequency scale."""
        return self.eta ** abs(self.l) * self.rabi_magnitude

    def carrier_frequency(self, ladder: InternalLadder, transition: int = 0) -> float:
        return ladder.transition_frequencies[transition] - abs(self.l) + self.detuning


@dataclass(frozen=True)
class PulseStep:
    """One pulse. ``area`` is theta = eta^|l| Omega t / 2 (pi/2 is a full transfer)."""

    drive: DriveSpec
    area: Optional[float] = None
    duration: Optional[float] = None
    model: str = "RWA"
    transition: int = 0

    def __post_init__(self):
        if (self.area is None) == (self.duration is None):
            raise ValueError("specify exactly one of area or duration")
        if self.model not in ("RWA", "FULL"):
            raise ValueError(f"model must be RWA or FULL, got {self.model!r}")
        if self.duration is not None and self.duration < 0:
            raise ValueError("duration must be nonnegative")

    @property
    def time(self) -> float:
        if self.duration is not None:
            return float(self.duration)
        if self.drive.effective_rabi == 0:
            raise ValueError("area-specified pulse needs a nonzero Rabi frequency")
        return 2.0 * self.area / self.drive.effective_rabi


def pi_pulse_time(drive: DriveSpec) -> float:
    """Duration of a full transfer, t = pi / (eta^|l| Omega)."""
    return np.pi / drive.effective_rabi


def _sideband_operator(trap: FockBasis, l: int) -> OperatorMatrix:
    """a_-^|l| for l > 0, a_+^|l| for l < 0, identity for l = 0."""
    if l == 0:
        return OperatorMatrix(trap.tag, np.eye(trap.size))
    a = annihilate_minus(trap) if l > 0 else annihilate_plus(trap)
    return a ** abs(l)


def _raising_internal(basis: CompositeBasis, transition: int) -> OperatorMatrix:
    return lowering_operator(basis.internal, transition).dag


def build_rwa_hamiltonian(basis: CompositeBasis, drive: DriveSpec, transition: int = 0) -> OperatorMatrix:
    """-(1/2) eta^|l| Omega e^{-i phi} a_{-sign(l)}^|l| sigma_k^dag + h.c. - detuning sigma_k^dag sigma_k."""
    sig_up = _raising_internal(basis, transition)
    if abs(drive.l) > basis.trap.n_max:
        log.warning("|l|=%d exceeds n_max=%d: sideband coupling vanishes", abs(drive.l), basis.trap.n_max)
    coupling = -0.5 * drive.effective_rabi * np.exp(-1j * drive.rabi_phase)
    term = basis.product(sig_up, _sideband_operator(basis.trap, drive.l)) * coupling
    H = term + term.dag
    if drive.detuning != 0.0:
        # frame rotating at the carrier: the upper level sees -delta
        upper = basis.level_projector(transition + 1)
        H = H - upper * drive.detuning
    return H


@dataclass
class FullHamiltonian:
    """H(t) = sum_f e^{i f t} C_f + h.c., grouped by oscillation frequency f."""

    basis: CompositeBasis
    terms: list[tuple[float, np.ndarray]]

    def matrix(self, t: float) -> np.ndarray:
        H = np.zeros((self.basis.size,) * 2, dtype=complex)
        for f, C in self.terms:
            H += np.exp(1j * f * t) * C
        return H + H.conj().T

    def __call__(self, t: float) -> OperatorMatrix:
        return OperatorMatrix(self.basis.tag, self.matrix(t))

    def coefficient_series(self, monomial: np.ndarray, times: np.ndarray) -> np.ndarray:
        """Projection of the non-h.c. part onto one operator monomial over time."""
        nrm = np.vdot(monomial, monomial).real
        out = []
        for t in times:
            G = sum(np.exp(1j * f * t) * C for f, C in self.terms)
            out.append(np.vdot(monomial, G) / nrm)
        return np.array(out)


def full_hamiltonian(basis: CompositeBasis, drive: DriveSpec, transition: int = 0) -> FullHamiltonian:
    """Time-dependent interaction-picture Hamiltonian without the RWA.

    Keeps the full binomial expansion of (a_s^dag e^{it} + a_{-s} e^{-it})^|l| and every
    transition of the ladder, each with phase e^{i(gap_k - omega)t}. ``transition`` picks the
    transition whose sideband sets the carrier omega.
    """
    ladder, trap = basis.internal, basis.trap
    omega = drive.carrier_frequency(ladder, transition)
    n = abs(drive.l)
    if drive.l >= 0:
        up, down = annihilate_plus(trap).dag, annihilate_minus(trap)
    else:
        up, down = annihilate_minus(trap).dag, annihilate_plus(trap)
    # binomial: k raising factors, n-k lowering factors, phase e^{i(k - (n-k)) t}
    trap_terms: dict[int, np.ndarray] = {}
    for k in range(n + 1):
        mono = np.linalg.matrix_power(up.entries, k) @ np.linalg.matrix_power(down.entries, n - k)
        trap_terms[2 * k - n] = trap_terms.get(2 * k - n, 0) + comb(n, k) * mono

    if ladder.dipole_scales is not None:
        scales = np.array(ladder.dipole_scales) / ladder.dipole_scales[transition]
    else:
        scales = np.ones(ladder.level_count - 1)

    coupling = -0.5 * drive.effective_rabi * np.exp(-1j * drive.rabi_phase)
    grouped: dict[float, np.ndarray] = {}
    for k, gap in enumerate(ladder.transition_frequencies):
        sig_up = _raising_internal(basis, k).entries
        for trap_freq, T in trap_terms.items():
            f = float(trap_freq + gap - omega)
            C = coupling * scales[k] * np.kron(sig_up, T)
            grouped[f] = grouped.get(f, 0) + C
    return FullHamiltonian(basis, sorted(grouped.items(), key=lambda kv: kv[0]))


def build_full_hamiltonian(basis: CompositeBasis, drive: DriveSpec, t: float, transition: int = 0) -> OperatorMatrix:
    return full_hamiltonian(basis, drive, transition)(t)


def rwa_propagator(H: OperatorMatrix, duration: float) -> OperatorMatrix:
    if not H.is_hermitian():
        raise ValueError("Hamiltonian is not Hermitian")
    E, V = np.linalg.eigh(H.entries)
    U = (V * np.exp(-1j * E * duration)) @ V.conj().T
    return OperatorMatrix(H.basis_tag, U)


def evolve_rwa(state: StateVector, H: OperatorMatrix, duration: float) -> StateVector:
    """exp(-i H t) |psi> via eigendecomposition of the Hermitian H."""
    if H.basis_tag != state.basis_tag:
        raise BasisMismatchError(f"{H.basis_tag} vs {state.basis_tag}")
    if duration == 0:
        if not H.is_hermitian():
            raise ValueError("Hamiltonian is not Hermitian")
        return state
    U = rwa_propagator(H, duration)
    return StateVector(state.basis_tag, U.entries @ state.amplitudes)


def evolve_rwa_trajectory(state: StateVector, H: OperatorMatrix, times: Sequence[float]) -> list[StateVector]:
    if H.basis_tag != state.basis_tag:
        raise BasisMismatchError(f"{H.basis_tag} vs {state.basis_tag}")
    if not H.is_hermitian():
        raise ValueError("Hamiltonian is not Hermitian")
    E, V = np.linalg.eigh(H.entries)
    c = V.conj().T @ state.amplitudes
    return [StateVector(state.basis_tag, V @ (np.exp(-1j * E * t) * c)) for t in times]


@dataclass
class Trajectory:
    times: np.ndarray
    states: list[StateVector]

    @property
    def final(self) -> StateVector:
        return self.states[-1]


def evolve_full(
    state: StateVector,
    basis: CompositeBasis,
    drive: DriveSpec,
    t_span: tuple[float, float],
    tolerance: float = 1e-10,
    sample_times: Sequence[float] | None = None,
    transition: int = 0,
    max_step: float = np.inf,
) -> Trajectory:
    """Integrate i d|psi>/dt = H_full(t)|psi> with an adaptive embedded Runge-Kutta (DOP853)."""
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    if state.basis_tag != basis.tag:
        raise BasisMismatchError(f"{state.basis_tag} vs {basis.tag}")
    t0, t1 = map(float, t_span)
    times = np.array([t1] if sample_times is None else sample_times, dtype=float)
    if t1 == t0:
        return Trajectory(np.array([t0]), [state])
    Hf = full_hamiltonian(basis, drive, transition)
    freqs = np.array([f for f, _ in Hf.terms])
    Cs = np.stack([C for _, C in Hf.terms])
    Cs_h = np.conj(np.transpose(Cs, (0, 2, 1)))

    def rhs(t, y):
        ph = np.exp(1j * freqs * t)
        G = np.tensordot(ph, Cs, axes=1) + np.tensordot(ph.conj(), Cs_h, axes=1)
        return -1j * (G @ y)

    sol = solve_ivp(
        rhs,
        (t0, t1),
        state.amplitudes.astype(complex),
        method="DOP853",
        t_eval=times,
        rtol=tolerance,
        atol=tolerance,
        max_step=max_step,
    )
    if sol.status != 0:
        raise IntegrationError(sol.message)
    drift_tol = max(10 * tolerance, 1e-15)
    states = []
    for k in range(sol.y.shape[1]):
        y = sol.y[:, k]
        check_norm(y, f"t={sol.t[k]!r} (full model)", tol=drift_tol)
        states.append(_unchecked_state(state.basis_tag, y))
    return Trajectory(sol.t, states)


def _unchecked_state(tag: str, amps: np.ndarray) -> StateVector:
    # norm already checked against the integrator's own band
    s = object.__new__(StateVector)
    a = np.array(amps, dtype=complex)
    a.setflags(write=False)
    object.__setattr__(s, "basis_tag", tag)
    object.__setattr__(s, "amplitudes", a)
    return s


@dataclass
class StepRecord:
    index: int
    model: str
    duration: float
    t_end: float
    L_trap: float
    l_internal: float
    N_trap: float
    level_populations: list[float]
    norm: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def observables(basis: CompositeBasis, state: StateVector) -> dict:
    return {
        "L_trap": state.expect(basis.L_trap()),
        "l_internal": state.expect(basis.l_internal()),
        "N_trap": state.expect(basis.N_trap()),
        "level_populations": [state.expect(basis.level_projector(k)) for k in range(basis.internal.level_count)],
        "norm": state.norm,
    }


def apply_step(
    state: StateVector, basis: CompositeBasis, step: PulseStep, t_start: float = 0.0, tolerance: float = 1e-10
) -> StateVector:
    if step.model == "RWA":
        return evolve_rwa(state, build_rwa_hamiltonian(basis, step.drive, step.transition), step.time)
    traj = evolve_full(
        state, basis, step.drive, (t_start, t_start + step.time), tolerance=tolerance, transition=step.transition
    )
    return traj.final


def run_schedule(
    initial: StateVector,
    steps: Sequence[PulseStep],
    basis: CompositeBasis,
    tolerance: float = 1e-10,
) -> tuple[StateVector, list[StepRecord]]:
    """Apply pulses in order; full-model steps share a running interaction-picture clock."""
    if initial.basis_tag != basis.tag:
        raise BasisMismatchError(f"{initial.basis_tag} vs {basis.tag}")
    state, t, records = initial, 0.0, []
    for i, step in enumerate(steps):
        state = apply_step(state, basis, step, t_start=t, tolerance=tolerance)
        t += step.time
        records.append(StepRecord(index=i, model=step.model, duration=step.time, t_end=t, **observables(basis, state)))
    return state, records


def conserved_quantities(basis: CompositeBasis, l: int, transition: int = 0) -> tuple[OperatorMatrix, OperatorMatrix]:
    """C1 = l * l_z - L_Z and C2 = N + |l| sigma^dag sigma (for the driven transition)."""
    C1 = basis.l_internal() * l - basis.L_trap()
    C2 = basis.N_trap() + basis.level_projector(transition + 1) * abs(l)
    return C1, C2
