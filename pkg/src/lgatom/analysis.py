"""Entanglement measures and the two measurement proposals (release momentum, probe pulse)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from lgatom.dynamics import (
    CompositeBasis,
    DriveSpec,
    StateVector,
    build_rwa_hamiltonian,
    evolve_rwa,
)
from lgatom.lg_field import TrapWavefunction, eval_trap_wavefunction
from lgatom.trap_fock import BasisMismatchError

INTERNAL = "INTERNAL"
TRAP = "TRAP"


class DensityMatrixError(ValueError):
    pass


class AliasingError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class ReducedDensity:
    subsystem: str
    matrix: np.ndarray

    def __post_init__(self):
        if self.subsystem not in (INTERNAL, TRAP):
            raise ValueError(f"unknown subsystem {self.subsystem!r}")

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    @property
    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    coefficients: np.ndarray
    internal_vectors: np.ndarray  # columns
    trap_vectors: np.ndarray  # columns

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self.coefficients > 1e-12))

    def reconstruct(self) -> np.ndarray:
        """Composite amplitudes (internal-major) rebuilt from the decomposition."""
        A = (self.internal_vectors * self.coefficients) @ self.trap_vectors.T
        return A.reshape(-1)


def _amplitude_matrix(state: StateVector, basis: CompositeBasis) -> np.ndarray:
    if state.basis_tag != basis.tag:
        raise BasisMismatchError(f"state on {state.basis_tag}, expected composite {basis.tag}")
    return state.amplitudes.reshape(basis.internal.level_count, basis.trap.size)


def partial_trace(state: StateVector, basis: CompositeBasis, keep: str) -> ReducedDensity:
    A = _amplitude_matrix(state, basis)
    if keep == INTERNAL:
        rho = A @ A.conj().T
    elif keep == TRAP:
        rho = A.T @ A.conj()
    else:
        raise ValueError(f"keep must be {INTERNAL} or {TRAP}")
    return ReducedDensity(keep, rho)


def entanglement_entropy(rho: ReducedDensity, base: float = 2, tol: float = 1e-10) -> float:
    """Von Neumann entropy in bits (base 2) or nats (base e)."""
    lam = rho.eigenvalues()
    if lam.min() < -tol:
        raise DensityMatrixError(f"negative eigenvalue {lam.min():.3e}")
    lam = lam[lam > 0]
    return float(max(-np.sum(lam * np.log(lam)) / np.log(base), 0.0))


def schmidt(state: StateVector, basis: CompositeBasis) -> SchmidtDecomposition:
    A = _amplitude_matrix(state, basis)
    U, s, Vh = np.linalg.svd(A, full_matrices=False)
    return SchmidtDecomposition(s, U, Vh.T)


def binary_entropy(p: float) -> float:
    if p <= 0 or p >= 1:
        return 0.0
    return float(-p * np.log2(p) - (1 - p) * np.log2(1 - p))


def entanglement_report(state: StateVector, basis: CompositeBasis) -> dict:
    rho = partial_trace(state, basis, INTERNAL)
    sd = schmidt(state, basis)
    return {
        "entropy_bits": entanglement_entropy(rho, 2),
        "schmidt_coefficients": [float(c) for c in sd.coefficients[: sd.rank]],
        "purity_internal": rho.purity,
    }


@dataclass(frozen=True, eq=False)
class MomentumDistribution:
    kx: np.ndarray  # 1D momentum axis, units of hbar/R_0
    density: np.ndarray  # indexed [ky, kx]

    @property
    def dk(self) -> float:
        return float(self.kx[1] - self.kx[0])

    @property
    def total(self) -> float:
        return float(self.density.sum() * self.dk**2)

    def at_origin(self) -> float:
        i = int(np.argmin(np.abs(self.kx)))
        return float(self.density[i, i])


def momentum_distribution(
    wf: TrapWavefunction, n: int = 256, extent: float | None = None, tail_tol: float = 1e-6
) -> MomentumDistribution:
    """|FT chi_{N,M}|^2 on a square momentum grid that contains p = 0 exactly.

    ``extent`` is the half-width of the position box; the default sqrt(pi n / 2) R_0
    balances the position box and the momentum cutoff pi/dx for an oscillator state.
    """
    if n % 2:
        raise ValueError("grid size must be even")
    if extent is None:
        extent = np.sqrt(np.pi * n / 2) * wf.r0
    dx = 2 * extent / n
    x = (np.arange(n) - n // 2) * dx
    X, Y = np.meshgrid(x, x, indexing="xy")
    psi = eval_trap_wavefunction(wf, np.hypot(X, Y), np.arctan2(Y, X))
    phi = np.fft.fftshift(np.fft.fft2(np.fft.ifftshift(psi))) * dx**2 / (2 * np.pi)
    k = np.fft.fftshift(np.fft.fftfreq(n, d=dx)) * 2 * np.pi
    dens = np.abs(phi) ** 2
    dist = MomentumDistribution(k, dens)
    edge = np.concatenate([dens[0], dens[-1], dens[:, 0], dens[:, -1]])
    edge_mass = edge.sum() * dist.dk**2
    if edge_mass > tail_tol:
        raise AliasingError(f"momentum tail mass {edge_mass:.3e} at grid edge")
    return dist


def write_distribution_csv(path, dist: MomentumDistribution, header: str | None = None) -> None:
    import csv

    with open(path, "w", newline="") as f:
        if header:
            f.write(f"# {header}\n")
        w = csv.writer(f)
        w.writerow(["px", "py", "density"])
        for iy, py in enumerate(dist.kx):
            for ix, px in enumerate(dist.kx):
                w.writerow([repr(float(px)), repr(float(py)), repr(float(dist.density[iy, ix]))])


@dataclass
class ProbeReport:
    excitation_probability: float
    branches: list[dict]

    def as_dict(self) -> dict:
        return {"excitation_probability": self.excitation_probability, "branches": self.branches}


def probe_discrimination(
    state: StateVector,
    basis: CompositeBasis,
    probe: DriveSpec,
    duration: float,
    transition: int = 1,
    atol: float = 1e-14,
) -> ProbeReport:
    """Evolve under the probe alone and report absorption into the top level of ``transition``.

    Each branch is a trap basis state: its weight before the probe, the joint
    probability of ending in the upper probe level with that trap state, and the
    conditional probability (joint / weight).
    """
    if basis.internal.level_count < 3:
        raise ValueError("probe discrimination needs a ladder with at least three levels")
    H = build_rwa_hamiltonian(basis, probe, transition)
    out = evolve_rwa(state, H, duration)
    target = transition + 1
    A0 = _amplitude_matrix(state, basis)
    A1 = _amplitude_matrix(out, basis)
    joint = np.abs(A1[target]) ** 2
    weight = np.sum(np.abs(A0) ** 2, axis=0)
    branches = []
    for j, lab in enumerate(basis.trap.labels):
        if weight[j] <= atol and joint[j] <= atol:
            continue
        branches.append(
            {
                "n_plus": lab.n_plus,
                "n_minus": lab.n_minus,
                "weight": float(weight[j]),
                "joint_probability": float(joint[j]),
                "conditional_probability": float(joint[j] / weight[j]) if weight[j] > atol else None,
            }
        )
    return ProbeReport(float(joint.sum()), branches)
