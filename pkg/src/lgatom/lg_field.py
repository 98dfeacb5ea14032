"""Laguerre-Gaussian modes, trap eigenfunctions and a real-space quadrature oracle.

The quadrature here never touches the ladder-operator algebra; it is the
independent check on the operator form of the Lamb-Dicke-expanded coupling.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import eval_genlaguerre


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class LGModeSpec:
    """p = 0 Laguerre-Gaussian mode at its waist. Lengths in units of R_0."""

    l: int
    waist: float
    amplitude: float = 1.0

    def __post_init__(self):
        if self.waist <= 0:
            raise ValueError("waist must be positive")
        if self.amplitude <= 0:
            raise ValueError("amplitude must be positive")

    def eta(self, r0: float = 1.0) -> float:
        return r0 / self.waist


@dataclass(frozen=True)
class TrapWavefunction:
    N: int
    M: int
    r0: float = 1.0

    def __post_init__(self):
        if self.N < 0 or abs(self.M) > self.N or (self.N - self.M) % 2:
            raise ValueError(f"invalid trap state N={self.N}, M={self.M}")
        if self.r0 <= 0:
            raise ValueError("r0 must be positive")

    @property
    def n_plus(self) -> int:
        return (self.N + self.M) // 2

    @property
    def n_minus(self) -> int:
        return (self.N - self.M) // 2


@dataclass(frozen=True)
class QuadratureGrid:
    """Gauss-Legendre radial nodes on [0, r_max] times uniform azimuthal nodes."""

    r_max: float
    n_radial: int = 400
    n_azimuthal: int = 256
    r: np.ndarray = field(init=False, repr=False, compare=False)
    w_r: np.ndarray = field(init=False, repr=False, compare=False)
    phi: np.ndarray = field(init=False, repr=False, compare=False)
    w_phi: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.r_max <= 0 or self.n_radial < 1 or self.n_azimuthal < 1:
            raise ValueError("invalid grid parameters")
        x, w = np.polynomial.legendre.leggauss(self.n_radial)
        object.__setattr__(self, "r", 0.5 * self.r_max * (x + 1.0))
        object.__setattr__(self, "w_r", 0.5 * self.r_max * w)
        object.__setattr__(self, "phi", 2 * np.pi * np.arange(self.n_azimuthal) / self.n_azimuthal)
        object.__setattr__(self, "w_phi", 2 * np.pi / self.n_azimuthal)

    @classmethod
    def for_scales(cls, r0: float, waist: float, **kw) -> "QuadratureGrid":
        return cls(r_max=8.0 * max(r0, waist), **kw)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.r, self.phi, indexing="ij")

    def integrate(self, values: np.ndarray) -> complex:
        """Integrate f(R, Phi) sampled on ``mesh()`` over the plane (R dR dPhi)."""
        radial = values.sum(axis=1) * self.w_phi
        return complex(np.sum(radial * self.r * self.w_r))


def eval_lg_mode(spec: LGModeSpec, R, Phi):
    R = np.asarray(R, dtype=float)
    if np.any(R < 0):
        raise ValueError("radius must be nonnegative")
    rho = R / spec.waist
    return spec.amplitude * rho ** abs(spec.l) * np.exp(-(rho**2) + 1j * spec.l * np.asarray(Phi))


def eval_lg_leading(spec: LGModeSpec, R, Phi):
    """Leading Lamb-Dicke term (R/w_0)^|l| e^{i l Phi}."""
    rho = np.asarray(R, dtype=float) / spec.waist
    return spec.amplitude * rho ** abs(spec.l) * np.exp(1j * spec.l * np.asarray(Phi))


@dataclass(frozen=True)
class ModeExpansion:
    """Power series of the mode in R/w_0 truncated after the leading term.

    u/amplitude = rho^|l| e^{il Phi} (1 + next_coefficient rho^2 + ...)
    """

    l: int
    waist: float
    leading_order: int
    next_order: int
    next_coefficient: float = -1.0

    def relative_error(self, R) -> np.ndarray:
        """|u_full - u_leading| / |u_leading| at radius R."""
        rho2 = (np.asarray(R, dtype=float) / self.waist) ** 2
        return np.abs(np.expm1(-rho2))

    def error_estimate(self, R) -> np.ndarray:
        """First-order estimate |next_coefficient| (R/w_0)^2."""
        return abs(self.next_coefficient) * (np.asarray(R, dtype=float) / self.waist) ** 2


def truncate_mode(spec: LGModeSpec) -> ModeExpansion:
    return ModeExpansion(l=spec.l, waist=spec.waist, leading_order=abs(spec.l), next_order=abs(spec.l) + 2)


def _trap_closed_form(wf: TrapWavefunction, R, Phi):
    r = np.asarray(R, dtype=float) / wf.r0
    norm = 1.0 / (wf.r0 * math.sqrt(math.pi))
    gauss = np.exp(-(r**2) / 2)
    if wf.N == 0:
        return norm * gauss * np.ones_like(np.asarray(Phi, dtype=float))
    return norm * r * gauss * np.exp(1j * wf.M * np.asarray(Phi))


def _trap_laguerre(wf: TrapWavefunction, R, Phi):
    # complex Hermite form H_{p,q}(z, zbar) e^{-|z|^2/2} / sqrt(pi p! q!), which
    # equals (-1)^k k! |z|^|M| e^{iM Phi} L_k^{|M|}(|z|^2) with k = min(p, q)
    p, q = wf.n_plus, wf.n_minus
    k, am = min(p, q), abs(wf.M)
    r = np.asarray(R, dtype=float) / wf.r0
    coeff = (-1) ** k * math.factorial(k) / math.sqrt(math.pi * math.factorial(p) * math.factorial(q))
    radial = coeff * r**am * eval_genlaguerre(k, am, r**2) * np.exp(-(r**2) / 2) / wf.r0
    return radial * np.exp(1j * wf.M * np.asarray(Phi))


def eval_trap_wavefunction(wf: TrapWavefunction, R, Phi, generalized: bool = True):
    """chi_{N,M}(R, Phi), phase-matched to (a_+^dag)^{n+} (a_-^dag)^{n-} |0>."""
    if wf.N <= 1:
        return _trap_closed_form(wf, R, Phi)
    if not generalized:
        raise ValueError(f"closed form only for N <= 1, got N={wf.N}")
    return _trap_laguerre(wf, R, Phi)


def coupling_element_quadrature(
    bra: TrapWavefunction,
    ket: TrapWavefunction,
    spec: LGModeSpec,
    grid: QuadratureGrid | None = None,
    truncated: bool = True,
    tolerance: float | None = None,
) -> complex:
    """<bra| u_l / amplitude |ket> by 2D quadrature.

    With ``tolerance`` set, the element is recomputed on a grid with half the
    radial nodes and a QuadratureError is raised if the two disagree by more.
    """
    if grid is None:
        grid = QuadratureGrid.for_scales(max(bra.r0, ket.r0), spec.waist)
    value = _coupling_on(bra, ket, spec, grid, truncated)
    if tolerance is not None:
        coarse = QuadratureGrid(grid.r_max, max(grid.n_radial // 2, 1), grid.n_azimuthal)
        residual = abs(value - _coupling_on(bra, ket, spec, coarse, truncated))
        if residual > tolerance:
            raise QuadratureError(f"quadrature residual {residual:.3e} exceeds {tolerance:.3e}")
    return value


def _coupling_on(bra, ket, spec, grid, truncated):
    R, Phi = grid.mesh()
    unit = LGModeSpec(spec.l, spec.waist, 1.0)
    mode = eval_lg_leading(unit, R, Phi) if truncated else eval_lg_mode(unit, R, Phi)
    integrand = np.conj(eval_trap_wavefunction(bra, R, Phi)) * mode * eval_trap_wavefunction(ket, R, Phi)
    return grid.integrate(integrand)


def cartesian_grid(extent: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    x = np.linspace(-extent, extent, n)
    return np.meshgrid(x, x, indexing="xy")


def write_grid_csv(path, X: np.ndarray, Y: np.ndarray, values: np.ndarray, header: str | None = None) -> None:
    """Dump a complex field as rows (x, y, re, im, abs2), row-major over the grid."""
    with open(path, "w", newline="") as f:
        if header:
            f.write(f"# {header}\n")
        w = csv.writer(f)
        w.writerow(["x", "y", "re", "im", "abs2"])
        for x, y, v in zip(X.ravel(), Y.ravel(), values.ravel()):
            w.writerow([repr(float(x)), repr(float(y)), repr(float(v.real)), repr(float(v.imag)), repr(float(v.real**2 + v.imag**2))])


def sample_on_plane(func, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    return func(np.hypot(X, Y), np.arctan2(Y, X))
