"""Truncated 2D isotropic oscillator in the circular-quanta basis.

States are labelled by the right/left circular quanta ``(n_plus, n_minus)``.
Energy ``N = n_plus + n_minus`` and angular momentum ``M = n_plus - n_minus``.
Units: hbar = nu = 1, lengths in R_0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np


class BasisMismatchError(ValueError):
    """Raised when operands live on different bases."""


@dataclass(frozen=True, order=True)
class FockLabel:
    n_plus: int
    n_minus: int

    def __post_init__(self):
        if self.n_plus < 0 or self.n_minus < 0:
            raise ValueError(f"negative occupation in {self!r}")

    @property
    def N(self) -> int:
        return self.n_plus + self.n_minus

    @property
    def M(self) -> int:
        return self.n_plus - self.n_minus

    @classmethod
    def from_NM(cls, N: int, M: int) -> "FockLabel":
        if abs(M) > N or (N - M) % 2:
            raise ValueError(f"no oscillator state with N={N}, M={M}")
        return cls((N + M) // 2, (N - M) // 2)


@dataclass(frozen=True)
class FockBasis:
    """All labels with ``N <= n_max``, ordered by N then ascending n_plus."""

    n_max: int
    labels: tuple[FockLabel, ...] = field(init=False, repr=False, compare=False)
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n_max < 0:
            raise ValueError("n_max must be nonnegative")
        labels = tuple(
            FockLabel(n_plus, N - n_plus)
            for N in range(self.n_max + 1)
            for n_plus in range(N + 1)
        )
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(labels)})

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def tag(self) -> str:
        return f"trap(n_max={self.n_max})"

    def __len__(self) -> int:
        return self.size

    def __iter__(self) -> Iterator[FockLabel]:
        return iter(self.labels)

    def index(self, label: FockLabel | tuple[int, int]) -> int:
        if not isinstance(label, FockLabel):
            label = FockLabel(*label)
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"{label} outside truncation n_max={self.n_max}") from None

    def label(self, i: int) -> FockLabel:
        return self.labels[i]

    def contains(self, label: FockLabel) -> bool:
        return label in self._index

    def basis_vector(self, label) -> np.ndarray:
        v = np.zeros(self.size, dtype=complex)
        v[self.index(label)] = 1.0
        return v

    def interior_mask(self, depth: int = 1) -> np.ndarray:
        """Boolean mask of labels with ``N <= n_max - depth``."""
        return np.array([lab.N <= self.n_max - depth for lab in self.labels])


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Dense complex matrix tied to the basis it acts on."""

    basis_tag: str
    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"operator must be square, got shape {a.shape}")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def _check(self, other: "OperatorMatrix"):
        if other.basis_tag != self.basis_tag:
            raise BasisMismatchError(f"{self.basis_tag} vs {other.basis_tag}")

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            self._check(other)
            return OperatorMatrix(self.basis_tag, self.entries @ other.entries)
        return self.entries @ np.asarray(other)

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check(other)
        return OperatorMatrix(self.basis_tag, self.entries + other.entries)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check(other)
        return OperatorMatrix(self.basis_tag, self.entries - other.entries)

    def __mul__(self, scalar) -> "OperatorMatrix":
        return OperatorMatrix(self.basis_tag, self.entries * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "OperatorMatrix":
        return OperatorMatrix(self.basis_tag, -self.entries)

    def __pow__(self, n: int) -> "OperatorMatrix":
        return OperatorMatrix(self.basis_tag, np.linalg.matrix_power(self.entries, n))

    @property
    def dag(self) -> "OperatorMatrix":
        return OperatorMatrix(self.basis_tag, self.entries.conj().T)

    def commutator(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check(other)
        return OperatorMatrix(
            self.basis_tag, self.entries @ other.entries - other.entries @ self.entries
        )

    def is_hermitian(self, atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.entries, self.entries.conj().T, rtol=0, atol=atol))

    def expectation(self, vec: np.ndarray) -> complex:
        vec = np.asarray(vec)
        return complex(np.vdot(vec, self.entries @ vec))

    def element(self, i: int, j: int) -> complex:
        return complex(self.entries[i, j])

    def to_entries(self, atol: float = 0.0) -> list[list]:
        """Nonzero entries as ``[row, col, re, im]``."""
        rows, cols = np.nonzero(np.abs(self.entries) > atol)
        return [
            [int(r), int(c), float(self.entries[r, c].real), float(self.entries[r, c].imag)]
            for r, c in zip(rows, cols)
        ]

    def dump_json(self, path) -> None:
        with open(path, "w") as f:
            json.dump({"basis": self.basis_tag, "entries": self.to_entries()}, f)


def build_basis(n_max: int) -> FockBasis:
    return FockBasis(n_max)


def _annihilate(basis: FockBasis, plus: bool) -> OperatorMatrix:
    a = np.zeros((basis.size, basis.size), dtype=complex)
    for j, lab in enumerate(basis.labels):
        n = lab.n_plus if plus else lab.n_minus
        if n == 0:
            continue
        target = FockLabel(lab.n_plus - 1, lab.n_minus) if plus else FockLabel(lab.n_plus, lab.n_minus - 1)
        a[basis.index(target), j] = np.sqrt(n)
    return OperatorMatrix(basis.tag, a)


def annihilate_plus(basis: FockBasis) -> OperatorMatrix:
    """a_+ : removes one right-circular quantum (lowers M by one)."""
    return _annihilate(basis, plus=True)


def annihilate_minus(basis: FockBasis) -> OperatorMatrix:
    """a_- : removes one left-circular quantum (raises M by one)."""
    return _annihilate(basis, plus=False)


def cartesian_ladder(basis: FockBasis, axis: str) -> OperatorMatrix:
    """a_X = (a_+ + a_-)/sqrt2 and a_Y = i(a_+ - a_-)/sqrt2.

    Uses the standard dimensionless quadratures a_X = (X/R_0 + i P_X R_0/hbar)/sqrt2.
    """
    ap, am = annihilate_plus(basis), annihilate_minus(basis)
    axis = axis.upper()
    if axis == "X":
        return (ap + am) * (1 / np.sqrt(2))
    if axis == "Y":
        return (ap - am) * (1j / np.sqrt(2))
    raise ValueError(f"axis must be 'X' or 'Y', got {axis!r}")


def number_operators(basis: FockBasis) -> tuple[OperatorMatrix, OperatorMatrix]:
    n_plus = np.diag([lab.n_plus for lab in basis.labels]).astype(complex)
    n_minus = np.diag([lab.n_minus for lab in basis.labels]).astype(complex)
    return OperatorMatrix(basis.tag, n_plus), OperatorMatrix(basis.tag, n_minus)


def total_number(basis: FockBasis) -> OperatorMatrix:
    n_plus, n_minus = number_operators(basis)
    return n_plus + n_minus


def hamiltonian_cm(basis: FockBasis) -> OperatorMatrix:
    """Trap Hamiltonian n_+ + n_- + 1 (units of hbar nu)."""
    return total_number(basis) + OperatorMatrix(basis.tag, np.eye(basis.size))


def angular_momentum_trap(basis: FockBasis) -> OperatorMatrix:
    n_plus, n_minus = number_operators(basis)
    return n_plus - n_minus


def position_ladder(basis: FockBasis, sign: int) -> OperatorMatrix:
    """(X + i*sign*Y)/R_0 = a_{sign}^dagger + a_{-sign}.

    ``sign=+1`` gives a_+^dag + a_-, ``sign=-1`` gives a_-^dag + a_+.
    """
    ap, am = annihilate_plus(basis), annihilate_minus(basis)
    if sign > 0:
        return ap.dag + am
    if sign < 0:
        return am.dag + ap
    raise ValueError("sign must be +1 or -1")
