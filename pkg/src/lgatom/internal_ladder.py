"""Circular-state ladder of the atom's internal degree of freedom."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from lgatom.trap_fock import OperatorMatrix


class MissingDipoleError(ValueError):
    pass


@dataclass(frozen=True)
class InternalLadder:
    """Levels ``k = 0..level_count-1`` represent circular states ``|m_base + k>``.

    ``transition_frequencies[k]`` is the gap between levels k and k+1, in units of
    the trap frequency. ``dipole_scales`` is optional metadata (d_m per transition).
    """

    m_base: int = 0
    level_count: int = 2
    transition_frequencies: tuple[float, ...] = (100.0,)
    dipole_scales: Optional[tuple[float, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "transition_frequencies", tuple(float(w) for w in self.transition_frequencies))
        if self.dipole_scales is not None:
            object.__setattr__(self, "dipole_scales", tuple(float(d) for d in self.dipole_scales))
        if self.m_base < 0:
            raise ValueError("m_base must be nonnegative")
        if self.level_count < 2:
            raise ValueError("ladder needs at least two levels")
        if len(self.transition_frequencies) != self.level_count - 1:
            raise ValueError(
                f"expected {self.level_count - 1} transition frequencies, "
                f"got {len(self.transition_frequencies)}"
            )
        if any(w <= 0 for w in self.transition_frequencies):
            raise ValueError("transition frequencies must be positive")
        if self.dipole_scales is not None:
            if len(self.dipole_scales) != self.level_count - 1:
                raise ValueError("one dipole scale per transition required")
            if any(d <= 0 for d in self.dipole_scales):
                raise ValueError("dipole scales must be positive")

    @property
    def tag(self) -> str:
        return f"internal(m_base={self.m_base},levels={self.level_count})"

    @property
    def size(self) -> int:
        return self.level_count

    def m_of(self, k: int) -> int:
        return self.m_base + k

    def level_energies(self) -> np.ndarray:
        """Level energies relative to level 0."""
        return np.concatenate([[0.0], np.cumsum(self.transition_frequencies)])

    def basis_vector(self, k: int) -> np.ndarray:
        v = np.zeros(self.level_count, dtype=complex)
        v[k] = 1.0
        return v


def lowering_operator(ladder: InternalLadder, k: int) -> OperatorMatrix:
    """sigma_k = |k><k+1|."""
    if not 0 <= k < ladder.level_count - 1:
        raise IndexError(f"transition index {k} out of range for {ladder.level_count} levels")
    s = np.zeros((ladder.level_count, ladder.level_count), dtype=complex)
    s[k, k + 1] = 1.0
    return OperatorMatrix(ladder.tag, s)


def angular_momentum_internal(ladder: InternalLadder) -> OperatorMatrix:
    return OperatorMatrix(
        ladder.tag, np.diag([float(ladder.m_of(k)) for k in range(ladder.level_count)]).astype(complex)
    )


def dipole_consistency(
    ladder: InternalLadder,
    field_amplitude: float,
    rabi: float,
    transition: int = 0,
    hbar: float = 1.0,
    rtol: float = 1e-12,
) -> bool:
    """Check rabi == 2 d_m E / hbar for the given transition."""
    if ladder.dipole_scales is None:
        raise MissingDipoleError("ladder carries no dipole metadata")
    expected = 2.0 * ladder.dipole_scales[transition] * field_amplitude / hbar
    return bool(abs(rabi - expected) <= rtol * abs(expected))


def two_level(m_base: int = 0, gap: float = 100.0) -> InternalLadder:
    return InternalLadder(m_base=m_base, level_count=2, transition_frequencies=(gap,))


def default_ladder(level_count: int = 2, m_base: int = 0, gaps: Sequence[float] | None = None) -> InternalLadder:
    if gaps is None:
        # upper gaps offset so the probe transition is not resonant with the drive
        gaps = [100.0 + 10.0 * k for k in range(level_count - 1)]
    return InternalLadder(m_base=m_base, level_count=level_count, transition_frequencies=tuple(gaps))
