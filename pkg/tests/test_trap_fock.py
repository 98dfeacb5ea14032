import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lgatom.trap_fock import (
    BasisMismatchError,
    FockLabel,
    OperatorMatrix,
    angular_momentum_trap,
    annihilate_minus,
    annihilate_plus,
    build_basis,
    cartesian_ladder,
    hamiltonian_cm,
    number_operators,
    position_ladder,
)


def test_basis_sizes_and_order():
    assert [lab for lab in build_basis(0)] == [FockLabel(0, 0)]
    assert build_basis(2).size == 6
    b = build_basis(3)
    Ns = [lab.N for lab in b]
    assert Ns == sorted(Ns)
    assert [lab.n_plus for lab in b if lab.N == 2] == [0, 1, 2]


def test_degenerate_sector_n1():
    sector = [lab for lab in build_basis(1) if lab.N == 1]
    assert sorted(lab.M for lab in sector) == [-1, 1]


@given(st.integers(0, 12))
def test_sector_counts(n_max):
    b = build_basis(n_max)
    assert b.size == (n_max + 1) * (n_max + 2) // 2
    for N in range(n_max + 1):
        labs = [lab for lab in b if lab.N == N]
        assert len(labs) == N + 1
        assert all(abs(lab.M) <= N and (N - lab.M) % 2 == 0 for lab in labs)


@given(st.integers(0, 10), st.data())
def test_index_roundtrip(n_max, data):
    b = build_basis(n_max)
    i = data.draw(st.integers(0, b.size - 1))
    assert b.index(b.label(i)) == i


def test_from_NM():
    assert FockLabel.from_NM(1, 1) == FockLabel(1, 0)
    assert FockLabel.from_NM(3, -1) == FockLabel(1, 2)
    with pytest.raises(ValueError):
        FockLabel.from_NM(2, 1)


def test_ladder_on_vacuum():
    b = build_basis(3)
    ap = annihilate_plus(b)
    vac = b.basis_vector((0, 0))
    assert np.allclose(ap @ vac, 0)
    one = ap.dag @ vac
    assert one[b.index((1, 0))] == pytest.approx(1.0)
    assert np.count_nonzero(one) == 1


def test_double_excitation_matches_1d_oscillator():
    # oracle: explicit 1D ladder matrix on the n_minus = 0 chain
    b = build_basis(4)
    a1d = np.diag(np.sqrt(np.arange(1, 5)), 1)
    expected = (a1d.T @ a1d.T)[:, 0]
    two = (annihilate_plus(b).dag ** 2) @ b.basis_vector((0, 0))
    chain = [b.index((n, 0)) for n in range(5)]
    assert np.allclose(two[chain], expected)
    assert two[b.index((2, 0))] == pytest.approx(np.sqrt(2))


def test_truncation_boundary_is_zero():
    b = build_basis(2)
    up = annihilate_plus(b).dag @ b.basis_vector((2, 0))
    assert np.allclose(up, 0)


@pytest.mark.parametrize("n_max", [1, 3, 6])
def test_mode_commutators(n_max):
    b = build_basis(n_max)
    ap, am = annihilate_plus(b), annihilate_minus(b)
    assert np.array_equal(ap.commutator(am).entries, np.zeros((b.size, b.size)))
    interior = b.interior_mask()
    # the N-cutoff breaks [a_+, a_-^dag] = 0 only on the top shell
    cross = ap.commutator(am.dag).entries
    assert np.array_equal(cross[:, interior], np.zeros((b.size, interior.sum())))
    for a in (ap, am):
        c = a.commutator(a.dag).entries
        assert np.allclose(c[np.ix_(interior, interior)], np.eye(interior.sum()), atol=1e-13)


def test_cartesian_ladder():
    b = build_basis(4)
    ax, ay = cartesian_ladder(b, "X"), cartesian_ladder(b, "y")
    interior = b.interior_mask()
    for a in (ax, ay):
        c = a.commutator(a.dag).entries
        assert np.allclose(c[np.ix_(interior, interior)], np.eye(interior.sum()), atol=1e-13)
    assert np.allclose(ax @ b.basis_vector((0, 0)), 0)
    # inverse map a_pm = (a_X -/+ i a_Y)/sqrt2 exactly
    ap = (ax - ay * 1j) * (1 / np.sqrt(2))
    am = (ax + ay * 1j) * (1 / np.sqrt(2))
    assert np.allclose(ap.entries, annihilate_plus(b).entries, atol=1e-15)
    assert np.allclose(am.entries, annihilate_minus(b).entries, atol=1e-15)
    with pytest.raises(ValueError):
        cartesian_ladder(b, "Z")


def test_number_and_energy():
    b = build_basis(3)
    npl, nmi = number_operators(b)
    H = hamiltonian_cm(b)
    i00, i10, i21 = b.index((0, 0)), b.index((1, 0)), b.index((2, 1))
    assert H.element(i00, i00) == 1
    assert H.element(i10, i10) == 2
    assert (npl.element(i21, i21), nmi.element(i21, i21)) == (2, 1)


def test_angular_momentum_trap():
    b = build_basis(3)
    L = angular_momentum_trap(b)
    assert L.element(b.index((0, 0)), b.index((0, 0))) == 0
    assert L.element(b.index((1, 0)), b.index((1, 0))) == 1
    assert L.element(b.index((1, 2)), b.index((1, 2))) == -1
    assert np.array_equal(L.commutator(hamiltonian_cm(b)).entries, np.zeros((b.size, b.size)))


def test_grading_of_ladders():
    b = build_basis(4)
    L = angular_momentum_trap(b)
    for a, dM in ((annihilate_plus(b), -1), (annihilate_minus(b), +1)):
        # [L, a] = dM a
        assert np.allclose(L.commutator(a).entries, dM * a.entries)


def test_position_ladder_signs():
    b = build_basis(3)
    # (X + iY) raises M: a_+^dag + a_-
    Lp = position_ladder(b, 1)
    assert np.allclose(Lp.entries, annihilate_plus(b).dag.entries + annihilate_minus(b).entries)
    L = angular_momentum_trap(b)
    assert np.allclose(L.commutator(Lp).entries, Lp.entries)
    assert np.allclose(L.commutator(position_ladder(b, -1)).entries, -position_ladder(b, -1).entries)


def test_basis_tag_mismatch():
    with pytest.raises(BasisMismatchError):
        annihilate_plus(build_basis(2)) @ annihilate_plus(build_basis(3))
    with pytest.raises(ValueError):
        OperatorMatrix("x", np.zeros((2, 3)))


def test_json_dump(tmp_path):
    b = build_basis(1)
    annihilate_plus(b).dump_json(tmp_path / "a.json")
    data = json.loads((tmp_path / "a.json").read_text())
    assert data["entries"] == [[0, 2, 1.0, 0.0]]
