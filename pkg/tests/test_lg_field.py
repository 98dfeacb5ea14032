import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lgatom.lg_field import (
    LGModeSpec,
    QuadratureError,
    QuadratureGrid,
    TrapWavefunction,
    coupling_element_quadrature,
    eval_lg_mode,
    eval_trap_wavefunction,
    truncate_mode,
    write_grid_csv,
    cartesian_grid,
)
from lgatom.trap_fock import build_basis


def norm_sq(wf, grid):
    R, Phi = grid.mesh()
    return grid.integrate(np.abs(eval_trap_wavefunction(wf, R, Phi)) ** 2).real


def test_lg_mode_values():
    assert eval_lg_mode(LGModeSpec(1, 2.0), 0.0, 0.3) == 0
    assert eval_lg_mode(LGModeSpec(0, 2.0), 0.0, 0.0) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        eval_lg_mode(LGModeSpec(1, 1.0), -1.0, 0.0)


@pytest.mark.parametrize("l", [1, 2, 3, -2])
def test_lg_peak_radius(l):
    # analytic R_peak = w0 sqrt(|l|/2), checked by a dense 1D scan
    w0 = 3.0
    R = np.linspace(0, 4 * w0, 400001)
    peak = R[np.argmax(np.abs(eval_lg_mode(LGModeSpec(l, w0), R, 0.0)))]
    assert peak == pytest.approx(w0 * math.sqrt(abs(l) / 2), abs=1e-4)
    if abs(l) == 2:
        assert peak == pytest.approx(w0, abs=1e-4)


def test_trap_closed_forms():
    assert eval_trap_wavefunction(TrapWavefunction(0, 0), 0.0, 0.0) == pytest.approx(1 / math.sqrt(math.pi))
    assert eval_trap_wavefunction(TrapWavefunction(0, 0, r0=2.0), 0.0, 0.0) == pytest.approx(1 / (2 * math.sqrt(math.pi)))
    assert eval_trap_wavefunction(TrapWavefunction(1, 1), 0.0, 0.7) == 0


def test_closed_form_matches_laguerre_form():
    from lgatom.lg_field import _trap_laguerre

    R = np.linspace(0, 6, 50)
    Phi = np.linspace(0, 2 * np.pi, 50)
    for N, M in [(0, 0), (1, 1), (1, -1)]:
        wf = TrapWavefunction(N, M, 1.3)
        assert np.allclose(eval_trap_wavefunction(wf, R, Phi), _trap_laguerre(wf, R, Phi), atol=1e-15)


def test_generalization_switch():
    with pytest.raises(ValueError):
        eval_trap_wavefunction(TrapWavefunction(2, 0), 1.0, 0.0, generalized=False)
    with pytest.raises(ValueError):
        TrapWavefunction(2, 1)


@pytest.mark.parametrize("lab", list(build_basis(5)), ids=str)
def test_normalization(lab):
    grid = QuadratureGrid(r_max=12.0)
    assert norm_sq(TrapWavefunction(lab.N, lab.M), grid) == pytest.approx(1.0, abs=1e-8)


def test_orthonormality():
    grid = QuadratureGrid(r_max=12.0)
    R, Phi = grid.mesh()
    labs = list(build_basis(4))
    vals = [eval_trap_wavefunction(TrapWavefunction(l.N, l.M), R, Phi) for l in labs]
    G = np.array([[grid.integrate(np.conj(a) * b) for b in vals] for a in vals])
    assert np.allclose(G, np.eye(len(labs)), atol=1e-10)


def test_truncation_error():
    exp = truncate_mode(LGModeSpec(1, 1.0))
    assert (exp.leading_order, exp.next_order, exp.next_coefficient) == (1, 3, -1.0)
    # direct comparison of full and leading-order mode
    spec = LGModeSpec(1, 10.0)
    R = 1.0
    full, lead = abs(eval_lg_mode(spec, R, 0.0)), (R / spec.waist)
    direct = abs(full - lead) / lead
    assert direct == pytest.approx(0.01, rel=0.01)
    assert truncate_mode(spec).relative_error(R) == pytest.approx(direct, rel=1e-12)
    assert truncate_mode(LGModeSpec(0, 1.0)).relative_error(0.0) == 0
    ratio = exp.relative_error(0.1) / exp.relative_error(0.05)
    assert ratio == pytest.approx(4.0, rel=0.01)
    assert exp.error_estimate(0.1) == pytest.approx(0.01)


@pytest.mark.parametrize("eta", [0.2, 0.1, 0.05])
def test_coupling_ground_to_first(eta):
    spec = LGModeSpec(1, 1 / eta)
    bra, ket = TrapWavefunction(1, 1), TrapWavefunction(0, 0)
    # analytic Gaussian integrals: leading term gives eta, full mode eta/(1+eta^2)^2
    assert coupling_element_quadrature(bra, ket, spec) == pytest.approx(eta, abs=1e-10)
    full = coupling_element_quadrature(bra, ket, spec, truncated=False)
    assert full == pytest.approx(eta / (1 + eta**2) ** 2, abs=1e-12)
    assert abs(coupling_element_quadrature(TrapWavefunction(1, -1), ket, spec)) < 1e-10


def test_full_mode_deviation_scales_quadratically():
    bra, ket = TrapWavefunction(1, 1), TrapWavefunction(0, 0)
    devs = []
    for eta in (0.2, 0.1, 0.05):
        spec = LGModeSpec(1, 1 / eta)
        f = coupling_element_quadrature(bra, ket, spec, truncated=False)
        t = coupling_element_quadrature(bra, ket, spec)
        devs.append(abs(f - t) / abs(t) / eta**2)
    assert max(devs) / min(devs) < 2


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(list(build_basis(3))), st.sampled_from(list(build_basis(3))), st.sampled_from([-2, -1, 1, 2, 3]))
def test_azimuthal_selection_rule(bra, ket, l):
    spec = LGModeSpec(l, 8.0)
    grid = QuadratureGrid(r_max=64.0, n_radial=200, n_azimuthal=64)
    val = coupling_element_quadrature(TrapWavefunction(bra.N, bra.M), TrapWavefunction(ket.N, ket.M), spec, grid, truncated=False)
    if bra.M != ket.M + l:
        assert abs(val) <= 1e-10


def test_residual_check():
    spec = LGModeSpec(1, 10.0)
    bra, ket = TrapWavefunction(1, 1), TrapWavefunction(0, 0)
    coupling_element_quadrature(bra, ket, spec, tolerance=1e-10)
    with pytest.raises(QuadratureError):
        coupling_element_quadrature(bra, ket, spec, QuadratureGrid(r_max=80.0, n_radial=12), tolerance=1e-10)


def test_grid_csv(tmp_path):
    X, Y = cartesian_grid(1.0, 3)
    vals = X + 1j * Y
    write_grid_csv(tmp_path / "g.csv", X, Y, vals, header="units")
    lines = (tmp_path / "g.csv").read_text().splitlines()
    assert lines[0] == "# units"
    assert lines[1] == "x,y,re,im,abs2"
    assert lines[2] == "-1.0,-1.0,-1.0,-1.0,2.0"
    assert len(lines) == 2 + 9
