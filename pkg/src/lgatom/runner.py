"""Scenario orchestration and file output."""

from __future__ import annotations

import csv
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from lgatom import analysis
from lgatom.config import ScenarioConfig
from lgatom.dynamics import (
    CompositeBasis,
    PulseStep,
    StateVector,
    build_rwa_hamiltonian,
    evolve_full,
    evolve_rwa_trajectory,
    observables,
    run_schedule,
)
from lgatom.lg_field import (
    LGModeSpec,
    QuadratureGrid,
    TrapWavefunction,
    cartesian_grid,
    coupling_element_quadrature,
    eval_lg_leading,
    eval_lg_mode,
    eval_trap_wavefunction,
    sample_on_plane,
    write_grid_csv,
)
from lgatom.trap_fock import FockLabel, build_basis, position_ladder

log = logging.getLogger(__name__)

UNITS = "frequencies in units of nu, times in units of 1/nu, angular momenta in units of hbar, lengths in R_0"


def _dump_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps({"units": UNITS, **payload}, indent=2) + "\n")


def _tracked(config: ScenarioConfig, basis: CompositeBasis) -> list[tuple[int, int, int]]:
    if config.outputs.tracked is not None:
        return [tuple(t) for t in config.outputs.tracked]
    return [
        (lev, lab.n_plus, lab.n_minus)
        for lev in range(basis.internal.level_count)
        for lab in basis.trap.labels
        if lab.N <= 1
    ]


def state_report(state: StateVector, basis: CompositeBasis) -> dict:
    rep = {**observables(basis, state), **analysis.entanglement_report(state, basis)}
    A = state.amplitudes.reshape(basis.internal.level_count, basis.trap.size)
    branches = []
    for j, lab in enumerate(basis.trap.labels):
        pops = np.abs(A[:, j]) ** 2
        if pops.sum() > 1e-14:
            branches.append({"n_plus": lab.n_plus, "n_minus": lab.n_minus,
                             "probability": float(pops.sum()), "level_probabilities": [float(p) for p in pops]})
    rep["branches"] = branches
    return rep


def _sample_trajectory(config: ScenarioConfig, basis: CompositeBasis, initial: StateVector):
    """Yield (t, step_index, state) rows over the whole schedule."""
    tol = config.integrator.tolerance
    max_step = config.integrator.max_step or np.inf
    yield 0.0, -1, initial
    state, t0 = initial, 0.0
    n = config.outputs.samples_per_step
    for i, step in enumerate(config.schedule):
        T = step.time
        local = np.linspace(0.0, T, n + 1)[1:]
        if step.model == "RWA":
            H = build_rwa_hamiltonian(basis, step.drive, step.transition)
            states = evolve_rwa_trajectory(state, H, local)
        else:
            if T == 0:
                states = [state] * n
            else:
                traj = evolve_full(state, basis, step.drive, (t0, t0 + T), tolerance=tol,
                                   sample_times=t0 + local, transition=step.transition, max_step=max_step)
                states = traj.states
        for tl, s in zip(local, states):
            yield t0 + tl, i, s
        state, t0 = states[-1], t0 + T


def write_trajectory(path: Path, config: ScenarioConfig, basis: CompositeBasis, initial: StateVector) -> StateVector:
    tracked = _tracked(config, basis)
    idx = [basis.index(lev, (npl, nmi)) for lev, npl, nmi in tracked]
    names = [f"{lev}_{npl}_{nmi}" for lev, npl, nmi in tracked]
    L, lz, N = basis.L_trap(), basis.l_internal(), basis.N_trap()
    header = ["t", "step"]
    header += [f"re_{s}" for s in names] + [f"im_{s}" for s in names]
    header += [f"pop_level_{k}" for k in range(basis.internal.level_count)] + [f"pop_{s}" for s in names]
    header += ["L_trap", "l_internal", "N_trap", "norm"]
    final = initial
    with open(path, "w", newline="") as f:
        f.write(f"# units: {UNITS}\n")
        f.write("# amplitude columns named <level>_<n_plus>_<n_minus>\n")
        w = csv.writer(f)
        w.writerow(header)
        r = repr
        for t, i, s in _sample_trajectory(config, basis, initial):
            a = s.amplitudes
            A = a.reshape(basis.internal.level_count, basis.trap.size)
            row = [r(float(t)), i]
            row += [r(float(a[k].real)) for k in idx] + [r(float(a[k].imag)) for k in idx]
            row += [r(float(p)) for p in np.sum(np.abs(A) ** 2, axis=1)]
            row += [r(float(abs(a[k]) ** 2)) for k in idx]
            row += [r(s.expect(L)), r(s.expect(lz)), r(s.expect(N)), r(s.norm)]
            w.writerow(row)
            final = s
    return final


def run_scenario(config: ScenarioConfig, out_dir) -> dict:
    """Run the schedule, write the trajectory CSV and analysis JSON, return the report."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    basis = config.basis
    initial = config.initial()
    final, records = run_schedule(initial, config.schedule, basis, tolerance=config.integrator.tolerance)
    write_trajectory(out / config.outputs.trajectory_csv, config, basis, initial)

    report = {
        "name": config.name,
        "warnings": list(config.warnings),
        "entropy_bits": analysis.entanglement_report(final, basis)["entropy_bits"],
        "initial": state_report(initial, basis),
        "steps": [rec.as_dict() for rec in records],
        "final": state_report(final, basis),
    }
    if config.probe is not None:
        pr = analysis.probe_discrimination(final, basis, config.probe.spec(), config.probe.time(),
                                           transition=config.probe.transition)
        report["probe"] = pr.as_dict()
    _dump_json(out / config.outputs.analysis_json, report)
    return report


def _sweep_point(config: ScenarioConfig, value: float, model: str) -> dict:
    basis = config.basis
    steps = config.schedule or (PulseStep(config.drive.spec(), area=math.pi / 2),)
    scaled, reference = [], []
    for st in steps:
        drv = replace(st.drive, rabi_magnitude=value / st.drive.eta ** abs(st.drive.l))
        scaled.append(replace(st, drive=drv, model=model))
        reference.append(replace(st, drive=drv, model="RWA"))
    initial = config.initial()
    final, _ = run_schedule(initial, scaled, basis, tolerance=config.integrator.tolerance)
    oracle, _ = run_schedule(initial, reference, basis)
    return {
        "effective_rabi": value,
        "model": model,
        "infidelity": 1.0 - final.fidelity(oracle),
        "entropy_bits": analysis.entanglement_report(final, basis)["entropy_bits"],
    }


def run_sweep(config: ScenarioConfig, out_dir, workers: int = 1) -> dict:
    """Scan eta^|l| Omega; infidelity is measured against the RWA propagation of the same schedule."""
    if config.sweep is None:
        raise ValueError("config has no sweep section")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    values, model = config.sweep.effective_rabi, config.sweep.model
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            results = list(ex.map(_sweep_point, [config] * len(values), values, [model] * len(values)))
    else:
        results = [_sweep_point(config, v, model) for v in values]
    files = []
    for k, rec in enumerate(results):
        name = f"sweep_{k:03d}.json"
        _dump_json(out / name, rec)
        files.append(name)
    manifest = {"name": config.name, "records": results, "files": files}
    _dump_json(out / "sweep_index.json", manifest)
    return manifest


def algebraic_element(bra: FockLabel, ket: FockLabel, l: int, eta: float) -> complex:
    """eta^|l| <bra|(a_s^dag + a_{-s})^|l||ket> on a basis large enough to avoid truncation."""
    n = abs(l)
    basis = build_basis(max(bra.N, ket.N) + n)
    if n == 0:
        return complex(bra == ket)
    op = position_ladder(basis, 1 if l > 0 else -1) ** n
    return eta**n * op.element(basis.index(bra), basis.index(ket))


def run_oracle_suite(config: ScenarioConfig, out_dir=None) -> dict:
    """Cross-check quadrature coupling elements against the ladder-operator algebra."""
    oc = config.oracle
    r0 = config.trap.r0
    labels = list(build_basis(oc.max_N))
    wfs = {lab: TrapWavefunction(lab.N, lab.M, r0) for lab in labels}
    rows, worst = [], 0.0
    for l in oc.l_values:
        spec = LGModeSpec(l, r0 / oc.eta)
        grid = QuadratureGrid.for_scales(r0, spec.waist, n_radial=oc.n_radial, n_azimuthal=oc.n_azimuthal)
        R, Phi = grid.mesh()
        vals = {lab: eval_trap_wavefunction(wfs[lab], R, Phi) for lab in labels}
        mode = eval_lg_leading(spec, R, Phi)
        for bra in labels:
            for ket in labels:
                q = grid.integrate(np.conj(vals[bra]) * mode * vals[ket])
                a = algebraic_element(bra, ket, l, oc.eta)
                diff = abs(q - a)
                worst = max(worst, diff)
                rows.append({
                    "bra": [bra.N, bra.M], "ket": [ket.N, ket.M], "l": l,
                    "algebraic": [a.real, a.imag], "quadrature": [q.real, q.imag], "abs_diff": diff,
                })
    scaling = truncation_scaling(r0, oc)
    report = {
        "tolerance": oc.tolerance,
        "max_abs_diff": worst,
        "elements_pass": worst <= oc.tolerance,
        "truncation_scaling": scaling,
        "passed": worst <= oc.tolerance and scaling["passed"],
        "rows": rows,
    }
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        _dump_json(out / "oracle.json", report)
    return report


def truncation_scaling(r0: float, oc, etas=(0.2, 0.1, 0.05)) -> dict:
    """Full-vs-leading-order relative deviation of the (chi_11, chi_00, l=1) element over eta."""
    bra, ket = TrapWavefunction(1, 1, r0), TrapWavefunction(0, 0, r0)
    devs = []
    for eta in etas:
        spec = LGModeSpec(1, r0 / eta)
        grid = QuadratureGrid.for_scales(r0, spec.waist, n_radial=oc.n_radial, n_azimuthal=oc.n_azimuthal)
        full = coupling_element_quadrature(bra, ket, spec, grid, truncated=False)
        trunc = coupling_element_quadrature(bra, ket, spec, grid, truncated=True)
        devs.append(abs(full - trunc) / abs(trunc))
    coeffs = [d / e**2 for d, e in zip(devs, etas)]
    spread = max(coeffs) / min(coeffs)
    return {"eta": list(etas), "relative_deviation": devs, "deviation_over_eta2": coeffs,
            "spread": spread, "passed": spread <= 2.0}


def dump_modes(config: ScenarioConfig, out_dir) -> list[str]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    r0 = config.trap.r0
    written = []
    for k, m in enumerate(config.modes):
        kind = m["kind"]
        fname = m.get("file", f"mode_{k:02d}_{kind}.csv")
        if kind == "momentum":
            wf = TrapWavefunction(m.get("N", 0), m.get("M", 0), r0)
            dist = analysis.momentum_distribution(wf, n=m.get("points", 256))
            analysis.write_distribution_csv(out / fname, dist, header=f"units: momenta in hbar/R_0; {UNITS}")
        else:
            extent = m.get("extent", 5.0 * r0)
            X, Y = cartesian_grid(extent, m.get("points", 101))
            if kind == "lg":
                spec = LGModeSpec(m.get("l", 1), m.get("waist", 10.0 * r0))
                vals = sample_on_plane(lambda R, P: eval_lg_mode(spec, R, P), X, Y)
            else:
                wf = TrapWavefunction(m.get("N", 0), m.get("M", 0), r0)
                vals = sample_on_plane(lambda R, P: eval_trap_wavefunction(wf, R, P), X, Y)
            write_grid_csv(out / fname, X, Y, vals, header=f"units: {UNITS}")
        written.append(fname)
    return written
