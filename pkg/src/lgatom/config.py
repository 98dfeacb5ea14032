"""Scenario configuration: JSON files validated against ``scenario.schema.json``."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Optional

import jsonschema
import numpy as np

from lgatom.dynamics import CompositeBasis, DriveSpec, PulseStep, StateVector
from lgatom.internal_ladder import InternalLadder
from lgatom.trap_fock import FockBasis

ETA_MESSAGE = "drive/eta: must be > 0; the point-particle limit (eta = 0) has no sideband coupling"
PULSE_AREAS = {"pi": math.pi / 2, "pi/2": math.pi / 4}


class ConfigError(ValueError):
    """Carries every violation found, not just the first."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


def load_schema() -> dict:
    return json.loads(resources.files("lgatom").joinpath("scenario.schema.json").read_text())


@dataclass(frozen=True)
class TrapConfig:
    n_max: int = 4
    r0: float = 1.0


@dataclass(frozen=True)
class DriveConfig:
    l: int = -1
    rabi: float = 0.1
    phase: float = -math.pi / 2
    eta: float = 0.1
    detuning: float = 0.0

    def spec(self) -> DriveSpec:
        return DriveSpec(self.l, self.rabi, self.phase, self.eta, self.detuning)


@dataclass(frozen=True)
class IntegratorConfig:
    tolerance: float = 1e-10
    max_step: Optional[float] = None


@dataclass(frozen=True)
class OutputConfig:
    trajectory_csv: str = "trajectory.csv"
    analysis_json: str = "analysis.json"
    samples_per_step: int = 50
    tracked: Optional[tuple[tuple[int, int, int], ...]] = None


@dataclass(frozen=True)
class OracleConfig:
    max_N: int = 3
    l_values: tuple[int, ...] = (1, 2)
    eta: float = 0.1
    tolerance: float = 1e-8
    n_radial: int = 400
    n_azimuthal: int = 256


@dataclass(frozen=True)
class SweepConfig:
    effective_rabi: tuple[float, ...]
    model: str = "FULL"


@dataclass(frozen=True)
class ProbeConfig:
    transition: int = 1
    l: int = 0
    rabi: float = 0.01
    phase: float = 0.0
    eta: float = 0.1
    pulse: Optional[str] = None
    area: Optional[float] = None
    duration: Optional[float] = None

    def spec(self) -> DriveSpec:
        return DriveSpec(self.l, self.rabi, self.phase, self.eta)

    def time(self) -> float:
        if self.duration is not None:
            return self.duration
        area = PULSE_AREAS[self.pulse] if self.pulse else (self.area if self.area is not None else math.pi / 2)
        return 2 * area / self.spec().effective_rabi


@dataclass(frozen=True)
class ScenarioConfig:
    name: str = "scenario"
    trap: TrapConfig = TrapConfig()
    ladder: InternalLadder = InternalLadder()
    drive: DriveConfig = DriveConfig()
    schedule: tuple[PulseStep, ...] = ()
    initial_state: Any = "upper"
    integrator: IntegratorConfig = IntegratorConfig()
    outputs: OutputConfig = OutputConfig()
    oracle: OracleConfig = OracleConfig()
    sweep: Optional[SweepConfig] = None
    modes: tuple[dict, ...] = ()
    probe: Optional[ProbeConfig] = None
    warnings: tuple[str, ...] = field(default=(), compare=False)

    @property
    def basis(self) -> CompositeBasis:
        return CompositeBasis(self.ladder, FockBasis(self.trap.n_max))

    def initial(self) -> StateVector:
        return build_initial_state(self.basis, self.initial_state)


def build_initial_state(basis: CompositeBasis, spec) -> StateVector:
    if spec == "ground":
        return basis.basis_state(0, (0, 0))
    if spec == "upper":
        return basis.basis_state(1, (0, 0))
    if "superposition" in spec:
        c = np.zeros(basis.internal.level_count, dtype=complex)
        c[:2] = spec["superposition"]
        return basis.product_state(c, basis.trap.basis_vector((0, 0)))
    amps = np.array([complex(re, im) for re, im in spec["amplitudes"]])
    return StateVector(basis.tag, amps)


def _pulse_step(raw: dict, base: DriveConfig, errors: list[str], where: str) -> Optional[PulseStep]:
    d = {**base.__dict__, **raw.get("drive", {})}
    try:
        drive = DriveSpec(d["l"], d["rabi"], d["phase"], d["eta"], d["detuning"])
    except ValueError as e:
        errors.append(f"{where}: {e}")
        return None
    area = PULSE_AREAS[raw["pulse"]] if "pulse" in raw else raw.get("area")
    try:
        step = PulseStep(drive, area=area, duration=raw.get("duration"),
                         model=raw.get("model", "RWA"), transition=raw.get("transition", 0))
        if step.area is not None:
            step.time  # noqa: B018  zero-Rabi check
    except ValueError as e:
        errors.append(f"{where}: {e}")
        return None
    return step


def parse_config(raw: dict) -> ScenarioConfig:
    """Validate a decoded config dict and build the ScenarioConfig."""
    validator = jsonschema.Draft202012Validator(load_schema())
    errors = [
        f"{'/'.join(map(str, e.absolute_path)) or '<root>'}: {e.message}"
        for e in sorted(validator.iter_errors(raw), key=lambda e: list(map(str, e.absolute_path)))
    ]
    if errors:
        eta = raw.get("drive", {}).get("eta") if isinstance(raw.get("drive"), dict) else None
        if isinstance(eta, (int, float)) and eta <= 0:
            errors.append(ETA_MESSAGE)
        raise ConfigError(errors)

    warns: list[str] = []
    trap = TrapConfig(**raw.get("trap", {}))
    lad = raw.get("ladder", {})
    level_count = lad.get("level_count", 2)
    gaps = lad.get("transition_frequencies", [100.0 + 10.0 * k for k in range(level_count - 1)])
    try:
        ladder = InternalLadder(
            m_base=lad.get("m_base", 0),
            level_count=level_count,
            transition_frequencies=tuple(gaps),
            dipole_scales=tuple(lad["dipole_scales"]) if "dipole_scales" in lad else None,
        )
    except ValueError as e:
        errors.append(f"ladder: {e}")
        ladder = None

    drive = DriveConfig(**raw.get("drive", {}))
    if drive.eta <= 0:
        errors.append(ETA_MESSAGE)
    if abs(drive.l) > trap.n_max:
        warns.append(f"|l|={abs(drive.l)} exceeds n_max={trap.n_max}: sideband coupling is identically zero")

    steps = []
    for i, s in enumerate(raw.get("schedule", [])):
        d = {**drive.__dict__, **s.get("drive", {})}
        if d["eta"] <= 0:
            errors.append(f"schedule/{i}/drive/eta: must be > 0")
            continue
        step = _pulse_step(s, drive, errors, f"schedule/{i}")
        if step is None:
            continue
        if ladder is not None and step.transition >= ladder.level_count - 1:
            errors.append(f"schedule/{i}/transition: {step.transition} out of range for {ladder.level_count} levels")
        steps.append(step)

    init = raw.get("initial_state", "upper")
    trap_size = (trap.n_max + 1) * (trap.n_max + 2) // 2
    if ladder is not None:
        if isinstance(init, dict) and "amplitudes" in init:
            want = ladder.level_count * trap_size
            if len(init["amplitudes"]) != want:
                errors.append(f"initial_state/amplitudes: expected {want} entries, got {len(init['amplitudes'])}")
        if isinstance(init, dict):
            amps = init.get("superposition") or [complex(*a) for a in init.get("amplitudes", [])]
            if abs(np.linalg.norm(amps) - 1) > 1e-9:
                errors.append("initial_state: amplitudes are not normalized")

    out_raw = dict(raw.get("outputs", {}))
    if "tracked" in out_raw:
        out_raw["tracked"] = tuple(tuple(t) for t in out_raw["tracked"])
        for k, (lev, npl, nmi) in enumerate(out_raw["tracked"]):
            if ladder is not None and lev >= ladder.level_count or npl + nmi > trap.n_max:
                errors.append(f"outputs/tracked/{k}: {[lev, npl, nmi]} outside the composite basis")
    outputs = OutputConfig(**out_raw)

    orc = dict(raw.get("oracle", {}))
    if "l_values" in orc:
        orc["l_values"] = tuple(orc["l_values"])
    oracle = OracleConfig(**orc)

    sweep = None
    if "sweep" in raw:
        sweep = SweepConfig(tuple(raw["sweep"]["effective_rabi"]), raw["sweep"].get("model", "FULL"))

    probe = None
    if "probe" in raw:
        probe = ProbeConfig(**raw["probe"])
        if ladder is not None and probe.transition >= ladder.level_count - 1:
            errors.append(f"probe/transition: {probe.transition} needs at least {probe.transition + 2} levels")

    if errors:
        raise ConfigError(errors)
    return ScenarioConfig(
        name=raw.get("name", "scenario"),
        trap=trap,
        ladder=ladder,
        drive=drive,
        schedule=tuple(steps),
        initial_state=init,
        integrator=IntegratorConfig(**raw.get("integrator", {})),
        outputs=outputs,
        oracle=oracle,
        sweep=sweep,
        modes=tuple(raw.get("modes", [])),
        probe=probe,
        warnings=tuple(warns),
    )


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"config file not found: {path}")
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise ConfigError([f"invalid JSON: {e}"]) from None
    return parse_config(raw)
