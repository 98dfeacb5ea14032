"""Command-line entry point: ``lgatom {simulate,sweep,oracle,modes,validate}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from pathlib import Path

from lgatom.analysis import AliasingError, DensityMatrixError
from lgatom.config import ConfigError, load_config
from lgatom.dynamics import IntegrationError, NormError
from lgatom.lg_field import QuadratureError
from lgatom import runner

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_ORACLE = 0, 2, 3, 4
NUMERICAL_ERRORS = (NormError, IntegrationError, QuadratureError, AliasingError, DensityMatrixError)


def _error(kind: str, messages, code: int, out: Path | None) -> int:
    payload = {"error": kind, "messages": list(messages), "exit_code": code}
    text = json.dumps(payload, indent=2)
    print(text, file=sys.stderr)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / "error.json").write_text(text + "\n")
    return code


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lgatom", description="Trapped atom driven by a circularly polarized LG beam")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, help_ in [
        ("simulate", "run the pulse schedule; write trajectory CSV and analysis JSON"),
        ("sweep", "scan eta^|l| Omega and measure the infidelity against the RWA"),
        ("oracle", "cross-check quadrature coupling elements against the operator algebra"),
        ("modes", "dump LG modes, trap states or momentum distributions on grids"),
        ("validate", "validate the config file only"),
    ]:
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", required=True, type=Path)
        if name != "validate":
            p.add_argument("--out", type=Path, default=Path("out"))
        if name == "sweep":
            p.add_argument("--workers", type=int, default=1)
        p.add_argument("--seedless", action="store_true",
                       help="deterministic mode (always on; accepted for compatibility)")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    out = getattr(args, "out", None)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            config = load_config(args.config)
    except FileNotFoundError as e:
        return _error("config", [str(e)], EXIT_CONFIG, out)
    except ConfigError as e:
        return _error("config", e.errors, EXIT_CONFIG, out)
    for w in config.warnings:
        logging.warning(w)

    try:
        if args.command == "validate":
            print(json.dumps({"valid": True, "warnings": list(config.warnings)}))
            return EXIT_OK
        if args.command == "simulate":
            rep = runner.run_scenario(config, out)
            print(json.dumps({"entropy_bits": rep["entropy_bits"], "out": str(out)}))
        elif args.command == "sweep":
            if config.sweep is None:
                return _error("config", ["sweep: section required for the sweep command"], EXIT_CONFIG, out)
            man = runner.run_sweep(config, out, workers=args.workers)
            print(json.dumps({"infidelity": [r["infidelity"] for r in man["records"]]}))
        elif args.command == "oracle":
            rep = runner.run_oracle_suite(config, out)
            print(json.dumps({"passed": rep["passed"], "max_abs_diff": rep["max_abs_diff"],
                              "truncation_spread": rep["truncation_scaling"]["spread"]}))
            if not rep["passed"]:
                return EXIT_ORACLE
        elif args.command == "modes":
            print(json.dumps({"written": runner.dump_modes(config, out)}))
    except NUMERICAL_ERRORS as e:
        return _error("numerical", [f"{type(e).__name__}: {e}"], EXIT_NUMERICAL, out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
