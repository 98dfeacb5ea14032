"""Table of coupling elements <chi_bra| u_l |chi_ket>: quadrature versus ladder algebra."""

import argparse

from lgatom.config import OracleConfig, ScenarioConfig
from lgatom.runner import run_oracle_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-N", type=int, default=3)
    ap.add_argument("--eta", type=float, default=0.1)
    ap.add_argument("--l", type=int, nargs="+", default=[-2, -1, 1, 2])
    ap.add_argument("--show-zeros", action="store_true")
    args = ap.parse_args()

    cfg = ScenarioConfig(oracle=OracleConfig(max_N=args.max_N, l_values=tuple(args.l), eta=args.eta))
    rep = run_oracle_suite(cfg)
    print(f"{'l':>3} {'bra':>8} {'ket':>8} {'algebra':>24} {'quadrature':>24} {'|diff|':>9}")
    for r in rep["rows"]:
        a, q = complex(*r["algebraic"]), complex(*r["quadrature"])
        if abs(a) < 1e-12 and not args.show_zeros:
            continue
        print(f"{r['l']:>3} {str(tuple(r['bra'])):>8} {str(tuple(r['ket'])):>8} {a:>24.6g} {q:>24.6g} {r['abs_diff']:9.1e}")
    sc = rep["truncation_scaling"]
    print(f"max |diff| = {rep['max_abs_diff']:.2e}; truncation deviation/eta^2 = "
          + ", ".join(f"{c:.4f}" for c in sc["deviation_over_eta2"]))


if __name__ == "__main__":
    main()
