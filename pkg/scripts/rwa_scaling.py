"""Full-model infidelity of a sideband pi pulse against the RWA result, versus eta^|l| Omega.

The infidelity should fall roughly quadratically as the effective Rabi frequency drops.
"""

import argparse

import numpy as np

from lgatom.dynamics import CompositeBasis, DriveSpec, PulseStep, run_schedule
from lgatom.internal_ladder import InternalLadder
from lgatom.trap_fock import FockBasis


def infidelity(basis, l, eta, effective):
    drive = DriveSpec(l, effective / eta ** abs(l), -np.pi / 2, eta)
    psi0 = basis.basis_state(1, (0, 0))
    ref, _ = run_schedule(psi0, [PulseStep(drive, area=np.pi / 2)], basis)
    full, _ = run_schedule(psi0, [PulseStep(drive, area=np.pi / 2, model="FULL")], basis, tolerance=1e-11)
    return 1 - full.fidelity(ref)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--l", type=int, default=-1)
    ap.add_argument("--eta", type=float, default=0.1)
    ap.add_argument("--values", type=float, nargs="+", default=[0.04, 0.02, 0.01, 0.005])
    args = ap.parse_args()

    basis = CompositeBasis(InternalLadder(m_base=29), FockBasis(4))
    eps = [infidelity(basis, args.l, args.eta, v) for v in args.values]
    print(f"{'eta^|l| Omega':>14} {'infidelity':>12} {'eps/x^2':>10}")
    for v, e in zip(args.values, eps):
        print(f"{v:14.4g} {e:12.3e} {e / v**2:10.4f}")
    slope = np.polyfit(np.log(args.values), np.log(eps), 1)[0]
    print(f"log-log slope {slope:.3f}")


if __name__ == "__main__":
    main()
