"""Bath energy change of continuum spectral densities versus time.

Writes ``tau, ohmic, super_ohmic, super_ohmic_limit`` rows to stdout as CSV.
For the ohmic (s=1) density the energy change grows like ln(1 + (w_c tau)^2);
for s=3 it settles to 2 * int J(w)/w^2 dw.
"""

import argparse
import sys

import numpy as np
from scipy.integrate import trapezoid

from qxent.cli import to_csv
from qxent.spinboson import delta_E_b_spectral, ohmic_density


def main(argv=None) -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--alpha", type=float, default=0.05)
    ap.add_argument("--cutoff", type=float, default=5.0)
    ap.add_argument("--tau-max", type=float, default=20.0)
    ap.add_argument("--points", type=int, default=41)
    args = ap.parse_args(argv)

    omega = np.linspace(1e-6, 40 * args.cutoff, 200_001)
    ohm = ohmic_density(omega, args.alpha, args.cutoff, s=1.0)
    sup = ohmic_density(omega, args.alpha, args.cutoff, s=3.0)
    limit = 2 * trapezoid(sup.values / omega**2, omega)
    rows = [[tau, delta_E_b_spectral(ohm, tau), delta_E_b_spectral(sup, tau), limit]
            for tau in np.linspace(0.0, args.tau_max, args.points)]
    sys.stdout.write(to_csv(["tau", "ohmic", "super_ohmic", "super_ohmic_limit"], rows))
    return 0


if __name__ == "__main__":
    sys.exit(main())
