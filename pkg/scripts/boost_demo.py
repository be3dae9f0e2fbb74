"""Covariance of the solved field under boosts of the coordinate frame.

For each rapidity: residuals of the transformed solution against the
transformed system, the spinor/coordinate commutation defect, and the
tensor transformation defect of the current.
"""
import argparse

import numpy as np

from mtdirac.geometry import sample_spacelike
from mtdirac.interaction import wavepacket_scenario
from mtdirac.lorentz import (
    Boost,
    commutation_defect,
    covariance_report,
    current_covariance_defect,
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=100)
    args = ap.parse_args()

    s = wavepacket_scenario(-3.0, -1.0, 1.0, 3.0)
    rng = np.random.default_rng(0)
    print(f"{'beta':>6} {'pde_max':>10} {'bc_max':>10} {'commut':>10} {'current':>10}")
    for beta in (-1.0, -0.3, 0.3, 1.0):
        b = Boost(beta)
        rep = covariance_report(s, b, samples=args.samples)
        t1, z1, t2, z2 = sample_spacelike(rng, 200, (-1.6, 1.6), (-3.0, 3.0))
        cur = current_covariance_defect(s, b, t1, z1, t2, z2)
        print(
            f"{beta:6.2f} {rep.pde_max:10.3e} {rep.bc_max:10.3e} "
            f"{commutation_defect(b):10.3e} {cur:10.3e}"
        )


if __name__ == "__main__":
    main()
