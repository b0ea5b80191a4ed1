"""Resolvent norms of the two weighted shifts near lambda = 0.

Under the star norm the resolvent norm does not move on a disc around 0;
under l2 it does. Prints both spreads and writes the star grid to CSV.

    python3 demos/flat_levelset.py [out.csv]
"""

import sys

from levelsets.pseudospectra import Region, flatness_report, scan_grid, write_grid_csv
from levelsets.shift_operators import ShiftSpec
from levelsets.vector_norms import Lp, Star


def main(path=None):
    spec = ShiftSpec.A(0.25)
    disc = Region.disc(0.25)
    star = scan_grid(spec, Star(), disc, resolution=7, N=40)
    l2 = scan_grid(spec, Lp(2), disc, resolution=7, N=40)
    for name, grid in [("star", star), ("l2", l2)]:
        rep = flatness_report(grid)
        print(f"{name:>4}: min {rep.min_value:.9f}  max {rep.max_value:.9f}  variation {rep.relative_variation:.3e}")

    b = scan_grid(ShiftSpec.B(4.0), Star(), Region.disc(1 / 13), resolution=5)
    print(f"kind B, M = 4, |lambda| <= 1/13: values in [{b.norms.min():.9f}, {b.norms.max():.9f}]")
    if path:
        write_grid_csv(star, path)
        print(f"wrote {path}")


if __name__ == "__main__":
    main(*sys.argv[1:2])
