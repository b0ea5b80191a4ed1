"""Dual generators of the built-in psi functions.

Prints a few values of psi and psi*, the double-dual error, and which
generators stay strictly above max(1 - t, t) inside (0, 1).
"""

import numpy as np

from levelsets.absolute_norms import builtin_psis, psi_analyze, psi_dual


def main():
    t = np.linspace(0, 1, 1001)
    probe = np.array([0.25, 0.5, 0.75])
    for psi in builtin_psis():
        dual = psi_dual(psi)
        err = np.max(np.abs(psi_dual(dual)(t) - psi(t)))
        info = psi_analyze(psi)
        print(
            f"{psi.label:>8}: psi {np.round(psi(probe), 4)}  psi* {np.round(dual(probe), 4)}  "
            f"double-dual error {err:.1e}  strict {info.satisfies_cc}"
        )


if __name__ == "__main__":
    main()
