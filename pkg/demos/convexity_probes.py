"""Complex strict convexity: which small norms admit a flat disc?"""

import numpy as np

from levelsets.absolute_norms import psi_max, psi_p
from levelsets.convexity_probe import csc_witness_search, cuc_modulus_estimate
from levelsets.vector_norms import Lp, PsiSum, Star


def main():
    norms = {
        "l2": Lp(2),
        "l1": Lp(1),
        "linf": Lp(np.inf),
        "star": Star(),
        "l2 (+)_p2 l2": PsiSum([-1, 0], [1], Lp(2), Lp(2), psi_p(2)),
        "l2 (+)_max l2": PsiSum([-1, 0], [1], Lp(2), Lp(2), psi_max()),
    }
    for name, norm in norms.items():
        w = csc_witness_search(norm, window=3, trials=5000)
        mod = cuc_modulus_estimate(norm, 0.5, trials=500)
        found = "none" if w is None else f"x = {np.round(w.x, 3)}, y = {np.round(w.y, 3)}"
        print(f"{name:>14}: witness {found}; modulus at 0.5 ~ {mod:.4f}")


if __name__ == "__main__":
    main()
