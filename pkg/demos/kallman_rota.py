"""Kallman-Rota ratios for random contraction generators and a non-normal example."""

import numpy as np

from levelsets.semigroup_ineq import check_kallman_rota, check_rota_ratio, make_case, random_contraction_generator


def main():
    rng = np.random.default_rng(1)
    for n in (2, 4, 8):
        case = make_case(random_contraction_generator(n, rng))
        kr = check_kallman_rota(case)
        kr_h = check_kallman_rota(case, adjoint=True)
        r31 = check_rota_ratio(case, 3, 1)
        print(f"n = {n}: ratio {kr:.4f}, adjoint {kr_h:.4f}, (3,1) ratio {r31:.4f}")
    jordan = make_case(np.array([[-0.1, 1.0], [0.0, -0.1]]))
    print(f"Jordan block: K = {jordan.K:.4f}, ratio {check_kallman_rota(jordan):.4f}")


if __name__ == "__main__":
    main()
