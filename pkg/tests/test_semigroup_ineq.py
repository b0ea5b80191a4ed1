import math

import numpy as np
import pytest
from scipy.linalg import expm

from levelsets.errors import ValidationError
from levelsets.semigroup_ineq import (
    check_eps_bound,
    check_kallman_rota,
    check_rota_ratio,
    eps_constant,
    make_case,
    numerical_abscissa,
    random_contraction_generator,
    semigroup_bound,
)

NILPOTENT = np.array([[0.0, 1.0], [0.0, 0.0]])


def _contractions(count=20, seed=100):
    rng = np.random.default_rng(seed)
    return [make_case(random_contraction_generator(int(rng.integers(2, 9)), rng)) for _ in range(count)]


def test_semigroup_bound_examples():
    assert semigroup_bound(-np.eye(2)) == 1.0
    # ||[[1, t], [0, 1]]|| = (t + sqrt(t^2 + 4)) / 2, largest at t = t_max
    assert semigroup_bound(NILPOTENT, t_max=2.0) == pytest.approx(1 + math.sqrt(2), rel=1e-12)
    S = np.array([[0.0, 2.0], [-2.0, 0.0]]) + 1j * np.diag([1.0, -3.0])
    assert semigroup_bound(S) == pytest.approx(1.0, abs=1e-12)


def test_semigroup_bound_matches_direct_exponentials():
    rng = np.random.default_rng(1)
    B = rng.normal(size=(4, 4)) - 3 * np.eye(4)
    t = np.linspace(0, 5, 101)[1:]
    direct = max(1.0, max(np.linalg.norm(expm(s * B), 2) for s in t))
    assert semigroup_bound(B, t_max=5.0, steps=100) == pytest.approx(direct, rel=1e-10)


def test_semigroup_bound_overflow_is_unbounded():
    assert semigroup_bound(np.diag([50.0, 0.0]), t_max=100.0, steps=10) == math.inf


def test_semigroup_bound_arguments():
    with pytest.raises(ValidationError):
        semigroup_bound(-np.eye(2), t_max=0.0)
    with pytest.raises(ValidationError):
        semigroup_bound(-np.eye(2), steps=9)
    with pytest.raises(ValidationError):
        make_case(np.eye(9))
    with pytest.raises(ValidationError):
        make_case(np.ones((2, 3)))


def test_contraction_generators():
    rng = np.random.default_rng(2)
    B = random_contraction_generator(5, rng, margin=0.5)
    assert numerical_abscissa(B) == pytest.approx(-0.5, abs=1e-12)
    case = make_case(B)
    assert case.is_contraction and case.K == 1.0 and case.n == 5
    # the spectral-norm semigroup bound agrees
    assert semigroup_bound(B) == pytest.approx(1.0, abs=1e-12)


def test_kallman_rota_minus_identity_is_exactly_one():
    case = make_case(-np.eye(3))
    assert case.K == 1.0
    assert check_kallman_rota(case) == 1.0
    assert check_kallman_rota(case, adjoint=True) == 1.0


@pytest.mark.parametrize("adjoint", [False, True], ids=["B", "B^H"])
def test_kallman_rota_on_contractions(adjoint):
    for i, case in enumerate(_contractions()):
        assert check_kallman_rota(case, trials=1000, seed=i, adjoint=adjoint) <= 4.0


def test_kallman_rota_with_general_bound():
    case = make_case(NILPOTENT - 0.1 * np.eye(2))
    assert not case.is_contraction and case.K > 1
    assert check_kallman_rota(case) <= 4.0


def test_all_samples_skipped_gives_nan():
    assert math.isnan(check_kallman_rota(make_case(NILPOTENT)))


def test_rota_ratio_examples():
    case = make_case(-np.eye(2))
    assert check_rota_ratio(case, 3, 2) == pytest.approx(0.25, rel=1e-14)
    for i, case in enumerate(_contractions(10)):
        assert check_rota_ratio(case, 2, 1, seed=i) <= 4.0


def test_rota_ratio_is_stable_under_doubling():
    for i, case in enumerate(_contractions(10, seed=7)):
        a = check_rota_ratio(case, 3, 1, trials=2000, seed=i)
        b = check_rota_ratio(case, 3, 1, trials=4000, seed=i)
        assert math.isfinite(a) and b >= a
        assert (b - a) / a < 0.1


def test_rota_ratio_arguments():
    case = make_case(-np.eye(2))
    for n, k in [(1, 1), (6, 1), (3, 0), (3, 3)]:
        with pytest.raises(ValidationError):
            check_rota_ratio(case, n, k)


def test_eps_constant():
    assert eps_constant(1.0) == 2.0
    assert eps_constant(0.1) == pytest.approx(10.1)
    assert eps_constant(2.0, C=16.0) == 4.0
    with pytest.raises(ValidationError):
        eps_constant(0.0)


@pytest.mark.parametrize("eps", [0.1, 1.0, 10.0])
def test_eps_bound_on_contractions(eps):
    for i, case in enumerate(_contractions(10)):
        assert check_eps_bound(case, eps, seed=i) <= 1.0
        assert check_eps_bound(case, eps, seed=i, adjoint=True) <= 1.0


@pytest.mark.parametrize("mu", [0.0, 0.3, 2.0])
def test_shifting_the_generator_does_not_raise_the_bound(mu):
    rng = np.random.default_rng(3)
    B = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    B = B - (np.linalg.eigvals(B).real.max() + 0.2) * np.eye(3)
    base = make_case(B)
    shifted = make_case(B - mu * np.eye(3))
    assert shifted.K <= base.K * (1 + 1e-12)
    assert check_rota_ratio(shifted, 2, 1) <= 4 * shifted.K**2
