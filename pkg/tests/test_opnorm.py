import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from levelsets.errors import ValidationError
from levelsets.opnorm import opnorm_general, opnorm_l2, oracle_opnorm
from levelsets.shift_operators import ShiftSpec, resolvent_matrix, truncation_bound
from levelsets.vector_norms import Lp, Star, eval_norm, window_labels

L1, L2, LINF = Lp(1), Lp(2), Lp(np.inf)


def _rand(rng, m, n):
    return rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n))


def test_l2_examples():
    assert opnorm_l2(np.diag([1.0, 2.0])).value == pytest.approx(2.0, rel=1e-12)
    R = resolvent_matrix(ShiftSpec.A(0.25), 0.0, 40).matrix
    assert opnorm_l2(R).value == pytest.approx(1.0, abs=1e-9)
    R = resolvent_matrix(ShiftSpec.B(4.0), 0.0, 10).matrix
    assert opnorm_l2(R).value == pytest.approx(4.0, abs=1e-9)


def test_l2_matches_svd():
    rng = np.random.default_rng(1)
    for _ in range(10):
        M = _rand(rng, 5, 4)
        est = opnorm_l2(M)
        assert est.value == pytest.approx(np.linalg.svd(M, compute_uv=False)[0], rel=1e-10)
        assert est.value == pytest.approx(np.linalg.norm(M @ est.witness), rel=1e-12)


def test_zero_matrix():
    est = opnorm_l2(np.zeros((3, 3)))
    assert est.value == 0.0 and np.linalg.norm(est.witness) == 1.0
    assert opnorm_general(np.zeros((3, 3)), Star(), L1).value == 0.0


def test_general_examples():
    assert opnorm_general(np.eye(2), LINF, LINF).value == 1.0
    spec = ShiftSpec.A(0.25)
    R = resolvent_matrix(spec, 0.2, 40).matrix
    v = opnorm_general(R, Star(), Star()).value
    assert 1 - 1e-6 <= v <= 1 + truncation_bound(spec, 0.2, 40) + 1e-6


@pytest.mark.parametrize("seed", range(4))
def test_polyhedral_norms_have_closed_forms(seed):
    M = _rand(np.random.default_rng(seed), 3, 4)
    A = np.abs(M)
    assert opnorm_general(M, L1, L1).value == pytest.approx(A.sum(0).max(), rel=1e-12)
    assert opnorm_general(M, L1, LINF).value == pytest.approx(A.max(), rel=1e-12)
    assert opnorm_general(M, L1, L2).value == pytest.approx(np.linalg.norm(M, axis=0).max(), rel=1e-12)
    # l_inf -> l_inf is the largest row sum, reached at a phase vector
    assert opnorm_general(M, LINF, LINF).value == pytest.approx(A.sum(1).max(), rel=1e-12)


def test_witness_reproduces_value():
    rng = np.random.default_rng(2)
    labels = window_labels(5)
    for nin, nout in [(Star(), L1), (L2, Star()), (Lp(3), Lp(1.5)), (Star(), Star())]:
        M = _rand(rng, 5, 5)
        est = opnorm_general(M, nin, nout)
        assert eval_norm(nin, est.witness, labels) == pytest.approx(1.0, abs=1e-12)
        assert est.value == pytest.approx(eval_norm(nout, M @ est.witness, labels), rel=1e-12)
        assert est.is_certified_lower_bound


def test_star_mode_returns_extreme_points():
    M = _rand(np.random.default_rng(3), 5, 5)
    est = opnorm_general(M, Star(), L2)
    assert est.method == "extreme-point"
    w = est.witness
    labels = window_labels(5)
    x0, x1 = abs(w[labels == 0][0]), abs(w[labels == 1][0])
    h = np.linalg.norm(w[(labels != 0) & (labels != 1)])
    on_e0 = x0 == pytest.approx(1.0) and h < 1e-12 and x1 < 1e-12
    on_face = x0 < 1e-12 and h == pytest.approx(1.0) and x1 == pytest.approx(1.0)
    assert on_e0 or on_face


def test_monotone_in_restarts():
    rng = np.random.default_rng(4)
    for _ in range(5):
        M = _rand(rng, 4, 4)
        vals = [opnorm_general(M, Lp(1.5), Star(), restarts=r, seed=9).value for r in (0, 4, 16, 64)]
        assert all(a <= b for a, b in zip(vals, vals[1:]))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31), st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3))
def test_scale_equivariance(seed, c):
    M = _rand(np.random.default_rng(seed), 3, 3)
    a = opnorm_general(M, Star(), L1, seed=seed).value
    b = opnorm_general(c * M, Star(), L1, seed=seed).value
    assert b == pytest.approx(abs(c) * a, rel=1e-10)


def test_l2_consistency():
    rng = np.random.default_rng(5)
    for _ in range(5):
        M = _rand(rng, 5, 5)
        assert opnorm_general(M, L2, L2).value == pytest.approx(opnorm_l2(M).value, rel=1e-8)


def test_star_sandwich_against_l2():
    rng = np.random.default_rng(6)
    for _ in range(10):
        M = _rand(rng, 5, 5)
        s, e = opnorm_general(M, Star(), Star()).value, opnorm_l2(M).value
        assert 0.5 * e <= s <= 2 * e


def test_deterministic_given_seed():
    M = _rand(np.random.default_rng(7), 4, 4)
    a = opnorm_general(M, Lp(3), Star(), seed=11)
    b = opnorm_general(M, Lp(3), Star(), seed=11)
    assert a.value == b.value and np.array_equal(a.witness, b.witness)


def test_dimension_checks():
    with pytest.raises(ValidationError):
        opnorm_general(np.ones(3), L1, L1)
    with pytest.raises(ValidationError):
        oracle_opnorm(np.eye(5), L1, L1)
    with pytest.raises(ValidationError):
        # a two-wide window has no index 1
        opnorm_general(np.eye(2), Star(), L1)


def test_oracle_examples():
    assert oracle_opnorm(np.diag([1.0, 2.0]), L2, L2).value == pytest.approx(2.0, abs=1e-3)
    assert oracle_opnorm(np.array([[0.0, 1.0], [1.0, 0.0]]), L1, LINF).value == pytest.approx(1.0, abs=1e-9)


def test_oracle_agrees_on_star_window():
    rng = np.random.default_rng(8)
    for _ in range(3):
        M = _rand(rng, 3, 3)
        g = opnorm_general(M, Star(), Star()).value
        o = oracle_opnorm(M, Star(), Star()).value
        assert abs(g - o) <= 1e-2 * o
        g = opnorm_general(M, Star(), L1).value
        o = oracle_opnorm(M, Star(), L1).value
        assert abs(g - o) <= 1e-2 * o
