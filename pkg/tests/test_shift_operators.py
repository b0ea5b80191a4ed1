import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from levelsets.errors import PreconditionError, ValidationError
from levelsets.shift_operators import (
    ShiftSpec,
    apply_resolvent,
    beta_weights,
    default_window,
    inverse_matrix,
    read_matrix_csv,
    resolvent_matrix,
    shift_matrix,
    truncation_bound,
    validated_radius,
    write_matrix_csv,
)
from levelsets.vector_norms import IndexedVector, sample_star_sphere, window_labels

A = ShiftSpec.A(0.25)
B = ShiftSpec.B(4.0)


def test_spec_validation():
    with pytest.raises(ValidationError):
        ShiftSpec.A(0.3)
    with pytest.raises(ValidationError):
        ShiftSpec.A(0.0)
    with pytest.raises(ValidationError):
        ShiftSpec.B(3.0)
    with pytest.raises(ValidationError):
        ShiftSpec("C")


def test_beta_examples():
    assert beta_weights(A, 1) == 1.0
    assert beta_weights(B, 1) == 4.0 and beta_weights(B, 0) == 1.0
    assert beta_weights(A, -1) == 0.0625
    assert np.array_equal(beta_weights(A, np.array([0, 1, 2])), [0.25, 1.0, 0.25])


def test_resolvent_at_zero_is_inverse_shift():
    R = resolvent_matrix(A, 0.0, 6).matrix
    assert np.allclose(R, inverse_matrix(A, 6), rtol=1e-14, atol=0)


def test_kind_b_e0_column():
    lam = 0.05
    res = resolvent_matrix(B, lam, 12)
    z = res.matrix[:, 12]
    k = res.indices
    expected = np.where(k == 1, 4.0, np.where(k >= 2, 4.0 * lam ** (k - 1.0), 0.0))
    assert np.allclose(z, expected, rtol=1e-14, atol=0)


def test_kind_a_entry_and_neumann_sum():
    N, lam = 10, 0.1
    R = resolvent_matrix(A, lam, N).matrix
    assert R[N + 2, N] == pytest.approx(0.025, rel=1e-14)
    S = inverse_matrix(A, N)
    P, acc = S.copy(), np.zeros_like(R)
    for j in range(61):
        acc = acc + lam**j * P
        P = P @ S
    assert np.max(np.abs(R - acc)) <= 1e-15


def test_strictly_lower_triangular():
    R = resolvent_matrix(B, 0.2 + 0.1j, 8).matrix
    assert np.all(np.triu(R) == 0)


@pytest.mark.parametrize("spec, lam", [(A, 0.2 + 0.1j), (A, -0.25j), (B, 0.24), (B, 0.1 - 0.2j)])
def test_resolvent_identity_on_interior(spec, lam):
    N = 30
    R = resolvent_matrix(spec, lam, N).matrix
    T = shift_matrix(spec, N)
    E = (T - lam * np.eye(2 * N + 1)) @ R
    # the last row of T reaches outside the window
    assert np.max(np.abs(E[:-1] - np.eye(2 * N + 1)[:-1])) <= 1e-10


@pytest.mark.parametrize("spec", [A, B], ids=["A", "B"])
@settings(max_examples=25, deadline=None)
@given(
    r=st.floats(0, 1),
    phi=st.floats(0, 2 * math.pi),
    seed=st.integers(0, 2**32 - 1),
)
def test_apply_matches_matrix(spec, r, phi, seed):
    lam = r * validated_radius(spec) * np.exp(1j * phi)
    rng = np.random.default_rng(seed)
    N = 8
    x = rng.normal(size=2 * N + 1) + 1j * rng.normal(size=2 * N + 1)
    y = apply_resolvent(spec, lam, IndexedVector(x)).coeffs
    assert np.allclose(y, resolvent_matrix(spec, lam, N).matrix @ x, rtol=0, atol=1e-12 * np.abs(x).sum() * 5)


def test_apply_examples():
    e0 = IndexedVector.basis(5, 0)
    y = apply_resolvent(B, 0.0, e0).coeffs
    assert y[6] == 4.0 and np.count_nonzero(y) == 1
    y = apply_resolvent(A, 0.0, e0).coeffs
    assert y[6] == 1.0 and np.count_nonzero(y) == 1


def test_precondition_errors():
    with pytest.raises(PreconditionError):
        resolvent_matrix(A, 0.26, 10)
    with pytest.raises(PreconditionError):
        resolvent_matrix(B, 0.25, 10)
    with pytest.raises(ValidationError):
        resolvent_matrix(A, 0.1, 3)
    # the closed boundary circle is allowed for kind A
    resolvent_matrix(A, 0.25j, 10)


def test_truncation_examples():
    assert truncation_bound(A, 0.2, 40) < 1e-9
    assert truncation_bound(B, 0.0, 10) == 0.0
    assert truncation_bound(A, 0.0, 5) <= math.sqrt(2) * 0.25**5 * (1 + 1e-15)


@pytest.mark.parametrize("spec, lam", [(A, 0.2), (A, 0.25j), (B, 0.2), (B, -0.1 + 0.1j)])
def test_truncation_monotone_in_window(spec, lam):
    b = [truncation_bound(spec, lam, N) for N in range(4, 60)]
    assert all(x >= y for x, y in zip(b, b[1:]))


def test_truncation_bounds_the_window_difference():
    for lam in (0.2, 0.25j, -0.15 + 0.1j):
        for N in (6, 10, 20):
            small = resolvent_matrix(A, lam, N).matrix
            big = resolvent_matrix(A, lam, 2 * N).matrix
            D = big.copy()
            D[N : 3 * N + 1, N : 3 * N + 1] -= small
            assert np.linalg.norm(D, 2) <= truncation_bound(A, lam, N)


def test_kind_a_coefficient_bounds_on_star_ball():
    N = 12
    rng = np.random.default_rng(11)
    X = sample_star_sphere(window_labels(2 * N + 1), 1000, rng)
    k = np.arange(-N, N + 1)
    for lam in 0.25 * np.exp(2j * np.pi * rng.random(10)):
        Y = X @ resolvent_matrix(A, lam, N).matrix.T
        assert np.all(np.abs(Y) <= 4 / 3 * 0.25 ** np.abs(k - 1) * (1 + 1e-12))
        assert np.max(np.abs(Y[:, N])) <= 1 / 3 + 1e-12
        assert np.max(np.abs(Y[:, N + 1]) + np.abs(Y[:, N])) <= 1 + 1e-12


def test_compact_resolvent_singular_values_decay():
    N = 40
    s = np.linalg.svd(resolvent_matrix(A, 0.2, N).matrix, compute_uv=False)
    # the weights delta^|k-1| repeat on both sides of k = 1, so every
    # singular value level comes twice
    cut = min(2 * N, 2 * math.ceil(math.log(1e-6) / math.log(0.25)))
    assert s[cut] < 1e-6
    assert s[cut // 2] > 1e-6


def test_default_window():
    assert default_window(A, 0.25) == 40
    assert default_window(B, 1 / 13) == 11
    assert default_window(B, 0.0) == 4
    assert default_window(B, 0.9) == 200


def test_matrix_csv_round_trip(tmp_path):
    res = resolvent_matrix(B, 0.1 + 0.05j, 5)
    write_matrix_csv(res, tmp_path / "r.csv")
    assert (tmp_path / "r.csv").read_text().splitlines()[0] == "row,col,re,im"
    assert np.array_equal(read_matrix_csv(tmp_path / "r.csv"), res.matrix)
