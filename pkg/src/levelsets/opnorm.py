"""Operator norms of small complex matrices between normed windows.

Every estimate is a certified lower bound: it is the ratio
``||M w||_out / ||w||_in`` for an explicit witness ``w``.

``opnorm_general`` maximizes the convex function ``x -> ||M x||_out`` over
the input unit ball by linearize-and-maximize steps (each step moves to the
point of the ball that maximizes the current linearization, so the
objective never decreases). Over the star ball that point is always one of
the extreme points ``(h, x_1, 0)`` with ``||h||_2 = |x_1| = 1`` or
``x_0 e_0`` with ``|x_0| = 1``.

``oracle_opnorm`` is an independent brute-force check for dimension <= 4:
dense sampling of the unit sphere followed by random-perturbation
hill climbing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .vector_norms import (
    Star,
    check_compatible,
    dual_vector,
    unit_ball_lmo,
    window_labels,
    _norm,
)

__all__ = ["NormEstimate", "opnorm_l2", "opnorm_general", "oracle_opnorm", "DEFAULT_SEED"]

DEFAULT_SEED = 0x5EED
DEFAULT_RESTARTS = 64


@dataclass(frozen=True, eq=False)
class NormEstimate:
    """An operator-norm lower bound together with the vector attaining it.

    ``witness`` has unit input norm and ``value = ||M witness||_out``.
    """

    value: float
    witness: np.ndarray
    method: str
    is_certified_lower_bound: bool = True
    restarts_used: int = 0
    converged: bool = True


def _complex_normal(rng, shape):
    # real and imaginary parts interleaved per row, so the first k rows do
    # not depend on how many rows are drawn
    shape = tuple(np.atleast_1d(shape))
    z = rng.standard_normal((*shape[:-1], 2, shape[-1]))
    return z[..., 0, :] + 1j * z[..., 1, :]


def opnorm_l2(matrix, tol=1e-12, max_iter=20000, seed=DEFAULT_SEED):
    """Largest singular value by power iteration on ``M^H M``.

    The start vector is drawn from a seeded generator, so repeated calls
    agree bit for bit. A zero matrix returns 0 with the first basis vector.
    """
    M = np.asarray(matrix, dtype=complex)
    n = M.shape[1]
    if not np.any(M):
        w = np.zeros(n, dtype=complex)
        w[0] = 1.0
        return NormEstimate(0.0, w, "power-iteration")
    rng = np.random.default_rng(seed)
    v = _complex_normal(rng, n)
    v /= np.linalg.norm(v)
    G = M.conj().T @ M
    sigma = np.linalg.norm(M @ v)
    converged = False
    for _ in range(max_iter):
        w = G @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            break
        v = w / nw
        new = np.linalg.norm(M @ v)
        if abs(new - sigma) <= tol * new:
            sigma = new
            converged = True
            break
        sigma = new
    return NormEstimate(float(sigma), v, "power-iteration", converged=converged)


def _rows_times(X, A):
    # X @ A with at least two rows: numpy takes a gemv path for a single row
    # whose last bits differ from gemm, which would make a start's trajectory
    # depend on how many other starts are still active
    if X.shape[0] == 1:
        return (np.concatenate([X, X]) @ A)[:1]
    return X @ A


def _values(M, X, in_norm, out_norm, lin, lout):
    num = _norm(out_norm, _rows_times(X, M.T), lout)
    den = _norm(in_norm, X, lin)
    return num / den


def _tie_key(w):
    a = np.abs(w)
    return int(np.flatnonzero(a >= a.max() * (1 - 1e-12))[0])


def _select(values, X):
    # max by value; exact ties go to the smallest largest-modulus index
    cands = np.flatnonzero(values == values.max())
    return min(cands, key=lambda i: (_tie_key(X[i]), i))


def opnorm_general(
    matrix,
    in_norm,
    out_norm,
    restarts=DEFAULT_RESTARTS,
    seed=DEFAULT_SEED,
    tol=1e-11,
    max_iter=2000,
    window=50,
    extra_starts=None,
):
    """Estimate ``max ||M x||_out`` over ``||x||_in = 1``.

    Starts: the basis vectors, the l2 top singular vector, any
    ``extra_starts`` and then ``restarts`` seeded random vectors (drawn in
    order, so a larger ``restarts`` only adds starts). A start stops once
    its value improved by less than ``tol`` (relative) over the last
    ``window`` steps or a step failed to improve at all.

    Raises
    ------
    ValidationError
        If a norm does not fit the matrix dimensions.
    """
    M = np.asarray(matrix, dtype=complex)
    if M.ndim != 2:
        raise ValidationError("matrix must be two-dimensional")
    m, n = M.shape
    lin, lout = window_labels(n), window_labels(m)
    check_compatible(in_norm, lin)
    check_compatible(out_norm, lout)

    starts = [np.eye(n, dtype=complex)]
    if np.any(M):
        starts.append(opnorm_l2(M, seed=seed).witness[None, :])
    if extra_starts is not None:
        starts.append(np.atleast_2d(np.asarray(extra_starts, dtype=complex)))
    rng = np.random.default_rng(seed)
    if restarts > 0:
        starts.append(_complex_normal(rng, (restarts, n)))
    X = np.concatenate(starts, axis=0)
    X = X / _norm(in_norm, X, lin)[:, None]

    f = _values(M, X, in_norm, out_norm, lin, lout)
    active = np.ones(f.size, dtype=bool)
    history = [f.copy()]
    MH = M.conj()
    for _ in range(max_iter):
        if not active.any():
            break
        idx = np.flatnonzero(active)
        D = dual_vector(out_norm, _rows_times(X[idx], M.T), lout)
        Xn = unit_ball_lmo(in_norm, _rows_times(D, MH), lin)
        fn = _values(M, Xn, in_norm, out_norm, lin, lout)
        better = fn > f[idx]
        X[idx[better]] = Xn[better]
        f[idx[better]] = fn[better]
        active[idx[~better]] = False
        history.append(f.copy())
        if len(history) > window:
            active &= ~(f - history.pop(0) <= tol * np.abs(f))
    if not np.any(M):
        f = np.zeros_like(f)
    best = _select(f, X)
    w = X[best] / _norm(in_norm, X[best], lin)
    value = float(f[best])
    method = "extreme-point" if isinstance(in_norm, Star) else "multi-start-ascent"
    return NormEstimate(value, w, method, restarts_used=int(restarts), converged=not active.any())


def oracle_opnorm(matrix, in_norm, out_norm, samples=100_000, seed=DEFAULT_SEED, polish=10):
    """Brute-force operator norm for matrices of dimension at most 4.

    Points from the box ``[-1, 1]^{2n}`` and from a complex Gaussian are
    pushed radially onto the input unit sphere, the output norm is
    evaluated on all of them, and the ``polish`` best are refined by
    random-perturbation hill climbing with a shrinking step.

    Raises
    ------
    ValidationError
        If either dimension exceeds 4.
    """
    M = np.asarray(matrix, dtype=complex)
    m, n = M.shape
    if max(m, n) > 4:
        raise ValidationError("oracle_opnorm is limited to dimension <= 4")
    lin, lout = window_labels(n), window_labels(m)
    check_compatible(in_norm, lin)
    check_compatible(out_norm, lout)
    rng = np.random.default_rng(seed)

    half = samples // 2
    box = rng.uniform(-1, 1, (half, n)) + 1j * rng.uniform(-1, 1, (half, n))
    gauss = _complex_normal(rng, (samples - half, n))
    X = np.concatenate([box, gauss])
    nrm = _norm(in_norm, X, lin)
    X = X[nrm > 0] / nrm[nrm > 0][:, None]
    f = _norm(out_norm, X @ M.T, lout)
    # a coarse pass over many candidates picks the basins, then the best
    # few are refined to high accuracy
    order = np.argsort(-f, kind="stable")[: 10 * polish]
    P, fp = _hill_climb(M, X[order], f[order], in_norm, out_norm, lin, lout, rng, 0.3, 1e-3)
    order = np.argsort(-fp, kind="stable")[:polish]
    P, fp = _hill_climb(M, P[order], fp[order], in_norm, out_norm, lin, lout, rng, 1e-2, 1e-9)
    best = _select(fp, P)
    w = P[best]
    value = float(_norm(out_norm, M @ w, lout) / _norm(in_norm, w, lin))
    return NormEstimate(value, w, "oracle", restarts_used=int(samples))


def _hill_climb(M, P, fp, in_norm, out_norm, lin, lout, rng, sigma0, sigma_min, proposals=32):
    # half of the proposals move every coordinate, half move a single one
    # (reaching the vertices of polyhedral balls needs sparse moves)
    P, fp = P.copy(), fp.copy()
    n = P.shape[1]
    sigma = np.full(len(P), float(sigma0))
    fails = np.zeros(len(P), dtype=int)
    half = proposals // 2
    for _ in range(20000):
        act = np.flatnonzero(sigma >= sigma_min)
        if act.size == 0:
            break
        c = act.size
        step = _complex_normal(rng, (c, proposals, n))
        step[:, half:, :] *= np.arange(n) == rng.integers(0, n, (c, proposals - half, 1))
        Z = P[act, None, :] + sigma[act, None, None] * step
        Z = Z / _norm(in_norm, Z, lin)[..., None]
        fz = _norm(out_norm, Z @ M.T, lout)
        k = np.argmax(fz, axis=1)
        cand = fz[np.arange(c), k]
        up = cand > fp[act]
        P[act[up]] = Z[np.flatnonzero(up), k[up]]
        fp[act[up]] = cand[up]
        fails[act] = np.where(up, 0, fails[act] + 1)
        shrink = act[fails[act] >= 8]
        sigma[shrink] *= 0.5
        fails[shrink] = 0
    return P, fp
