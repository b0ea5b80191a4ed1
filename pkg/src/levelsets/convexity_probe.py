"""Falsification probes for complex strict and uniform convexity.

A norm is complex strictly convex when no unit vector ``x`` admits a
nonzero ``y`` with ``||x + zeta y|| <= 1`` for every ``|zeta| <= 1``.
Both probes rest on one monotonicity fact: for fixed ``x`` and ``y`` the
map ``s -> max_{|zeta| <= 1} ||x + zeta s y||`` is convex, even and hence
nondecreasing on ``s >= 0``. So a direction either works at the smallest
admissible size of ``y`` or not at all, and bisection finds the largest
admissible size.

The maximum over the disc is taken over the boundary circle (plus the
center), which suffices for norms by the maximum principle for the
subharmonic function ``zeta -> ||x + zeta y||``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .errors import ValidationError
from .opnorm import DEFAULT_SEED
from .vector_norms import _norm, check_compatible, window_labels

__all__ = [
    "ConvexityWitness",
    "csc_witness_search",
    "cuc_modulus_estimate",
    "disc_sup",
    "zeta_samples",
]

WITNESS_FLOOR = 0.1
WITNESS_TOL = 1e-9
BATCH = 1024


@dataclass(frozen=True, eq=False)
class ConvexityWitness:
    """``x`` of norm 1 and ``y`` with ``||x + zeta y|| - 1 <= sup_violation``
    on the sampled disc. ``trial`` is the index of the start that found it
    (structured coordinate pairs first, then random trials)."""

    x: np.ndarray
    y: np.ndarray
    sup_violation: float
    y_norm: float
    trial: int


def zeta_samples(points=64, center=True):
    """``points`` equally spaced points on the unit circle, then 0."""
    z = np.exp(2j * np.pi * np.arange(points) / points)
    return np.append(z, 0.0) if center else z


def disc_sup(norm, x, y, labels=None, points=512):
    """``max ||x + zeta y||`` over sampled ``|zeta| <= 1`` (batched)."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    labels = window_labels(x.shape[-1]) if labels is None else np.asarray(labels)
    Z = zeta_samples(points)
    V = x[..., None, :] + Z[:, None] * y[..., None, :]
    return _norm(norm, V, labels).max(axis=-1)


def _labels(window):
    if np.ndim(window) == 0:
        L = int(window)
        if L < 2:
            raise ValidationError("the window needs at least two coordinates")
        return window_labels(L)
    return np.asarray(window, dtype=int)


def _structured_pairs(n):
    eye = np.eye(n, dtype=complex)
    pairs = list(permutations(range(n), 2))
    return eye[[i for i, _ in pairs]], eye[[j for _, j in pairs]]


def _random_pairs(rng, count, n):
    X = rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))
    Y = rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))
    # half the trials use sparse supports, where polyhedral faces live
    keep = rng.random((count, n)) < 0.5
    sparse = np.arange(count) % 2 == 1
    X = np.where(sparse[:, None] & ~keep, 0.0, X)
    Y = np.where(sparse[:, None] & keep, 0.0, Y)
    for A in (X, Y):
        empty = ~np.any(A != 0, axis=1)
        A[empty, rng.integers(0, n, empty.sum())] = 1.0
    return X, Y


def _largest_scale(norm, labels, X, Y, Z, bound, tol, lo, hi, steps=50):
    """Per row, the largest ``s`` in ``[lo, hi]`` with
    ``max_zeta ||X + zeta s Y|| <= bound + tol`` (``lo`` assumed feasible)."""

    def feasible(s):
        V = X[:, None, :] + (Z[None, :, None] * s[:, None, None]) * Y[:, None, :]
        return _norm(norm, V, labels).max(axis=1) <= bound + tol

    lo, hi = lo.copy(), hi.copy()
    top = feasible(hi)
    lo[top] = hi[top]
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        ok = feasible(mid)
        lo = np.where(ok, mid, lo)
        hi = np.where(ok, hi, mid)
    return lo


def csc_witness_search(
    norm,
    window=3,
    trials=10_000,
    seed=DEFAULT_SEED,
    tol=WITNESS_TOL,
    floor=WITNESS_FLOOR,
    zeta_points=64,
):
    """Look for a pair violating complex strict convexity.

    Coordinate pairs ``(e_i, e_j)`` are tried first, then ``trials`` random
    pairs (dense and sparse supports). A direction ``y`` is accepted when
    ``max_zeta ||x + zeta y|| <= 1 + tol`` at ``||y|| = floor``; the returned
    ``y`` is then enlarged by bisection as far as the test allows. Returns
    the first witness in trial order, or ``None``.
    """
    if trials < 1:
        raise ValidationError("trials must be at least 1")
    labels = _labels(window)
    check_compatible(norm, labels)
    n = labels.size
    Z = zeta_samples(zeta_points)
    rng = np.random.default_rng(seed)

    def batches():
        yield _structured_pairs(n)
        done = 0
        while done < trials:
            m = min(BATCH, trials - done)
            yield _random_pairs(rng, m, n)
            done += m

    offset = 0
    for X, Y in batches():
        X = X / _norm(norm, X, labels)[:, None]
        Y = Y / _norm(norm, Y, labels)[:, None]
        V = X[:, None, :] + floor * Z[None, :, None] * Y[:, None, :]
        ok = np.flatnonzero(_norm(norm, V, labels).max(axis=1) <= 1.0 + tol)
        if ok.size:
            i = int(ok[0])
            x, y = X[i : i + 1], Y[i : i + 1]
            # enlarge with a much tighter test so the reported witness sits well
            # inside the tolerance
            s = _largest_scale(norm, labels, x, y, Z, 1.0, 1e-13, np.array([floor]), np.array([1.0]))
            y = s[0] * y[0]
            sup = float(disc_sup(norm, x[0], y, labels, zeta_points)) - 1.0
            return ConvexityWitness(x[0], y, sup, float(_norm(norm, y, labels)), offset + i)
        offset += X.shape[0]
    return None


def cuc_modulus_estimate(norm, epsilon, window=3, trials=2000, seed=DEFAULT_SEED, zeta_points=256):
    """Sampled modulus of complex uniform convexity at ``epsilon``.

    Over unit directions ``u``, ``v`` (coordinate pairs first, then random),
    find the largest ``a`` with ``max_zeta ||a u + zeta epsilon v|| <= 1``
    and return ``1 - max a``. Feasible pairs only ever lower the result, so
    it is an estimate from above of the true modulus; it is always in
    ``[0, 1]``.
    """
    if not (0.0 < epsilon <= 1.0):
        raise ValidationError("epsilon must lie in (0, 1]")
    labels = _labels(window)
    check_compatible(norm, labels)
    n = labels.size
    Z = zeta_samples(zeta_points)
    rng = np.random.default_rng(seed)
    best = 0.0
    sources = [_structured_pairs(n)]
    done = 0
    while done < trials:
        m = min(BATCH, trials - done)
        sources.append(_random_pairs(rng, m, n))
        done += m
    for U, V in sources:
        U = U / _norm(norm, U, labels)[:, None]
        V = epsilon * V / _norm(norm, V, labels)[:, None]
        # scale the x-part: max_zeta ||a U + zeta V|| is nondecreasing in a
        Vx = V[:, None, :] * Z[None, :, None]

        def feasible(a):
            return _norm(norm, a[:, None, None] * U[:, None, :] + Vx, labels).max(axis=1) <= 1.0 + 1e-12

        lo = np.zeros(U.shape[0])
        hi = np.ones(U.shape[0])
        top = feasible(hi)
        lo[top] = 1.0
        for _ in range(40):
            mid = 0.5 * (lo + hi)
            ok = feasible(mid)
            lo = np.where(ok, mid, lo)
            hi = np.where(ok, hi, mid)
        best = max(best, float(lo.max()))
    return max(0.0, 1.0 - best)
