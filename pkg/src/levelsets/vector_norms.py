"""Norms on finite windows of bilateral complex sequences.

Vectors live on a symmetric window ``[-N, N]`` and are stored as arrays of
length ``2N + 1``; position ``i`` holds index ``i - N``. Three kinds of norm
are supported:

* ``Lp(p)`` for ``1 <= p <= inf``;
* ``Star()``: ``max(||x'||_2, |x_1|) + |x_0|`` where ``x'`` drops indices 0
  and 1, i.e. ``(l2 (+)_inf C) (+)_1 C``;
* ``PsiSum``: a psi-direct sum of two inner norms over a partition of the
  window indices.

Every evaluation routine accepts batches: the trailing axis holds the
coefficients.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Union

import numpy as np

from .absolute_norms import PsiFunction, norm_psi_pair, psi_max, psi_one
from .errors import ValidationError
from ._io import open_text

__all__ = [
    "IndexedVector",
    "Lp",
    "Star",
    "PsiSum",
    "NormSpec",
    "ThetaSplit",
    "window_labels",
    "eval_norm",
    "dual_vector",
    "unit_ball_lmo",
    "star_as_psisum",
    "theta_split",
    "sample_unit_sphere",
    "sample_star_sphere",
    "read_vector_csv",
    "write_vector_csv",
]


@dataclass(frozen=True, eq=False)
class IndexedVector:
    """Complex coefficients on the window ``[-N, N]``, zero outside."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 1 or c.size < 3 or c.size % 2 == 0:
            raise ValidationError("an indexed vector needs 2N + 1 coefficients with N >= 1")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def N(self):
        return (self.coeffs.size - 1) // 2

    @property
    def indices(self):
        return np.arange(-self.N, self.N + 1)

    def __getitem__(self, k):
        if abs(k) > self.N:
            return 0j
        return self.coeffs[k + self.N]

    @classmethod
    def zeros(cls, N):
        return cls(np.zeros(2 * N + 1, dtype=complex))

    @classmethod
    def basis(cls, N, k):
        c = np.zeros(2 * N + 1, dtype=complex)
        c[k + N] = 1.0
        return cls(c)


@dataclass(frozen=True)
class Lp:
    p: float = 2.0

    def __post_init__(self):
        if not (self.p >= 1.0):
            raise ValidationError(f"p must be >= 1, got {self.p}")


@dataclass(frozen=True)
class Star:
    """``max(||x'||_2, |x_1|) + |x_0|``."""


@dataclass(frozen=True, eq=False)
class PsiSum:
    """``||(P0 x, P1 x)||`` measured by ``psi`` on the two inner norms.

    ``part0`` and ``part1`` are sets of window indices (not array positions).
    """

    part0: tuple
    part1: tuple
    inner0: "NormSpec"
    inner1: "NormSpec"
    psi: PsiFunction

    def __post_init__(self):
        p0 = tuple(sorted(int(k) for k in self.part0))
        p1 = tuple(sorted(int(k) for k in self.part1))
        if not p0 or not p1:
            raise ValidationError("both parts of a psi-sum must be non-empty")
        if set(p0) & set(p1):
            raise ValidationError("psi-sum parts must be disjoint")
        object.__setattr__(self, "part0", p0)
        object.__setattr__(self, "part1", p1)


NormSpec = Union[Lp, Star, PsiSum]


@dataclass(frozen=True)
class ThetaSplit:
    theta: float
    part0_norm: float
    part1_norm: float
    total_norm: float
    th1_holds: bool
    th2_holds: bool


def window_labels(length):
    """Window indices for an array of the given length (``-(L//2)`` first)."""
    return np.arange(length) - length // 2


def _as_array(x):
    if isinstance(x, IndexedVector):
        return x.coeffs
    return np.asarray(x, dtype=complex)


def _positions(labels, part):
    lookup = {int(k): i for i, k in enumerate(labels)}
    try:
        return np.array([lookup[k] for k in part], dtype=int)
    except KeyError as exc:
        raise ValidationError(f"index {exc.args[0]} is not inside the window") from None


def check_compatible(spec, labels):
    """Raise ``ValidationError`` unless ``spec`` can act on ``labels``."""
    labels = [int(k) for k in labels]
    if isinstance(spec, Lp):
        return
    if isinstance(spec, Star):
        if 0 not in labels or 1 not in labels:
            raise ValidationError("the star norm needs indices 0 and 1 inside the window")
        return
    if isinstance(spec, PsiSum):
        if set(spec.part0) | set(spec.part1) != set(labels):
            raise ValidationError("psi-sum partition must cover the window exactly")
        check_compatible(spec.inner0, [k for k in labels if k in set(spec.part0)])
        check_compatible(spec.inner1, [k for k in labels if k in set(spec.part1)])
        return
    raise ValidationError(f"unknown norm spec {spec!r}")


def _norm(spec, X, labels):
    A = np.abs(X)
    if isinstance(spec, Lp):
        if np.isinf(spec.p):
            return A.max(axis=-1)
        if spec.p == 1:
            return A.sum(axis=-1)
        if spec.p == 2:
            return np.sqrt(np.sum(A * A, axis=-1))
        return np.linalg.norm(A, ord=spec.p, axis=-1)
    if isinstance(spec, Star):
        i0 = int(np.nonzero(labels == 0)[0][0])
        i1 = int(np.nonzero(labels == 1)[0][0])
        rest = np.ones(labels.size, dtype=bool)
        rest[[i0, i1]] = False
        h = np.sqrt(np.sum(A[..., rest] ** 2, axis=-1))
        return np.maximum(h, A[..., i1]) + A[..., i0]
    i0 = _positions(labels, spec.part0)
    i1 = _positions(labels, spec.part1)
    a = _norm(spec.inner0, X[..., i0], labels[i0])
    b = _norm(spec.inner1, X[..., i1], labels[i1])
    return norm_psi_pair(a, b, spec.psi)


def eval_norm(spec, x, labels=None):
    """Norm of ``x`` (an ``IndexedVector`` or array, batched on the last axis).

    Raises
    ------
    ValidationError
        If the norm needs indices that the window does not contain.
    """
    X = _as_array(x)
    labels = window_labels(X.shape[-1]) if labels is None else np.asarray(labels)
    check_compatible(spec, labels)
    out = _norm(spec, X, labels)
    return float(out) if np.ndim(out) == 0 else np.asarray(out, dtype=float)


def _phase(z):
    # via the angle, which stays finite for subnormal entries
    z = np.asarray(z, dtype=complex)
    return np.where(z != 0, np.exp(1j * np.angle(z)), 0.0)


def dual_vector(spec, Y, labels):
    """A norming functional ``D`` with ``Re(conj(D) . Y) = ||Y||`` and
    dual norm at most 1 (batched on the last axis)."""
    Y = np.asarray(Y, dtype=complex)
    A = np.abs(Y)
    if isinstance(spec, Lp):
        p = spec.p
        if np.isinf(p):
            idx = np.argmax(A, axis=-1)
            D = np.zeros_like(Y)
            np.put_along_axis(D, idx[..., None], np.take_along_axis(_phase(Y), idx[..., None], -1), -1)
            return D
        if p == 1:
            return _phase(Y)
        nrm = np.linalg.norm(A, ord=p, axis=-1)[..., None]
        safe = np.where(nrm > 0, nrm, 1.0)
        return np.where(nrm > 0, _phase(Y) * (A / safe) ** (p - 1.0), 0.0)
    if isinstance(spec, Star):
        i0 = int(np.nonzero(labels == 0)[0][0])
        i1 = int(np.nonzero(labels == 1)[0][0])
        rest = np.ones(labels.size, dtype=bool)
        rest[[i0, i1]] = False
        h = np.sqrt(np.sum(A[..., rest] ** 2, axis=-1))
        D = np.zeros_like(Y)
        D[..., i0] = _phase(Y[..., i0])
        use_h = h >= A[..., i1]
        safe = np.where(h > 0, h, 1.0)[..., None]
        D[..., rest] = np.where(use_h[..., None], Y[..., rest] / safe, 0.0)
        D[..., i1] = np.where(use_h, 0.0, _phase(Y[..., i1]))
        return D
    i0 = _positions(labels, spec.part0)
    i1 = _positions(labels, spec.part1)
    a = _norm(spec.inner0, Y[..., i0], labels[i0])
    b = _norm(spec.inner1, Y[..., i1], labels[i1])
    s = a + b
    t = np.where(s > 0, b / np.where(s > 0, s, 1.0), 0.0)
    psi, dpsi = spec.psi(t), spec.psi.derivative(t)
    # gradient of (a + b) psi(b / (a + b)) in (a, b)
    ga = psi - t * dpsi
    gb = psi + (1.0 - t) * dpsi
    D = np.zeros_like(Y)
    D[..., i0] = ga[..., None] * dual_vector(spec.inner0, Y[..., i0], labels[i0])
    D[..., i1] = gb[..., None] * dual_vector(spec.inner1, Y[..., i1], labels[i1])
    return D


def _dual_norm(spec, G, labels):
    A = np.abs(G)
    if isinstance(spec, Lp):
        p = spec.p
        if p == 1:
            return A.max(axis=-1)
        if np.isinf(p):
            return A.sum(axis=-1)
        q = p / (p - 1.0)
        return np.linalg.norm(A, ord=q, axis=-1)
    if isinstance(spec, Star):
        i0 = int(np.nonzero(labels == 0)[0][0])
        i1 = int(np.nonzero(labels == 1)[0][0])
        rest = np.ones(labels.size, dtype=bool)
        rest[[i0, i1]] = False
        h = np.sqrt(np.sum(A[..., rest] ** 2, axis=-1))
        return np.maximum(h + A[..., i1], A[..., i0])
    raise NotImplementedError("dual norms of psi-sums are evaluated through the LMO")


def unit_ball_lmo(spec, G, labels, tol=1e-10):
    """Maximize ``Re(conj(G) . x)`` over the unit ball of ``spec``.

    Returns the maximizer, which lies on the unit sphere (an extreme point
    for polyhedral pieces). ``G`` is batched on the last axis.
    """
    G = np.asarray(G, dtype=complex)
    A = np.abs(G)
    if isinstance(spec, Lp):
        p = spec.p
        if p == 1:
            idx = np.argmax(A, axis=-1)
            X = np.zeros_like(G)
            np.put_along_axis(X, idx[..., None], np.take_along_axis(_phase(G), idx[..., None], -1), -1)
            zero = np.take_along_axis(A, idx[..., None], -1)[..., 0] == 0
            X[zero, 0] = 1.0
            return X
        if np.isinf(p):
            X = np.where(A > 0, _phase(G), 1.0)
            return X
        q = p / (p - 1.0)
        W = A ** (q - 1.0)
        X = _phase(G) * W
        nrm = np.linalg.norm(np.abs(X), ord=p, axis=-1)[..., None]
        out = np.where(nrm > 0, X / np.where(nrm > 0, nrm, 1.0), 0.0)
        dead = nrm[..., 0] == 0
        out[dead, 0] = 1.0
        return out
    if isinstance(spec, Star):
        # extreme points: (h, x1, 0) with ||h||_2 = |x1| = 1, or x0 alone
        i0 = int(np.nonzero(labels == 0)[0][0])
        i1 = int(np.nonzero(labels == 1)[0][0])
        rest = np.ones(labels.size, dtype=bool)
        rest[[i0, i1]] = False
        h = np.sqrt(np.sum(A[..., rest] ** 2, axis=-1))
        X = np.zeros_like(G)
        first = h + A[..., i1] >= A[..., i0]
        safe = np.where(h > 0, h, 1.0)[..., None]
        Hdir = np.where((h > 0)[..., None], G[..., rest] / safe, 0.0)
        if rest.any():
            Hdir[..., 0] = np.where(h > 0, Hdir[..., 0], 1.0)
        X[..., rest] = np.where(first[..., None], Hdir, 0.0)
        X[..., i1] = np.where(first, np.where(A[..., i1] > 0, _phase(G[..., i1]), 1.0), 0.0)
        X[..., i0] = np.where(first, 0.0, _phase(G[..., i0]))
        return X
    from .absolute_norms import maximize_linear_over_psi

    i0 = _positions(labels, spec.part0)
    i1 = _positions(labels, spec.part1)
    U0 = unit_ball_lmo(spec.inner0, G[..., i0], labels[i0], tol)
    U1 = unit_ball_lmo(spec.inner1, G[..., i1], labels[i1], tol)
    g0 = np.real(np.sum(np.conj(G[..., i0]) * U0, axis=-1))
    g1 = np.real(np.sum(np.conj(G[..., i1]) * U1, axis=-1))
    # best split of (||P0 x||, ||P1 x||) = ((1 - s), s) / psi(s)
    _, s = maximize_linear_over_psi(g0, g1, spec.psi, tol)
    scale = 1.0 / spec.psi(s)
    X = np.zeros_like(G)
    X[..., i0] = ((1.0 - s) * scale)[..., None] * U0
    X[..., i1] = (s * scale)[..., None] * U1
    return X


def sample_unit_sphere(spec, labels, count, rng):
    """``count`` random points with norm 1: complex Gaussians pushed radially
    onto the sphere. Not uniform, but every direction is reachable."""
    labels = np.asarray(labels)
    check_compatible(spec, labels)
    X = rng.standard_normal((count, labels.size)) + 1j * rng.standard_normal((count, labels.size))
    return X / _norm(spec, X, labels)[:, None]


def sample_star_sphere(labels, count, rng):
    """Random points with star norm 1 spread over the whole sphere.

    Each point is ``t u e_0 + (1 - t) (h, x_1)`` with ``|u| = 1``, ``h`` a
    unit l2 vector (sparse for half of the draws), ``|x_1| <= 1`` and at
    least one of ``||h||``, ``|x_1|`` equal to 1, so both families of
    extreme points and the segments joining them are reached. Every fifth
    ``t`` is pinned to 0 or 1.
    """
    labels = np.asarray(labels)
    check_compatible(Star(), labels)
    n = labels.size
    i0 = int(np.nonzero(labels == 0)[0][0])
    i1 = int(np.nonzero(labels == 1)[0][0])
    rest = np.ones(n, dtype=bool)
    rest[[i0, i1]] = False

    def unit_phase(size):
        return np.exp(2j * np.pi * rng.random(size))

    H = rng.standard_normal((count, rest.sum())) + 1j * rng.standard_normal((count, rest.sum()))
    sparse = rng.random(count) < 0.5
    H = np.where(sparse[:, None] & (rng.random(H.shape) < 0.7), 0.0, H)
    H[~np.any(H != 0, axis=1), 0] = 1.0
    H /= np.linalg.norm(H, axis=1)[:, None]
    a1 = rng.random(count)
    h_scale = np.where(rng.random(count) < 0.5, 1.0, rng.random(count))
    a1 = np.where(h_scale < 1.0, 1.0, a1)
    t = rng.random(count)
    t[::5] = np.round(rng.random(t[::5].size))
    X = np.zeros((count, n), dtype=complex)
    X[:, rest] = ((1 - t) * h_scale)[:, None] * H
    X[:, i1] = (1 - t) * a1 * unit_phase(count)
    X[:, i0] = t * unit_phase(count)
    return X


def star_as_psisum(N):
    """The star norm on ``[-N, N]`` assembled as ``(l2 (+)_inf C) (+)_1 C``."""
    labels = list(range(-N, N + 1))
    rest = [k for k in labels if k not in (0, 1)]
    inner = PsiSum(rest, [1], Lp(2.0), Lp(2.0), psi_max())
    return PsiSum([k for k in labels if k != 0], [0], inner, Lp(1.0), psi_one())


def theta_split(part0_idx, part1_idx, inner_norms, x, psi):
    """The fraction ``theta = ||P0 u|| / (||P0 u|| + ||P1 u||)`` and the two
    inequalities ``||u|| <= ||P0 u|| / theta`` and ``||P0 u|| <= 2 theta ||u||``.

    Raises
    ------
    ValidationError
        If ``x`` is zero (``theta`` undefined) or the partition is invalid.
    """
    X = _as_array(x)
    labels = window_labels(X.size)
    spec = PsiSum(part0_idx, part1_idx, inner_norms[0], inner_norms[1], psi)
    check_compatible(spec, labels)
    i0 = _positions(labels, spec.part0)
    i1 = _positions(labels, spec.part1)
    a = float(_norm(spec.inner0, X[i0], labels[i0]))
    b = float(_norm(spec.inner1, X[i1], labels[i1]))
    if a + b == 0.0:
        raise ValidationError("theta is undefined for the zero vector")
    total = norm_psi_pair(a, b, psi)
    theta = a / (a + b)
    th1 = theta == 0.0 or total <= a / theta * (1 + 1e-12) + 1e-300
    th2 = a <= 2.0 * theta * total * (1 + 1e-12)
    return ThetaSplit(theta, a, b, total, bool(th1), bool(th2))


def write_vector_csv(x, path):
    x = x if isinstance(x, IndexedVector) else IndexedVector(x)
    with open_text(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "re", "im"])
        for k, c in zip(x.indices, x.coeffs):
            w.writerow([int(k), repr(float(c.real)), repr(float(c.imag))])


def read_vector_csv(path):
    rows = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0] == "index":
                continue
            rows.append((int(row[0]), float(row[1]), float(row[2])))
    N = max(abs(k) for k, _, _ in rows)
    c = np.zeros(2 * N + 1, dtype=complex)
    for k, re, im in rows:
        c[k + N] = complex(re, im)
    return IndexedVector(c)
