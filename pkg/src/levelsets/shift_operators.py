"""Weighted bilateral shifts with resolvent norm constant near zero.

Two operators on sequences indexed by Z are provided:

kind ``A``
    ``(A y)_k = delta^{-|k|} y_{k+1}``, unbounded with compact inverse
    ``(A^{-1} x)_k = beta_k x_{k-1}``, ``beta_k = delta^{|k-1|}``, for
    ``0 < delta <= 1/4``.
kind ``B``
    ``(B x)_k = alpha_k x_{k+1}`` with ``alpha_0 = 1/M`` and 1 elsewhere,
    ``beta_k = M`` at ``k = 1`` and 1 elsewhere, for ``M > 3``.

For ``|lambda|`` inside the certified disc the resolvent is the Neumann
series ``sum_j lambda^j T^{-(j+1)}``; summed in index form its entries are

    R[k, m] = lambda^(k-1-m) * beta_{m+1} * ... * beta_k      (m <= k - 1)

and zero for ``m >= k``. Everything here is closed form: no inversion and no
series truncation inside the window.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError, ValidationError
from ._io import open_text
from .vector_norms import IndexedVector

__all__ = [
    "ShiftSpec",
    "ResolventMatrix",
    "beta_weights",
    "shift_matrix",
    "inverse_matrix",
    "resolvent_matrix",
    "apply_resolvent",
    "truncation_bound",
    "validated_radius",
    "default_window",
    "write_matrix_csv",
    "read_matrix_csv",
]

KIND_B_MARGIN = 1e-9
DISC_SLACK = 1e-12


@dataclass(frozen=True)
class ShiftSpec:
    """Parameters of one of the two shift operators.

    Use ``ShiftSpec.A(delta)`` or ``ShiftSpec.B(emm)``.
    """

    kind: str
    delta: float = 0.25
    emm: float = 4.0

    def __post_init__(self):
        if self.kind == "A":
            if not (0.0 < self.delta <= 0.25):
                raise ValidationError(f"kind A needs 0 < delta <= 1/4, got {self.delta}")
        elif self.kind == "B":
            if not (self.emm > 3.0):
                raise ValidationError(f"kind B needs M > 3, got {self.emm}")
        else:
            raise ValidationError(f"unknown operator kind {self.kind!r}")

    @classmethod
    def A(cls, delta=0.25):
        return cls("A", delta=float(delta))

    @classmethod
    def B(cls, emm=4.0):
        return cls("B", emm=float(emm))

    def __str__(self):
        return f"A(delta={self.delta:g})" if self.kind == "A" else f"B(M={self.emm:g})"


@dataclass(frozen=True, eq=False)
class ResolventMatrix:
    lam: complex
    N: int
    matrix: np.ndarray
    truncation_tail: float

    @property
    def indices(self):
        return np.arange(-self.N, self.N + 1)


def beta_weights(spec, k):
    """Weight ``beta_k`` of the inverse shift (vectorized in ``k``)."""
    k = np.asarray(k)
    if spec.kind == "A":
        out = spec.delta ** np.abs(k - 1).astype(float)
    else:
        out = np.where(k == 1, spec.emm, 1.0)
    return float(out) if out.ndim == 0 else out


def _log_beta(spec, k):
    k = np.asarray(k)
    if spec.kind == "A":
        return np.abs(k - 1) * math.log(spec.delta)
    return np.where(k == 1, math.log(spec.emm), 0.0)


def validated_radius(spec):
    """Largest ``|lambda|`` for which the closed forms are certified."""
    if spec.kind == "A":
        return spec.delta
    return 1.0 / spec.emm - KIND_B_MARGIN


def _check_lambda(spec, lam, N):
    if N < 4:
        raise ValidationError("window half-width N must be at least 4")
    r = abs(lam)
    if spec.kind == "A" and r > spec.delta * (1 + DISC_SLACK):
        raise PreconditionError(f"|lambda| = {r:g} exceeds delta = {spec.delta:g} for {spec}")
    if spec.kind == "B" and r > validated_radius(spec):
        raise PreconditionError(f"|lambda| = {r:g} is not below 1/M = {1 / spec.emm:g} for {spec}")


def default_window(spec, radius):
    """Window half-width: 40 for kind A, ``ceil(log 1e-12 / log r)`` (in
    ``[4, 200]``) for kind B."""
    if spec.kind == "A":
        return 40
    if radius <= 0:
        return 4
    n = math.ceil(math.log(1e-12) / math.log(radius))
    return int(min(200, max(4, n)))


def _powers(lam, n):
    out = np.empty(n, dtype=complex)
    out[0] = 1.0
    for j in range(1, n):
        out[j] = out[j - 1] * lam
    return out


def resolvent_matrix(spec, lam, N):
    """Window ``[-N, N]`` of ``(T - lambda I)^{-1}`` from the product formula.

    Raises
    ------
    PreconditionError
        If ``lambda`` lies outside the certified disc.
    """
    lam = complex(lam)
    _check_lambda(spec, lam, N)
    idx = np.arange(-N, N + 1)
    n = idx.size
    # prod_{i=m+1}^{k} beta_i = exp(L[k] - L[m]) with L cumulative log beta
    L = np.cumsum(_log_beta(spec, idx))
    diff = L[:, None] - L[None, :]
    lag = idx[:, None] - idx[None, :] - 1
    lower = lag >= 0
    pw = _powers(lam, n)
    R = np.zeros((n, n), dtype=complex)
    R[lower] = pw[lag[lower]] * np.exp(diff[lower])
    return ResolventMatrix(lam, N, R, truncation_bound(spec, lam, N))


def shift_matrix(spec, N):
    """Window of the forward shift itself (superdiagonal ``1 / beta_{k+1}``)."""
    idx = np.arange(-N, N + 1)
    T = np.zeros((idx.size, idx.size))
    w = 1.0 / beta_weights(spec, idx[:-1] + 1)
    T[np.arange(idx.size - 1), np.arange(1, idx.size)] = w
    return T


def inverse_matrix(spec, N):
    """Window of ``T^{-1}`` (subdiagonal ``beta_k``)."""
    idx = np.arange(-N, N + 1)
    S = np.zeros((idx.size, idx.size))
    S[np.arange(1, idx.size), np.arange(idx.size - 1)] = beta_weights(spec, idx[1:])
    return S


def apply_resolvent(spec, lam, x):
    """``y = (T - lambda I)^{-1} x`` for ``x`` supported in its window.

    Kind B uses the three-branch series (k <= 0, k = 1, k >= 2); kind A the
    product form ``sum_j lambda^j beta_k ... beta_{k-j} x_{k-1-j}``.
    """
    x = x if isinstance(x, IndexedVector) else IndexedVector(x)
    lam = complex(lam)
    N = x.N
    _check_lambda(spec, lam, N)
    c = x.coeffs
    y = np.zeros_like(c)
    pw = _powers(lam, 2 * N + 2)

    def xs(k):
        return c[k + N] if -N <= k <= N else 0j

    if spec.kind == "B":
        M = spec.emm
        for k in range(-N, N + 1):
            if k <= 0:
                y[k + N] = sum(pw[j] * xs(k - 1 - j) for j in range(0, k - 1 + N + 1))
            elif k == 1:
                y[k + N] = M * xs(0) + M * sum(pw[j] * xs(-j) for j in range(1, N + 1))
            else:
                head = sum(pw[j] * xs(k - 1 - j) for j in range(0, k - 1))
                tail = sum(pw[j] * xs(k - 1 - j) for j in range(k, k - 1 + N + 1))
                y[k + N] = head + M * pw[k - 1] * xs(0) + M * tail
        return IndexedVector(y)

    beta = beta_weights(spec, np.arange(-N - 1, N + 1))

    def b(k):
        return beta[k + N + 1]

    for k in range(-N, N + 1):
        acc = 0j
        prod = 1.0
        for j in range(0, k - 1 + N + 1):
            prod *= b(k - j)
            if prod == 0.0:
                break
            acc += pw[j] * prod * xs(k - 1 - j)
        y[k + N] = acc
    return IndexedVector(y)


def truncation_bound(spec, lam, N):
    """Bound on the norm of the part of the resolvent cut off by the window.

    For kind A the cut-off part ``D = R - P R P`` has row and column sums at
    most ``delta^N / (1 - |lambda|)``; the columns 0 and 1 (which the star
    norm weighs differently) have l2 tails bounded separately. The result
    ``sqrt(2) * rowcol + 2 * coltail`` bounds ``||D||`` for every l_p norm
    and for the star norm.

    For kind B the weighted shift contains the plain bilateral shift, which
    is translation invariant and not small outside any window; the bound
    covers the weight-carrying correction ``(M - 1) lambda^(k-1-m)``
    (``m <= 0 < k``), a rank-one geometric tail.
    """
    lam = complex(lam)
    _check_lambda(spec, lam, N)
    rho = abs(lam)
    if spec.kind == "A":
        d = spec.delta
        rowcol = d**N / (1.0 - rho)
        coltail = rho ** (N - 1) * d**N / math.sqrt(1.0 - (rho * d) ** 2)
    else:
        M = spec.emm
        rowcol = (M - 1.0) * rho**N / (1.0 - rho)
        coltail = (M - 1.0) * rho**N / math.sqrt(1.0 - rho * rho)
    return math.sqrt(2.0) * rowcol + 2.0 * coltail


def write_matrix_csv(res, path):
    """Dense export, one ``row,col,re,im`` line per entry (window indices)."""
    idx = res.indices
    with open_text(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["row", "col", "re", "im"])
        for i, k in enumerate(idx):
            for j, m in enumerate(idx):
                z = res.matrix[i, j]
                w.writerow([int(k), int(m), repr(float(z.real)), repr(float(z.imag))])


def read_matrix_csv(path):
    """Read a ``row,col,re,im`` CSV into a dense array on its window."""
    rows = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0] == "row":
                continue
            rows.append((int(row[0]), int(row[1]), float(row[2]), float(row[3])))
    N = max(max(abs(k), abs(m)) for k, m, _, _ in rows)
    R = np.zeros((2 * N + 1, 2 * N + 1), dtype=complex)
    for k, m, re, im in rows:
        R[k + N, m + N] = complex(re, im)
    return R
