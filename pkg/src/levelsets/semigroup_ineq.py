"""Matrix-scale checks of moment inequalities for semigroup generators.

For a generator ``B`` with ``||exp(tB)|| <= K`` (spectral norm, all
``t >= 0``) the Kallman-Rota inequality reads

    ||B w||^2 <= 4 K^2 ||w|| ||B^2 w||.

Adding ``||w||^2`` on the right and splitting the square root with AM-GM
gives, for every ``eps > 0``,

    ||B w|| <= eps ||B^2 w|| + (eps + K^2 / eps) ||w||,

which is what ``eps_constant`` returns (``C = 4 K^2``, ``C(eps) = eps +
C / (4 eps)``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import ValidationError
from .opnorm import DEFAULT_SEED

__all__ = [
    "GeneratorCase",
    "make_case",
    "numerical_abscissa",
    "semigroup_bound",
    "random_contraction_generator",
    "check_kallman_rota",
    "check_rota_ratio",
    "eps_constant",
    "check_eps_bound",
]

MAX_DIM = 8
ZERO_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class GeneratorCase:
    """A generator ``matrix``, a bound ``K >= 1`` on its semigroup and
    whether its numerical abscissa is nonpositive (then ``K = 1``)."""

    matrix: np.ndarray
    K: float
    is_contraction: bool

    @property
    def n(self):
        return self.matrix.shape[0]


def numerical_abscissa(B):
    """Largest eigenvalue of the Hermitian part ``(B + B^H) / 2``."""
    B = np.asarray(B, dtype=complex)
    return float(np.linalg.eigvalsh(0.5 * (B + B.conj().T)).max())


def semigroup_bound(B, t_max=10.0, steps=200):
    """``max(1, max_j ||exp(t_j B)||_2)`` on ``t_j = j t_max / steps``.

    The step exponential comes from ``scipy.linalg.expm``; later grid
    points are obtained by repeated multiplication. Returns ``inf`` when
    the powers overflow (a semigroup that is unbounded over the window).

    Raises
    ------
    ValidationError
        If ``t_max <= 0`` or ``steps < 10``.
    """
    if not t_max > 0:
        raise ValidationError("t_max must be positive")
    if steps < 10:
        raise ValidationError("steps must be at least 10")
    B = np.asarray(B, dtype=complex)
    E = expm((t_max / steps) * B)
    P = np.eye(B.shape[0], dtype=complex)
    K = 1.0
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(steps):
            P = P @ E
            if not np.all(np.isfinite(P)):
                return math.inf
            K = max(K, float(np.linalg.norm(P, 2)))
    return K


def make_case(B, t_max=10.0, steps=200):
    """Wrap ``B`` with its semigroup bound (exactly 1 for contractions)."""
    B = np.asarray(B, dtype=complex)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise ValidationError("a generator must be a square matrix")
    if B.shape[0] > MAX_DIM:
        raise ValidationError(f"generators are limited to dimension {MAX_DIM}")
    contraction = numerical_abscissa(B) <= 1e-12
    K = 1.0 if contraction else semigroup_bound(B, t_max, steps)
    return GeneratorCase(B, K, contraction)


def random_contraction_generator(n, rng, margin=0.0):
    """A complex Gaussian matrix shifted so its numerical abscissa equals
    ``-margin``; it generates a contraction semigroup."""
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return G - (numerical_abscissa(G) + margin) * np.eye(n)


def _samples(case, trials, seed, adjoint):
    B = case.matrix.conj().T if adjoint else case.matrix
    rng = np.random.default_rng(seed)
    # real and imaginary parts drawn row by row, so more trials only add rows
    Z = rng.standard_normal((trials, 2, case.n))
    return B, Z[:, 0] + 1j * Z[:, 1]


def _powers_norms(B, W, top):
    out = [np.linalg.norm(W, axis=1)]
    V = W
    for _ in range(top):
        V = V @ B.T
        out.append(np.linalg.norm(V, axis=1))
    return out


def check_kallman_rota(case, trials=1000, seed=DEFAULT_SEED, adjoint=False):
    """Largest observed ``||B w||^2 / (K^2 ||w|| ||B^2 w||)`` over random
    complex Gaussian ``w`` (those with ``||B^2 w|| < 1e-12`` are skipped).

    With ``adjoint=True`` the conjugate transpose is used; it has the same
    semigroup bound in the spectral norm. Returns ``nan`` if every sample
    was skipped.
    """
    B, W = _samples(case, trials, seed, adjoint)
    nw, nb, nb2 = _powers_norms(B, W, 2)
    keep = nb2 >= ZERO_FLOOR
    if not keep.any():
        return float("nan")
    ratio = nb[keep] ** 2 / (case.K**2 * nw[keep] * nb2[keep])
    return float(ratio.max())


def check_rota_ratio(case, n, k, trials=1000, seed=DEFAULT_SEED, adjoint=False):
    """Largest observed ``||B^k w||^n / ((||B^n w|| + ||w||)^k ||w||^(n-k))``.

    Raises
    ------
    ValidationError
        Unless ``2 <= n <= 5`` and ``1 <= k <= n - 1``.
    """
    if not (2 <= n <= 5 and 1 <= k <= n - 1):
        raise ValidationError("need 2 <= n <= 5 and 1 <= k <= n - 1")
    B, W = _samples(case, trials, seed, adjoint)
    norms = _powers_norms(B, W, n)
    nw, nk, nn = norms[0], norms[k], norms[n]
    keep = nn >= ZERO_FLOOR
    if not keep.any():
        return float("nan")
    ratio = nk[keep] ** n / ((nn[keep] + nw[keep]) ** k * nw[keep] ** (n - k))
    return float(ratio.max())


def eps_constant(eps, C=4.0):
    """``C(eps) = eps + C / (4 eps)`` for ``||Bw|| <= eps ||B^2 w|| + C(eps) ||w||``."""
    if not eps > 0:
        raise ValidationError("eps must be positive")
    return eps + C / (4.0 * eps)


def check_eps_bound(case, eps, trials=1000, seed=DEFAULT_SEED, adjoint=False):
    """Largest observed ``||B w|| / (eps ||B^2 w|| + C(eps) ||w||)`` with
    ``C = 4 K^2``; at most 1 when the inequality holds."""
    B, W = _samples(case, trials, seed, adjoint)
    nw, nb, nb2 = _powers_norms(B, W, 2)
    c = eps_constant(eps, 4.0 * case.K**2)
    return float((nb / (eps * nb2 + c * nw)).max())
