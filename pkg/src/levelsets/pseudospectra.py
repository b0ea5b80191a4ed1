"""Resolvent-norm landscapes over grids of spectral parameters.

A grid records, for every ``lambda``, a lower-bound estimate of
``||(T - lambda I)^{-1}||`` together with the truncation bound of the
window, so that any claim of constancy can absorb the windowing error.

The two shift operators also come with closed-form scalar certificates:
the quantities that have to stay below 1 (kind A) or below ``M`` (kind B)
for the resolvent norm to be pinned at those levels.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError, ValidationError
from ._io import open_text
from .opnorm import DEFAULT_RESTARTS, DEFAULT_SEED, opnorm_general, opnorm_l2
from .shift_operators import (
    ShiftSpec,
    default_window,
    resolvent_matrix,
    truncation_bound,
    validated_radius,
    DISC_SLACK,
)
from .vector_norms import Lp, _norm, check_compatible, window_labels

__all__ = [
    "Region",
    "PseudoGrid",
    "FlatnessReport",
    "grid_points",
    "scan_grid",
    "flatness_report",
    "classify_levelset",
    "write_grid_csv",
    "read_grid_csv",
    "STRICT",
    "BOUNDARY",
    "EXTERIOR",
    "kind_a_part3_factor",
    "kind_a_tail_constant",
    "kind_b_tail_constant",
    "kind_b_head_constant",
    "flat_radius",
]

STRICT = "strict-pseudospectrum"
BOUNDARY = "boundary-level-set"
EXTERIOR = "exterior"

DEFAULT_ESTIMATE_TOL = 1e-6


@dataclass(frozen=True)
class Region:
    """A closed disc (``center``, ``radius``) or an axis-aligned rectangle
    with opposite corners ``lo`` and ``hi``."""

    shape: str = "disc"
    center: complex = 0j
    radius: float = 0.0
    lo: complex = 0j
    hi: complex = 0j

    def __post_init__(self):
        if self.shape == "disc":
            if not self.radius >= 0:
                raise ValidationError("disc radius must be non-negative")
        elif self.shape == "rectangle":
            if self.hi.real < self.lo.real or self.hi.imag < self.lo.imag:
                raise ValidationError("rectangle corners must satisfy lo <= hi componentwise")
        else:
            raise ValidationError(f"unknown region shape {self.shape!r}")

    @classmethod
    def disc(cls, radius, center=0j):
        return cls("disc", center=complex(center), radius=float(radius))

    @classmethod
    def rectangle(cls, lo, hi):
        return cls("rectangle", lo=complex(lo), hi=complex(hi))

    def contains(self, lam, slack=1e-12):
        lam = np.asarray(lam)
        if self.shape == "disc":
            return np.abs(lam - self.center) <= self.radius * (1 + slack) + slack
        s = slack * max(1.0, abs(self.lo), abs(self.hi))
        return (
            (lam.real >= self.lo.real - s)
            & (lam.real <= self.hi.real + s)
            & (lam.imag >= self.lo.imag - s)
            & (lam.imag <= self.hi.imag + s)
        )


@dataclass(frozen=True, eq=False)
class PseudoGrid:
    region: Region
    resolution: int
    lambdas: np.ndarray
    norms: np.ndarray
    trunc_bounds: np.ndarray
    e0_values: np.ndarray
    witnesses: list = field(repr=False)
    norm_spec: object = None
    operator: object = None
    window: int = 0
    estimate_tol: float = DEFAULT_ESTIMATE_TOL

    def __len__(self):
        return self.lambdas.size


@dataclass(frozen=True)
class FlatnessReport:
    max_value: float
    min_value: float
    relative_variation: float
    is_flat: bool
    tolerance: float
    worst_pair: tuple


def grid_points(region, resolution):
    """Grid of ``lambda`` values in ``region``.

    Discs use concentric rings: the center, then ``(resolution - 1) // 2``
    equally spaced rings (the last one on the boundary circle), each with
    ``2 (resolution + 1)`` equal-angle points. For odd ``resolution`` this
    gives ``resolution**2`` points. Rectangles use a tensor grid with
    ``resolution`` points per axis, corners included.
    """
    n = int(resolution)
    if n < 1:
        raise ValidationError("resolution must be at least 1")
    if region.shape == "rectangle":
        xs = np.linspace(region.lo.real, region.hi.real, n)
        ys = np.linspace(region.lo.imag, region.hi.imag, n)
        X, Y = np.meshgrid(xs, ys)
        return (X + 1j * Y).ravel()
    rings = (n - 1) // 2
    pts = [np.array([region.center])]
    if rings > 0 and region.radius > 0:
        per = 2 * (n + 1)
        ang = np.exp(2j * np.pi * np.arange(per) / per)
        for j in range(1, rings + 1):
            pts.append(region.center + region.radius * j / rings * ang)
    return np.concatenate(pts)


def _point_seed(seed, index):
    return int(np.random.SeedSequence([int(seed), int(index)]).generate_state(1)[0])


def _is_l2(norm):
    return isinstance(norm, Lp) and norm.p == 2


def scan_grid(
    operator,
    norm,
    region,
    resolution=11,
    N=None,
    restarts=DEFAULT_RESTARTS,
    seed=DEFAULT_SEED,
    estimate_tol=DEFAULT_ESTIMATE_TOL,
):
    """Resolvent-norm estimates over a grid.

    Parameters
    ----------
    operator : ShiftSpec or array_like
        A shift operator (resolvent from the closed form on ``[-N, N]``) or a
        dense square matrix (resolvent by direct inversion, zero truncation).
    norm : NormSpec or callable
        The norm used on both sides. A callable receives the window labels
        and returns a NormSpec, for norms whose partition depends on ``N``.
    region : Region
    resolution : int
    N : int, optional
        Window half-width for shift operators; defaults to
        ``default_window`` at the largest ``|lambda|`` on the grid.

    Raises
    ------
    PreconditionError
        If some grid point lies outside the certified disc of the operator.
        The message lists the offending points.
    """
    lams = grid_points(region, resolution)
    if isinstance(operator, ShiftSpec):
        r = validated_radius(operator)
        limit = r * (1 + DISC_SLACK) if operator.kind == "A" else r
        bad = lams[np.abs(lams) > limit]
        if bad.size:
            shown = ", ".join(f"{complex(z):.6g}" for z in bad[:8])
            more = f" (+{bad.size - 8} more)" if bad.size > 8 else ""
            raise PreconditionError(
                f"{bad.size} grid point(s) outside the certified disc |lambda| <= {r:.6g} of {operator}: {shown}{more}"
            )
        if N is None:
            N = default_window(operator, float(np.max(np.abs(lams))))
        labels = window_labels(2 * N + 1)
    else:
        T = np.asarray(operator, dtype=complex)
        if T.ndim != 2 or T.shape[0] != T.shape[1]:
            raise ValidationError("a dense operator must be a square matrix")
        labels = window_labels(T.shape[0])
        N = T.shape[0] // 2
    spec = norm(labels) if callable(norm) else norm
    check_compatible(spec, labels)
    e0 = np.zeros(labels.size, dtype=complex)
    has_e0 = bool(np.any(labels == 0))
    if has_e0:
        e0[int(np.flatnonzero(labels == 0)[0])] = 1.0

    values, bounds, certs, wits = [], [], [], []
    for i, lam in enumerate(lams):
        if isinstance(operator, ShiftSpec):
            R = resolvent_matrix(operator, lam, N).matrix
            tb = truncation_bound(operator, lam, N)
        else:
            R = np.linalg.inv(T - lam * np.eye(T.shape[0]))
            tb = 0.0
        s = _point_seed(seed, i)
        if _is_l2(spec):
            est = opnorm_l2(R, seed=s)
        else:
            est = opnorm_general(R, spec, spec, restarts=restarts, seed=s)
        if has_e0:
            certs.append(float(_norm(spec, R @ e0, labels) / _norm(spec, e0, labels)))
        else:
            certs.append(float("nan"))
        values.append(est.value)
        bounds.append(tb)
        wits.append(est.witness)
    return PseudoGrid(
        region=region,
        resolution=int(resolution),
        lambdas=lams,
        norms=np.array(values),
        trunc_bounds=np.array(bounds),
        e0_values=np.array(certs),
        witnesses=wits,
        norm_spec=spec,
        operator=operator,
        window=int(N),
        estimate_tol=float(estimate_tol),
    )


def flatness_report(grid, tolerance=1e-3):
    """Spread of the estimates: ``(max - min) / max`` against ``tolerance``.

    Raises
    ------
    ValidationError
        If the grid is empty.
    """
    v = np.asarray(grid.norms if isinstance(grid, PseudoGrid) else grid, dtype=float)
    lams = grid.lambdas if isinstance(grid, PseudoGrid) else np.arange(v.size)
    if v.size == 0:
        raise ValidationError("flatness of an empty grid is undefined")
    hi, lo = int(np.argmax(v)), int(np.argmin(v))
    vmax, vmin = float(v[hi]), float(v[lo])
    rel = (vmax - vmin) / vmax if vmax > 0 else 0.0
    return FlatnessReport(vmax, vmin, rel, rel <= tolerance, float(tolerance), (lams[hi], lams[lo]))


def classify_levelset(grid, epsilon):
    """Tag each grid point against the level ``1 / epsilon``.

    A point whose estimate is within ``estimate_tol + truncation bound`` of
    ``1 / epsilon`` is a boundary point; above the band it is in the strict
    pseudospectrum, below it is exterior.

    Raises
    ------
    ValidationError
        If ``epsilon <= 0``.
    """
    if not epsilon > 0:
        raise ValidationError("epsilon must be positive")
    level = 1.0 / epsilon
    band = grid.estimate_tol + grid.trunc_bounds
    tags = np.full(grid.norms.shape, BOUNDARY, dtype=object)
    tags[grid.norms > level + band] = STRICT
    tags[grid.norms < level - band] = EXTERIOR
    return tags


def write_grid_csv(grid, path):
    """One ``re,im,norm,trunc_bound`` row per grid point, in grid order."""
    with open_text(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["re", "im", "norm", "trunc_bound"])
        for lam, v, tb in zip(grid.lambdas, grid.norms, grid.trunc_bounds):
            w.writerow([repr(float(lam.real)), repr(float(lam.imag)), repr(float(v)), repr(float(tb))])


def read_grid_csv(path):
    """Arrays ``(lambdas, norms, trunc_bounds)`` from a grid CSV."""
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["re", "im", "norm", "trunc_bound"]:
            raise ValidationError(f"unexpected grid header {header}")
        for row in reader:
            if row:
                rows.append([float(c) for c in row])
    a = np.array(rows, dtype=float).reshape(-1, 4)
    return a[:, 0] + 1j * a[:, 1], a[:, 2], a[:, 3]


# closed-form certificates for the two shift operators


def kind_a_part3_factor(delta, lam_abs):
    """``delta (1 + |lambda|) / (1 - |lambda|)``; at most 1 keeps
    ``|y_1| + |y_0| <= 1`` on the star unit ball."""
    return delta * (1.0 + lam_abs) / (1.0 - lam_abs)


def kind_a_tail_constant(delta):
    """``(4 delta / 3) sqrt((1 + delta^2) / (1 - delta^2)) + 1/3``; below 1
    keeps the remaining part of the star norm of ``y`` under 1."""
    return 4.0 * delta / 3.0 * math.sqrt((1.0 + delta**2) / (1.0 - delta**2)) + 1.0 / 3.0


def kind_b_tail_constant(emm, lam_abs):
    """``sqrt(2) (M|lambda| + 1) / (1 - |lambda|^2) + 1 / (1 - |lambda|)``;
    must stay below ``M``."""
    r = lam_abs
    return math.sqrt(2.0) * (emm * r + 1.0) / (1.0 - r * r) + 1.0 / (1.0 - r)


def kind_b_head_constant(emm, lam_abs):
    """``(1 + M|lambda|) / (1 - |lambda|)``; must stay at most ``M``."""
    return (1.0 + emm * lam_abs) / (1.0 - lam_abs)


def flat_radius(spec):
    """Radius of the open disc on which the resolvent norm is constant:
    ``delta`` (closed disc) for kind A, ``min(1/M, 1/3 - 1/M)`` for kind B."""
    if spec.kind == "A":
        return spec.delta
    return min(1.0 / spec.emm, 1.0 / 3.0 - 1.0 / spec.emm)
