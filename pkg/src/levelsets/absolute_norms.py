"""Convex generators of absolute normalized norms on C^2.

A function ``psi`` on ``[0, 1]`` belongs to the class used here when it is
continuous, convex, equal to 1 at both endpoints and squeezed between
``max(1 - t, t)`` and 1. Each such function generates the norm

    ||(z, v)||_psi = (|z| + |v|) * psi(|v| / (|z| + |v|))

and every absolute normalized norm on C^2 arises this way. The module offers
four families (``max``, ``one``, ``p``-power and piecewise linear), a grid
based membership analysis and numerical dualization.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError, ValidationError
from ._io import open_text

__all__ = [
    "PsiFunction",
    "PsiAnalysis",
    "psi_max",
    "psi_one",
    "psi_p",
    "psi_pwl",
    "psi_eval",
    "psi_dual",
    "psi_analyze",
    "norm_psi_pair",
    "read_psi_csv",
    "write_psi_csv",
    "builtin_psis",
]

GRID_TOL = 1e-12
CONTACT_TOL = 1e-10
COARSE_POINTS = 513
KINK_JUMP = 1e-2
GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, eq=False)
class PsiFunction:
    """A convex function on ``[0, 1]`` generating an absolute norm.

    Parameters
    ----------
    family : {"max", "one", "p", "pwl"}
        ``max`` is ``max(1 - t, t)`` (the l_inf norm), ``one`` is the
        constant 1 (the l_1 norm), ``p`` is ``((1-t)^p + t^p)^(1/p)`` and
        ``pwl`` is linear interpolation through ``(ts, vals)``.
    p : float, optional
        Exponent for the ``p`` family.
    ts, vals : ndarray, optional
        Breakpoints of the ``pwl`` family; ``ts`` strictly increasing from
        0 to 1.
    """

    family: str
    p: Optional[float] = None
    ts: Optional[np.ndarray] = field(default=None, repr=False)
    vals: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        if self.family not in ("max", "one", "p", "pwl"):
            raise ValidationError(f"unknown psi family {self.family!r}")
        if self.family == "p":
            if self.p is None or not (self.p >= 1.0) or np.isinf(self.p):
                raise ValidationError("p-power family needs a finite p >= 1")
        if self.family == "pwl":
            ts = np.asarray(self.ts, dtype=float)
            vals = np.asarray(self.vals, dtype=float)
            if ts.ndim != 1 or ts.shape != vals.shape or ts.size < 2:
                raise ValidationError("pwl breakpoints must be matching 1-d arrays")
            if ts[0] != 0.0 or ts[-1] != 1.0 or np.any(np.diff(ts) <= 0):
                raise ValidationError("pwl breakpoints must increase from 0 to 1")
            ts.setflags(write=False)
            vals.setflags(write=False)
            object.__setattr__(self, "ts", ts)
            object.__setattr__(self, "vals", vals)

    def __call__(self, t):
        """Evaluate without domain checking (vectorized)."""
        t = np.asarray(t, dtype=float)
        if self.family == "max":
            return np.maximum(1.0 - t, t)
        if self.family == "one":
            return np.ones_like(t)
        if self.family == "p":
            p = self.p
            a, b = 1.0 - t, t
            m = np.maximum(a, b)
            # factor out the larger term to avoid underflow for large p
            with np.errstate(divide="ignore", invalid="ignore"):
                r = np.where(m > 0, np.minimum(a, b) / np.where(m > 0, m, 1.0), 0.0)
            return m * (1.0 + r**p) ** (1.0 / p)
        return np.interp(t, self.ts, self.vals)

    def derivative(self, t):
        """A (right) derivative of psi, used for chain-rule subgradients."""
        t = np.asarray(t, dtype=float)
        if self.family == "max":
            return np.sign(t - 0.5)
        if self.family == "one":
            return np.zeros_like(t)
        if self.family == "p":
            p = self.p
            a, b = 1.0 - t, t
            s = a**p + b**p
            return s ** (1.0 / p - 1.0) * (b ** (p - 1.0) - a ** (p - 1.0))
        slopes = np.diff(self.vals) / np.diff(self.ts)
        idx = np.clip(np.searchsorted(self.ts, t, side="right") - 1, 0, slopes.size - 1)
        return slopes[idx]

    @property
    def label(self):
        if self.family == "p":
            return f"p={self.p:g}"
        if self.family == "pwl":
            return f"pwl[{self.ts.size}]"
        return self.family


@dataclass(frozen=True)
class PsiAnalysis:
    """Grid based diagnostics of a candidate psi.

    ``lower_contact`` is the largest grid point ``t0`` in ``(0, 1/2]`` with
    ``psi(t0) = 1 - t0``; ``upper_contact`` the smallest ``t1`` in
    ``[1/2, 1)`` with ``psi(t1) = t1``. ``above_lower`` and ``above_upper``
    record the strict inequalities ``psi(t) > 1 - t`` on ``(0, 1]`` and
    ``psi(t) > t`` on ``[0, 1)``.
    """

    is_member: bool
    satisfies_cc: bool
    lower_contact: Optional[float]
    upper_contact: Optional[float]
    above_lower: bool
    above_upper: bool
    grid_n: int
    reason: str = ""


def psi_max():
    return PsiFunction("max")


def psi_one():
    return PsiFunction("one")


def psi_p(p):
    """The l_p generator; ``p = inf`` maps to the ``max`` family."""
    if np.isinf(p):
        return psi_max()
    if p == 1:
        return psi_one()
    return PsiFunction("p", p=float(p))


def psi_pwl(ts, vals):
    return PsiFunction("pwl", ts=np.asarray(ts, dtype=float), vals=np.asarray(vals, dtype=float))


def builtin_psis():
    """Built-in generators: the three closed families plus two pwl shapes.

    The second pwl shape has a lower contact segment on ``[0, 0.3]``.
    """
    smooth_pwl = psi_pwl([0.0, 0.2, 0.5, 0.9, 1.0], [1.0, 0.85, 0.7, 0.92, 1.0])
    contact_pwl = psi_pwl([0.0, 0.3, 0.7, 1.0], [1.0, 0.7, 0.75, 1.0])
    return [psi_max(), psi_one(), psi_p(2.0), psi_p(3.0), psi_p(1.5), smooth_pwl, contact_pwl]


def psi_eval(psi, t):
    """Evaluate ``psi`` at ``t`` in ``[0, 1]``.

    Raises
    ------
    DomainError
        If any ``t`` lies outside ``[0, 1]``.
    """
    arr = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError(f"psi is defined on [0, 1], got {t!r}")
    out = psi(arr)
    return float(out) if out.ndim == 0 else out


def norm_psi_pair(z_abs, v_abs, psi):
    """Norm of the pair ``(z, v)`` with moduli ``z_abs``, ``v_abs``."""
    z = np.asarray(z_abs, dtype=float)
    v = np.asarray(v_abs, dtype=float)
    if np.any(z < 0) or np.any(v < 0):
        raise DomainError("norm_psi_pair takes moduli (non-negative reals)")
    s = z + v
    safe = np.where(s > 0, s, 1.0)
    out = np.where(s > 0, s * psi(np.clip(v / safe, 0.0, 1.0)), 0.0)
    return float(out) if out.ndim == 0 else out


def _analysis_grid(grid_n):
    return np.union1d(np.linspace(0.0, 1.0, grid_n), [0.5])


def psi_analyze(psi, grid_n=2049):
    """Check membership, the strict-bound condition and contact segments."""
    if grid_n < 100:
        raise ValidationError("grid_n must be at least 100")
    t = _analysis_grid(grid_n)
    with np.errstate(all="ignore"):
        v = np.asarray(psi(t), dtype=float)
    lower = np.maximum(1.0 - t, t)
    reason = ""
    if not np.all(np.isfinite(v)):
        reason = "non-finite values"
    elif abs(v[0] - 1.0) > GRID_TOL or abs(v[-1] - 1.0) > GRID_TOL:
        reason = "psi(0) and psi(1) must equal 1"
    elif np.any(v < lower - GRID_TOL) or np.any(v > 1.0 + GRID_TOL):
        reason = "max(1-t, t) <= psi(t) <= 1 violated"
    else:
        # psi(t_i) <= chord of neighbours, the three-point convexity test
        w = (t[2:] - t[1:-1]) / (t[2:] - t[:-2])
        chord = w * v[:-2] + (1.0 - w) * v[2:]
        if np.any(v[1:-1] > chord + GRID_TOL):
            reason = "not convex on the grid"
    is_member = reason == ""

    # contact tolerances shrink towards the endpoint the segment starts from,
    # otherwise smooth families (gap ~ t^p near 0) register false contacts
    interior = (t > 0.0) & (t < 1.0)
    edge = np.minimum(t, 1.0 - t)
    gap = v - lower
    satisfies_cc = bool(np.all(gap[interior] > CONTACT_TOL * edge[interior]))

    lo_gap = v - (1.0 - t)
    up_gap = v - t
    lo_mask = (t > 0.0) & (t <= 0.5) & (np.abs(lo_gap) <= CONTACT_TOL * t)
    up_mask = (t >= 0.5) & (t < 1.0) & (np.abs(up_gap) <= CONTACT_TOL * (1.0 - t))
    t0 = float(t[lo_mask].max()) if lo_mask.any() else None
    t1 = float(t[up_mask].min()) if up_mask.any() else None
    above_lower = bool(np.all(lo_gap[t > 0.0] > CONTACT_TOL * t[t > 0.0]))
    above_upper = bool(np.all(up_gap[t < 1.0] > CONTACT_TOL * (1.0 - t[t < 1.0])))
    return PsiAnalysis(
        is_member=is_member,
        satisfies_cc=satisfies_cc,
        lower_contact=t0,
        upper_contact=t1,
        above_lower=above_lower,
        above_upper=above_upper,
        grid_n=grid_n,
        reason=reason,
    )


def _dual_objective(t, s, psi):
    return ((1.0 - t) * (1.0 - s) + t * s) / psi(s)


def maximize_linear_over_psi(a, b, psi, tol=1e-10):
    """Maximize ``(a (1-s) + b s) / psi(s)`` over ``s`` in ``[0, 1]``.

    ``a`` and ``b`` are broadcastable non-negative arrays. The objective is a
    ratio of an affine and a positive convex function, hence quasi-concave,
    so a coarse scan followed by golden-section refinement of the best
    bracket finds the global maximum. Returns ``(value, argmax)``.
    """
    a = np.asarray(a, dtype=float)[..., None]
    b = np.asarray(b, dtype=float)[..., None]
    if psi.family == "pwl":
        # the ratio is monotone on every linear piece: breakpoints suffice
        s = psi.ts
        vals = (a * (1.0 - s) + b * s) / psi.vals
        k = np.argmax(vals, axis=-1)
        return np.take_along_axis(vals, k[..., None], -1)[..., 0], s[k]
    s = np.linspace(0.0, 1.0, COARSE_POINTS)
    f = (a * (1.0 - s) + b * s) / psi(s)
    k = np.argmax(f, axis=-1)
    best = np.take_along_axis(f, k[..., None], -1)[..., 0]
    best_s = s[k]
    h = s[1] - s[0]
    lo = np.clip(best_s - h, 0.0, 1.0)
    hi = np.clip(best_s + h, 0.0, 1.0)
    a, b = a[..., 0], b[..., 0]

    def g(x):
        return (a * (1.0 - x) + b * x) / psi(x)

    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = g(x1), g(x2)
    while np.max(hi - lo) > tol:
        left = f1 >= f2
        hi = np.where(left, x2, hi)
        lo = np.where(left, lo, x1)
        nx1 = hi - GOLDEN * (hi - lo)
        nx2 = lo + GOLDEN * (hi - lo)
        x2n = np.where(left, x1, nx2)
        x1n = np.where(left, nx1, x2)
        f2n = np.where(left, f1, g(nx2))
        f1n = np.where(left, g(nx1), f2)
        x1, x2, f1, f2 = x1n, x2n, f1n, f2n
    mid = 0.5 * (lo + hi)
    fm = g(mid)
    take = fm > best
    return np.where(take, fm, best), np.where(take, mid, best_s)


def psi_dual(psi, grid_n=4096, tol=1e-10):
    """Dual generator ``psi*(t) = max_s ((1-t)(1-s) + t s) / psi(s)``.

    The result is piecewise linear on a uniform grid of ``grid_n`` nodes.

    Raises
    ------
    ValidationError
        If ``psi`` fails the membership check or ``grid_n < 100``.
    """
    if grid_n < 100:
        raise ValidationError("grid_n must be at least 100")
    analysis = psi_analyze(psi)
    if not analysis.is_member:
        raise ValidationError(f"psi is not a valid generator: {analysis.reason}")
    t = np.linspace(0.0, 1.0, grid_n)
    vals, arg = _dual_values(t, psi, tol)
    # psi* is an upper envelope of the lines l_s(t); where the maximizing s
    # jumps between two nodes the envelope has a kink inside the cell
    jump = np.nonzero(np.abs(np.diff(arg)) > KINK_JUMP)[0]
    if jump.size:
        sa, sb = arg[jump], arg[jump + 1]
        pa, pb = psi(sa), psi(sb)
        num = (1.0 - sb) / pb - (1.0 - sa) / pa
        den = (2.0 * sa - 1.0) / pa - (2.0 * sb - 1.0) / pb
        with np.errstate(divide="ignore", invalid="ignore"):
            tc = num / den
        ok = np.isfinite(tc) & (tc > t[jump]) & (tc < t[jump + 1])
        tc = tc[ok]
        if tc.size:
            vc, _ = _dual_values(tc, psi, tol)
            t = np.concatenate([t, tc])
            vals = np.concatenate([vals, vc])
            order = np.argsort(t)
            t, vals = t[order], vals[order]
    return psi_pwl(t, vals)


def _dual_values(t, psi, tol):
    vals = np.empty_like(t)
    arg = np.empty_like(t)
    width = psi.ts.size if psi.family == "pwl" else COARSE_POINTS
    chunk = max(1, 2**22 // width)
    for start in range(0, t.size, chunk):
        sl = slice(start, start + chunk)
        vals[sl], arg[sl] = maximize_linear_over_psi(1.0 - t[sl], t[sl], psi, tol)
    return vals, arg


def write_psi_csv(psi, path, grid_n=4096):
    """Write ``(t, psi(t))`` rows; pwl functions use their own breakpoints."""
    if psi.family == "pwl":
        t, v = psi.ts, psi.vals
    else:
        # 0.5 is the kink of the max family
        t = np.union1d(np.linspace(0.0, 1.0, grid_n), [0.5])
        v = psi(t)
    with open_text(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "psi"])
        for ti, vi in zip(t, v):
            w.writerow([repr(float(ti)), repr(float(vi))])


def read_psi_csv(path):
    """Read a two-column ``(t, psi)`` CSV; a header row is optional."""
    rows = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row:
                continue
            try:
                rows.append((float(row[0]), float(row[1])))
            except ValueError:
                if rows:
                    raise
    arr = np.array(rows, dtype=float)
    return psi_pwl(arr[:, 0], arr[:, 1])
