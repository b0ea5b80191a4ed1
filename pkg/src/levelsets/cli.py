"""Command-line front end.

Exit codes: 0 when every checked claim holds, 1 when a checked claim
fails, 2 for usage and precondition errors.
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction

import numpy as np

from .absolute_norms import psi_dual, psi_max, psi_one, psi_p, read_psi_csv, write_psi_csv
from .convexity_probe import csc_witness_search, cuc_modulus_estimate, disc_sup
from .errors import DomainError, PreconditionError, ValidationError
from .opnorm import opnorm_general, opnorm_l2
from .pseudospectra import (
    Region,
    flatness_report,
    flat_radius,
    kind_a_part3_factor,
    kind_a_tail_constant,
    kind_b_head_constant,
    kind_b_tail_constant,
    scan_grid,
    write_grid_csv,
)
from .semigroup_ineq import check_kallman_rota, make_case, random_contraction_generator
from .shift_operators import ShiftSpec, default_window, read_matrix_csv, resolvent_matrix
from .vector_norms import Lp, PsiSum, Star, sample_star_sphere, write_vector_csv

__all__ = ["run", "main", "parse_norm", "parse_psi", "default_radius"]

DEFAULT_SEED = 24317


class UsageError(Exception):
    """Bad flag value; reported with exit code 2."""


def parse_norm(text, labels, flag="--norm"):
    """``star``, ``l1``, ``l2``, ``linf`` or ``psi-p:<p>``; the last one is
    ``l2`` on the indices other than 0 psi-summed with ``C`` at index 0."""
    key = text.strip().lower()
    if key == "star":
        return Star()
    if key in ("l1", "l2", "linf"):
        return Lp({"l1": 1.0, "l2": 2.0, "linf": math.inf}[key])
    if key.startswith("psi-p:"):
        try:
            p = float(key.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"{flag}: cannot read p in {text!r}") from None
        if not p >= 1:
            raise UsageError(f"{flag}: p must be at least 1 in {text!r}")
        labels = [int(k) for k in labels]
        if 0 not in labels or len(labels) < 2:
            raise UsageError(f"{flag}: {text!r} needs index 0 and one more index in the window")
        return PsiSum([k for k in labels if k != 0], [0], Lp(2.0), Lp(2.0), psi_p(p))
    raise UsageError(f"{flag}: unknown norm {text!r} (choose star, l1, l2, linf, psi-p:<p>)")


def parse_psi(text):
    """``max``, ``one``, ``p:<p>`` or ``csv:<path>`` (piecewise linear)."""
    key = text.strip()
    if key == "max":
        return psi_max()
    if key == "one":
        return psi_one()
    if key.startswith("p:"):
        try:
            return psi_p(float(key[2:]))
        except ValueError:
            raise UsageError(f"--psi: cannot read p in {text!r}") from None
    if key.startswith("csv:"):
        try:
            return read_psi_csv(key[4:])
        except OSError as exc:
            raise UsageError(f"--psi: {exc}") from None
    raise UsageError(f"--psi: unknown generator {text!r} (choose max, one, p:<p>, csv:<path>)")


def _operator(args):
    if args.kind == "A":
        return ShiftSpec.A(args.delta)
    if args.kind == "B":
        return ShiftSpec.B(args.emm)
    raise UsageError(f"--kind: unknown operator {args.kind!r} (choose A or B)")


def default_radius(spec):
    """``delta`` for kind A. For kind B the largest unit fraction ``1/k``
    strictly inside ``min(1/M, 1/3 - 1/M)`` (``1/13`` when ``M = 4``)."""
    if spec.kind == "A":
        return spec.delta
    r = flat_radius(spec)
    return 1.0 / (math.floor(1.0 / r + 1e-9) + 1)


def _fmt_radius(r):
    if float(f"{r:.4g}") == r:
        return f"{r:g}"
    f = Fraction(r).limit_denominator(1000)
    if f.numerator == 1 and f.denominator > 1 and abs(float(f) - r) <= 1e-12 * r:
        return f"1/{f.denominator}"
    return f"{r:g}"


def _region(args, spec):
    r = default_radius(spec) if args.radius is None else args.radius
    c = complex(args.center_re, args.center_im)
    if args.shape == "disc":
        return Region.disc(r, c)
    return Region.rectangle(c - r - 1j * r, c + r + 1j * r)


def _scan(args, spec, norm_text, radius=None, N=None):
    region = _region(args, spec) if radius is None else Region.disc(radius)
    return scan_grid(
        spec,
        lambda labels: parse_norm(norm_text, labels),
        region,
        resolution=args.resolution,
        N=N or args.N,
        restarts=args.restarts,
        seed=args.seed,
    )


class _Checks:
    """Collects sub-assertions and prints one line per check."""

    def __init__(self, out):
        self.out = out
        self.failed = 0

    def __call__(self, ok, anchor, detail):
        ok = bool(ok)
        self.failed += not ok
        print(f"[{'PASS' if ok else 'FAIL'}] {anchor}: {detail}", file=self.out)
        return ok


def cmd_scan(args, out):
    spec = _operator(args)
    grid = _scan(args, spec, args.norm)
    if args.output:
        write_grid_csv(grid, args.output)
        print(f"wrote {len(grid)} points to {args.output}", file=out)
    else:
        write_grid_csv(grid, out)
    return 0


def cmd_flatness(args, out):
    spec = _operator(args)
    grid = _scan(args, spec, args.norm)
    rep = flatness_report(grid, args.tolerance)
    print(f"operator {spec}, norm {args.norm}, window N = {grid.window}, {len(grid)} points", file=out)
    print(f"max = {rep.max_value:.12g} at lambda = {complex(rep.worst_pair[0]):.6g}", file=out)
    print(f"min = {rep.min_value:.12g} at lambda = {complex(rep.worst_pair[1]):.6g}", file=out)
    print(f"relative variation = {rep.relative_variation:.6g}", file=out)
    print(f"max truncation bound = {grid.trunc_bounds.max():.3g}", file=out)
    print(f"is_flat = {str(rep.is_flat).lower()} (tolerance {rep.tolerance:g})", file=out)
    if args.output:
        write_grid_csv(grid, args.output)
    return 0


def cmd_opnorm(args, out):
    if args.matrix:
        try:
            M = read_matrix_csv(args.matrix)
        except OSError as exc:
            raise UsageError(f"--matrix: {exc}") from None
        trunc = 0.0
        where = f"matrix {args.matrix}"
    else:
        spec = _operator(args)
        lam = complex(args.lam_re, args.lam_im)
        N = args.N or default_window(spec, abs(lam))
        res = resolvent_matrix(spec, lam, N)
        M, trunc = res.matrix, res.truncation_tail
        where = f"resolvent of {spec} at lambda = {lam:.6g}, N = {N}"
    labels = np.arange(M.shape[1]) - M.shape[1] // 2
    in_text = args.in_norm or args.norm
    out_text = args.out_norm or args.norm
    nin = parse_norm(in_text, labels, "--in-norm")
    nout = parse_norm(out_text, np.arange(M.shape[0]) - M.shape[0] // 2, "--out-norm")
    if in_text == out_text == "l2":
        est = opnorm_l2(M, seed=args.seed)
    else:
        est = opnorm_general(M, nin, nout, restarts=args.restarts, seed=args.seed)
    print(where, file=out)
    print(f"norm {in_text} -> {out_text}: {est.value:.12g} ({est.method}, converged = {str(est.converged).lower()})", file=out)
    print(f"truncation bound = {trunc:.3g}", file=out)
    if args.output:
        write_vector_csv(est.witness, args.output)
    return 0


def cmd_dual_psi(args, out):
    psi = parse_psi(args.psi)
    dual = psi_dual(psi, grid_n=args.grid_n)
    write_psi_csv(dual, args.output or out)
    return 0


def cmd_convexity(args, out):
    labels = np.arange(args.window) - args.window // 2
    norm = parse_norm(args.norm, labels)
    w = csc_witness_search(norm, args.window, trials=args.trials, seed=args.seed)
    if w is None:
        print(f"no complex strict convexity witness for {args.norm} in {args.trials} trials", file=out)
    else:
        sup = float(disc_sup(norm, w.x, w.y, labels, 512)) - 1.0
        print(f"witness for {args.norm} (trial {w.trial}):", file=out)
        print(f"  x = {np.array2string(w.x, precision=6)}", file=out)
        print(f"  y = {np.array2string(w.y, precision=6)}  (||y|| = {w.y_norm:.6g})", file=out)
        print(f"  sup over 512 zeta of ||x + zeta y|| - 1 = {sup:.3g}", file=out)
    if args.epsilon is not None:
        d = cuc_modulus_estimate(norm, args.epsilon, args.window, seed=args.seed)
        print(f"uniform convexity modulus estimate at epsilon = {args.epsilon:g}: {d:.6g}", file=out)
    return 0


def cmd_kallman_rota(args, out):
    rng = np.random.default_rng(args.seed)
    checks = _Checks(out)
    worst = 0.0
    for i in range(args.cases):
        case = make_case(random_contraction_generator(args.dim, rng))
        r = check_kallman_rota(case, args.trials, seed=args.seed + i, adjoint=args.adjoint)
        worst = max(worst, r)
    which = "adjoint generators" if args.adjoint else "generators"
    checks(worst <= 4.0, "Kallman-Rota bound with K = 1", f"max ratio {worst:.6f} <= 4 over {args.cases} {which}")
    return 1 if checks.failed else 0


def _sampled_inputs(N, rng, count):
    labels = np.arange(-N, N + 1)
    return sample_star_sphere(labels, count, rng)


def _lams_in_disc(r, count, rng):
    lam = r * np.sqrt(rng.random(count)) * np.exp(2j * np.pi * rng.random(count))
    lam[:4] = r * np.array([1, 1j, -1, -1j])
    return lam


def verify_paper_a(args, out):
    spec = ShiftSpec.A(args.delta)
    d = spec.delta
    N = args.N or default_window(spec, d)
    checks = _Checks(out)
    grid = _scan(args, spec, "star", radius=d, N=N)
    rep = flatness_report(grid, args.tolerance)
    tb = float(grid.trunc_bounds.max())
    lo_ok = grid.norms.min() >= 1 - args.tolerance
    hi_ok = np.all(grid.norms <= 1 + grid.trunc_bounds + args.tolerance)
    checks(
        lo_ok and hi_ok and rep.is_flat,
        "star-norm resolvent constant on the closed disc",
        f"flat at {grid.norms.mean():.3f} over |λ| ≤ {_fmt_radius(d)} "
        f"({len(grid)} points, variation {rep.relative_variation:.2e}, truncation {tb:.1e})",
    )
    checks(
        grid.e0_values.min() >= 1 - 1e-12,
        "lower bound from the e_0 column",
        f"min ||R e_0||* = {grid.e0_values.min():.12f}",
    )
    rng = np.random.default_rng(args.seed)
    X = _sampled_inputs(N, rng, args.samples)
    lams = _lams_in_disc(d, 20, rng)
    worst3, worst4 = 0.0, 0.0
    k = np.arange(-N, N + 1)
    cap = 4.0 / 3.0 * d ** np.abs(k - 1)
    for lam in lams:
        Y = X @ resolvent_matrix(spec, lam, N).matrix.T
        worst3 = max(worst3, float(np.max(np.abs(Y[:, N + 1]) + np.abs(Y[:, N]))))
        worst4 = max(worst4, float(np.max(np.abs(Y) / cap)))
    checks(
        worst3 <= 1 + 1e-12,
        "head coordinates |y_1| + |y_0| <= 1",
        f"max {worst3:.12f} over {args.samples} inputs at 20 points",
    )
    f3 = kind_a_part3_factor(d, d)
    checks(f3 <= 1, "head factor delta(1+|λ|)/(1-|λ|) <= 1", f"{f3:.6f} at |λ| = {_fmt_radius(d)}")
    checks(
        worst4 <= 1 + 1e-12,
        "coefficient decay |y_k| <= (4/3) delta^|k-1|",
        f"max ratio {worst4:.6f}",
    )
    c = kind_a_tail_constant(d)
    checks(c < 1, "tail constant (4δ/3)sqrt((1+δ²)/(1-δ²)) + 1/3 < 1", f"{c:.6f}")
    l2 = _scan(args, spec, "l2", radius=d, N=N)
    rep2 = flatness_report(l2, args.tolerance)
    checks(
        not rep2.is_flat,
        "l2 resolvent norm is not constant on the same disc",
        f"variation {rep2.relative_variation:.3e} > {args.tolerance:g}",
    )
    return 1 if checks.failed else 0


def verify_paper_b(args, out):
    spec = ShiftSpec.B(args.emm)
    M = spec.emm
    r = default_radius(spec) if args.radius is None else args.radius
    N = args.N or default_window(spec, r)
    checks = _Checks(out)
    if not r < flat_radius(spec):
        raise PreconditionError(f"--radius {r:g} must be below min(1/M, 1/3 - 1/M) = {flat_radius(spec):g}")
    grid = _scan(args, spec, "star", radius=r, N=N)
    rep = flatness_report(grid, args.tolerance)
    close = np.all(np.abs(grid.norms - M) <= args.tolerance * M)
    checks(
        close and rep.is_flat,
        "star-norm resolvent constant on the disc",
        f"flat at {grid.norms.mean():.3f} over |λ| ≤ {_fmt_radius(r)} "
        f"({len(grid)} points, variation {rep.relative_variation:.2e})",
    )
    checks(
        grid.e0_values.min() >= M - 1e-9,
        "lower bound from the e_0 column",
        f"min ||R e_0||* = {grid.e0_values.min():.12f} >= M - 1e-9",
    )
    tail, head = kind_b_tail_constant(M, r), kind_b_head_constant(M, r)
    checks(tail < M, "tail bound sqrt(2)(M|λ|+1)/(1-|λ|²) + 1/(1-|λ|) < M", f"{tail:.6f} < {M:g}")
    checks(head <= M, "head factor (1+M|λ|)/(1-|λ|) <= M", f"{head:.6f} <= {M:g}")
    rng = np.random.default_rng(args.seed)
    X = _sampled_inputs(N, rng, args.samples)
    worst = 0.0
    rest = np.ones(2 * N + 1, dtype=bool)
    rest[[N, N + 1]] = False
    for lam in _lams_in_disc(r, 20, rng):
        Y = X @ resolvent_matrix(spec, lam, N).matrix.T
        y0, y1 = np.abs(Y[:, N]), np.abs(Y[:, N + 1])
        h = np.linalg.norm(Y[:, rest], axis=1)
        worst = max(worst, float(np.max(np.maximum(h, y1) + y0)))
    checks(
        worst <= M * (1 + 1e-12),
        "sampled ||y||* <= M on the star unit sphere",
        f"max {worst:.9f} over {args.samples} inputs at 20 points",
    )
    return 1 if checks.failed else 0


def build_parser():
    p = argparse.ArgumentParser(prog="levelsets", description="Resolvent-norm landscapes and norm geometry checks.")
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--output", "-o", default=None, help="CSV output path (standard output if omitted)")

    op = argparse.ArgumentParser(add_help=False)
    op.add_argument("--kind", default="A", help="operator kind: A or B")
    op.add_argument("--delta", type=float, default=0.25)
    op.add_argument("--emm", type=float, default=4.0)
    op.add_argument("--N", type=int, default=None, help="window half-width (40 for kind A; decay based for kind B)")
    op.add_argument("--norm", default="star", help="star | l1 | l2 | linf | psi-p:<p>")
    op.add_argument("--restarts", type=int, default=64)

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--radius", type=float, default=None)
    grid.add_argument("--center-re", type=float, default=0.0)
    grid.add_argument("--center-im", type=float, default=0.0)
    grid.add_argument("--shape", choices=["disc", "rectangle"], default="disc")
    grid.add_argument("--resolution", type=int, default=11)
    grid.add_argument("--tolerance", type=float, default=1e-3)

    sub.add_parser("scan", parents=[common, op, grid], help="grid of resolvent norms to CSV")
    sub.add_parser("flatness", parents=[common, op, grid], help="grid plus flatness report")

    s = sub.add_parser("opnorm", parents=[common, op], help="one operator norm")
    s.add_argument("--lam-re", type=float, default=0.0)
    s.add_argument("--lam-im", type=float, default=0.0)
    s.add_argument("--matrix", default=None, help="dense matrix CSV (row,col,re,im) instead of a resolvent")
    s.add_argument("--in-norm", default=None)
    s.add_argument("--out-norm", default=None)

    s = sub.add_parser("dual-psi", parents=[common], help="tabulate the dual generator")
    s.add_argument("--psi", default="p:2", help="max | one | p:<p> | csv:<path>")
    s.add_argument("--grid-n", type=int, default=4096)

    s = sub.add_parser("convexity", parents=[common], help="complex strict/uniform convexity probes")
    s.add_argument("--norm", default="star")
    s.add_argument("--window", type=int, default=3)
    s.add_argument("--trials", type=int, default=10_000)
    s.add_argument("--epsilon", type=float, default=None)

    s = sub.add_parser("kallman-rota", parents=[common], help="ratio check on contraction generators")
    s.add_argument("--dim", type=int, default=4)
    s.add_argument("--cases", type=int, default=20)
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--adjoint", action="store_true")

    s = sub.add_parser("verify", parents=[common, op, grid], help="claim bundles for the two shift operators")
    s.add_argument("target", choices=["paperA", "paperB"])
    s.add_argument("--samples", type=int, default=1000)
    return p


COMMANDS = {
    "scan": cmd_scan,
    "flatness": cmd_flatness,
    "opnorm": cmd_opnorm,
    "dual-psi": cmd_dual_psi,
    "convexity": cmd_convexity,
    "kallman-rota": cmd_kallman_rota,
}


def run(argv=None, out=None):
    """Run one subcommand and return its exit code."""
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "verify":
            fn = verify_paper_a if args.target == "paperA" else verify_paper_b
            return fn(args, out)
        return COMMANDS[args.command](args, out)
    except (UsageError, PreconditionError, ValidationError, DomainError) as exc:
        print(f"levelsets {args.command}: error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())
