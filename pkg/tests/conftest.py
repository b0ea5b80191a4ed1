"""Shared benchmark grids. They are slow, so each is built once per session."""

import time

import pytest

from levelsets.pseudospectra import Region, scan_grid
from levelsets.shift_operators import ShiftSpec
from levelsets.vector_norms import Lp, Star


def _timed_scan(*args, **kwargs):
    t0 = time.perf_counter()
    grid = scan_grid(*args, **kwargs)
    return grid, time.perf_counter() - t0


@pytest.fixture(scope="session")
def a_star_grid():
    """Kind A (delta = 0.25), star norm, N = 40, 121 points on |lambda| <= 0.25."""
    return _timed_scan(ShiftSpec.A(0.25), Star(), Region.disc(0.25), 11, N=40)


@pytest.fixture(scope="session")
def b_star_grid():
    """Kind B (M = 4), star norm, 121 points on |lambda| <= 1/13."""
    return _timed_scan(ShiftSpec.B(4.0), Star(), Region.disc(1 / 13), 11)


@pytest.fixture(scope="session")
def a_l2_grids():
    """Kind A under l2 on |lambda| <= 0.25 for the windows N = 40 and N = 80."""
    spec = ShiftSpec.A(0.25)
    return {N: scan_grid(spec, Lp(2), Region.disc(0.25), 11, N=N) for N in (40, 80)}


ACCEPTANCE_LINES = {}


@pytest.fixture
def record():
    """Store the one-line verdict of an acceptance criterion."""

    def _record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})"
        ACCEPTANCE_LINES[number] = line
        print(line)
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
