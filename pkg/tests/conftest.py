"""Shared fixtures: solved example problems (cached per session) and helpers."""

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from layerscat.cli import _PRESETS, build_problem, config_from_dict
from layerscat.nystrom import Grid, solve

GOLDEN_CSV = Path(__file__).parent / "data" / "green_golden.csv"


@pytest.fixture(scope="session")
def solved():
    """solved(preset, N, **overrides) -> (config, problem, solution), memoized."""
    cache = {}

    def get(preset, N, **overrides):
        key = (preset, N, tuple(sorted(overrides.items())))
        if key not in cache:
            raw = dict(_PRESETS[preset])
            raw.update(overrides)
            raw["N"] = N
            cfg = config_from_dict(raw)
            problem = build_problem(cfg)
            grid = Grid(half_width_A=cfg.A, N=cfg.N)
            cache[key] = (cfg, problem, solve(problem, grid))
        return cache[key]

    return get


def nystrom_interpolate(problem, sol, s_points):
    """Natural Nystrom interpolation of the solved density at off-node points:
    psi(s) = rhs(s) + sum_j alpha_j(s) psi_j."""
    from layerscat.bie import kernel_rows, rhs_vector
    from layerscat.nystrom import log_weight

    s = np.asarray(s_points, dtype=float)
    t = sol.grid.nodes
    A, B = kernel_rows(problem, s, t)
    rw = log_weight(sol.grid.N, s[:, None], t[None, :])
    alpha = rw * A + sol.grid.h * B
    return np.asarray(rhs_vector(problem, s), dtype=complex) + alpha @ sol.values
