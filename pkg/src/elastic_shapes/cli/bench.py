"""Timing harness: mean seconds per unparametrized matching problem.

Each cell times ``problems`` random boundary-value problems between pairs of
piecewise-geodesic curves with 5 random knots.  Problems are seeded from
``(seed, config, size, index)`` so every cell is reproducible on its own.
"""

import csv
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..register import AlignOptions, align
from .euclidean import flat_align
from .generate import random_curve
from .io import parse_space

CONFIGS = {
    "R2": ("r:2", None),
    "H2-eval": ("h2", "eval"),
    "H2-grad": ("h2", "grad"),
    "S2-eval": ("s2", "eval"),
    "S2-grad": ("s2", "grad"),
    "PDSM3": ("pdsm:3", "grad"),
}
SIZES = (100, 300, 500)
DEFAULT_PROBLEMS = 1225


@dataclass(frozen=True)
class BenchCell:
    config: str
    points: int
    problems: int
    mean_seconds: float


def make_problem(config, points, index, seed):
    space = parse_space(CONFIGS[config][0])
    key = [seed, list(CONFIGS).index(config), points, index]
    rng = np.random.default_rng(key)
    return random_curve(space, points - 1, rng), random_curve(space, points - 1, rng)


def solve(config, beta1, beta2):
    kopt = CONFIGS[config][1]
    if kopt is None:
        return flat_align(beta1, beta2).distance
    return align(beta1, beta2, "shape", AlignOptions(kopt=kopt)).distance


def _time_one(args):
    config, points, index, seed = args
    beta1, beta2 = make_problem(config, points, index, seed)
    t0 = time.perf_counter()
    solve(config, beta1, beta2)
    return time.perf_counter() - t0


def run_cell(config, points, problems=DEFAULT_PROBLEMS, seed=0, jobs=1):
    tasks = [(config, points, k, seed) for k in range(problems)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            times = list(pool.map(_time_one, tasks, chunksize=4))
    else:
        times = [_time_one(t) for t in tasks]
    return BenchCell(config, points, problems, float(np.mean(times)))


def run_bench(configs=None, sizes=SIZES, problems=DEFAULT_PROBLEMS, seed=0, jobs=1, progress=None):
    cells = []
    for config in configs or list(CONFIGS):
        if config not in CONFIGS:
            raise ValueError(f"unknown bench configuration {config!r}; choose from {list(CONFIGS)}")
        for points in sizes:
            cell = run_cell(config, points, problems, seed, jobs)
            cells.append(cell)
            if progress:
                progress(cell)
    return cells


def write_csv(cells, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["config", "points", "problems", "mean_seconds"])
    for c in cells:
        w.writerow([c.config, c.points, c.problems, repr(c.mean_seconds)])
