"""Classical square-root velocity baseline for curves in R^n.

Curves are polygonal; their transforms ``q = b' / sqrt(|b'|)`` are step maps
with vector values, so the same dynamic program applies unchanged.
"""

from dataclasses import dataclass

import numpy as np

from ..register import DpGrid, dp_reparametrize
from ..srvf import Reparametrization, StepMap, combine, gamma_act, l2_distance, uniform_grid
from .io import EuclideanCurve


def flat_srvf(points):
    """Transform of the polygon through ``points`` sampled at uniform parameters."""
    points = np.asarray(points, dtype=float)
    n = len(points) - 1
    v = n * np.diff(points, axis=0)
    speed = np.linalg.norm(v, axis=1)
    q = np.zeros_like(v)
    moving = speed > 1e-14
    q[moving] = v[moving] / np.sqrt(speed[moving])[:, None]
    return StepMap(uniform_grid(n), q)


def flat_inverse(start, q, times):
    """Integrate ``q |q|`` from ``start``; exact at any parameters for step maps."""
    vel = q.values * np.linalg.norm(q.values, axis=1)[:, None]
    knots = np.vstack([start, start + np.cumsum(q.widths[:, None] * vel, axis=0)])
    times = np.asarray(times, dtype=float)
    idx = np.clip(np.searchsorted(q.breaks, times, side="right") - 1, 0, q.n_steps - 1)
    return knots[idx] + (times - q.breaks[idx])[:, None] * vel[idx]


@dataclass
class FlatAlignment:
    distance: float
    gamma: object
    q1: StepMap
    q2: StepMap
    start1: np.ndarray
    start2: np.ndarray
    translation_invariant: bool

    def geodesic(self, s, times):
        """Curve at ``s`` on the straight line between the aligned transforms."""
        q = combine(self.q1, self.q2, 1.0 - s, s)
        start = self.start1 if self.translation_invariant else (1.0 - s) * self.start1 + s * self.start2
        return flat_inverse(start, q, times)


def flat_align(beta1, beta2, dp_resolution=None, translation_invariant=False, reparametrize=True, max_step=3):
    """Elastic alignment of two polygons in R^n.

    The distance is ``sqrt(|b1(0) - b2(0)|^2 + ||q1 - q2 * gamma||^2)``; with
    ``translation_invariant`` the start-point term is dropped.
    """
    p1 = beta1.points if isinstance(beta1, EuclideanCurve) else np.asarray(beta1, dtype=float)
    p2 = beta2.points if isinstance(beta2, EuclideanCurve) else np.asarray(beta2, dtype=float)
    q1 = flat_srvf(p1)
    q2 = flat_srvf(p2)
    if reparametrize:
        grid = DpGrid(dp_resolution or max(q1.n_steps, q2.n_steps), max_step)
        gamma, _ = dp_reparametrize(q1, q2, grid)
    else:
        gamma = Reparametrization.identity()
    q2g = gamma_act(q2, gamma)
    dq = l2_distance(q1, q2g)
    dstart = 0.0 if translation_invariant else float(np.linalg.norm(p1[0] - p2[0]))
    return FlatAlignment(
        distance=float(np.hypot(dstart, dq)),
        gamma=gamma,
        q1=q1,
        q2=q2g,
        start1=p1[0].copy(),
        start2=p2[0].copy(),
        translation_invariant=translation_invariant,
    )


def flat_sweep(beta1, beta2, frames=10, **kwargs):
    """Frames ``0..S`` of the flat geodesic, sampled at the parameters of ``beta1``."""
    res = flat_align(beta1, beta2, **kwargs)
    p1 = beta1.points if isinstance(beta1, EuclideanCurve) else np.asarray(beta1, dtype=float)
    times = uniform_grid(len(p1) - 1)
    out = [p1.copy()]
    out += [res.geodesic(j / frames, times) for j in range(1, frames + 1)]
    return out, res
