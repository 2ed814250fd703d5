"""Geodesic paths between aligned curves, projected back to the manifold."""

from dataclasses import dataclass

import numpy as np

from .homog import DiscreteManifoldCurve, curve_at
from .register import align
from .srvf import ac_distance, product_geodesic, srvf_inverse, uniform_grid


@dataclass
class GeodesicSweep:
    """Frames ``0..S`` of a geodesic between two curves.

    ``frames[0]`` is the first input; ``frames[-1]`` is the second input after
    alignment (reparametrized, and moved by G when G is modded out).
    """

    frames: list
    endpoints: tuple
    length: float
    alignment: object

    @property
    def n_frames(self):
        return len(self.frames)


def resample_curve(beta, n_intervals):
    """Sample the piecewise-geodesic interpolant of ``beta`` at ``n_intervals + 1`` uniform parameters."""
    if n_intervals < 1:
        raise ValueError("need at least one interval")
    if n_intervals == beta.n_intervals:
        return DiscreteManifoldCurve(beta.space, beta.points.copy())
    return DiscreteManifoldCurve(beta.space, curve_at(beta, uniform_grid(n_intervals)))


def _frame(space, pair, times):
    alpha = srvf_inverse(pair, times=times)
    pts = space.project(alpha.samples)
    # remove rounding drift so frames validate as manifold points
    if space.kind == "sphere":
        pts = pts / np.linalg.norm(pts, axis=1)[:, None]
    else:
        pts = 0.5 * (pts + np.swapaxes(pts, -1, -2))
        det = np.linalg.det(pts)
        pts = pts / np.abs(det)[:, None, None] ** (1.0 / space.n)
    return DiscreteManifoldCurve(space, pts)


def sweep_pairs(result, frames):
    """SRV pairs at ``s = j / frames`` along the product geodesic of an alignment."""
    p1 = result.pair1
    p2 = result.aligned_pair2()
    return [product_geodesic(p1, p2, j / frames) for j in range(frames + 1)]


def path_length(pairs):
    """Discrete length ``sum_j d(pair_j, pair_{j+1})`` of a sequence of SRV pairs."""
    return float(sum(ac_distance(a, b) for a, b in zip(pairs[:-1], pairs[1:])))


def geodesic_sweep(beta1, beta2, frames=10, quotient="shape", options=None):
    """Align two curves and sample the connecting geodesic.

    Each frame is obtained by interpolating the SRV pairs on the product
    geodesic, integrating back to G at the sample parameters of ``beta1``,
    and projecting to the manifold.

    Parameters
    ----------
    beta1, beta2 : DiscreteManifoldCurve
    frames : int
        Number of geodesic steps S; S + 1 curves are returned.
    quotient : str
        Passed to :func:`align`.
    """
    if frames < 1:
        raise ValueError("frames must be >= 1")
    result = align(beta1, beta2, quotient, options)
    space = beta1.space
    times = beta1.times
    pairs = sweep_pairs(result, frames)
    out = [DiscreteManifoldCurve(space, beta1.points.copy())]
    for pair in pairs[1:]:
        out.append(_frame(space, pair, times))
    return GeodesicSweep(frames=out, endpoints=(beta1, beta2), length=result.distance, alignment=result)


__all__ = ["GeodesicSweep", "geodesic_sweep", "path_length", "resample_curve", "sweep_pairs"]
