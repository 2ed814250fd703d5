"""Seeded synthetic curves: random piecewise geodesics, storm-like tracks and
planted reparametrization pairs."""

import numpy as np

from ..homog import PDSM, DiscreteManifoldCurve, Sphere, curve_at
from ..matgroup import sym_exp
from ..register import DpGrid
from ..srvf import Reparametrization, uniform_grid
from .io import Euclidean, EuclideanCurve, latlon_to_unit


def random_point(space, rng, scale=1.0):
    if isinstance(space, Sphere):
        p = rng.normal(size=space.n + 1)
        return p / np.linalg.norm(p)
    if isinstance(space, PDSM):
        a = rng.normal(size=(space.n, space.n))
        s = 0.5 * (a + a.T)
        s -= np.trace(s) / space.n * np.eye(space.n)
        return sym_exp(scale * s)
    return scale * rng.normal(size=space.n)


def _sphere_knots(space, count, rng, step):
    """Random walk of great-circle hops of angle ``step``; avoids antipodes."""
    pts = [random_point(space, rng)]
    for _ in range(count - 1):
        p = pts[-1]
        v = rng.normal(size=p.shape)
        v -= (v @ p) * p
        v /= np.linalg.norm(v)
        ang = step * rng.uniform(0.5, 1.0)
        pts.append(np.cos(ang) * p + np.sin(ang) * v)
    return np.array(pts)


def knot_points(space, count, rng, scale=1.0):
    if isinstance(space, Sphere):
        return _sphere_knots(space, count, rng, step=scale * 1.5)
    return np.array([random_point(space, rng, scale) for _ in range(count)])


def piecewise_curve(space, knots, params, times):
    """Piecewise geodesic through ``knots`` at parameters ``params``, sampled at ``times``."""
    knots = np.asarray(knots, dtype=float)
    params = np.asarray(params, dtype=float)
    times = np.asarray(times, dtype=float)
    seg = np.clip(np.searchsorted(params, times, side="right") - 1, 0, len(params) - 2)
    out = []
    for t, k in zip(times, seg):
        f = (t - params[k]) / (params[k + 1] - params[k])
        if isinstance(space, Euclidean):
            out.append((1.0 - f) * knots[k] + f * knots[k + 1])
        else:
            out.append(space.geodesic(knots[k], knots[k + 1], f))
    return np.array(out)


def _wrap(space, pts):
    if isinstance(space, Euclidean):
        return EuclideanCurve(space, pts)
    return DiscreteManifoldCurve(space, pts)


def random_curve(space, n_intervals, rng, knots=5, scale=1.0):
    """Piecewise geodesic through ``knots`` random points at uniform parameters."""
    kp = knot_points(space, knots, rng, scale)
    params = np.linspace(0.0, 1.0, knots)
    return _wrap(space, piecewise_curve(space, kp, params, uniform_grid(n_intervals)))


def synthetic_track(rng, n_points=100, arcs=3, noise_deg=0.05):
    """Storm-like track on S^2: a few great-circle arcs plus small noise.

    Starts in the tropical Atlantic and recurves north-east.
    """
    sphere = Sphere(2)
    lat0, lon0 = rng.uniform(10.0, 22.0), rng.uniform(-65.0, -40.0)
    heading = np.radians(rng.uniform(260.0, 300.0))
    pts = [latlon_to_unit([lat0], [lon0])[0]]
    for _ in range(arcs):
        p = pts[-1]
        east = np.cross([0.0, 0.0, 1.0], p)
        east /= np.linalg.norm(east)
        north = np.cross(p, east)
        d = np.sin(heading) * east + np.cos(heading) * north
        ang = np.radians(rng.uniform(6.0, 14.0))
        pts.append(np.cos(ang) * p + np.sin(ang) * d)
        heading -= np.radians(rng.uniform(20.0, 50.0))
    params = np.linspace(0.0, 1.0, len(pts))
    samples = piecewise_curve(sphere, np.array(pts), params, uniform_grid(n_points - 1))
    samples = samples + np.radians(noise_deg) * rng.normal(size=samples.shape)
    samples /= np.linalg.norm(samples, axis=1)[:, None]
    return DiscreteManifoldCurve(sphere, samples)


def _reachable(resolution, moves):
    """``ok[i, j]``: (resolution, resolution) is reachable from (i, j)."""
    r = resolution
    ok = np.zeros((r + 1, r + 1), dtype=bool)
    ok[r, r] = True
    for i in range(r, -1, -1):
        for j in range(r, -1, -1):
            if ok[i, j]:
                continue
            ok[i, j] = any(i + a <= r and j + b <= r and ok[i + a, j + b] for a, b in moves)
    return ok


def random_lattice_warp(resolution, rng, max_step=3, straight=0.6):
    """Random admissible lattice path, returned with its node list.

    ``straight`` is the probability of a diagonal (1, 1) move when allowed.
    """
    moves = DpGrid(resolution, max_step).moves
    ok = _reachable(resolution, moves)
    path = [(0, 0)]
    i = j = 0
    while (i, j) != (resolution, resolution):
        legal = [(a, b) for a, b in moves if i + a <= resolution and j + b <= resolution and ok[i + a, j + b]]
        bent = [m for m in legal if m != (1, 1)]
        if (1, 1) in legal and (not bent or rng.random() < straight):
            a, b = 1, 1
        else:
            a, b = bent[rng.integers(len(bent))]
        i, j = i + a, j + b
        path.append((i, j))
    return Reparametrization.from_path(path, resolution), path


def plant_pair(space, n_intervals, rng, knots=5, scale=1.0, max_step=3):
    """Curves ``beta1 = c`` and ``beta2 = c o gamma0`` sampled on a uniform grid.

    ``gamma0`` is a lattice warp at resolution ``n_intervals`` and the knots of
    the piecewise geodesic ``c`` are chosen among the images of the warp's
    nodes, so both samplings describe exactly the same generalized PL curve.

    Returns
    -------
    beta1, beta2, gamma0
    """
    gamma0, path = random_lattice_warp(n_intervals, rng, max_step)
    images = sorted({j for _, j in path} - {0, n_intervals})
    inner = rng.choice(images, size=min(knots - 2, len(images)), replace=False)
    params = np.concatenate([[0.0], np.sort(inner) / n_intervals, [1.0]])
    kp = knot_points(space, len(params), rng, scale)
    t = uniform_grid(n_intervals)
    beta1 = _wrap(space, piecewise_curve(space, kp, params, t))
    beta2 = _wrap(space, piecewise_curve(space, kp, params, gamma0(t)))
    return beta1, beta2, gamma0


def resample_points(beta, times):
    if isinstance(beta, EuclideanCurve):
        return np.array([np.interp(times, uniform_grid(beta.n_intervals), c) for c in beta.points.T]).T
    return curve_at(beta, times)
