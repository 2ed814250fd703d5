"""Random instances shared by the test modules."""

import numpy as np

from elastic_shapes.homog import PDSM, DiscreteManifoldCurve, Sphere, lift
from elastic_shapes.matgroup import SpecialLinear, SpecialOrthogonal, mat_exp, sl_riemannian_exp, sym_exp
from elastic_shapes.register import alignment_cost
from elastic_shapes.srvf import DiscreteGroupCurve, SrvPair, StepMap


def random_skew(rng, n, norm=None):
    a = rng.normal(size=(n, n))
    v = 0.5 * (a - a.T)
    if norm is not None:
        v *= norm / np.linalg.norm(v)
    return v


def random_sym_traceless(rng, n, norm=None):
    a = rng.normal(size=(n, n))
    s = 0.5 * (a + a.T)
    s -= np.trace(s) / n * np.eye(n)
    if norm is not None:
        s *= norm / np.linalg.norm(s)
    return s


def random_sl_algebra(rng, n, norm=None):
    a = rng.normal(size=(n, n))
    a -= np.trace(a) / n * np.eye(n)
    if norm is not None:
        a *= norm / np.linalg.norm(a)
    return a


def random_rotation(rng, n):
    return mat_exp(random_skew(rng, n, norm=rng.uniform(0.0, 2.0)))


def random_sl(rng, n, scale=0.5):
    return sl_riemannian_exp(random_sl_algebra(rng, n, norm=scale * rng.uniform(0.2, 1.0)))


def random_spd(rng, n, scale=0.7):
    return sym_exp(random_sym_traceless(rng, n, norm=scale * rng.uniform(0.1, 1.0)))


def group_of(kind, n):
    return SpecialOrthogonal(n) if kind == "SO" else SpecialLinear(n)


def random_element(rng, group):
    if group.kind == "SO":
        return random_rotation(rng, group.n)
    return random_sl(rng, group.n)


def random_algebra(rng, group, norm=None):
    if group.kind == "SO":
        return random_skew(rng, group.n, norm)
    return random_sl_algebra(rng, group.n, norm)


def random_step_map(rng, group, n_steps, scale=1.0):
    vals = np.array([random_algebra(rng, group, scale * rng.uniform(0.1, 1.0)) for _ in range(n_steps)])
    return StepMap.uniform(vals)


def random_pair(rng, group, n_steps, scale=1.0):
    return SrvPair(group, random_element(rng, group), random_step_map(rng, group, n_steps, scale))


def random_group_curve(rng, group, n_intervals, step=0.3):
    a = [random_element(rng, group)]
    for _ in range(n_intervals):
        a.append(a[-1] @ mat_exp(random_algebra(rng, group, step * rng.uniform(0.1, 1.0))))
    return DiscreteGroupCurve(group, np.array(a))


def random_sphere_curve(rng, n, n_intervals, step=0.2):
    space = Sphere(n)
    p = rng.normal(size=n + 1)
    pts = [p / np.linalg.norm(p)]
    for _ in range(n_intervals):
        v = rng.normal(size=n + 1)
        v -= (v @ pts[-1]) * pts[-1]
        v *= step * rng.uniform(0.2, 1.0) / np.linalg.norm(v)
        th = np.linalg.norm(v)
        q = np.cos(th) * pts[-1] + np.sin(th) * v / th
        pts.append(q / np.linalg.norm(q))
    return DiscreteManifoldCurve(space, np.array(pts))


def random_pdsm_curve(rng, n, n_intervals, step=0.2):
    space = PDSM(n)
    pts = [random_spd(rng, n)]
    for _ in range(n_intervals):
        p = pts[-1]
        r = np.linalg.cholesky(p)
        s = sym_exp(random_sym_traceless(rng, n, step * rng.uniform(0.2, 1.0)))
        q = r @ s @ r.T
        q = 0.5 * (q + q.T)
        q /= np.linalg.det(q) ** (1.0 / n)
        pts.append(q)
    return DiscreteManifoldCurve(space, np.array(pts))


def random_manifold_curve(rng, space, n_intervals, step=0.2):
    if isinstance(space, Sphere):
        return random_sphere_curve(rng, space.n, n_intervals, step)
    return random_pdsm_curve(rng, space.n, n_intervals, step)


def lattice_paths(r, moves):
    """Every admissible lattice path from (0, 0) to (r, r), as node lists."""
    out = []

    def walk(path):
        i, j = path[-1]
        if (i, j) == (r, r):
            out.append(list(path))
            return
        for a, b in moves:
            if i + a <= r and j + b <= r:
                path.append((i + a, j + b))
                walk(path)
                path.pop()

    walk([(0, 0)])
    return out


def segment_matching_cost(q1, q2, node0, node1, r):
    """``int ||q1 - sqrt(m) q2(gamma)||^2`` over one straight lattice segment.

    The integrand is constant between consecutive breakpoints of ``q1`` and
    preimages of breakpoints of ``q2``, so a midpoint rule on those pieces is
    exact.
    """
    (i0, j0), (i1, j1) = node0, node1
    t0, t1 = i0 / r, i1 / r
    s0, s1 = j0 / r, j1 / r
    m = (s1 - s0) / (t1 - t0)
    cuts = {t0, t1}
    cuts.update(b for b in q1.breaks if t0 < b < t1)
    cuts.update(t0 + (b - s0) / m for b in q2.breaks if s0 < b < s1)
    cuts = sorted(cuts)
    total = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b - a <= 0:
            continue
        mid = 0.5 * (a + b)
        d = q1(mid) - np.sqrt(m) * q2(s0 + m * (mid - t0))
        total += (b - a) * float(np.sum(d * d))
    return total


def brute_force_warp(q1, q2, r, moves):
    """Minimum squared matching cost over every lattice path, and the
    lexicographically smallest optimal path (ties within 1e-12 relative)."""
    cache = {}

    def seg(a, b):
        if (a, b) not in cache:
            cache[(a, b)] = segment_matching_cost(q1, q2, a, b, r)
        return cache[(a, b)]

    scored = []
    for path in lattice_paths(r, moves):
        scored.append((sum(seg(a, b) for a, b in zip(path[:-1], path[1:])), path))
    best = min(c for c, _ in scored)
    tol = 1e-12 * max(1.0, best)
    return best, min(p for c, p in scored if c <= best + tol)


# -- alignment instances


def random_alignment_instance(rng, space, n=8, start_scale=1.0):
    p1 = lift(random_manifold_curve(rng, space, n)).srv()
    p2 = lift(random_manifold_curve(rng, space, n + 3)).srv()
    if space.kind == "pdsm":
        g2 = p1.start @ random_sl(rng, space.n, scale=0.5 * start_scale)
    else:
        g2 = p1.start @ mat_exp(start_scale * rng.uniform(0.1, 1.0) * _unit_skew(rng, space.matrix_size))
    return p1.start, g2, p1.q, p2.q


def _unit_skew(rng, n):
    a = rng.normal(size=(n, n))
    a = a - a.T
    return a / np.linalg.norm(a)


def alignment_fd_gradient(space, g1, g2, q1, q2, delta=1e-6):
    out = []
    for e in space.k_basis():
        fp = alignment_cost(mat_exp(delta * e), g1, g2, q1, q2, space)
        fm = alignment_cost(mat_exp(-delta * e), g1, g2, q1, q2, space)
        out.append((fp - fm) / (2 * delta))
    return np.array(out)


def k_coords(space, v):
    return np.array([np.sum(v * e) for e in space.k_basis()])
