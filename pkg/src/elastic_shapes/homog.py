"""Homogeneous spaces M = G/K: the sphere and unit-determinant SPD matrices.

``Sphere(n)`` realizes S^n as SO(n+1)/SO(n), with SO(n) embedded in the
upper-left block and the projection ``g -> g @ north``.  ``PDSM(n)`` realizes
the positive definite symmetric matrices of determinant one as
SL(n)/SO(n), with the projection ``B -> sqrt(B B^T)``.

Both spaces carry the metric induced by the trace inner product on the Lie
algebra of G.  For the sphere this is sqrt(2) times the round metric.
"""

from dataclasses import dataclass

import numpy as np

from .errors import AntipodalPoints, DimMismatch, NotSPD, SubgroupMismatch
from .matgroup import (
    SpecialLinear,
    SpecialOrthogonal,
    mat_exp,
    skew,
    sl_riemannian_exp,
    sl_riemannian_log,
    spd_power,
    spd_sqrt,
    sym,
)
from .srvf import DiscreteGroupCurve, SrvPair, srvf_forward, uniform_grid

__all__ = [
    "Sphere",
    "PDSM",
    "DiscreteManifoldCurve",
    "HorizontalLift",
    "efficient_rotation",
    "sphere_project",
    "sphere_lift",
    "pdsm_project",
    "pdsm_closest_orbit",
    "pdsm_lift",
    "k_act",
    "lift",
    "curve_at",
    "sl_riemannian_exp",
    "sl_riemannian_log",
]


def _so_basis(n):
    out = []
    for a in range(n):
        for b in range(a + 1, n):
            e = np.zeros((n, n))
            e[b, a] = 1.0 / np.sqrt(2.0)
            e[a, b] = -1.0 / np.sqrt(2.0)
            out.append(e)
    return out


class Sphere:
    """S^n = SO(n+1)/SO(n)."""

    kind = "sphere"

    def __init__(self, n):
        if n < 1:
            raise ValueError("sphere dimension must be >= 1")
        self.n = int(n)
        self.group = SpecialOrthogonal(n + 1)
        self.matrix_size = n + 1
        self.k_size = n
        self.k_dim = n * (n - 1) // 2
        self.north = np.zeros(n + 1)
        self.north[-1] = 1.0

    def __repr__(self):
        return f"Sphere({self.n})"

    def __eq__(self, other):
        return isinstance(other, Sphere) and other.n == self.n

    def __hash__(self):
        return hash(("sphere", self.n))

    # -- points
    def validate_point(self, p, tol=1e-8):
        p = np.asarray(p, dtype=float)
        if p.shape[-1] != self.n + 1:
            raise DimMismatch(f"points on S^{self.n} have {self.n + 1} coordinates")
        err = np.abs(np.linalg.norm(p, axis=-1) - 1.0)
        if np.any(err > tol):
            raise ValueError(f"point off the unit sphere by {err.max():.2e}")
        return p

    def project(self, g):
        return np.asarray(g)[..., :, -1].copy()

    def point_distance(self, p, q):
        """Induced distance: sqrt(2) times the great-circle angle."""
        c = np.dot(p, q)
        return float(np.sqrt(2.0) * np.arctan2(np.linalg.norm(q - c * p), c))

    def geodesic(self, p, q, s):
        """Great-circle interpolation from ``p`` (s = 0) to ``q`` (s = 1)."""
        if s == 0:
            return np.array(p, dtype=float)
        if s == 1:
            return np.array(q, dtype=float)
        c = np.clip(np.dot(p, q), -1.0, 1.0)
        w = q - c * p
        sn = np.linalg.norm(w)
        theta = np.arctan2(sn, c)
        if sn < 1e-15:
            return np.array(p, dtype=float)
        out = np.cos(s * theta) * p + np.sin(s * theta) * w / sn
        return out / np.linalg.norm(out)

    def act(self, g, points):
        return np.asarray(points) @ np.asarray(g).T

    # -- subgroup K and the splitting of the Lie algebra
    def embed_k(self, a):
        a = np.asarray(a, dtype=float)
        out = np.eye(self.n + 1)
        out[: self.n, : self.n] = a
        return out

    def k_rotation(self, theta):
        """Element of a one-dimensional K at angle ``theta`` (vectorized)."""
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(theta.shape + (self.n + 1, self.n + 1))
        c, s = np.cos(theta), np.sin(theta)
        out[..., 0, 0] = c
        out[..., 0, 1] = -s
        out[..., 1, 0] = s
        out[..., 1, 1] = c
        out[..., 2:, 2:] = np.eye(self.n - 1)
        return out

    def in_k(self, y, tol=1e-8):
        y = np.asarray(y, dtype=float)
        if y.shape != (self.n + 1, self.n + 1):
            return False
        e = np.zeros(self.n + 1)
        e[-1] = 1.0
        return (
            np.linalg.norm(y[:, -1] - e) < tol
            and np.linalg.norm(y[-1, :] - e) < tol
            and self.group.contains(y, tol)
        )

    def k_basis(self):
        return [self._pad(e) for e in _so_basis(self.n)]

    def _pad(self, e):
        out = np.zeros((self.n + 1, self.n + 1))
        out[: self.n, : self.n] = e
        return out

    def proj_k(self, v):
        out = skew(np.asarray(v, dtype=float))
        out[..., -1, :] = 0.0
        out[..., :, -1] = 0.0
        return out

    def proj_kperp(self, v):
        v = skew(np.asarray(v, dtype=float))
        return v - self.proj_k(v)

    def lift(self, beta, start=None):
        return sphere_lift(beta, start=start)


class PDSM:
    """Unit-determinant SPD matrices, SL(n)/SO(n)."""

    kind = "pdsm"

    def __init__(self, n):
        if n < 2:
            raise ValueError("PDSM needs n >= 2")
        self.n = int(n)
        self.group = SpecialLinear(n)
        self.matrix_size = n
        self.k_size = n
        self.k_dim = n * (n - 1) // 2

    def __repr__(self):
        return f"PDSM({self.n})"

    def __eq__(self, other):
        return isinstance(other, PDSM) and other.n == self.n

    def __hash__(self):
        return hash(("pdsm", self.n))

    def validate_point(self, p, tol=1e-8):
        p = np.asarray(p, dtype=float)
        if p.shape[-2:] != (self.n, self.n):
            raise DimMismatch(f"expected {self.n}x{self.n} matrices")
        if np.any(np.abs(p - np.swapaxes(p, -1, -2)) > tol):
            raise NotSPD("matrix is not symmetric")
        if np.any(np.linalg.eigvalsh(sym(p))[..., 0] <= 0):
            raise NotSPD("matrix is not positive definite")
        det = np.linalg.det(p)
        if np.any(np.abs(det - 1.0) > tol):
            raise ValueError("determinant is not 1")
        return p

    def project(self, g):
        g = np.asarray(g, dtype=float)
        if g.ndim == 2:
            return pdsm_project(g)
        return np.array([pdsm_project(b) for b in g])

    def geodesic(self, p, q, s):
        """Geodesic of the induced metric: ``sqrt(p (p^{-1} q^2 p^{-1})^s p)``."""
        if s == 0:
            return np.array(p, dtype=float)
        if s == 1:
            return np.array(q, dtype=float)
        pinv = np.linalg.inv(p)
        mid = spd_power(sym(pinv @ q @ q @ pinv), s)
        return spd_sqrt(sym(p @ mid @ p))

    def point_distance(self, p, q):
        """Induced distance between two points (norm of the horizontal increment's log)."""
        inc = pdsm_closest_orbit(np.asarray(p, dtype=float), np.asarray(q, dtype=float))
        s = np.linalg.solve(p, inc)
        return float(np.linalg.norm(self.group.lie_log(sym(s))))

    def act(self, g, points):
        g = np.asarray(g, dtype=float)
        points = np.asarray(points, dtype=float)
        sq = g @ points @ points @ g.T
        if sq.ndim == 2:
            return spd_sqrt(sym(sq))
        return np.array([spd_sqrt(sym(m)) for m in sq])

    def embed_k(self, a):
        return np.asarray(a, dtype=float)

    def k_rotation(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(theta.shape + (self.n, self.n))
        c, s = np.cos(theta), np.sin(theta)
        out[..., 0, 0] = c
        out[..., 0, 1] = -s
        out[..., 1, 0] = s
        out[..., 1, 1] = c
        if self.n > 2:
            out[..., 2:, 2:] = np.eye(self.n - 2)
        return out

    def in_k(self, y, tol=1e-8):
        y = np.asarray(y, dtype=float)
        return y.shape == (self.n, self.n) and SpecialOrthogonal(self.n).contains(y, tol)

    def k_basis(self):
        return _so_basis(self.n)

    def proj_k(self, v):
        return skew(np.asarray(v, dtype=float))

    def proj_kperp(self, v):
        v = sym(np.asarray(v, dtype=float))
        return v - np.trace(v, axis1=-2, axis2=-1)[..., None, None] / self.n * np.eye(self.n)

    def lift(self, beta, start=None):
        return pdsm_lift(beta, start=start)


@dataclass(frozen=True)
class DiscreteManifoldCurve:
    """Samples of a piecewise-geodesic curve on ``space`` at uniform parameters."""

    space: object
    points: np.ndarray

    def __post_init__(self):
        pts = self.space.validate_point(np.asarray(self.points, dtype=float))
        if len(pts) < 2:
            raise DimMismatch("a curve needs at least two samples")
        object.__setattr__(self, "points", pts)

    @property
    def n_intervals(self):
        return len(self.points) - 1

    @property
    def times(self):
        return uniform_grid(self.n_intervals)


@dataclass(frozen=True)
class HorizontalLift:
    """Horizontal generalized PL curve in G over a manifold curve."""

    curve: DiscreteGroupCurve
    base: DiscreteManifoldCurve

    def srv(self):
        return srvf_forward(self.curve)


def curve_at(beta, t):
    """Evaluate the piecewise-geodesic interpolant of ``beta`` at parameters ``t``."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    n = beta.n_intervals
    pos = np.clip(t, 0.0, 1.0) * n
    idx = np.clip(np.floor(pos).astype(int), 0, n - 1)
    frac = pos - idx
    # exact knots stay exact
    at_knot = np.isclose(frac, 0.0, rtol=0, atol=1e-13) | np.isclose(frac, 1.0, rtol=0, atol=1e-13)
    out = []
    for i, f, k in zip(idx, frac, at_knot):
        if k:
            out.append(beta.points[i + int(round(f))].copy())
        else:
            out.append(beta.space.geodesic(beta.points[i], beta.points[i + 1], f))
    return np.array(out)


# --------------------------------------------------------------------------
# sphere


def efficient_rotation(p, q):
    """Rotation closest to the identity that carries unit vector ``p`` to ``q``.

    Composition of the reflection through ``p^perp`` with the reflection
    through the bisector ``(p + q)^perp``.

    Raises
    ------
    AntipodalPoints
        If ``p = -q``; then no unique shortest rotation exists.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape or p.ndim != 1:
        raise DimMismatch("p and q must be vectors of equal length")
    dim = len(p)
    if np.array_equal(p, q):
        return np.eye(dim)
    s = p + q
    ss = float(s @ s)
    if np.sqrt(ss) <= 1e-8:
        raise AntipodalPoints("p = -q: no unique shortest rotation")
    return (np.eye(dim) - (2.0 / ss) * np.outer(s, s)) @ (np.eye(dim) - 2.0 * np.outer(p, p))


def sphere_project(g):
    """Projection SO(n+1) -> S^n, ``g -> g @ north`` (the last column)."""
    return np.asarray(g, dtype=float)[:, -1].copy()


def _sphere_initial(space, b0):
    north = space.north
    if np.linalg.norm(b0 + north) <= 1e-8:
        a0 = np.eye(space.n + 1)
        a0[0, 0] = -1.0
        a0[-1, -1] = -1.0
        return a0
    return efficient_rotation(north, b0)


def sphere_lift(beta, start=None):
    """Discrete horizontal lift of a curve on S^n to SO(n+1).

    ``a_0`` rotates the north pole to ``beta_0`` (or is the given ``start``,
    any element of that fibre); then ``a_{i+1} = R_{beta_i, beta_{i+1}} a_i``.
    """
    space = beta.space
    pts = beta.points
    a = np.empty((len(pts), space.n + 1, space.n + 1))
    if start is None:
        a[0] = _sphere_initial(space, pts[0])
    else:
        a[0] = space.group.validate(start)
        if np.linalg.norm(a[0][:, -1] - pts[0]) > 1e-8:
            raise ValueError("start does not project to the first sample")
    for i in range(len(pts) - 1):
        try:
            r = efficient_rotation(pts[i], pts[i + 1])
        except AntipodalPoints as exc:
            raise AntipodalPoints(
                f"samples {i} and {i + 1} are antipodal; refine the sampling"
            ) from exc
        a[i + 1] = r @ a[i]
    return HorizontalLift(DiscreteGroupCurve(space.group, a), beta)


# --------------------------------------------------------------------------
# PDSM


def pdsm_project(b):
    """Polar factor ``sqrt(B B^T)`` of ``B`` in SL(n)."""
    b = np.asarray(b, dtype=float)
    return spd_sqrt(sym(b @ b.T))


def pdsm_closest_orbit(b1, b2):
    """Element of the orbit ``b2 SO(n)`` closest to ``b1``: ``b1 sqrt(c c^T)``, ``c = b1^{-1} b2``."""
    c = np.linalg.solve(b1, b2)
    return b1 @ spd_sqrt(sym(c @ c.T))


def pdsm_lift(beta, start=None):
    """Discrete horizontal lift of a PDSM curve to SL(n).

    ``a_0 = beta_0`` (or ``start`` in its fibre), then each ``a_{i+1}`` is the
    element of ``beta_{i+1} SO(n)`` closest to ``a_i``.
    """
    space = beta.space
    pts = beta.points
    a = np.empty_like(pts)
    if start is None:
        a[0] = pts[0]
    else:
        a[0] = space.group.validate(start)
        if np.linalg.norm(pdsm_project(a[0]) - pts[0]) > 1e-8:
            raise ValueError("start does not project to the first sample")
    for i in range(len(pts) - 1):
        a[i + 1] = pdsm_closest_orbit(a[i], pts[i + 1])
    return HorizontalLift(DiscreteGroupCurve(space.group, a), beta)


def lift(beta, start=None):
    return beta.space.lift(beta, start=start)


def k_act(pair, y, space):
    """Right action of K on transforms: ``(a0, q) * y = (a0 y, y^{-1} q y)``."""
    y = np.asarray(y, dtype=float)
    if not space.in_k(y, tol=1e-8):
        raise SubgroupMismatch(f"element is not in the isotropy subgroup of {space}")
    return SrvPair(pair.group, pair.start @ y, pair.q.conjugate(y))


def random_k(space, rng, scale=np.pi):
    """Random element of K (exp of a random algebra element)."""
    basis = space.k_basis()
    if not basis:
        return np.eye(space.matrix_size)
    v = sum(c * e for c, e in zip(rng.normal(size=len(basis)), basis))
    v *= scale * rng.uniform() / max(np.linalg.norm(v), 1e-300)
    return mat_exp(v)
