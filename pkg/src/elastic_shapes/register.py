"""Alignment over the isotropy group K and over reparametrizations.

The central quantity is, for transforms ``(g1, q1)`` and ``(g2, q2)`` of two
horizontal lifts,

    cost(y) = d_G(g1, g2 y)^2 + ||q1 - y^{-1} q2 y||^2,     y in K,

minimized either by Riemannian gradient descent on K or, when K is a circle,
by a dense scan followed by a bounded scalar refinement.  Reparametrizations
act on ``q2`` only and are found by dynamic programming over a lattice of
piecewise-linear warps.  The two searches alternate until the objective stops
decreasing.
"""

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import AmbiguousLog, NoConvergence, NotOneDimensional, SingularJacobian
from .homog import k_act, lift
from .matgroup import (
    SpecialLinear,
    mat_exp,
    sl_log_reverse,
    sl_riemannian_log,
    sl_riemannian_log_many,
    so_distance_identity,
    so_log,
)
from .srvf import (
    Reparametrization,
    SrvPair,
    gamma_act,
    l2_distance,
    overlay,
    srvf_forward,
)

QUOTIENTS = ("param", "shape", "mod-g", "shape-mod-g")


# --------------------------------------------------------------------------
# the cost over K


def alignment_cost(y, g1, g2, q1, q2, space):
    """``d_G(g1, g2 y)^2 + ||q1 - y^{-1} q2 y||^2`` evaluated directly."""
    dg = space.group.distance(g1, g2 @ y)
    dq = l2_distance(q1, q2.conjugate(y))
    return dg**2 + dq**2


def alignment_cost_gradient(g1, g2, q1, q2, space):
    """Gradient over K of :func:`alignment_cost` at the identity.

    ``-2 Proj_k( Log(g2^{-1} g1) + int (q2^T q1 - q1 q2^T) dt )`` where Log is
    the Riemannian inverse exponential at the identity of G.
    """
    group = space.group
    log_term = group.log(group.inv(g2) @ g1)
    breaks, v1, v2 = overlay(q1, q2)
    w = np.diff(breaks)
    v2t = np.swapaxes(v2, -1, -2)
    integrand = v2t @ v1 - v1 @ v2t
    cross = np.einsum("k,kab->ab", w, integrand)
    return -2.0 * space.proj_k(log_term + cross)


class _StartTerm:
    """``d_G(g1, g2 y)^2`` and ``Log((g2 y)^{-1} g1)`` with caching."""

    def __init__(self, group, g1, g2):
        self.group = group
        self.g1 = g1
        self.g2 = g2
        self.sl = isinstance(group, SpecialLinear)
        if self.sl:
            self.c = np.linalg.solve(g1, g2)
        else:
            self.h = g2.T @ g1
        self._cache = {}

    def _sl_solve(self, y):
        # Always start from sqrt(B B^T), which is the same for every y (the
        # orbit B SO(n) does not depend on y).  Warm starts from a previous
        # solution can land on a different geodesic branch and make the cost
        # discontinuous in y.
        key = y.tobytes()
        hit = self._cache.get(key)
        if hit is None:
            hit = sl_riemannian_log(self.c @ y)
            if len(self._cache) > 64:
                self._cache.clear()
            self._cache[key] = hit
        return hit

    def sq(self, y):
        if self.sl:
            return float(np.sum(self._sl_solve(y) ** 2))
        return so_distance_identity(y.T @ self.h) ** 2

    def sq_many(self, ys):
        if not self.sl and self.h.shape == (3, 3):
            r = np.swapaxes(ys, -1, -2) @ self.h
            w = 0.5 * np.stack(
                [r[:, 2, 1] - r[:, 1, 2], r[:, 0, 2] - r[:, 2, 0], r[:, 1, 0] - r[:, 0, 1]], axis=1
            )
            c = 0.5 * (np.trace(r, axis1=1, axis2=2) - 1.0)
            return 2.0 * np.arctan2(np.linalg.norm(w, axis=1), c) ** 2
        if self.sl:
            xs = sl_riemannian_log_many(self.c @ ys)
            return np.sum(xs**2, axis=(1, 2))
        return np.array([self.sq(y) for y in ys])

    def log(self, y):
        """``Log((g2 y)^{-1} g1)``."""
        if self.sl:
            return sl_log_reverse(self._sl_solve(y))
        return so_log(y.T @ self.h)


class _Objective:
    """Fast evaluator of the K cost for fixed transforms."""

    def __init__(self, space, g1, q1, g2, q2, use_start=True):
        self.space = space
        breaks, v1, v2 = overlay(q1, q2)
        w = np.diff(breaks)
        self.tensor = np.einsum("k,kab,kcd->abcd", w, v1, v2)
        self.norms = float(np.sum(w * np.sum(v1**2, axis=(1, 2))) + np.sum(w * np.sum(v2**2, axis=(1, 2))))
        self.start = _StartTerm(space.group, g1, g2) if use_start else None

    def q_term(self, y):
        cross = np.einsum("abef,...ea,...fb->...", self.tensor, y, y)
        return self.norms - 2.0 * cross

    def value(self, y):
        out = self.q_term(y)
        if self.start is not None:
            out = out + self.start.sq(y)
        return float(out)

    def values(self, ys):
        out = self.q_term(ys)
        if self.start is not None:
            out = out + self.start.sq_many(ys)
        return out

    def gradient(self, y):
        """Gradient at the identity of ``y' -> cost(y y')``."""
        t = self.tensor
        term1 = np.einsum("cbef,ec,fa->ab", t, y, y)
        term2 = np.einsum("acef,eb,fc->ab", t, y, y)
        total = term1 - term2
        if self.start is not None:
            total = total + self.start.log(y)
        return -2.0 * self.space.proj_k(total)


@dataclass
class KSearchResult:
    y: np.ndarray
    value: float
    iterations: int
    converged: bool


def _reorthonormalize(y):
    u, _, vt = np.linalg.svd(y)
    return u @ vt


def _descend(obj, y0, step=0.1, grad_tol=1e-8, max_iter=200):
    y = np.array(y0, dtype=float)
    value = obj.value(y)
    eps0 = eps_last = step
    g_prev = None
    for it in range(max_iter):
        try:
            g = obj.gradient(y)
        except AmbiguousLog:
            # cut locus of the start term: nudge and retry
            basis = obj.space.k_basis()
            y = y @ mat_exp(1e-6 * basis[0])
            value = obj.value(y)
            g_prev = None
            continue
        gnorm = float(np.linalg.norm(g))
        if gnorm < grad_tol:
            return KSearchResult(y, value, it, True)
        if g_prev is not None:
            # Barzilai-Borwein guess for the first trial step
            curv = float(np.sum(g_prev * (g_prev - g)))
            if curv > 0:
                eps0 = min(eps_last * float(np.sum(g_prev * g_prev)) / curv, 1e3 * step)
        eps = eps0
        for _ in range(60):
            y_new = _reorthonormalize(y @ mat_exp(-eps * g))
            v_new = obj.value(y_new)
            if v_new <= value - 1e-4 * eps * gnorm**2:
                break
            eps *= 0.5
        else:
            # no decrease at working precision: stationary up to rounding
            return KSearchResult(y, value, it, gnorm < math.sqrt(grad_tol))
        y, value = y_new, v_new
        g_prev, eps_last = g, eps
        eps0 = 2.0 * eps
    return KSearchResult(y, value, max_iter, False)


def k_gradient_descent(g1, g2, q1, q2, space, y0=None, step=0.1, grad_tol=1e-8, max_iter=200, use_start=True):
    """Riemannian gradient descent for the K cost.

    Each iteration recomputes the gradient at the shifted orbit point and
    updates ``y <- y exp(-eps grad)``; ``eps`` comes from an Armijo
    backtracking search started at ``step`` and, afterwards, at a
    Barzilai-Borwein estimate from the last two gradients.  Returns the best iterate; ``converged`` is False if
    the iteration cap was hit.
    """
    obj = _Objective(space, g1, q1, g2, q2, use_start=use_start)
    y0 = np.eye(space.matrix_size) if y0 is None else np.asarray(y0, dtype=float)
    return _descend(obj, y0, step, grad_tol, max_iter)


def _scan(obj, steps, refine):
    space = obj.space
    theta = 2.0 * np.pi * np.arange(steps) / steps
    ys = space.k_rotation(theta)
    vals = obj.values(ys)
    best = int(np.argmin(vals))
    th, val = theta[best], float(vals[best])
    if refine:
        h = 2.0 * np.pi / steps
        res = minimize_scalar(
            lambda a: obj.value(space.k_rotation(a)),
            bounds=(th - h, th + h),
            method="bounded",
            options={"xatol": 1e-11},
        )
        if res.fun < val:
            th, val = float(res.x), float(res.fun)
    return KSearchResult(space.k_rotation(th), val, steps, True)


def k_exhaustive(g1, g2, q1, q2, space, steps=360, refine=False, use_start=True):
    """Minimize the K cost over ``steps`` equally spaced angles of a circle K.

    With ``refine`` the best grid angle is polished by a bounded scalar
    search on the neighbouring grid cells.
    """
    if space.k_dim != 1:
        raise NotOneDimensional(f"K has dimension {space.k_dim}")
    obj = _Objective(space, g1, q1, g2, q2, use_start=use_start)
    return _scan(obj, steps, refine)


# --------------------------------------------------------------------------
# dynamic programming over reparametrizations


@dataclass(frozen=True)
class DpGrid:
    """Lattice for the reparametrization search.

    Nodes sit at ``(i / resolution, j / resolution)``.  Admissible moves are
    ``(di, dj)`` with ``1 <= di, dj <= max_step`` and ``gcd(di, dj) = 1``;
    non-coprime moves duplicate a chain of shorter ones.
    """

    resolution: int
    max_step: int = 3

    def __post_init__(self):
        if self.resolution < 2:
            raise ValueError("DP resolution must be >= 2")
        if self.max_step < 1:
            raise ValueError("max_step must be >= 1")

    @property
    def moves(self):
        return [
            (a, b)
            for a in range(1, self.max_step + 1)
            for b in range(1, self.max_step + 1)
            if math.gcd(a, b) == 1
        ]


def _inner_breaks(breaks, lo, hi):
    """Padded array of breaks strictly inside each ``(lo, hi)``, relative to ``lo``."""
    first = np.searchsorted(breaks, lo, side="right")
    last = np.searchsorted(breaks, hi, side="left")
    count = last - first
    width = int(count.max()) if len(count) else 0
    if width == 0:
        return np.zeros((len(lo), 0))
    idx = first[:, None] + np.arange(width)
    valid = idx < last[:, None]
    vals = breaks[np.clip(idx, 0, len(breaks) - 1)] - lo[:, None]
    return np.where(valid, vals, (hi - lo)[:, None])


def _cumulative(q):
    sq = q.widths * np.sum(q.values.reshape(q.n_steps, -1) ** 2, axis=1)
    return np.concatenate([[0.0], np.cumsum(sq)])


class _SegmentGeometry:
    """Pieces of every lattice segment with one move, independent of ``y``.

    For segment ``(i, j)`` the interval ``[i/R, (i + di)/R]`` is cut at the
    breaks of ``q1`` and at the pulled-back breaks of ``q2``; ``widths`` and
    ``index`` (flat position in the Gram matrix of step values) describe the
    resulting pieces.
    """

    def __init__(self, q1, q2, resolution, move):
        r = resolution
        di, dj = move
        m = dj / di
        i = np.arange(r - di + 1)
        j = np.arange(r - dj + 1)
        t0, t1 = i / r, (i + di) / r
        s0, s1 = j / r, (j + dj) / r
        c1 = _cumulative(q1)
        c2 = _cumulative(q2)
        e1 = np.interp(t1, q1.breaks, c1) - np.interp(t0, q1.breaks, c1)
        e2 = np.interp(s1, q2.breaks, c2) - np.interp(s0, q2.breaks, c2)
        self.energy = e1[:, None] + e2[None, :]
        self.weight = 2.0 * math.sqrt(m)

        p1 = _inner_breaks(q1.breaks, t0, t1)
        p2 = _inner_breaks(q2.breaks, s0, s1) / m
        span = di / r
        ni, nj = len(i), len(j)
        parts = [
            np.zeros((ni, nj, 1)),
            np.broadcast_to(p1[:, None, :], (ni, nj, p1.shape[1])),
            np.broadcast_to(p2[None, :, :], (ni, nj, p2.shape[1])),
            np.full((ni, nj, 1), span),
        ]
        rel = np.minimum(np.sort(np.concatenate(parts, axis=2), axis=2), span)
        self.widths = np.diff(rel, axis=2)
        mid = 0.5 * (rel[:, :, 1:] + rel[:, :, :-1])
        # piece of q1 (q2) containing each midpoint: first piece after the
        # segment start plus the number of inner breaks already passed
        first1 = np.searchsorted(q1.breaks, t0, side="right") - 1
        first2 = np.searchsorted(q2.breaks, s0, side="right") - 1
        a = first1[:, None, None] + np.sum(p1[:, None, None, :] < mid[..., None], axis=-1)
        b = first2[None, :, None] + np.sum(p2[None, :, None, :] < mid[..., None], axis=-1)
        a = np.clip(a, 0, q1.n_steps - 1)
        b = np.clip(b, 0, q2.n_steps - 1)
        self.index = a * q2.n_steps + b

    def costs(self, gram):
        cross = np.sum(self.widths * gram.ravel()[self.index], axis=2)
        return self.energy - self.weight * cross


def segment_costs(q1, q2, resolution, move):
    """Exact squared matching cost of every lattice segment with a given move.

    Entry ``[i, j]`` is ``int ||q1(t) - sqrt(m) q2(j/R + m (t - i/R))||^2 dt``
    over ``t in [i/R, (i + di)/R]`` with slope ``m = dj / di``.
    """
    return _SegmentGeometry(q1, q2, resolution, move).costs(_gram(q1, q2))


def _gram(q1, q2, y=None):
    v2 = q2.values if y is None else np.swapaxes(y, -1, -2) @ q2.values @ y
    return q1.values.reshape(q1.n_steps, -1) @ v2.reshape(q2.n_steps, -1).T


class DpProblem:
    """Dynamic program for a fixed pair of step maps, reusable across ``y``."""

    def __init__(self, q1, q2, grid):
        self.q1 = q1
        self.q2 = q2
        self.grid = grid
        self.moves = sorted(grid.moves)
        self.geometry = {mv: _SegmentGeometry(q1, q2, grid.resolution, mv) for mv in self.moves}

    def solve(self, y=None, tie_tol=1e-12):
        """``(gamma, cost)``; see :func:`dp_reparametrize`."""
        gram = _gram(self.q1, self.q2, None if y is None else np.asarray(y, dtype=float))
        costs = {mv: g.costs(gram) for mv, g in self.geometry.items()}
        gamma = _shortest_path(costs, self.moves, self.grid.resolution, tie_tol)
        q2 = self.q2 if y is None else self.q2.conjugate(np.asarray(y, dtype=float))
        return gamma, l2_distance(self.q1, gamma_act(q2, gamma))


def _shortest_path(costs, moves, r, tie_tol):
    togo = np.full((r + 1, r + 1), np.inf)
    togo[r, r] = 0.0
    for i in range(r - 1, -1, -1):
        row = togo[i]
        for di, dj in moves:
            if i + di > r:
                continue
            cand = costs[(di, dj)][i] + togo[i + di, dj:]
            np.minimum(row[: r - dj + 1], cand, out=row[: r - dj + 1])
    path = [(0, 0)]
    i = j = 0
    while (i, j) != (r, r):
        options = []
        for di, dj in moves:
            if i + di <= r and j + dj <= r:
                options.append((costs[(di, dj)][i, j] + togo[i + di, j + dj], (i + di, j + dj)))
        best = min(c for c, _ in options)
        tol = tie_tol * max(1.0, abs(best))
        nxt = min(node for c, node in options if c <= best + tol)
        path.append(nxt)
        i, j = nxt
    return Reparametrization.from_path(path, r)


def dp_reparametrize(q1, q2, grid, y=None, tie_tol=1e-12):
    """Optimal lattice reparametrization of ``q2`` towards ``q1``.

    Minimizes ``||q1 - y^{-1} (q2 * gamma) y||`` over piecewise-linear
    ``gamma`` whose graph follows admissible lattice moves from (0, 0) to
    (1, 1).  Among (near-)optimal paths the lexicographically smallest node
    sequence is returned.

    Returns
    -------
    gamma : Reparametrization
    cost : float
        The L2 distance ``||q1 - y^{-1} (q2 * gamma) y||``, recomputed
        directly from the warped step map.
    """
    return DpProblem(q1, q2, grid).solve(y, tie_tol)


# --------------------------------------------------------------------------
# alternation


@dataclass
class AlignOptions:
    """Knobs for :func:`align`.

    ``kopt`` is ``"eval"`` (dense scan, circle K only), ``"grad"`` (gradient
    descent) or ``"auto"`` (scan when K is a circle).  ``dp_resolution``
    defaults to the larger sample count of the two curves.  ``k_starts`` is
    the number of angles tried as starting rotations when K is a circle
    (0 or 1 disables the multi-start); larger K use the rotations that
    permute coordinate axes.
    """

    dp_resolution: int = None
    max_step: int = 3
    kopt: str = "auto"
    k_steps: int = 360
    refine: bool = True
    grad_step: float = 0.1
    grad_tol: float = 1e-8
    grad_max_iter: int = 200
    obj_tol: float = 1e-8
    max_outer: int = 50
    symmetric: bool = False
    k_starts: int = 12


@dataclass
class AlignmentResult:
    """Optimal ``y`` in K and warp ``gamma`` (applied to the second curve)."""

    y_opt: np.ndarray
    gamma_opt: Reparametrization
    distance: float
    iterations: int
    converged: bool
    quotient: str
    space: object
    pair1: SrvPair
    pair2: SrvPair
    history: list = field(default_factory=list)
    asymmetry: float = None

    @property
    def uses_start(self):
        return self.quotient in ("param", "shape")

    def aligned_pair2(self):
        """``(g2 y, y^{-1} (q2 * gamma) y)``; start replaced by ``g1`` when G is modded out."""
        q = gamma_act(self.pair2.q, self.gamma_opt).conjugate(self.y_opt)
        start = self.pair2.start @ self.y_opt if self.uses_start else self.pair1.start
        return SrvPair(self.pair2.group, start, q)


def _k_search(obj, y, opts):
    space = obj.space
    if space.k_dim == 0:
        return KSearchResult(np.eye(space.matrix_size), obj.value(np.eye(space.matrix_size)), 0, True)
    kopt = opts.kopt
    if kopt == "auto":
        kopt = "eval" if space.k_dim == 1 else "grad"
    if kopt == "eval":
        if space.k_dim != 1:
            raise NotOneDimensional(f"K has dimension {space.k_dim}; use the gradient method")
        return _scan(obj, opts.k_steps, opts.refine)
    if kopt == "grad":
        return _descend(obj, y, opts.grad_step, opts.grad_tol, opts.grad_max_iter)
    raise ValueError(f"unknown K optimizer {opts.kopt!r}")


def _final_distance(space, p1, p2, y, gamma, use_start):
    q2 = gamma_act(p2.q, gamma).conjugate(y)
    dq = l2_distance(p1.q, q2)
    if not use_start:
        return dq
    return float(np.hypot(space.group.distance(p1.start, p2.start @ y), dq))


def _start_rotations(space, count):
    """Candidate starting points in K for the alternation."""
    n = space.matrix_size
    if count <= 1 or space.k_dim == 0:
        return np.eye(n)[None]
    if space.k_dim == 1:
        return space.k_rotation(2.0 * np.pi * np.arange(count) / count)
    m = space.k_size
    if m > 3:
        return np.eye(n)[None]
    out = []
    for perm in itertools.permutations(range(m)):
        for signs in itertools.product((1.0, -1.0), repeat=m):
            a = np.zeros((m, m))
            a[np.arange(m), perm] = signs
            if np.linalg.det(a) > 0:
                out.append(space.embed_k(a))
    out.sort(key=lambda y: -np.trace(y))
    return np.array(out)


def _start_sq_or_inf(term, y):
    # far-away candidates can defeat the inverse exponential; they are skipped
    try:
        return term.sq(y)
    except (NoConvergence, SingularJacobian):
        return np.inf


def _best_start(obj, dp, space, opts, extra):
    """Pair ``(y, gamma)`` minimizing the cost over the candidate rotations
    and ``extra``, with gamma the optimal warp for each."""
    ys = np.concatenate([_start_rotations(space, opts.k_starts), np.asarray(extra)[None]])
    if obj.start is None:
        start = np.zeros(len(ys))
    else:
        try:
            start = obj.start.sq_many(ys)
        except (NoConvergence, SingularJacobian):
            start = np.array([_start_sq_or_inf(obj.start, y) for y in ys])
    best = None
    for y, sq in zip(ys, start):
        if not np.isfinite(sq):
            continue
        gamma, cost = dp.solve(y)
        val = sq + cost**2
        if best is None or val < best[0]:
            best = (val, y, gamma)
    return best


def _alternate(space, p1, p2, quotient, opts):
    use_start = quotient in ("param", "shape")
    use_gamma = quotient in ("shape", "shape-mod-g")
    n = space.matrix_size
    y = np.eye(n)
    gamma = Reparametrization.identity()
    q2g = p2.q
    res_dp = opts.dp_resolution or max(p1.q.n_steps, p2.q.n_steps)
    dp = DpProblem(p1.q, p2.q, DpGrid(res_dp, opts.max_step)) if use_gamma else None

    def objective(y, q2g):
        return _Objective(space, p1.start, p1.q, p2.start, q2g, use_start)

    obj = objective(y, q2g)
    current = obj.value(y)
    history = [math.sqrt(max(current, 0.0))]
    if use_gamma and opts.k_starts > 1 and space.k_dim > 0:
        # the alternation is a coordinate descent; seed it with the best warp
        # over a coarse set of rotations to avoid poor local minima
        # the best rotation for the unwarped curves is a candidate too, so the
        # seed is never worse than the first plain iteration
        _, y_s, gamma_s = _best_start(obj, dp, space, opts, _k_search(obj, y, opts).y)
        q2g_s = gamma_act(p2.q, gamma_s)
        obj_s = objective(y_s, q2g_s)
        val = obj_s.value(y_s)
        if val <= current:
            y, gamma, q2g, obj, current = y_s, gamma_s, q2g_s, obj_s, val
    converged = False
    k_ok = True
    it = 0
    for it in range(1, opts.max_outer + 1):
        ks = _k_search(obj, y, opts)
        k_ok = ks.converged
        if ks.value <= current:
            y, current = ks.y, ks.value
        if use_gamma:
            gamma_new, _ = dp.solve(y)
            q2g_new = gamma_act(p2.q, gamma_new)
            obj_new = objective(y, q2g_new)
            val = obj_new.value(y)
            if val <= current + 1e-14:
                gamma, q2g, obj, current = gamma_new, q2g_new, obj_new, val
        history.append(math.sqrt(max(current, 0.0)))
        if history[-2] - history[-1] < opts.obj_tol or not use_gamma:
            converged = True
            break
    distance = _final_distance(space, p1, p2, y, gamma, use_start)
    return AlignmentResult(
        y_opt=y,
        gamma_opt=gamma,
        distance=distance,
        iterations=it,
        converged=converged and k_ok,
        quotient=quotient,
        space=space,
        pair1=p1,
        pair2=p2,
        history=history,
    )


def _flip(result, p1, p2):
    """Express a reversed-role result in forward roles."""
    y = result.y_opt.T
    gamma = result.gamma_opt.inverse()
    return AlignmentResult(
        y_opt=y,
        gamma_opt=gamma,
        distance=_final_distance(result.space, p1, p2, y, gamma, result.uses_start),
        iterations=result.iterations,
        converged=result.converged,
        quotient=result.quotient,
        space=result.space,
        pair1=p1,
        pair2=p2,
        history=result.history,
    )


def align_pairs(space, p1, p2, quotient="shape", options=None):
    """Align two transforms of horizontal lifts (see :func:`align`)."""
    if quotient not in QUOTIENTS:
        raise ValueError(f"quotient must be one of {QUOTIENTS}")
    opts = options or AlignOptions()
    fwd = _alternate(space, p1, p2, quotient, opts)
    if not opts.symmetric:
        return fwd
    rev = _flip(_alternate(space, p2, p1, quotient, opts), p1, p2)
    best = rev if rev.distance < fwd.distance else fwd
    best.asymmetry = abs(fwd.distance - rev.distance)
    return best


def align(beta1, beta2, quotient="shape", options=None):
    """Lift two manifold curves and align them.

    ``quotient`` selects the distance:

    * ``"param"`` -- parametrized curves, optimize over K only;
    * ``"shape"`` -- unparametrized curves, alternate K and reparametrization;
    * ``"mod-g"`` / ``"shape-mod-g"`` -- as above with the start-point term
      dropped (curves also identified under the left G action).

    The objective sequence in ``history`` is non-increasing.
    """
    if beta1.space != beta2.space:
        raise ValueError("curves live on different spaces")
    space = beta1.space
    p1 = lift(beta1).srv()
    p2 = lift(beta2).srv()
    return align_pairs(space, p1, p2, quotient, options)


def ac_manifold_distance(beta1, beta2, options=None):
    """Distance between parametrized manifold curves, minimized over K from both sides."""
    opts = options or AlignOptions()
    opts = AlignOptions(**{**opts.__dict__, "symmetric": True})
    return align(beta1, beta2, "param", opts).distance


def shape_distance(beta1, beta2, options=None):
    """Distance between unparametrized manifold curves (single-warp approximation)."""
    return align(beta1, beta2, "shape", options).distance


def mod_G_distance(beta1, beta2, options=None):
    """Parametrized distance modulo the left G action: ``inf_y ||q1 - y^{-1} q2 y||``."""
    opts = options or AlignOptions()
    opts = AlignOptions(**{**opts.__dict__, "symmetric": True})
    return align(beta1, beta2, "mod-g", opts).distance


def shape_mod_G_distance(beta1, beta2, options=None):
    """Unparametrized distance modulo G: ``inf_{y, gamma} ||q1 - y^{-1}(q2 * gamma) y||``."""
    return align(beta1, beta2, "shape-mod-g", options).distance


def shape_distance_group(alpha1, alpha2, grid=None):
    """Unparametrized distance between group-valued curves (warp only, no K)."""
    p1 = srvf_forward(alpha1)
    p2 = srvf_forward(alpha2)
    grid = grid or DpGrid(max(p1.q.n_steps, p2.q.n_steps))
    _, cost = dp_reparametrize(p1.q, p2.q, grid)
    dg = p1.group.distance(p1.start, p2.start)
    return float(np.hypot(dg, cost))


__all__ = [
    "AlignOptions",
    "AlignmentResult",
    "DpGrid",
    "DpProblem",
    "KSearchResult",
    "ac_manifold_distance",
    "align",
    "align_pairs",
    "alignment_cost",
    "alignment_cost_gradient",
    "dp_reparametrize",
    "k_act",
    "k_exhaustive",
    "k_gradient_descent",
    "mod_G_distance",
    "segment_costs",
    "shape_distance",
    "shape_distance_group",
    "shape_mod_G_distance",
]
