"""Matrix Lie group primitives for SO(n) and SL(n).

All group elements and algebra vectors are plain ``(n, n)`` float arrays.
The inner product on every Lie algebra is the trace form
``<u, v> = tr(u v^T)``, i.e. the Frobenius inner product.  On SO(n) it is
bi-invariant, so Riemannian and Lie-group exponentials coincide.  On SL(n)
it is left invariant and right SO(n) invariant; the Riemannian exponential
then has the closed form ``exp(v^T) exp(v - v^T)`` and its inverse is
computed iteratively (:func:`sl_riemannian_log`).
"""

import numpy as np
import scipy.linalg

from .errors import (
    AmbiguousLog,
    DimMismatch,
    NoConvergence,
    NotInGroup,
    NotSPD,
    SingularJacobian,
)

TOL_GROUP = 1e-8
TOL_ALG = 1e-8
# SO(n) inputs drifting less than this are re-orthonormalized instead of rejected
REORTHO_LIMIT = 1e-6
# rotation angles this close to pi have no unique principal logarithm
PI_TOL = 1e-8


def _as_square(a):
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimMismatch(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def sym(a):
    return 0.5 * (a + np.swapaxes(a, -1, -2))


def skew(a):
    return 0.5 * (a - np.swapaxes(a, -1, -2))


def mat_exp(v):
    """Matrix exponential (scaling and squaring with Pade approximants)."""
    return scipy.linalg.expm(_as_square(v))


def frob_inner(u, v):
    """Trace inner product ``tr(u v^T)``."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise DimMismatch(f"shapes {u.shape} and {v.shape} differ")
    return float(np.sum(u * v))


def ad_transpose_apply(q2, q1):
    """Return ``q2^T q1 - q1 q2^T``.

    This is the adjoint of ``v -> [q2, v]`` under the trace inner product
    applied to ``q1``, i.e. ``<result, v> = <q1, [q2, v]>`` for all ``v``.
    """
    q1 = np.asarray(q1, dtype=float)
    q2 = np.asarray(q2, dtype=float)
    if q1.shape != q2.shape:
        raise DimMismatch(f"shapes {q1.shape} and {q2.shape} differ")
    return np.swapaxes(q2, -1, -2) @ q1 - q1 @ np.swapaxes(q2, -1, -2)


# --------------------------------------------------------------------------
# symmetric positive definite helpers


def _spd_eigh(p):
    p = _as_square(p)
    if not np.allclose(p, p.T, rtol=0.0, atol=1e-10 * max(1.0, np.abs(p).max())):
        raise NotSPD("matrix is not symmetric")
    w, v = np.linalg.eigh(sym(p))
    if w[0] <= 0.0:
        raise NotSPD(f"smallest eigenvalue {w[0]:.3e} is not positive")
    return w, v


def spd_sqrt(p):
    """Unique symmetric positive definite square root."""
    w, v = _spd_eigh(p)
    return sym((v * np.sqrt(w)) @ v.T)


def spd_log(p):
    """Symmetric logarithm of an SPD matrix."""
    w, v = _spd_eigh(p)
    return sym((v * np.log(w)) @ v.T)


def spd_power(p, s):
    """``p**s`` for SPD ``p`` and real ``s``."""
    w, v = _spd_eigh(p)
    return sym((v * w**s) @ v.T)


def sym_exp(s):
    """Exponential of a symmetric matrix via its eigendecomposition."""
    s = _as_square(s)
    w, v = np.linalg.eigh(sym(s))
    return sym((v * np.exp(w)) @ v.T)


# --------------------------------------------------------------------------
# logarithms


def _logm(a):
    w, v = np.linalg.eig(a)
    if np.any((np.abs(w.imag) <= 1e-12 * np.abs(w)) & (w.real <= 0.0)):
        raise ValueError("matrix has eigenvalues on the closed negative real axis")
    try:
        vinv = np.linalg.inv(v)
    except np.linalg.LinAlgError:
        vinv = None
    # Frobenius norms bound the 2-norm condition number from above
    if vinv is not None and np.linalg.norm(v) * np.linalg.norm(vinv) < 1e6:
        return np.ascontiguousarray(((v * np.log(w)) @ vinv).real)
    return np.real(scipy.linalg.logm(a))


def real_logm(a):
    """Principal real logarithm of a matrix with no eigenvalues on (-inf, 0].

    Uses an eigendecomposition, falling back to :func:`scipy.linalg.logm`
    when the eigenvector basis is badly conditioned.
    """
    return _logm(_as_square(a))


def _so2_log(r, tol):
    theta = np.arctan2(r[1, 0] - r[0, 1], r[0, 0] + r[1, 1])
    if np.pi - abs(theta) < tol:
        raise AmbiguousLog("rotation angle is pi; both logarithm branches have equal norm")
    return np.array([[0.0, -theta], [theta, 0.0]])


def _so3_angle(r):
    """Rotation angle in [0, pi] and the (unnormalized) axis vector sin(angle)*axis."""
    w = 0.5 * np.array([r[2, 1] - r[1, 2], r[0, 2] - r[2, 0], r[1, 0] - r[0, 1]])
    c = 0.5 * (np.trace(r) - 1.0)
    s = np.linalg.norm(w)
    return np.arctan2(s, c), w, s


def _so3_log(r, tol):
    theta, w, s = _so3_angle(r)
    if np.pi - theta < 1e-3:
        return _so_log_schur(r, tol)
    if s < 1e-8:
        factor = 1.0 + theta**2 / 6.0
    else:
        factor = theta / s
    wx, wy, wz = factor * w
    return np.array([[0.0, -wz, wy], [wz, 0.0, -wx], [-wy, wx, 0.0]])


def _so_log_schur(r, tol):
    t, z = scipy.linalg.schur(r, output="real")
    n = r.shape[0]
    lt = np.zeros_like(t)
    i = 0
    while i < n:
        if i + 1 < n and abs(t[i + 1, i]) > 1e-14:
            theta = np.arctan2(t[i + 1, i] - t[i, i + 1], t[i, i] + t[i + 1, i + 1])
            if np.pi - abs(theta) < tol:
                raise AmbiguousLog("a rotation angle equals pi")
            lt[i, i + 1] = -theta
            lt[i + 1, i] = theta
            i += 2
        else:
            if t[i, i] < 0.0:
                raise AmbiguousLog("a rotation angle equals pi")
            i += 1
    return skew(z @ lt @ z.T)


def so_log(r, tol=PI_TOL):
    """Principal (smallest Frobenius norm) logarithm of a rotation.

    Raises
    ------
    AmbiguousLog
        If some rotation angle is within ``tol`` of pi, where the two
        candidate branches have equal norm.
    """
    r = _as_square(r)
    n = r.shape[0]
    if n == 1:
        return np.zeros((1, 1))
    if n == 2:
        return _so2_log(r, tol)
    if n == 3:
        return _so3_log(r, tol)
    return _so_log_schur(r, tol)


def so_distance_identity(r):
    """``||log r||_F`` without choosing a branch; well defined at angle pi."""
    r = _as_square(r)
    n = r.shape[0]
    if n == 1:
        return 0.0
    if n == 2:
        return np.sqrt(2.0) * abs(np.arctan2(r[1, 0] - r[0, 1], r[0, 0] + r[1, 1]))
    if n == 3:
        return np.sqrt(2.0) * _so3_angle(r)[0]
    ang = np.angle(np.linalg.eigvals(r))
    return float(np.sqrt(np.sum(ang**2)))


# --------------------------------------------------------------------------
# SL(n) Riemannian exponential and its inverse


def sl_riemannian_exp(v):
    """Riemannian exponential at the identity of SL(n): ``exp(v^T) exp(v - v^T)``."""
    v = _as_square(v)
    return mat_exp(v.T) @ mat_exp(v - v.T)


def _so_basis(n):
    basis = []
    for a in range(n):
        for b in range(a + 1, n):
            e = np.zeros((n, n))
            e[b, a] = 1.0 / np.sqrt(2.0)
            e[a, b] = -1.0 / np.sqrt(2.0)
            basis.append(e)
    return basis


def _so_coords(v, basis):
    return np.array([np.sum(v * e) for e in basis])


def _orbit_map(z):
    # z exp(log(z^T) - log(z)); log(z^T) = log(z)^T
    lz = _logm(z)
    return z @ scipy.linalg.expm(lz.T - lz)


def _logm_many(a):
    """Eigendecomposition-based logarithm over a stack.

    Returns ``(logs, ok)``; entries with an eigenvalue on the closed negative
    real axis are flagged in ``ok`` and left undefined.
    """
    w, v = np.linalg.eig(a)
    ok = ~np.any((np.abs(w.imag) <= 1e-12 * np.abs(w)) & (w.real <= 0.0), axis=1)
    try:
        vinv = np.linalg.inv(v)
        good = ok & (np.linalg.norm(v, axis=(1, 2)) * np.linalg.norm(vinv, axis=(1, 2)) < 1e6)
    except np.linalg.LinAlgError:
        good = np.zeros(len(a), dtype=bool)
    out = np.zeros(a.shape)
    if np.any(good):
        out[good] = ((v[good] * np.log(w[good])[:, None, :]) @ vinv[good]).real
    for k in np.flatnonzero(ok & ~good):
        out[k] = _logm(a[k])
    return out, ok


def _orbit_map_many(zs):
    """:func:`_orbit_map` over a stack; undefined entries are flagged."""
    lz, ok = _logm_many(zs)
    return zs @ scipy.linalg.expm(np.swapaxes(lz, 1, 2) - lz), ok


def _residual_many(zs, bs):
    fz, ok = _orbit_map_many(zs)
    lv, ok2 = _logm_many(np.linalg.solve(fz, bs))
    return fz, skew(lv), ok & ok2


def sl_riemannian_log_many(bs, tol=1e-10, max_iter=50, fd_step=1e-6):
    """:func:`sl_riemannian_log` for a stack of matrices, iterated in lockstep.

    Entries that do not converge in the batch are retried one at a time with
    the restarting scalar solver.
    """
    bs = np.asarray(bs, dtype=float)
    n = bs.shape[-1]
    basis = np.array(_so_basis(n)).reshape(-1, n, n)
    dim = len(basis)
    steps = scipy.linalg.expm(np.concatenate([fd_step * basis, -fd_step * basis]))
    w, v = np.linalg.eigh(sym(bs @ np.swapaxes(bs, 1, 2)))
    z = (v * np.sqrt(w)[:, None, :]) @ np.swapaxes(v, 1, 2)
    fz, res_v, ok = _residual_many(z, bs)
    res = np.linalg.norm(res_v, axis=(1, 2))
    failed = ~ok
    eye = np.eye(n)
    for _ in range(max_iter):
        idx = np.flatnonzero((res >= tol) & ~failed)
        if len(idx) == 0:
            break
        zi = z[idx]
        fp, okp = _orbit_map_many((zi[:, None] @ steps[None]).reshape(-1, n, n))
        fp = fp.reshape(len(idx), 2, dim, n, n)
        d = skew(np.linalg.solve(fz[idx][:, None], fp[:, 0] - fp[:, 1])) / (2.0 * fd_step)
        jac = np.einsum("kcab,jab->kjc", d, basis)
        rhs = np.einsum("kab,jab->kj", res_v[idx], basis)
        bad = ~okp.reshape(len(idx), 2 * dim).all(axis=1) | (np.linalg.cond(jac) > 1e12)
        failed[idx[bad]] = True
        idx, zi, jac, rhs = idx[~bad], zi[~bad], jac[~bad], rhs[~bad]
        if len(idx) == 0:
            continue
        x = np.einsum("kj,jab->kab", np.linalg.solve(jac, rhs[..., None])[..., 0], basis)
        eps = np.ones(len(idx))
        pending = np.arange(len(idx))
        while len(pending) and eps[pending[0]] > 1e-10:
            z_new = zi[pending] @ scipy.linalg.expm(eps[pending, None, None] * x[pending])
            fz_new, v_new, ok_new = _residual_many(z_new, bs[idx[pending]])
            r_new = np.linalg.norm(v_new, axis=(1, 2))
            acc = ok_new & (r_new < (1.0 - 1e-4 * eps[pending]) * res[idx[pending]])
            tgt = idx[pending[acc]]
            z[tgt], fz[tgt], res_v[tgt], res[tgt] = z_new[acc], fz_new[acc], v_new[acc], r_new[acc]
            pending = pending[~acc]
            eps[pending] *= 0.5
        failed[idx[pending]] = True
    out = np.empty_like(bs)
    conv = (res < tol) & ~failed
    if np.any(conv):
        lz, _ = _logm_many(z[conv])
        lz = np.swapaxes(lz, 1, 2)
        out[conv] = lz - (np.trace(lz, axis1=1, axis2=2) / n)[:, None, None] * eye
    for k in np.flatnonzero(~conv):
        out[k] = sl_riemannian_log(bs[k], tol=tol, fd_step=fd_step)
    return out


def _residual(z, b):
    """``log(F(z)^{-1} b)`` projected to so(n), or None if undefined."""
    try:
        fz = _orbit_map(z)
        return skew(_logm(np.linalg.solve(fz, b))), fz
    except (ValueError, np.linalg.LinAlgError):
        return None, None


def sl_riemannian_log(
    b,
    tol=1e-10,
    max_iter=200,
    fd_step=1e-6,
    z0=None,
    max_restarts=5,
    seed=0,
    full_output=False,
):
    """Inverse of :func:`sl_riemannian_exp`, computed by a Newton-type iteration.

    The iteration searches the orbit ``b SO(n)`` for ``z`` with
    ``z exp(log(z^T) - log(z)) = b``; the answer is then ``log(z^T)``.  The
    differential of that map is approximated by central finite differences
    over an orthonormal basis of so(n), and each step is damped by a
    backtracking line search on the residual norm.

    Parameters
    ----------
    b : ndarray, shape (n, n)
        Element of SL(n).
    tol : float
        Stop once the residual ``||log(F(z)^{-1} b)||`` drops below this.
    max_iter : int
        Iteration cap (per restart).
    fd_step : float
        Finite-difference step for the differential.
    z0 : ndarray, optional
        Warm start; must lie in ``b SO(n)``.  Defaults to ``sqrt(b b^T)``.
    max_restarts : int
        Restarts from a randomly perturbed ``z`` when the differential is
        singular or the line search stalls.
    full_output : bool
        If True, also return ``(iterations, z)``.

    Raises
    ------
    SingularJacobian
        The differential stayed singular across all restarts.
    NoConvergence
        The residual did not reach ``tol``.
    """
    b = _as_square(b)
    n = b.shape[0]
    basis = _so_basis(n)
    basis_arr = np.array(basis).reshape(-1, n, n)
    steps = scipy.linalg.expm(np.concatenate([fd_step * basis_arr, -fd_step * basis_arr])) if basis else None
    rng = np.random.default_rng(seed)
    z = spd_sqrt(sym(b @ b.T)) if z0 is None else _as_square(z0)
    total_iter = 0
    best = None
    singular = False
    for attempt in range(max_restarts + 1):
        v, fz = _residual(z, b)
        if v is None:
            z = spd_sqrt(sym(b @ b.T))
            v, fz = _residual(z, b)
        # the residual is undefined when F(z)^{-1} b is a half-turn; nudge z
        while v is None:
            z = z @ mat_exp(_random_so(rng, basis, 0.1))
            v, fz = _residual(z, b)
        res = np.linalg.norm(v)
        for _ in range(max_iter):
            if best is None or res < best[0]:
                best = (res, z)
            if res < tol:
                break
            if not basis:
                break
            fpm, _ = _orbit_map_many(z @ steps)
            fp, fm = fpm[: len(basis)], fpm[len(basis) :]
            d = skew(np.linalg.solve(fz, fp - fm)) / (2.0 * fd_step)
            jac = np.einsum("kab,jab->jk", d, basis_arr)
            if np.linalg.cond(jac) > 1e12:
                singular = True
                break
            x_coords = np.linalg.solve(jac, _so_coords(v, basis))
            x = sum(c * e for c, e in zip(x_coords, basis))
            eps = 1.0
            accepted = False
            while eps > 1e-10:
                z_new = z @ scipy.linalg.expm(eps * x)
                v_new, fz_new = _residual(z_new, b)
                if v_new is not None:
                    res_new = np.linalg.norm(v_new)
                    if res_new < (1.0 - 1e-4 * eps) * res:
                        accepted = True
                        break
                eps *= 0.5
            total_iter += 1
            if not accepted:
                break
            z, v, fz, res = z_new, v_new, fz_new, res_new
        if res < tol:
            out = real_logm(z).T
            out -= np.trace(out) / n * np.eye(n)
            return (out, total_iter, z) if full_output else out
        # restart from a small random rotation of the best iterate
        z = best[1] @ mat_exp(_random_so(rng, basis, 0.1))
    if singular:
        raise SingularJacobian("differential of the orbit map is numerically singular")
    out = real_logm(best[1]).T
    raise NoConvergence(
        f"inverse exponential residual {best[0]:.3e} did not reach {tol:.1e}",
        best=out,
    )


def _random_so(rng, basis, scale):
    return sum(c * e for c, e in zip(rng.normal(scale=scale, size=len(basis)), basis))


def sl_log_reverse(x):
    """Given ``x = Log(b)``, return ``Log(b^{-1})`` for the SL(n) metric.

    Reversing the geodesic ``t -> Exp(t x)`` and left-translating by
    ``b^{-1}`` gives the geodesic to ``b^{-1}``; its initial velocity is
    minus the left-trivialized velocity at ``t = 1``.
    """
    x = _as_square(x)
    w = x - x.T
    ew = mat_exp(w)
    return -(ew.T @ x.T @ ew + w)


# --------------------------------------------------------------------------
# groups


class SpecialOrthogonal:
    """SO(n) with the bi-invariant trace metric."""

    kind = "SO"

    def __init__(self, n):
        self.n = int(n)

    def __repr__(self):
        return f"SO({self.n})"

    def __eq__(self, other):
        return isinstance(other, SpecialOrthogonal) and other.n == self.n

    def __hash__(self):
        return hash(("SO", self.n))

    def identity(self):
        return np.eye(self.n)

    def contains(self, g, tol=TOL_GROUP):
        g = np.asarray(g, dtype=float)
        if g.shape != (self.n, self.n):
            return False
        return (
            np.linalg.norm(g.T @ g - np.eye(self.n)) < tol
            and abs(np.linalg.det(g) - 1.0) < tol
        )

    def validate(self, g):
        """Return ``g`` as an element of SO(n), re-orthonormalizing small drift."""
        g = _as_square(g)
        if g.shape != (self.n, self.n):
            raise DimMismatch(f"expected {self.n}x{self.n}, got {g.shape}")
        err = np.linalg.norm(g.T @ g - np.eye(self.n))
        if err < TOL_GROUP and abs(np.linalg.det(g) - 1.0) < TOL_GROUP:
            return g
        if err < REORTHO_LIMIT and np.linalg.det(g) > 0:
            u, _, vt = np.linalg.svd(g)
            return u @ vt
        raise NotInGroup(f"matrix is not in SO({self.n}) (orthogonality error {err:.2e})")

    def in_algebra(self, v, tol=TOL_ALG):
        v = np.asarray(v, dtype=float)
        return v.shape == (self.n, self.n) and np.linalg.norm(v + v.T) < tol

    def inv(self, g):
        return np.asarray(g).T

    def lie_exp(self, v):
        return mat_exp(v)

    def lie_log(self, g):
        return so_log(g)

    exp = lie_exp
    log = lie_log

    def distance(self, g1, g2):
        return float(so_distance_identity(np.asarray(g1).T @ np.asarray(g2)))


class SpecialLinear:
    """SL(n) with the left-invariant, right SO(n)-invariant trace metric."""

    kind = "SL"

    def __init__(self, n):
        self.n = int(n)

    def __repr__(self):
        return f"SL({self.n})"

    def __eq__(self, other):
        return isinstance(other, SpecialLinear) and other.n == self.n

    def __hash__(self):
        return hash(("SL", self.n))

    def identity(self):
        return np.eye(self.n)

    def contains(self, g, tol=TOL_GROUP):
        g = np.asarray(g, dtype=float)
        return g.shape == (self.n, self.n) and abs(np.linalg.det(g) - 1.0) < tol

    def validate(self, g):
        g = _as_square(g)
        if g.shape != (self.n, self.n):
            raise DimMismatch(f"expected {self.n}x{self.n}, got {g.shape}")
        det = np.linalg.det(g)
        if abs(det - 1.0) >= TOL_GROUP:
            raise NotInGroup(f"determinant {det!r} is not 1")
        return g

    def in_algebra(self, v, tol=TOL_ALG):
        v = np.asarray(v, dtype=float)
        return v.shape == (self.n, self.n) and abs(np.trace(v)) < tol

    def inv(self, g):
        return np.linalg.inv(g)

    def lie_exp(self, v):
        return mat_exp(v)

    def lie_log(self, g):
        g = _as_square(g)
        if np.allclose(g, g.T, rtol=0.0, atol=1e-13):
            out = spd_log(g)
        else:
            out = real_logm(g)
        return out - np.trace(out) / self.n * np.eye(self.n)

    def exp(self, v):
        return sl_riemannian_exp(v)

    def log(self, g, **kwargs):
        return sl_riemannian_log(g, **kwargs)

    def distance(self, g1, g2):
        x = sl_riemannian_log(np.linalg.solve(g1, g2))
        return float(np.linalg.norm(x))


def group_distance(g1, g2, group):
    """Geodesic distance ``||Log(g1^{-1} g2)||_F`` in ``group``.

    For SO(n) the distance is computed from the rotation angles, so it is
    defined even where the logarithm branch is ambiguous.
    """
    g1 = _as_square(g1)
    g2 = _as_square(g2)
    if g1.shape != g2.shape:
        raise DimMismatch(f"shapes {g1.shape} and {g2.shape} differ")
    return group.distance(g1, g2)


def proj_k(v, space):
    """Orthogonal projection of ``v`` onto the isotropy algebra of ``space``."""
    return space.proj_k(np.asarray(v, dtype=float))
