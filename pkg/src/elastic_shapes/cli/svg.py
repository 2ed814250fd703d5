"""Minimal SVG rendering of geodesic sweeps.

Sphere curves are drawn in an orthographic view centred on their mean
direction, 2x2 SPD curves in the upper half plane, larger SPD curves as a
table of principal axis lengths (eigenvalues) and R^n curves by their first
two coordinates.
"""

from xml.sax.saxutils import escape

import numpy as np

from ..homog import PDSM, Sphere
from .io import pdsm_to_h2

SIZE = 480
MARGIN = 30


def _colour(j, count):
    f = j / max(count - 1, 1)
    return f"rgb({int(40 + 200 * f)},{int(80 * (1 - abs(2 * f - 1)))},{int(240 - 200 * f)})"


def _polyline(xy, colour, width=1.5, opacity=1.0, dash=False):
    pts = " ".join(f"{x:.3f},{y:.3f}" for x, y in xy)
    extra = ' stroke-dasharray="4,3"' if dash else ""
    return (
        f'<polyline points="{pts}" fill="none" stroke="{colour}" '
        f'stroke-width="{width}" stroke-opacity="{opacity}"{extra}/>'
    )


def _fit(curves):
    allp = np.vstack(curves)
    lo, hi = allp.min(axis=0), allp.max(axis=0)
    span = max(float(np.max(hi - lo)), 1e-12)
    scale = (SIZE - 2 * MARGIN) / span
    return [np.column_stack([MARGIN + (c[:, 0] - lo[0]) * scale, SIZE - MARGIN - (c[:, 1] - lo[1]) * scale]) for c in curves]


def _sphere(frames):
    pts = np.vstack([f.points for f in frames])
    view = pts.mean(axis=0)
    view = view / np.linalg.norm(view) if np.linalg.norm(view) > 1e-9 else np.array([0.0, 0.0, 1.0])
    up = np.array([0.0, 0.0, 1.0]) if abs(view[2]) < 0.9 else np.array([0.0, 1.0, 0.0])
    right = np.cross(up, view)
    right /= np.linalg.norm(right)
    up = np.cross(view, right)
    r = (SIZE - 2 * MARGIN) / 2
    c = SIZE / 2
    out = [f'<circle cx="{c}" cy="{c}" r="{r}" fill="none" stroke="#999"/>']
    for j, f in enumerate(frames):
        p = f.points
        xy = np.column_stack([c + r * (p @ right), c - r * (p @ up)])
        front = (p @ view) >= 0
        out.append(_polyline(xy, _colour(j, len(frames)), opacity=1.0 if front.all() else 0.6, dash=not front.all()))
    return out


def _table(frames):
    out = []
    rows = ["frame  t    axes (eigenvalues, ascending)"]
    for j, f in enumerate(frames):
        n = len(f.points) - 1
        for k in (0, n // 2, n):
            ev = np.linalg.eigvalsh(f.points[k])
            rows.append(f"{j:>5}  {k / n:.2f}  " + "  ".join(f"{v:.6f}" for v in ev))
    for i, row in enumerate(rows):
        out.append(f'<text x="{MARGIN}" y="{MARGIN + 16 * i}" font-family="monospace" font-size="12">{escape(row)}</text>')
    return out, MARGIN * 2 + 16 * len(rows)


def render(frames, space=None):
    """SVG document (as a string) for a list of curves."""
    height = SIZE
    if isinstance(space, Sphere) and space.n == 2:
        body = _sphere(frames)
    elif isinstance(space, PDSM) and space.n == 2:
        curves = [np.column_stack(pdsm_to_h2(f.points)) for f in frames]
        body = [_polyline(xy, _colour(j, len(frames))) for j, xy in enumerate(_fit(curves))]
    elif isinstance(space, PDSM):
        body, height = _table(frames)
    else:
        curves = [np.asarray(getattr(f, "points", f))[:, :2] for f in frames]
        body = [_polyline(xy, _colour(j, len(frames))) for j, xy in enumerate(_fit(curves))]
    head = f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{height}" viewBox="0 0 {SIZE} {height}">'
    return "\n".join([head, '<rect width="100%" height="100%" fill="white"/>', *body, "</svg>", ""])


def write_svg(frames, space, path):
    with open(path, "w") as fh:
        fh.write(render(frames, space))
