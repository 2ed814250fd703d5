"""Reading and writing curve files.

Formats
-------
csv_latlon
    header ``lat,lon``; one sample per row in degrees; lives on S^2.
csv_xy
    header ``x0,x1,...``; one sample per row.  Interpreted by the space:
    plain points for ``r:<n>``, the upper half plane for ``h2`` (``y > 0``),
    unit vectors for ``s2`` / ``sn:<n>``.
json_spd
    ``{"name": ..., "matrices": [[[...], ...], ...]}`` with row-major
    symmetric positive definite matrices; each is rescaled to determinant 1.
"""

import csv
import json
import os
from dataclasses import dataclass

import numpy as np

from ..homog import PDSM, DiscreteManifoldCurve, Sphere
from ..matgroup import spd_sqrt, sym

FORMATS = ("csv_latlon", "csv_xy", "json_spd")


class ParseError(ValueError):
    """A curve file could not be parsed."""


class ConstraintViolation(ValueError):
    """A curve file parsed but a sample violates the space's constraints."""


@dataclass(frozen=True)
class Euclidean:
    """R^n, used by the flat baseline."""

    n: int
    kind = "euclidean"

    def __repr__(self):
        return f"Euclidean({self.n})"


@dataclass(frozen=True)
class EuclideanCurve:
    space: Euclidean
    points: np.ndarray

    @property
    def n_intervals(self):
        return len(self.points) - 1


def parse_space(text):
    """``s2``, ``sn:<n>``, ``h2``, ``pdsm:<n>`` or ``r:<n>``."""
    text = text.strip().lower()
    try:
        if text == "s2":
            return Sphere(2)
        if text == "h2":
            return PDSM(2)
        head, _, arg = text.partition(":")
        if head == "sn":
            return Sphere(int(arg))
        if head == "pdsm":
            n = int(arg)
            if n < 2:
                raise ValueError
            return PDSM(n)
        if head == "r":
            n = int(arg)
            if n < 1:
                raise ValueError
            return Euclidean(n)
    except ValueError:
        pass
    raise ValueError(f"unknown space {text!r}; expected s2, sn:<n>, h2, pdsm:<n> or r:<n>")


def space_name(space):
    if isinstance(space, Euclidean):
        return f"r:{space.n}"
    if isinstance(space, Sphere):
        return "s2" if space.n == 2 else f"sn:{space.n}"
    return "h2" if space.n == 2 else f"pdsm:{space.n}"


# -- coordinate maps


def latlon_to_unit(lat, lon):
    """Degrees to a unit vector ``(cos lat cos lon, cos lat sin lon, sin lat)``."""
    la = np.radians(np.asarray(lat, dtype=float))
    lo = np.radians(np.asarray(lon, dtype=float))
    out = np.stack([np.cos(la) * np.cos(lo), np.cos(la) * np.sin(lo), np.sin(la)], axis=-1)
    # the poles are exact regardless of longitude
    pole = np.abs(np.asarray(lat, dtype=float)) == 90.0
    out[pole] = np.array([0.0, 0.0, 1.0]) * np.sign(np.asarray(lat, dtype=float)[pole])[:, None]
    return out


def unit_to_latlon(p):
    p = np.asarray(p, dtype=float)
    lat = np.degrees(np.arctan2(p[..., 2], np.hypot(p[..., 0], p[..., 1])))
    lon = np.degrees(np.arctan2(p[..., 1], p[..., 0]))
    return lat, lon


def h2_to_pdsm(x, y):
    """Upper-half-plane point ``x + iy`` to the SPD matrix ``sqrt(B B^T)``.

    With ``B = [[sqrt(y), x / sqrt(y)], [0, 1 / sqrt(y)]]`` (which maps ``i``
    to ``x + iy`` by Moebius action) the point is ``sqrt(B B^T)``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    bbt = np.empty(x.shape + (2, 2))
    bbt[..., 0, 0] = y + x * x / y
    bbt[..., 0, 1] = x / y
    bbt[..., 1, 0] = x / y
    bbt[..., 1, 1] = 1.0 / y
    if bbt.ndim == 2:
        return spd_sqrt(bbt)
    return np.array([spd_sqrt(m) for m in bbt])


def pdsm_to_h2(p):
    """Inverse of :func:`h2_to_pdsm`: the Moebius image of ``i`` under ``p``."""
    p = np.asarray(p, dtype=float)
    a, b, c, d = p[..., 0, 0], p[..., 0, 1], p[..., 1, 0], p[..., 1, 1]
    den = d * d + c * c
    x = (b * d + a * c) / den
    y = (a * d - b * c) / den
    return x, y


# -- ingestion


def detect_format(path):
    ext = os.path.splitext(path)[1].lower()
    if ext == ".json":
        return "json_spd"
    with open(path, newline="") as fh:
        header = fh.readline().strip().lower().replace(" ", "")
    if header.startswith("lat,lon"):
        return "csv_latlon"
    return "csv_xy"


def _read_csv(path):
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if not rows:
        raise ParseError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    data = []
    for i, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise ParseError(f"{path}:{i}: expected {len(header)} columns, got {len(row)}")
        try:
            data.append([float(c) for c in row])
        except ValueError as exc:
            raise ParseError(f"{path}:{i}: {exc}") from exc
    if len(data) < 2:
        raise ParseError(f"{path}: a curve needs at least two samples")
    arr = np.array(data)
    if not np.all(np.isfinite(arr)):
        bad = int(np.argwhere(~np.isfinite(arr))[0, 0]) + 2
        raise ParseError(f"{path}:{bad}: non-finite value")
    return header, arr


def _read_spd(path, n_expected=None):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: {exc}") from exc
    mats = doc.get("matrices") if isinstance(doc, dict) else doc
    if not isinstance(mats, list) or len(mats) < 2:
        raise ParseError(f"{path}: expected a list of at least two matrices")
    try:
        arr = np.array(mats, dtype=float)
    except (ValueError, TypeError) as exc:
        raise ParseError(f"{path}: ragged or non-numeric matrices") from exc
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise ParseError(f"{path}: entries must be square matrices")
    n = arr.shape[1]
    if n_expected is not None and n != n_expected:
        raise ConstraintViolation(f"{path}: expected {n_expected}x{n_expected} matrices, got {n}x{n}")
    out = np.empty_like(arr)
    for k, m in enumerate(arr):
        if not np.all(np.isfinite(m)):
            raise ParseError(f"{path}: matrix {k} has non-finite entries")
        if np.max(np.abs(m - m.T)) > 1e-9 * max(1.0, np.max(np.abs(m))):
            raise ConstraintViolation(f"{path}: matrix {k} is not symmetric")
        m = sym(m)
        if np.linalg.eigvalsh(m)[0] <= 0:
            raise ConstraintViolation(f"{path}: matrix {k} is not positive definite")
        m = m / np.linalg.det(m) ** (1.0 / n)
        if abs(np.linalg.det(m) - 1.0) > 1e-6:
            raise ConstraintViolation(f"{path}: matrix {k} cannot be normalized to determinant 1")
        out[k] = m
    return out


def ingest(path, space, fmt=None):
    """Read a curve file as a curve on ``space``.

    Raises
    ------
    ParseError
        The file is malformed.
    ConstraintViolation
        A sample is not a valid point of ``space``; the message names it.
    """
    fmt = fmt or detect_format(path)
    if fmt not in FORMATS:
        raise ParseError(f"unknown format {fmt!r}")
    if fmt == "json_spd":
        if not isinstance(space, PDSM):
            raise ConstraintViolation(f"{path}: SPD files need an h2 or pdsm:<n> space")
        return DiscreteManifoldCurve(space, _read_spd(path, space.n))
    header, arr = _read_csv(path)
    if fmt == "csv_latlon":
        if not (isinstance(space, Sphere) and space.n == 2):
            raise ConstraintViolation(f"{path}: lat/lon tracks live on s2")
        if arr.shape[1] != 2:
            raise ParseError(f"{path}: expected columns lat,lon")
        bad = np.flatnonzero(np.abs(arr[:, 0]) > 90.0)
        if len(bad):
            raise ConstraintViolation(f"{path}:{bad[0] + 2}: latitude {arr[bad[0], 0]} out of range")
        return DiscreteManifoldCurve(space, latlon_to_unit(arr[:, 0], arr[:, 1]))
    # csv_xy
    if isinstance(space, Euclidean):
        if arr.shape[1] != space.n:
            raise ParseError(f"{path}: expected {space.n} columns, got {arr.shape[1]}")
        return EuclideanCurve(space, arr)
    if isinstance(space, PDSM):
        if space.n != 2 or arr.shape[1] != 2:
            raise ConstraintViolation(f"{path}: planar points map only to h2")
        bad = np.flatnonzero(arr[:, 1] <= 0)
        if len(bad):
            raise ConstraintViolation(f"{path}:{bad[0] + 2}: y must be positive in the upper half plane")
        return DiscreteManifoldCurve(space, h2_to_pdsm(arr[:, 0], arr[:, 1]))
    if arr.shape[1] != space.n + 1:
        raise ParseError(f"{path}: expected {space.n + 1} columns, got {arr.shape[1]}")
    err = np.abs(np.linalg.norm(arr, axis=1) - 1.0)
    bad = np.flatnonzero(err > 1e-8)
    if len(bad):
        raise ConstraintViolation(f"{path}:{bad[0] + 2}: not a unit vector")
    return DiscreteManifoldCurve(space, arr / np.linalg.norm(arr, axis=1)[:, None])


# -- emission


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) for v in row])


def emit(curve, path, fmt, name=None):
    """Write ``curve`` in ``fmt``; inverse of :func:`ingest`."""
    pts = np.asarray(curve.points)
    if fmt == "json_spd":
        doc = {"name": name or os.path.splitext(os.path.basename(path))[0], "matrices": pts.tolist()}
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
        return
    if fmt == "csv_latlon":
        lat, lon = unit_to_latlon(pts)
        _write_csv(path, ["lat", "lon"], zip(lat, lon))
        return
    if fmt != "csv_xy":
        raise ValueError(f"unknown format {fmt!r}")
    if isinstance(curve.space, PDSM):
        x, y = pdsm_to_h2(pts)
        _write_csv(path, ["x", "y"], zip(x, y))
        return
    _write_csv(path, [f"x{i}" for i in range(pts.shape[1])], pts)
