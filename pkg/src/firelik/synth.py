"""Synthetic detection scenes for replication runs and statistical tests."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from skimage.measure import find_contours

from firelik.detection import (
    DetectionPixel,
    DetectionScene,
    LikelihoodParams,
    detect_prob,
    heat_fraction,
)
from firelik.errors import BoundsError, ParameterError
from firelik.geometry import ScalarField

MAX_RESAMPLE = 100


@dataclass(frozen=True)
class PerimeterPlacement:
    level_time: float
    n_pixels: int = 8
    scan_time: float | None = None
    confidence: float = 1.0

    def __post_init__(self):
        if self.scan_time is None:
            object.__setattr__(self, "scan_time", float(self.level_time))
        if self.n_pixels < 1:
            raise ParameterError(f"n_pixels must be >= 1, got {self.n_pixels}")
        if self.scan_time < self.level_time:
            raise ParameterError(
                f"scan_time {self.scan_time} precedes level_time {self.level_time}"
            )
        if not 0.0 <= self.confidence <= 1.0:
            raise ParameterError(f"confidence must lie in [0, 1], got {self.confidence}")


def _arc_length(path: np.ndarray) -> float:
    return float(np.hypot(*np.diff(path, axis=0).T).sum())


def level_contours(T: ScalarField, level: float) -> list[np.ndarray]:
    """Contours of ``T`` at ``level`` as ``(n, 2)`` arrays of world ``(x, y)``."""
    vals = T.values
    finite = np.isfinite(vals)
    if not finite.any():
        return []
    # unburned nodes sit above every finite level
    big = max(float(vals[finite].max()), level) + 1.0
    filled = np.where(finite, vals, big)
    g = T.spec
    out = []
    for c in find_contours(filled, level):
        xy = np.column_stack((g.origin[0] + c[:, 1] * g.dx, g.origin[1] + c[:, 0] * g.dy))
        out.append(xy)
    return out


def _canonical(path: np.ndarray, closed: bool) -> np.ndarray:
    """Orient and root a contour so the result ignores traversal order.

    Closed loops run counter-clockwise from their northernmost vertex
    (westernmost on ties); open paths start at the lexicographically
    smaller end.
    """
    if closed:
        ring = path[:-1]
        x, y = ring[:, 0], ring[:, 1]
        signed_area = 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
        if signed_area < 0:
            ring = ring[::-1]
        start = int(np.lexsort((ring[:, 0], -ring[:, 1]))[0])
        ring = np.roll(ring, -start, axis=0)
        return np.vstack((ring, ring[:1]))
    if tuple(path[-1]) < tuple(path[0]):
        return path[::-1]
    return path


def place_along(path: np.ndarray, n: int, closed: bool) -> np.ndarray:
    """``n`` points at equal arc-length spacing along ``path``."""
    seg = np.hypot(*np.diff(path, axis=0).T)
    cum = np.concatenate(([0.0], np.cumsum(seg)))
    total = cum[-1]
    k = np.arange(n)
    s = k * total / n if closed else (k + 0.5) * total / n
    return np.column_stack((np.interp(s, cum, path[:, 0]), np.interp(s, cum, path[:, 1])))


def pixels_on_perimeter(T: ScalarField, pl: PerimeterPlacement) -> DetectionScene:
    """Detected pixels spaced evenly along the ``level_time`` fire perimeter.

    Uses the longest contour component when the level set is disconnected.
    """
    finite = T.values[np.isfinite(T.values)]
    if finite.size == 0 or not finite.min() < pl.level_time < finite.max():
        raise ParameterError(f"no fire perimeter at level_time={pl.level_time}")
    contours = level_contours(T, pl.level_time)
    if not contours:
        raise ParameterError(f"no fire perimeter at level_time={pl.level_time}")

    def key(c):
        closed = bool(np.allclose(c[0], c[-1]))
        cc = _canonical(c, closed)
        return (-_arc_length(c), tuple(cc[0]))

    path = min(contours, key=key)
    closed = bool(np.allclose(path[0], path[-1]))
    centers = place_along(_canonical(path, closed), pl.n_pixels, closed)
    return DetectionScene(
        tuple(
            DetectionPixel((float(x), float(y)), 1, pl.confidence, float(pl.scan_time))
            for x, y in centers
        )
    )


def sample_detections(T: ScalarField, centers, t_scan: float, params: LikelihoodParams, seed: int) -> DetectionScene:
    """Draw a detection scene from the generative model.

    Each pixel looks at a Gaussian-displaced location around its centre and
    reports fire with the logistic probability of the heat there.  Looks
    that land outside the grid are redrawn up to 100 times and then clamped
    to the boundary, with a warning giving the clamp count.
    """
    g = T.spec
    centers = np.asarray(centers, dtype=float).reshape(-1, 2)
    for c in centers:
        if not g.contains(c):
            raise BoundsError(f"pixel centre {tuple(c)} outside the grid")
    rng = np.random.default_rng(seed)
    n = len(centers)
    looks = centers + rng.normal(scale=params.sigma, size=(n, 2))

    def outside(p):
        return (
            (p[:, 0] < g.origin[0]) | (p[:, 0] > g.x_max)
            | (p[:, 1] < g.origin[1]) | (p[:, 1] > g.y_max)
        )

    bad = np.flatnonzero(outside(looks))
    for _ in range(MAX_RESAMPLE):
        if bad.size == 0:
            break
        looks[bad] = centers[bad] + rng.normal(scale=params.sigma, size=(bad.size, 2))
        bad = bad[outside(looks[bad])]
    if bad.size:
        looks[bad, 0] = np.clip(looks[bad, 0], g.origin[0], g.x_max)
        looks[bad, 1] = np.clip(looks[bad, 1], g.origin[1], g.y_max)
        warnings.warn(f"{bad.size} geolocation draws clamped to the grid boundary", stacklevel=2)

    ix, iy = g.nearest_indices(looks[:, 0], looks[:, 1])
    p = detect_prob(heat_fraction(t_scan, T.values[iy, ix], params.c_decay), params)
    d = (rng.random(n) < p).astype(int)
    return DetectionScene(
        tuple(
            DetectionPixel((float(x), float(y)), int(di), 1.0, float(t_scan))
            for (x, y), di in zip(centers, d)
        )
    )


def ring_centers(center, radius: float, n: int) -> np.ndarray:
    """``n`` points evenly spaced on a circle, starting due north."""
    ang = math.pi / 2 + 2 * math.pi * np.arange(n) / n
    return np.column_stack((center[0] + radius * np.cos(ang), center[1] + radius * np.sin(ang)))
