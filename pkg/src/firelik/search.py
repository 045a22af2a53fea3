"""Exhaustive maximum-likelihood search over space-time ignition candidates."""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from firelik.detection import DetectionScene, LikelihoodParams
from firelik.errors import BoundsError, CoverageError, ParameterError
from firelik.geometry import GridSpec
from firelik.likelihood import scene_log_likelihood
from firelik.spread import IgnitionCandidate


@dataclass(frozen=True)
class CandidateGrid:
    points: tuple[tuple[float, float], ...]
    times: tuple[float, ...]

    def __post_init__(self):
        pts = tuple((float(x), float(y)) for x, y in self.points)
        ts = tuple(float(t) for t in self.times)
        if not pts or not ts:
            raise ParameterError("candidate grid needs at least one point and one time")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "times", ts)

    @classmethod
    def regular(cls, x0, y0, nx, ny, spacing, t0, n_times, dt) -> "CandidateGrid":
        """``nx * ny`` points from lower-left ``(x0, y0)`` and ``n_times`` times from ``t0``."""
        pts = [(x0 + i * spacing, y0 + j * spacing) for j in range(ny) for i in range(nx)]
        return cls(tuple(pts), tuple(t0 + k * dt for k in range(n_times)))

    def __len__(self):
        return len(self.points) * len(self.times)


@dataclass(frozen=True)
class SurfaceRow:
    x: float
    y: float
    t0: float
    loglik: float


@dataclass(frozen=True)
class SearchResult:
    best: IgnitionCandidate
    best_loglik: float
    surface: tuple[SurfaceRow, ...]
    n_evaluated: int

    def summary(self) -> dict:
        return {
            "x_m": self.best.point[0],
            "y_m": self.best.point[1],
            "t0_s": self.best.t0,
            "loglik": self.best_loglik,
            "n_evaluated": self.n_evaluated,
        }

    def write_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.summary(), fh, indent=2)
            fh.write("\n")

    def write_surface_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("x_m", "y_m", "t0_s", "loglik"))
            for r in self.surface:
                w.writerow((repr(r.x), repr(r.y), repr(r.t0), repr(r.loglik)))


def _rank_key(row: SurfaceRow):
    # larger loglik first, then earlier time, then lexicographic (x, y)
    return (-row.loglik, row.t0, row.x, row.y)


def _evaluate_point(point, times, solve, scenes, lparams):
    base = solve(IgnitionCandidate(point, 0.0))
    rows = []
    for t in times:
        T = base.shifted(t)
        try:
            ll = math.fsum(scene_log_likelihood(s, T, lparams) for s in scenes)
        except CoverageError:
            ll = -math.inf
        rows.append(SurfaceRow(point[0], point[1], t, ll))
    return rows


def grid_search(
    cands: CandidateGrid,
    scenes,
    forward,
    lparams: LikelihoodParams,
    grid: GridSpec,
    workers: int | None = None,
) -> SearchResult:
    """Score every candidate ignition and return the maximum-likelihood one.

    ``forward`` is a spread model (``ConeModel`` or ``LatticeModel``).  Each
    spatial point is solved once at ignition time zero; other ignition times
    reuse that field shifted in time.  Candidates that leave a pixel without
    kernel coverage score ``-inf``.  The surface is ordered points-major in
    input order, whatever the worker count.
    """
    scenes = [scenes] if isinstance(scenes, DetectionScene) else list(scenes)
    if not any(p.confidence > 0 for s in scenes for p in s):
        raise ParameterError("scenes carry no data (all confidences are zero)")
    for pt in cands.points:
        if not grid.contains(pt):
            raise BoundsError(f"candidate point {pt} outside the grid")
    solve = forward.solver(grid)
    workers = workers or os.cpu_count() or 1
    args = (cands.times, solve, scenes, lparams)
    if workers == 1:
        chunks = [_evaluate_point(pt, *args) for pt in cands.points]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(lambda pt: _evaluate_point(pt, *args), cands.points))
    surface = tuple(r for chunk in chunks for r in chunk)
    top = min(surface, key=_rank_key)
    return SearchResult(
        best=IgnitionCandidate((top.x, top.y), top.t0),
        best_loglik=top.loglik,
        surface=surface,
        n_evaluated=len(surface),
    )


def surface_slice(result: SearchResult, t: float) -> list[SurfaceRow]:
    """Surface rows whose ignition time equals ``t``."""
    rows = [r for r in result.surface if r.t0 == t]
    if not rows:
        times = sorted({r.t0 for r in result.surface})
        raise ParameterError(f"no candidates at t0={t}; available times: {times}")
    return rows


def write_slice_csv(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("x_m", "y_m", "loglik"))
        for r in rows:
            w.writerow((repr(r.x), repr(r.y), repr(r.loglik)))
