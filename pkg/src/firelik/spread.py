"""Forward fire-spread models producing arrival-time fields.

Two models are provided: the analytic cone (constant isotropic speed) and a
shortest-path solver on a 16-neighbour lattice whose edge speeds respond to
wind and terrain slope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from firelik.errors import BoundsError, ParameterError
from firelik.geometry import GridSpec, ScalarField

# axis, diagonal and knight moves as (di_x, di_y)
NEIGHBOR_OFFSETS = (
    (1, 0), (-1, 0), (0, 1), (0, -1),
    (1, 1), (1, -1), (-1, 1), (-1, -1),
    (1, 2), (2, 1), (-1, 2), (-2, 1),
    (1, -2), (2, -1), (-1, -2), (-2, -1),
)

R_MIN_FACTOR = 0.01
R_MAX_FACTOR = 100.0


@dataclass(frozen=True)
class IgnitionCandidate:
    point: tuple[float, float]
    t0: float

    def __post_init__(self):
        object.__setattr__(self, "point", (float(self.point[0]), float(self.point[1])))
        object.__setattr__(self, "t0", float(self.t0))


@dataclass(frozen=True, eq=False)
class RosParams:
    """Rate-of-spread model: ``r0 * (1 + wind_coeff * max(0, wind . u)) * exp(slope_coeff * grad z . u)``.

    Wind is in m/s and enters as a dot product against the unit spread
    direction ``u`` with a 1 m/s reference, so ``wind_coeff`` is
    dimensionless.  The result is clamped to ``[0.01 r0, 100 r0]``.
    """

    r0: float
    wind: tuple[float, float] = (0.0, 0.0)
    wind_coeff: float = 0.0
    slope_coeff: float = 0.0
    terrain: ScalarField | None = None

    def __post_init__(self):
        if not self.r0 > 0:
            raise ParameterError(f"r0 must be positive, got {self.r0}")
        if self.wind_coeff < 0 or self.slope_coeff < 0:
            raise ParameterError("wind_coeff and slope_coeff must be >= 0")
        object.__setattr__(self, "wind", (float(self.wind[0]), float(self.wind[1])))

    @property
    def r_min(self) -> float:
        return R_MIN_FACTOR * self.r0

    @property
    def r_max(self) -> float:
        return R_MAX_FACTOR * self.r0

    @cached_property
    def _terrain_gradient(self):
        if self.terrain is None:
            return None
        return self.terrain.gradient()

    def speeds(self, xs, ys, ux, uy) -> np.ndarray:
        """Vectorised spread speed at points ``(xs, ys)`` in unit directions ``(ux, uy)``."""
        ux = np.asarray(ux, dtype=float)
        uy = np.asarray(uy, dtype=float)
        wind_term = np.maximum(0.0, self.wind[0] * ux + self.wind[1] * uy)
        r = self.r0 * (1.0 + self.wind_coeff * wind_term)
        if self._terrain_gradient is not None and self.slope_coeff > 0:
            spec = self.terrain.spec
            gx, gy = self._terrain_gradient
            gxi = ScalarField(spec, gx).bilinear(xs, ys)
            gyi = ScalarField(spec, gy).bilinear(xs, ys)
            r = r * np.exp(self.slope_coeff * (gxi * ux + gyi * uy))
        r = np.broadcast_to(r, np.broadcast_shapes(np.shape(xs), np.shape(ys), np.shape(r)))
        return np.clip(r, self.r_min, self.r_max)


def ros(x, u, p: RosParams) -> float:
    """Spread speed (m/s) at world point ``x`` in unit direction ``u``."""
    if abs(math.hypot(u[0], u[1]) - 1.0) > 1e-9:
        raise ParameterError(f"direction must be a unit vector, got {u}")
    return float(p.speeds(x[0], x[1], u[0], u[1]))


def cone_arrival(ign: IgnitionCandidate, R: float, grid: GridSpec) -> ScalarField:
    """Arrival time for a front expanding at constant speed ``R`` from ``ign``."""
    if not R > 0:
        raise ParameterError(f"rate of spread must be positive, got {R}")
    xs, ys = grid.mesh()
    dist = np.hypot(xs - ign.point[0], ys - ign.point[1])
    return ScalarField(grid, dist / R + ign.t0)


class LatticeSolver:
    """Shortest arrival time over the 16-neighbour lattice.

    The weighted graph depends only on the grid and the spread parameters,
    so it is built once and reused for every ignition.
    """

    def __init__(self, grid: GridSpec, p: RosParams):
        self.grid = grid
        self.params = p
        self.graph = self._build()

    def _build(self) -> csr_matrix:
        g = self.grid
        n = g.nx * g.ny
        iy, ix = np.divmod(np.arange(n), g.nx)
        rows, cols, costs = [], [], []
        for ox, oy in NEIGHBOR_OFFSETS:
            jx, jy = ix + ox, iy + oy
            ok = (jx >= 0) & (jx < g.nx) & (jy >= 0) & (jy < g.ny)
            src = np.flatnonzero(ok)
            ex, ey = ox * g.dx, oy * g.dy
            length = math.hypot(ex, ey)
            mx = g.origin[0] + (ix[src] + 0.5 * ox) * g.dx
            my = g.origin[1] + (iy[src] + 0.5 * oy) * g.dy
            speed = self.params.speeds(mx, my, ex / length, ey / length)
            rows.append(src)
            cols.append(jy[src] * g.nx + jx[src])
            costs.append(length / speed)
        return csr_matrix(
            (np.concatenate(costs), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
        )

    def source_node(self, point) -> int:
        ix, iy = self.grid.index_of(point)
        return iy * self.grid.nx + ix

    def travel_times(self, point, return_predecessors: bool = False):
        """Travel time from the node nearest ``point`` to every node, starting at 0."""
        src = self.source_node(point)
        res = dijkstra(self.graph, directed=True, indices=src, return_predecessors=return_predecessors)
        if return_predecessors:
            dist, pred = res
            return dist.reshape(self.grid.shape), pred
        return res.reshape(self.grid.shape)

    def solve(self, ign: IgnitionCandidate) -> ScalarField:
        return ScalarField(self.grid, self.travel_times(ign.point) + ign.t0)


def solve_arrival(ign: IgnitionCandidate, p: RosParams, grid: GridSpec) -> ScalarField:
    """Arrival-time field from the lattice shortest-path model."""
    if not grid.contains(ign.point):
        raise BoundsError(f"ignition point {ign.point} outside the grid")
    return LatticeSolver(grid, p).solve(ign)


def dome_terrain(grid: GridSpec, height: float = 100.0, radius: float = 600.0, center=None) -> ScalarField:
    """Smooth compactly supported hill ``height * max(0, 1 - (r/radius)^2)^2``."""
    if center is None:
        center = ((grid.origin[0] + grid.x_max) / 2, (grid.origin[1] + grid.y_max) / 2)
    xs, ys = grid.mesh()
    q = np.maximum(0.0, 1.0 - ((xs - center[0]) ** 2 + (ys - center[1]) ** 2) / radius**2)
    return ScalarField(grid, height * q**2)


def northeast_wind(speed: float) -> tuple[float, float]:
    """Wind vector blowing from the northeast (towards the southwest)."""
    s = speed / math.sqrt(2.0)
    return (-s, -s)


@dataclass(frozen=True)
class ConeModel:
    R: float = 1.0

    def solver(self, grid: GridSpec):
        return lambda ign: cone_arrival(ign, self.R, grid)


@dataclass(frozen=True)
class LatticeModel:
    ros: RosParams

    def solver(self, grid: GridSpec):
        return LatticeSolver(grid, self.ros).solve
