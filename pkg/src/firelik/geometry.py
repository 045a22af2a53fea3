"""Uniform node-centred grids and scalar fields living on them.

Fields are stored as ``(ny, nx)`` arrays so that ``values[iy, ix]`` is the
value at world point ``origin + (ix * dx, iy * dy)``.  Arrival-time fields use
``+inf`` for ground the fire never reaches.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from firelik.errors import BoundsError, ParameterError

CSV_HEADER = ("x_m", "y_m", "value")


@dataclass(frozen=True)
class GridSpec:
    nx: int
    ny: int
    dx: float
    dy: float
    origin: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise ParameterError(f"grid needs nx >= 2 and ny >= 2, got nx={self.nx}, ny={self.ny}")
        if not (self.dx > 0 and self.dy > 0):
            raise ParameterError(f"grid spacing must be positive, got dx={self.dx}, dy={self.dy}")
        object.__setattr__(self, "origin", (float(self.origin[0]), float(self.origin[1])))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.ny, self.nx)

    @property
    def x_max(self) -> float:
        return self.origin[0] + (self.nx - 1) * self.dx

    @property
    def y_max(self) -> float:
        return self.origin[1] + (self.ny - 1) * self.dy

    def x_coords(self) -> np.ndarray:
        return self.origin[0] + self.dx * np.arange(self.nx)

    def y_coords(self) -> np.ndarray:
        return self.origin[1] + self.dy * np.arange(self.ny)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """World coordinates of every node as two ``(ny, nx)`` arrays."""
        return np.meshgrid(self.x_coords(), self.y_coords())

    def contains(self, p) -> bool:
        x, y = p
        return self.origin[0] <= x <= self.x_max and self.origin[1] <= y <= self.y_max

    def index_of(self, p) -> tuple[int, int]:
        """Nearest node ``(ix, iy)`` to world point ``p``.

        Raises BoundsError when ``p`` lies outside the bounding box of the
        nodes (the box itself is inclusive).
        """
        x, y = float(p[0]), float(p[1])
        if not self.origin[0] <= x <= self.x_max:
            raise BoundsError(f"x={x} outside grid range [{self.origin[0]}, {self.x_max}]")
        if not self.origin[1] <= y <= self.y_max:
            raise BoundsError(f"y={y} outside grid range [{self.origin[1]}, {self.y_max}]")
        # half-up rounding; min() guards float noise at the upper edge
        ix = min(int(math.floor((x - self.origin[0]) / self.dx + 0.5)), self.nx - 1)
        iy = min(int(math.floor((y - self.origin[1]) / self.dy + 0.5)), self.ny - 1)
        return ix, iy

    def world_of(self, i) -> tuple[float, float]:
        ix, iy = int(i[0]), int(i[1])
        if not (0 <= ix < self.nx and 0 <= iy < self.ny):
            raise BoundsError(f"index ({ix}, {iy}) outside grid of {self.nx} x {self.ny} nodes")
        return self.origin[0] + ix * self.dx, self.origin[1] + iy * self.dy

    def nearest_indices(self, xs, ys) -> tuple[np.ndarray, np.ndarray]:
        """Vectorised nearest-node lookup, clamped to the grid."""
        ix = np.floor((np.asarray(xs, dtype=float) - self.origin[0]) / self.dx + 0.5).astype(int)
        iy = np.floor((np.asarray(ys, dtype=float) - self.origin[1]) / self.dy + 0.5).astype(int)
        return np.clip(ix, 0, self.nx - 1), np.clip(iy, 0, self.ny - 1)


@dataclass(frozen=True)
class ScalarField:
    spec: GridSpec
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.size != self.spec.nx * self.spec.ny:
            raise ParameterError(
                f"field has {values.size} values, grid needs {self.spec.nx * self.spec.ny}"
            )
        values = values.reshape(self.spec.shape)
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @classmethod
    def constant(cls, spec: GridSpec, value: float) -> "ScalarField":
        return cls(spec, np.full(spec.shape, float(value)))

    def at(self, i) -> float:
        ix, iy = int(i[0]), int(i[1])
        self.spec.world_of((ix, iy))
        return float(self.values[iy, ix])

    def sample(self, p) -> float:
        """Value at the node nearest to world point ``p``."""
        return self.at(self.spec.index_of(p))

    def shifted(self, dt: float) -> "ScalarField":
        return ScalarField(self.spec, self.values + dt)

    def gradient(self) -> tuple[np.ndarray, np.ndarray]:
        """Central-difference gradient ``(d/dx, d/dy)`` at the nodes."""
        gy, gx = np.gradient(self.values, self.spec.dy, self.spec.dx)
        return gx, gy

    def bilinear(self, xs, ys) -> np.ndarray:
        """Bilinear interpolation of the field at world points, clamped to the grid."""
        return _bilinear(self.spec, self.values, xs, ys)


def _bilinear(spec: GridSpec, values: np.ndarray, xs, ys) -> np.ndarray:
    fx = np.clip((np.asarray(xs, dtype=float) - spec.origin[0]) / spec.dx, 0, spec.nx - 1)
    fy = np.clip((np.asarray(ys, dtype=float) - spec.origin[1]) / spec.dy, 0, spec.ny - 1)
    ix = np.minimum(np.floor(fx).astype(int), spec.nx - 2)
    iy = np.minimum(np.floor(fy).astype(int), spec.ny - 2)
    tx = fx - ix
    ty = fy - iy
    v00 = values[iy, ix]
    v10 = values[iy, ix + 1]
    v01 = values[iy + 1, ix]
    v11 = values[iy + 1, ix + 1]
    return (1 - ty) * ((1 - tx) * v00 + tx * v10) + ty * ((1 - tx) * v01 + tx * v11)


def _fmt(v: float) -> str:
    # repr() is the shortest string that round-trips; gives "inf" for +inf
    return repr(float(v))


def write_field_csv(f: ScalarField, path) -> None:
    xs, ys = f.spec.mesh()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for x, y, v in zip(xs.ravel(), ys.ravel(), f.values.ravel()):
            w.writerow((_fmt(x), _fmt(y), _fmt(v)))


def read_field_csv(path) -> ScalarField:
    """Read a field written by :func:`write_field_csv`.

    The grid is recovered from the coordinates, which must form a complete
    uniform lattice listed row-major (y outer, x inner).
    """
    path = Path(path)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(h.strip() for h in rows[0]) != CSV_HEADER:
        raise ParameterError(f"{path}: expected header {','.join(CSV_HEADER)}")
    try:
        data = np.array([[float(c) for c in r] for r in rows[1:] if r], dtype=float)
    except ValueError as exc:
        raise ParameterError(f"{path}: non-numeric entry ({exc})") from None
    if data.ndim != 2 or data.shape[1] != 3:
        raise ParameterError(f"{path}: every row needs 3 columns")
    xs = np.unique(data[:, 0])
    ys = np.unique(data[:, 1])
    nx, ny = len(xs), len(ys)
    if nx < 2 or ny < 2 or nx * ny != len(data):
        raise ParameterError(f"{path}: coordinates do not form a complete grid")
    spec = GridSpec(nx, ny, float(xs[1] - xs[0]), float(ys[1] - ys[0]), (float(xs[0]), float(ys[0])))
    ex, ey = spec.mesh()
    if not (np.allclose(data[:, 0], ex.ravel()) and np.allclose(data[:, 1], ey.ravel())):
        raise ParameterError(f"{path}: rows are not a uniform grid in y-then-x order")
    return ScalarField(spec, data[:, 2])
