"""Per-pixel satellite active-fire detection model.

Heat release decays exponentially after the fire arrives, a logistic curve
maps heat fraction to detection probability, and a truncated Gaussian blur
over the model grid accounts for geolocation error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from firelik.errors import CoverageError, ParameterError
from firelik.geometry import ScalarField

PROB_FLOOR = 1e-300

# pixels x window nodes processed per vectorised batch
_BATCH_ELEMENTS = 2_000_000


def logistic_params(p_false: float, f_half: float) -> tuple[float, float]:
    """Slope ``a`` and intercept ``b`` of the detection logistic.

    ``b`` is fixed by the false detection rate at zero heat and ``a`` by
    requiring 50% detection at heat fraction ``f_half``.
    """
    if not 0.0 < p_false < 0.5:
        raise ParameterError(f"p_false must lie in (0, 0.5), got {p_false}")
    if not 0.0 < f_half <= 1.0:
        raise ParameterError(f"f_half must lie in (0, 1], got {f_half}")
    b = math.log((1.0 - p_false) / p_false)
    return b / f_half, b


@dataclass(frozen=True)
class LikelihoodParams:
    p_false: float = 0.001
    f_half: float = 0.01
    sigma: float = 2000.0
    c_decay: float = 7200.0
    kernel_radius: float = 4.0

    def __post_init__(self):
        logistic_params(self.p_false, self.f_half)
        if not self.sigma > 0:
            raise ParameterError(f"sigma must be positive, got {self.sigma}")
        if not self.c_decay > 0:
            raise ParameterError(f"c_decay must be positive, got {self.c_decay}")
        if not self.kernel_radius >= 3:
            raise ParameterError(f"kernel_radius must be >= 3, got {self.kernel_radius}")

    @property
    def a(self) -> float:
        return logistic_params(self.p_false, self.f_half)[0]

    @property
    def b(self) -> float:
        return logistic_params(self.p_false, self.f_half)[1]


@dataclass(frozen=True)
class DetectionPixel:
    center: tuple[float, float]
    d: int
    confidence: float
    t_scan: float

    def __post_init__(self):
        if self.d not in (0, 1):
            raise ParameterError(f"detect flag must be 0 or 1, got {self.d}")
        if not 0.0 <= self.confidence <= 1.0:
            raise ParameterError(f"confidence must lie in [0, 1], got {self.confidence}")
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))


@dataclass(frozen=True)
class DetectionScene:
    pixels: tuple[DetectionPixel, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "pixels", tuple(self.pixels))

    def __len__(self):
        return len(self.pixels)

    def __iter__(self):
        return iter(self.pixels)

    def __getitem__(self, k):
        return self.pixels[k]

    def arrays(self):
        """Columns ``(x, y, d, confidence, t_scan)`` as numpy arrays."""
        n = len(self.pixels)
        x = np.fromiter((p.center[0] for p in self.pixels), float, n)
        y = np.fromiter((p.center[1] for p in self.pixels), float, n)
        d = np.fromiter((p.d for p in self.pixels), int, n)
        c = np.fromiter((p.confidence for p in self.pixels), float, n)
        t = np.fromiter((p.t_scan for p in self.pixels), float, n)
        return x, y, d, c, t


def heat_fraction(t_now, t_arrival, c_decay: float):
    """Fraction of peak heat release at ``t_now`` for ground ignited at ``t_arrival``.

    Zero before arrival (including ``t_arrival = inf``), one at arrival, and
    ``exp(-elapsed / c_decay)`` afterwards.  Broadcasts over arrays.
    """
    elapsed = np.subtract(t_now, t_arrival, dtype=float)
    burning = elapsed >= 0
    h = np.exp(-np.where(burning, elapsed, 0.0) / c_decay)
    h = np.where(burning, h, 0.0)
    return float(h) if h.ndim == 0 else h


def _logit(F, params: LikelihoodParams):
    return params.a * np.asarray(F, dtype=float) - params.b


def detect_prob(F, params: LikelihoodParams):
    """Probability of a detection given heat fraction ``F`` in [0, 1]."""
    p = np.clip(expit(_logit(F, params)), PROB_FLOOR, 1.0)
    return float(p) if p.ndim == 0 else p


def _outcome_prob(F, d, params: LikelihoodParams):
    # 1 - expit(z) == expit(-z), which keeps the d=0 branch accurate near 1
    z = _logit(F, params)
    return np.where(d == 1, expit(z), expit(-z))


def _window(n: int, spacing: float, reach: float) -> int:
    return min(n, 2 * int(math.ceil(reach / spacing)) + 2)


def pixel_probs(xs, ys, ds, t_scans, T: ScalarField, params: LikelihoodParams) -> np.ndarray:
    """Geolocation-blurred probability of each pixel's observed outcome.

    For pixel ``i`` the result is ``sum_j w_i K_ij P(d_i | h_ij)`` over the
    grid nodes ``j`` within ``kernel_radius * sigma`` of the pixel centre,
    where ``K_ij`` is the unnormalised Gaussian and ``w_i`` makes the
    retained weights sum to one.

    Raises CoverageError (with ``.index`` set) for the first pixel that has
    no node within the kernel radius.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    ds = np.asarray(ds, dtype=int)
    t_scans = np.asarray(t_scans, dtype=float)
    n = xs.size
    out = np.empty(n)
    if n == 0:
        return out

    g = T.spec
    reach = params.kernel_radius * params.sigma
    wx = _window(g.nx, g.dx, reach)
    wy = _window(g.ny, g.dy, reach)
    offx = np.arange(wx)
    offy = np.arange(wy)
    batch = max(1, _BATCH_ELEMENTS // (wx * wy))

    for lo in range(0, n, batch):
        hi = min(n, lo + batch)
        cx, cy = xs[lo:hi], ys[lo:hi]
        fx = (cx - g.origin[0]) / g.dx
        fy = (cy - g.origin[1]) / g.dy
        sx = np.clip(np.floor(fx).astype(int) - (wx - 2) // 2, 0, g.nx - wx)
        sy = np.clip(np.floor(fy).astype(int) - (wy - 2) // 2, 0, g.ny - wy)
        ix = sx[:, None] + offx[None, :]  # (b, wx)
        iy = sy[:, None] + offy[None, :]  # (b, wy)
        ddx = g.origin[0] + ix * g.dx - cx[:, None]
        ddy = g.origin[1] + iy * g.dy - cy[:, None]
        r2 = ddy[:, :, None] ** 2 + ddx[:, None, :] ** 2  # (b, wy, wx)
        kern = np.where(r2 <= reach * reach, np.exp(-r2 / (2.0 * params.sigma**2)), 0.0)
        norm = kern.sum(axis=(1, 2))
        empty = np.flatnonzero(norm <= 0.0)
        if empty.size:
            k = lo + int(empty[0])
            err = CoverageError(
                f"pixel at ({xs[k]}, {ys[k]}) has no grid node within {reach} m"
            )
            err.index = k
            raise err
        Tw = T.values[iy[:, :, None], ix[:, None, :]]
        h = heat_fraction(t_scans[lo:hi, None, None], Tw, params.c_decay)
        p = _outcome_prob(h, ds[lo:hi, None, None], params)
        out[lo:hi] = (kern * p).sum(axis=(1, 2)) / norm
    return np.clip(out, PROB_FLOOR, 1.0)


def pixel_prob(pixel: DetectionPixel, T: ScalarField, params: LikelihoodParams) -> float:
    """Probability of ``pixel``'s observed outcome given arrival field ``T``."""
    return float(
        pixel_probs([pixel.center[0]], [pixel.center[1]], [pixel.d], [pixel.t_scan], T, params)[0]
    )
