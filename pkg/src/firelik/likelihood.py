"""Scene log-likelihood and the straight fire-line likelihood profile."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from firelik.detection import (
    PROB_FLOOR,
    DetectionScene,
    LikelihoodParams,
    _outcome_prob,
    heat_fraction,
    pixel_probs,
)
from firelik.errors import CoverageError, ParameterError
from firelik.geometry import ScalarField


def scene_log_likelihood(scene: DetectionScene, T: ScalarField, params: LikelihoodParams) -> float:
    """Confidence-weighted sum of log pixel probabilities.

    Pixels with zero confidence are missing data and are skipped before any
    evaluation, so they cannot raise coverage errors either.
    """
    x, y, d, c, t = scene.arrays()
    keep = np.flatnonzero(c > 0)
    if keep.size == 0:
        return 0.0
    try:
        p = pixel_probs(x[keep], y[keep], d[keep], t[keep], T, params)
    except CoverageError as exc:
        k = int(keep[exc.index])
        err = CoverageError(f"pixel {k}: {exc}")
        err.index = k
        raise err from None
    return math.fsum((c[keep] * np.log(p)).tolist())


@dataclass(frozen=True)
class LikelihoodProfile:
    delta_t: np.ndarray
    log_p: np.ndarray

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("delta_t_s", "log_p"))
            for dt, lp in zip(self.delta_t, self.log_p):
                w.writerow((repr(float(dt)), repr(float(lp))))


def _disk_weights(params: LikelihoodParams, points_per_sigma: int):
    """Midpoint nodes and Gaussian weights on the disk of radius ``kernel_radius * sigma``.

    Returns the along-normal nodes, the full ``(n, n)`` tensor-product weight
    array (zero outside the disk), and its normalisation.
    """
    reach = params.kernel_radius * params.sigma
    n = int(math.ceil(2 * params.kernel_radius * points_per_sigma))
    h = 2 * reach / n
    y = -reach + h * (np.arange(n) + 0.5)
    r2 = y[:, None] ** 2 + y[None, :] ** 2
    w = np.where(r2 <= reach * reach, np.exp(-r2 / (2 * params.sigma**2)), 0.0)
    return y, w, w.sum()


def line_detect_prob(delta_t, R: float, params: LikelihoodParams, two_d: bool = True, points_per_sigma: int = 32):
    """P(d=1) at a pixel on a straight fire line, by tensor-product midpoint quadrature.

    ``delta_t`` is the scan time minus the arrival time at the pixel centre
    and the front moves at speed ``R``.  The Gaussian is truncated to the
    same disk of radius ``kernel_radius * sigma`` as the discrete kernel and
    renormalised.  The integrand depends on the along-normal offset only, so
    ``two_d=False`` sums the weights across the front first and evaluates a
    1-D quadrature with identical weights.
    """
    if not R > 0:
        raise ParameterError(f"rate of spread must be positive, got {R}")
    if points_per_sigma < 8:
        raise ParameterError("quadrature needs at least 8 points per sigma")
    dts = np.atleast_1d(np.asarray(delta_t, dtype=float))
    y, w, total = _disk_weights(params, points_per_sigma)
    # arrival at offset y is T(x) + y / R
    h = heat_fraction(dts[:, None], y[None, :] / R, params.c_decay)
    p1 = _outcome_prob(h, np.int64(1), params)  # (n_dt, n_y1)
    _split_front_cell(p1, dts, y, R, params)
    if two_d:
        out = np.einsum("ki,ij->k", p1, w) / total
    else:
        out = p1 @ (w.sum(axis=1) / total)
    return np.clip(out, PROB_FLOOR, 1.0)


def _split_front_cell(p1, dts, y, R, params):
    """Resolve the arrival jump inside the one quadrature cell that holds it.

    The heat fraction drops to zero across the front at ``y = R * delta_t``;
    the cell containing that point gets the burned and unburned values
    averaged by their share of the cell, which removes the first-order
    staircase error of the plain midpoint rule.
    """
    step = y[1] - y[0]
    left = y[0] - step / 2
    front = R * dts
    k = np.floor((front - left) / step).astype(int)
    rows = np.flatnonzero((k >= 0) & (k < y.size))
    if rows.size == 0:
        return
    k = k[rows]
    frac = (front[rows] - (left + k * step)) / step
    y_burn = left + k * step + frac * step / 2
    burned = _outcome_prob(heat_fraction(dts[rows], y_burn / R, params.c_decay), np.int64(1), params)
    unburned = _outcome_prob(0.0, np.int64(1), params)
    p1[rows, k] = frac * burned + (1 - frac) * unburned


def likelihood_profile(
    t_range, n_samples: int, R: float, params: LikelihoodParams, points_per_sigma: int = 32
) -> LikelihoodProfile:
    """Log detection probability on a straight fire line over sampled ``t_scan - T(x)``."""
    if n_samples < 2:
        raise ParameterError(f"n_samples must be >= 2, got {n_samples}")
    t_lo, t_hi = float(t_range[0]), float(t_range[1])
    if not t_lo < t_hi:
        raise ParameterError(f"t_range must be increasing, got {t_range}")
    dts = np.linspace(t_lo, t_hi, n_samples)
    return LikelihoodProfile(dts, np.log(line_detect_prob(dts, R, params, points_per_sigma=points_per_sigma)))


@dataclass(frozen=True)
class ProfileSummary:
    floor: float
    max_log_p: float
    peak_delta_t: float
    rise_width: float
    fall_width: float


def _crossing(x, y, level, lo, hi, step):
    """First ``x`` between indices lo and hi where ``y`` crosses ``level``, interpolated."""
    for k in range(lo, hi, step):
        a, b = y[k], y[k + step]
        if (a - level) * (b - level) <= 0 and a != b:
            return x[k] + (level - a) * (x[k + step] - x[k]) / (b - a)
    return math.nan


def summarize_profile(profile: LikelihoodProfile, p_false: float) -> ProfileSummary:
    """Floor, peak, and edge widths of a profile.

    The rise width runs from ``ln(p_false) + 1`` up to ``max - 0.1`` before
    the peak; the fall width runs from ``max - 0.1`` back down to
    ``ln(p_false) + 1`` after it.  A width is NaN when the sampled range
    does not reach the relevant level.
    """
    x, y = profile.delta_t, profile.log_p
    k = int(np.argmax(y))
    top = float(y[k])
    low = math.log(p_false) + 1.0
    hi_level = top - 0.1
    rise_lo = _crossing(x, y, low, k, 0, -1)
    rise_hi = _crossing(x, y, hi_level, k, 0, -1)
    fall_hi = _crossing(x, y, hi_level, k, len(x) - 1, 1)
    fall_lo = _crossing(x, y, low, k, len(x) - 1, 1)
    return ProfileSummary(
        floor=float(y.min()),
        max_log_p=top,
        peak_delta_t=float(x[k]),
        rise_width=rise_hi - rise_lo,
        fall_width=fall_lo - fall_hi,
    )
