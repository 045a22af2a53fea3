import math
import warnings

import numpy as np
import pytest

from firelik.detection import LikelihoodParams, detect_prob
from firelik.errors import BoundsError, ParameterError
from firelik.geometry import GridSpec, ScalarField
from firelik.spread import IgnitionCandidate, cone_arrival
from firelik.synth import (
    PerimeterPlacement,
    _canonical,
    level_contours,
    pixels_on_perimeter,
    place_along,
    ring_centers,
    sample_detections,
)

GRID = GridSpec(101, 101, 10.0, 10.0)
CONE = cone_arrival(IgnitionCandidate((500, 500), 30.0), 1.0, GRID)


def test_eight_pixels_on_cone_perimeter():
    scene = pixels_on_perimeter(CONE, PerimeterPlacement(300.0))
    assert len(scene) == 8
    for p in scene:
        r = math.hypot(p.center[0] - 500, p.center[1] - 500)
        assert abs(r - 270.0) <= 10.0
        assert p.d == 1 and p.confidence == 1.0 and p.t_scan == 300.0


def test_pixels_equally_spaced_in_angle():
    scene = pixels_on_perimeter(CONE, PerimeterPlacement(300.0))
    ang = np.sort([math.atan2(p.center[1] - 500, p.center[0] - 500) for p in scene])
    gaps = np.diff(np.concatenate((ang, ang[:1] + 2 * math.pi)))
    assert np.allclose(gaps, 2 * math.pi / 8, atol=0.03)


def test_first_pixel_is_northernmost():
    scene = pixels_on_perimeter(CONE, PerimeterPlacement(300.0))
    ys = [p.center[1] for p in scene]
    assert ys[0] == max(ys)


def test_single_pixel():
    scene = pixels_on_perimeter(CONE, PerimeterPlacement(300.0, n_pixels=1))
    assert len(scene) == 1
    assert abs(math.hypot(scene[0].center[0] - 500, scene[0].center[1] - 500) - 270.0) <= 10.0


def test_level_before_ignition_rejected():
    with pytest.raises(ParameterError, match="perimeter"):
        pixels_on_perimeter(CONE, PerimeterPlacement(10.0))


def test_level_beyond_domain_rejected():
    with pytest.raises(ParameterError):
        pixels_on_perimeter(CONE, PerimeterPlacement(1e6))


def test_scan_time_before_level_rejected():
    with pytest.raises(ParameterError, match="precedes"):
        PerimeterPlacement(300.0, scan_time=200.0)


def test_later_scan_time_kept():
    scene = pixels_on_perimeter(CONE, PerimeterPlacement(300.0, scan_time=450.0, confidence=0.3))
    assert all(p.t_scan == 450.0 and p.confidence == 0.3 for p in scene)


def test_canonical_ignores_traversal_order():
    path = level_contours(CONE, 300.0)[0]
    ring = path[:-1]
    rolled = np.roll(ring, 17, axis=0)
    variants = [path, np.vstack((ring[::-1], ring[-1:])), np.vstack((rolled, rolled[:1]))]
    pts = [place_along(_canonical(v, True), 8, True) for v in variants]
    for p in pts[1:]:
        assert np.allclose(p, pts[0], atol=1e-9)


def test_place_along_open_path_midpoints():
    path = np.array([[0.0, 0.0], [10.0, 0.0]])
    assert np.allclose(place_along(path, 2, closed=False), [[2.5, 0.0], [7.5, 0.0]])


def test_unburned_region_handled():
    vals = CONE.values.copy()
    vals[vals > 400] = np.inf
    T = ScalarField(GRID, vals)
    scene = pixels_on_perimeter(T, PerimeterPlacement(300.0))
    assert len(scene) == 8


def test_ring_centers():
    c = ring_centers((0.0, 0.0), 2.0, 4)
    assert np.allclose(c, [[0, 2], [-2, 0], [0, -2], [2, 0]], atol=1e-12)


# sample_detections

def _binomial_ok(k, n, p):
    return abs(k - n * p) <= 3 * math.sqrt(n * p * (1 - p))


def test_unburned_field_detects_at_false_rate():
    params = LikelihoodParams(sigma=50.0)
    T = ScalarField.constant(GRID, math.inf)
    n = 100_000
    centers = np.full((n, 2), 500.0)
    scene = sample_detections(T, centers, 0.0, params, seed=1)
    k = sum(p.d for p in scene)
    assert _binomial_ok(k, n, params.p_false)


def test_fresh_fire_detects_at_full_heat_rate():
    params = LikelihoodParams(sigma=50.0, c_decay=600.0)
    T = ScalarField.constant(GRID, 100.0)
    n = 100_000
    scene = sample_detections(T, np.full((n, 2), 500.0), 100.0, params, seed=2)
    k = sum(p.d for p in scene)
    assert _binomial_ok(k, n, float(detect_prob(1.0, params)))


def test_seed_determinism():
    params = LikelihoodParams(sigma=100.0, c_decay=300.0)
    centers = ring_centers((500, 500), 270.0, 200)
    a = sample_detections(CONE, centers, 300.0, params, seed=7)
    b = sample_detections(CONE, centers, 300.0, params, seed=7)
    c = sample_detections(CONE, centers, 300.0, params, seed=8)
    assert a == b
    assert [p.d for p in a] != [p.d for p in c]


def test_tiny_sigma_reads_centre_node():
    params = LikelihoodParams(sigma=1e-6, c_decay=600.0)
    inside = [(500.0, 500.0)] * 2000
    scene = sample_detections(CONE, inside, 300.0, params, seed=3)
    p = float(detect_prob(math.exp(-270.0 / 600.0), params))
    assert _binomial_ok(sum(q.d for q in scene), 2000, p)
    outside = [(900.0, 900.0)] * 2000
    scene = sample_detections(CONE, outside, 300.0, params, seed=3)
    assert _binomial_ok(sum(q.d for q in scene), 2000, params.p_false)


def test_clamp_warns():
    params = LikelihoodParams(sigma=1e6)
    with pytest.warns(UserWarning, match="clamped"):
        scene = sample_detections(CONE, [(0.0, 0.0)] * 5, 300.0, params, seed=0)
    assert len(scene) == 5


def test_no_warning_when_draws_fit():
    params = LikelihoodParams(sigma=10.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        sample_detections(CONE, [(500.0, 500.0)] * 50, 300.0, params, seed=0)


def test_centre_outside_grid_rejected():
    with pytest.raises(BoundsError):
        sample_detections(CONE, [(-50.0, 0.0)], 300.0, LikelihoodParams(sigma=10.0), seed=0)
