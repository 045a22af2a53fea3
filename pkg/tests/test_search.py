import math

import numpy as np
import pytest

from firelik.detection import DetectionPixel, DetectionScene, LikelihoodParams
from firelik.errors import BoundsError, ParameterError
from firelik.geometry import GridSpec
from firelik.search import CandidateGrid, grid_search, surface_slice, write_slice_csv
from firelik.spread import ConeModel, IgnitionCandidate, cone_arrival
from firelik.synth import PerimeterPlacement, pixels_on_perimeter

GRID = GridSpec(101, 101, 10.0, 10.0)
PARAMS = LikelihoodParams(sigma=50.0)


def _cone_scene(truth=IgnitionCandidate((500, 500), 30.0), level=300.0, conf=1.0):
    T = cone_arrival(truth, 1.0, GRID)
    return pixels_on_perimeter(T, PerimeterPlacement(level, 8, confidence=conf))


@pytest.fixture(scope="module")
def small_result():
    cands = CandidateGrid.regular(460, 460, 5, 5, 20.0, 10.0, 3, 20.0)
    return grid_search(cands, _cone_scene(), ConeModel(1.0), PARAMS, GRID, workers=1)


def test_small_replication_finds_truth_point(small_result):
    assert small_result.best.point == (500.0, 500.0)
    assert small_result.best.t0 <= 30.0
    assert small_result.n_evaluated == 75
    assert len(small_result.surface) == 75


def test_surface_is_points_major(small_result):
    rows = small_result.surface
    assert [r.t0 for r in rows[:3]] == [10.0, 30.0, 50.0]
    assert (rows[0].x, rows[0].y) == (460.0, 460.0)
    assert (rows[3].x, rows[3].y) == (480.0, 460.0)


def test_slice_at_best_time_has_best_as_max(small_result):
    sl = surface_slice(small_result, small_result.best.t0)
    assert max(r.loglik for r in sl) == small_result.best_loglik
    assert len(sl) == 25


def test_global_max_over_slices_is_best(small_result):
    tops = [max(r.loglik for r in surface_slice(small_result, t)) for t in (10.0, 30.0, 50.0)]
    assert max(tops) == small_result.best_loglik


def test_unknown_slice_time_lists_available(small_result):
    with pytest.raises(ParameterError, match=r"10\.0, 30\.0, 50\.0"):
        surface_slice(small_result, 20.0)


def test_single_time_slice_is_whole_surface():
    cands = CandidateGrid.regular(480, 480, 3, 3, 20.0, 30.0, 1, 10.0)
    res = grid_search(cands, _cone_scene(), ConeModel(1.0), PARAMS, GRID, workers=1)
    assert tuple(surface_slice(res, 30.0)) == res.surface


def test_worker_count_does_not_change_result():
    cands = CandidateGrid.regular(460, 460, 4, 4, 20.0, 10.0, 3, 20.0)
    scene = _cone_scene()
    a = grid_search(cands, scene, ConeModel(1.0), PARAMS, GRID, workers=1)
    b = grid_search(cands, scene, ConeModel(1.0), PARAMS, GRID, workers=4)
    assert a.surface == b.surface
    assert a.best == b.best


def test_tie_break_prefers_earliest_then_lexicographic():
    # a scene of missing pixels plus one unburned-everywhere pixel gives equal scores
    scene = DetectionScene((DetectionPixel((10.0, 10.0), 0, 1.0, 0.0),))
    cands = CandidateGrid(((600.0, 500.0), (500.0, 600.0), (500.0, 500.0)), (40.0, 20.0))
    res = grid_search(cands, scene, ConeModel(1.0), PARAMS, GRID, workers=1)
    assert len({r.loglik for r in res.surface}) == 1
    assert res.best == IgnitionCandidate((500.0, 500.0), 20.0)


def test_tie_break_is_order_independent():
    scene = DetectionScene((DetectionPixel((10.0, 10.0), 0, 1.0, 0.0),))
    pts = [(600.0, 500.0), (500.0, 600.0), (500.0, 500.0)]
    bests = {
        grid_search(CandidateGrid(tuple(p), (20.0,)), scene, ConeModel(1.0), PARAMS, GRID, workers=1).best
        for p in (pts, pts[::-1], pts[1:] + pts[:1])
    }
    assert len(bests) == 1


def test_argmax_invariant_to_confidence_scaling():
    cands = CandidateGrid.regular(460, 460, 5, 5, 20.0, 10.0, 3, 20.0)
    full = grid_search(cands, _cone_scene(conf=1.0), ConeModel(1.0), PARAMS, GRID, workers=1)
    half = grid_search(cands, _cone_scene(conf=0.5), ConeModel(1.0), PARAMS, GRID, workers=1)
    assert full.best == half.best
    assert half.best_loglik == pytest.approx(0.5 * full.best_loglik, rel=1e-12)


def test_single_candidate():
    cands = CandidateGrid(((500.0, 500.0),), (30.0,))
    res = grid_search(cands, _cone_scene(), ConeModel(1.0), PARAMS, GRID, workers=1)
    assert res.best == IgnitionCandidate((500.0, 500.0), 30.0)
    assert res.n_evaluated == 1


def test_uncovered_pixel_scores_minus_inf():
    # kernel window of a pixel far outside the grid is empty
    scene = DetectionScene(
        (DetectionPixel((500.0, 500.0), 1, 1.0, 300.0), DetectionPixel((5000.0, 5000.0), 1, 1.0, 300.0))
    )
    cands = CandidateGrid(((500.0, 500.0), (520.0, 500.0)), (30.0,))
    res = grid_search(cands, scene, ConeModel(1.0), PARAMS, GRID, workers=1)
    assert all(r.loglik == -math.inf for r in res.surface)
    assert res.best == IgnitionCandidate((500.0, 500.0), 30.0)


def test_all_zero_confidence_rejected():
    cands = CandidateGrid(((500.0, 500.0),), (30.0,))
    with pytest.raises(ParameterError, match="confidences"):
        grid_search(cands, _cone_scene(conf=0.0), ConeModel(1.0), PARAMS, GRID)


def test_candidate_outside_grid_rejected():
    cands = CandidateGrid(((500.0, 500.0), (2000.0, 0.0)), (30.0,))
    with pytest.raises(BoundsError, match="2000"):
        grid_search(cands, _cone_scene(), ConeModel(1.0), PARAMS, GRID)


def test_empty_candidate_grid_rejected():
    with pytest.raises(ParameterError):
        CandidateGrid((), (0.0,))


def test_multiple_scenes_add():
    cands = CandidateGrid.regular(480, 480, 3, 3, 20.0, 10.0, 2, 20.0)
    s1 = _cone_scene(level=200.0)
    s2 = _cone_scene(level=300.0)
    both = grid_search(cands, [s1, s2], ConeModel(1.0), PARAMS, GRID, workers=1)
    a = grid_search(cands, s1, ConeModel(1.0), PARAMS, GRID, workers=1)
    b = grid_search(cands, s2, ConeModel(1.0), PARAMS, GRID, workers=1)
    for rb, r1, r2 in zip(both.surface, a.surface, b.surface):
        assert rb.loglik == pytest.approx(r1.loglik + r2.loglik, rel=1e-12)


def test_outputs_round_trip(small_result, tmp_path):
    small_result.write_surface_csv(tmp_path / "s.csv")
    data = np.loadtxt(tmp_path / "s.csv", delimiter=",", skiprows=1)
    assert data.shape == (75, 4)
    assert data[:, 3].max() == small_result.best_loglik
    write_slice_csv(surface_slice(small_result, 10.0), tmp_path / "sl.csv")
    assert (tmp_path / "sl.csv").read_text().splitlines()[0] == "x_m,y_m,loglik"
    small_result.write_json(tmp_path / "b.json")
    import json

    assert json.loads((tmp_path / "b.json").read_text())["x_m"] == 500.0
