"""Command-line entry point: ``firelik {profile,simulate,synth,estimate}``."""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from pathlib import Path

from firelik.config import RunConfig, load_config
from firelik.detection import DetectionPixel, DetectionScene
from firelik.errors import BoundsError, FirelikError, ParameterError
from firelik.geometry import write_field_csv
from firelik.likelihood import likelihood_profile, summarize_profile
from firelik.search import grid_search, surface_slice, write_slice_csv
from firelik.spread import IgnitionCandidate
from firelik.synth import pixels_on_perimeter, sample_detections

SCENE_HEADER = ("t_scan_s", "x_m", "y_m", "detect", "confidence")


class SceneFormatError(FirelikError, ValueError):
    pass


def ingest_scene(path) -> DetectionScene:
    """Read a detection CSV (``t_scan_s,x_m,y_m,detect,confidence``)."""
    path = Path(path)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(c.strip() for c in rows[0]) != SCENE_HEADER:
        raise SceneFormatError(f"{path}: expected header {','.join(SCENE_HEADER)}")
    pixels = []
    for rowno, row in enumerate(rows[1:], 2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(SCENE_HEADER):
            raise SceneFormatError(f"{path}: row {rowno}: expected 5 columns, got {len(row)}")
        try:
            t, x, y = (float(c) for c in row[:3])
            conf = float(row[4])
            d = float(row[3])
        except ValueError:
            raise SceneFormatError(f"{path}: row {rowno}: non-numeric value") from None
        if d not in (0.0, 1.0):
            raise SceneFormatError(f"{path}: row {rowno}: detect must be 0 or 1, got {row[3].strip()}")
        if not 0.0 <= conf <= 1.0:
            raise SceneFormatError(f"{path}: row {rowno}: confidence must lie in [0, 1], got {conf}")
        if not all(math.isfinite(v) for v in (t, x, y)):
            raise SceneFormatError(f"{path}: row {rowno}: time and coordinates must be finite")
        pixels.append(DetectionPixel((x, y), int(d), conf, t))
    return DetectionScene(tuple(pixels))


def emit_scene(scene: DetectionScene, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SCENE_HEADER)
        for p in scene:
            w.writerow((repr(p.t_scan), repr(p.center[0]), repr(p.center[1]), p.d, repr(p.confidence)))


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_profile(cfg: RunConfig, out: Path) -> dict:
    params = cfg.likelihood_params()
    prof = likelihood_profile((cfg.profile_t_min_s, cfg.profile_t_max_s), cfg.profile_n, cfg.ros_m_s, params)
    prof.write_csv(out / "profile.csv")
    s = summarize_profile(prof, params.p_false)
    return {
        "floor": s.floor,
        "max": s.max_log_p,
        "peak_delta_t_s": s.peak_delta_t,
        "rise_width_s": s.rise_width,
        "fall_width_s": s.fall_width,
    }


def cmd_simulate(cfg: RunConfig, out: Path, ignition=None) -> dict:
    ign = ignition or cfg.ignition()
    grid = cfg.grid()
    if not grid.contains(ign.point):
        raise BoundsError(f"ignition point {ign.point} outside the grid")
    T = cfg.forward().solver(grid)(ign)
    write_field_csv(T, out / "arrival.csv")
    return {"x_m": ign.point[0], "y_m": ign.point[1], "t0_s": ign.t0, "spread": cfg.spread}


def cmd_synth(cfg: RunConfig, out: Path, seed: int | None = None) -> dict:
    grid = cfg.grid()
    ign = cfg.ignition()
    if not grid.contains(ign.point):
        raise BoundsError(f"ignition point {ign.point} outside the grid")
    T = cfg.forward().solver(grid)(ign)
    placement = cfg.placement()
    scene = pixels_on_perimeter(T, placement)
    if cfg.synth_mode == "sampled":
        centers = [p.center for p in scene]
        scene = sample_detections(
            T, centers, placement.scan_time, cfg.likelihood_params(), cfg.seed if seed is None else seed
        )
    emit_scene(scene, out / "scene.csv")
    return {"n_pixels": len(scene), "n_detected": sum(p.d for p in scene)}


def cmd_estimate(cfg: RunConfig, out: Path, scene_paths=(), workers=None) -> dict:
    paths = list(scene_paths) or cfg.scene_paths()
    if not paths:
        raise ParameterError("no detection scenes given (set 'scenes' or pass --scene)")
    scenes = [ingest_scene(p) for p in paths]
    result = grid_search(cfg.candidates(), scenes, cfg.forward(), cfg.likelihood_params(), cfg.grid(), workers)
    result.write_surface_csv(out / "surface.csv")
    result.write_json(out / "best.json")
    for t in dict.fromkeys(r.t0 for r in result.surface):
        write_slice_csv(surface_slice(result, t), out / f"slice_t0_{t:g}.csv")
    return result.summary()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value run configuration (defaults if omitted)")
    common.add_argument("--out", default=".", help="output directory (default: current)")
    common.add_argument("--seed", type=int, help="random seed (overrides config)")
    common.add_argument("--workers", type=int, help="worker threads for estimate (default: CPU count)")

    parser = argparse.ArgumentParser(
        prog="firelik",
        description="Active-fire detection likelihood and maximum-likelihood ignition search.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("profile", parents=[common], help="straight fire-line detection log-likelihood profile")
    sim = sub.add_parser("simulate", parents=[common], help="arrival-time field for one ignition")
    sim.add_argument("--ignition", nargs=3, type=float, metavar=("X", "Y", "T0"))
    sub.add_parser("synth", parents=[common], help="synthetic detection scene on a fire perimeter")
    est = sub.add_parser("estimate", parents=[common], help="grid search for the ignition point and time")
    est.add_argument("--scene", action="append", default=[], help="detection CSV (repeatable)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        out = _out_dir(args)
        started = time.perf_counter()
        if args.command == "profile":
            info = cmd_profile(cfg, out)
        elif args.command == "simulate":
            ign = IgnitionCandidate(args.ignition[:2], args.ignition[2]) if args.ignition else None
            info = cmd_simulate(cfg, out, ign)
        elif args.command == "synth":
            info = cmd_synth(cfg, out, args.seed)
        else:
            if args.workers is not None and args.workers < 1:
                raise ParameterError("--workers must be >= 1")
            info = cmd_estimate(cfg, out, args.scene, args.workers or os.cpu_count())
    except (FirelikError, OSError) as exc:
        msg = " ".join(str(exc).split())
        print(f"error: {type(exc).__name__}: {msg}", file=sys.stderr)
        return 1
    print(json.dumps(info))
    print(f"elapsed_s={time.perf_counter() - started:.3f}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
