"""Flat ``key = value`` run configuration.

Lines starting with ``#`` (and trailing ``# ...``) are comments.  Unknown
keys are rejected.  Missing keys take the defaults below, which use the
detection constants of the reference setup: sigma 2000 m, 2 h heat decay,
0.1% false detection rate, and 50% detection at 1% heat fraction.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, fields
from pathlib import Path

from firelik.detection import LikelihoodParams
from firelik.errors import FirelikError
from firelik.geometry import GridSpec, read_field_csv
from firelik.search import CandidateGrid
from firelik.spread import (
    ConeModel,
    IgnitionCandidate,
    LatticeModel,
    RosParams,
    dome_terrain,
)
from firelik.synth import PerimeterPlacement


class ConfigError(FirelikError, ValueError):
    def __init__(self, message: str, key: str | None = None):
        super().__init__(message)
        self.key = key


@dataclass(frozen=True)
class RunConfig:
    # model grid
    nx: int = 101
    ny: int = 101
    dx: float = 10.0
    dy: float = 10.0
    origin_x: float = 0.0
    origin_y: float = 0.0
    # detection likelihood
    p_false: float = 0.001
    f_half: float = 0.01
    sigma_m: float = 2000.0
    c_decay_s: float = 7200.0
    kernel_radius: float = 4.0
    # forward model
    spread: str = "cone"
    ros_m_s: float = 1.0
    wind_u_m_s: float = 0.0
    wind_v_m_s: float = 0.0
    wind_coeff: float = 0.0
    slope_coeff: float = 0.0
    terrain: str = ""  # "", "dome", or a field CSV path
    dome_height_m: float = 100.0
    dome_radius_m: float = 600.0
    # ignition used by simulate and synth
    ignition_x_m: float = 500.0
    ignition_y_m: float = 500.0
    ignition_t0_s: float = 30.0
    # candidate grid
    cand_x0_m: float = 420.0
    cand_y0_m: float = 420.0
    cand_nx: int = 10
    cand_ny: int = 10
    cand_spacing_m: float = 20.0
    cand_t0_s: float = 10.0
    cand_n_times: int = 5
    cand_dt_s: float = 10.0
    # synthetic scene
    level_time_s: float = 300.0
    n_pixels: int = 8
    scan_time_s: float = -1.0  # negative means "same as level_time_s"
    confidence: float = 1.0
    synth_mode: str = "perimeter"  # or "sampled"
    # likelihood profile
    profile_t_min_s: float = -12000.0
    profile_t_max_s: float = 72000.0
    profile_n: int = 841
    # io
    scenes: str = ""  # comma-separated scene CSV paths
    seed: int = 0

    def __post_init__(self):
        for key, (ok, rule) in _CHECKS.items():
            if not ok(getattr(self, key)):
                raise ConfigError(f"key {key!r}: {rule}, got {getattr(self, key)!r}", key)
        if not self.profile_t_min_s < self.profile_t_max_s:
            raise ConfigError("key 'profile_t_max_s': must exceed profile_t_min_s", "profile_t_max_s")
        if 0 <= self.scan_time_s < self.level_time_s:
            raise ConfigError("key 'scan_time_s': must not precede level_time_s", "scan_time_s")
        if self.terrain not in ("", "dome") and not Path(self.terrain).is_file():
            raise ConfigError(f"key 'terrain': file not found: {self.terrain}", "terrain")
        for p in self.scene_paths():
            if not p.is_file():
                raise ConfigError(f"key 'scenes': file not found: {p}", "scenes")

    def grid(self) -> GridSpec:
        return GridSpec(self.nx, self.ny, self.dx, self.dy, (self.origin_x, self.origin_y))

    def likelihood_params(self) -> LikelihoodParams:
        return LikelihoodParams(
            p_false=self.p_false,
            f_half=self.f_half,
            sigma=self.sigma_m,
            c_decay=self.c_decay_s,
            kernel_radius=self.kernel_radius,
        )

    def terrain_field(self):
        if self.terrain == "":
            return None
        if self.terrain == "dome":
            return dome_terrain(self.grid(), self.dome_height_m, self.dome_radius_m)
        return read_field_csv(self.terrain)

    def forward(self):
        if self.spread == "cone":
            return ConeModel(self.ros_m_s)
        return LatticeModel(
            RosParams(
                r0=self.ros_m_s,
                wind=(self.wind_u_m_s, self.wind_v_m_s),
                wind_coeff=self.wind_coeff,
                slope_coeff=self.slope_coeff,
                terrain=self.terrain_field(),
            )
        )

    def ignition(self) -> IgnitionCandidate:
        return IgnitionCandidate((self.ignition_x_m, self.ignition_y_m), self.ignition_t0_s)

    def candidates(self) -> CandidateGrid:
        return CandidateGrid.regular(
            self.cand_x0_m, self.cand_y0_m, self.cand_nx, self.cand_ny,
            self.cand_spacing_m, self.cand_t0_s, self.cand_n_times, self.cand_dt_s,
        )

    def placement(self) -> PerimeterPlacement:
        scan = self.level_time_s if self.scan_time_s < 0 else self.scan_time_s
        return PerimeterPlacement(self.level_time_s, self.n_pixels, scan, self.confidence)

    def scene_paths(self) -> list[Path]:
        return [Path(s.strip()) for s in self.scenes.split(",") if s.strip()]


_FIELDS = {f.name: f for f in fields(RunConfig)}

_POSITIVE = (lambda v: v > 0, "must be positive")
_CHECKS = {
    "nx": (lambda v: v >= 2, "must be >= 2"),
    "ny": (lambda v: v >= 2, "must be >= 2"),
    "dx": _POSITIVE,
    "dy": _POSITIVE,
    "p_false": (lambda v: 0 < v < 0.5, "must lie in (0, 0.5)"),
    "f_half": (lambda v: 0 < v <= 1, "must lie in (0, 1]"),
    "sigma_m": _POSITIVE,
    "c_decay_s": _POSITIVE,
    "kernel_radius": (lambda v: v >= 3, "must be >= 3"),
    "spread": (lambda v: v in ("cone", "lattice"), "must be 'cone' or 'lattice'"),
    "ros_m_s": _POSITIVE,
    "wind_coeff": (lambda v: v >= 0, "must be >= 0"),
    "slope_coeff": (lambda v: v >= 0, "must be >= 0"),
    "dome_radius_m": _POSITIVE,
    "cand_nx": (lambda v: v >= 1, "must be >= 1"),
    "cand_ny": (lambda v: v >= 1, "must be >= 1"),
    "cand_n_times": (lambda v: v >= 1, "must be >= 1"),
    "n_pixels": (lambda v: v >= 1, "must be >= 1"),
    "confidence": (lambda v: 0 <= v <= 1, "must lie in [0, 1]"),
    "synth_mode": (lambda v: v in ("perimeter", "sampled"), "must be 'perimeter' or 'sampled'"),
    "profile_n": (lambda v: v >= 2, "must be >= 2"),
}


def _convert(kind, raw: str):
    if kind is int or kind == "int":
        return int(raw)
    if kind is float or kind == "float":
        return float(raw)
    return raw


def parse_config(text: str, source: str = "<config>") -> RunConfig:
    values = {}
    lines = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {body!r}")
        key, raw = (s.strip() for s in body.split("=", 1))
        if key not in _FIELDS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        try:
            values[key] = _convert(_FIELDS[key].type, raw)
        except ValueError:
            raise ConfigError(
                f"{source}:{lineno}: key {key!r} expects {_FIELDS[key].type}, got {raw!r}"
            ) from None
        lines[key] = lineno
    try:
        return RunConfig(**values)
    except ConfigError as exc:
        line = f":{lines[exc.key]}" if exc.key in lines else ""
        raise ConfigError(f"{source}{line}: {exc}", exc.key) from None


def load_config(path) -> RunConfig:
    path = Path(path)
    return parse_config(path.read_text(), str(path))


def dump_config(cfg: RunConfig) -> str:
    out = []
    for name, value in dataclasses.asdict(cfg).items():
        out.append(f"{name} = {value!r}" if isinstance(value, float) else f"{name} = {value}")
    return "\n".join(out) + "\n"


def save_config(cfg: RunConfig, path) -> None:
    Path(path).write_text(dump_config(cfg))
