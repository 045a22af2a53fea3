"""Data likelihood of satellite active-fire detections and ignition estimation."""

from firelik.detection import (
    DetectionPixel,
    DetectionScene,
    LikelihoodParams,
    detect_prob,
    heat_fraction,
    logistic_params,
    pixel_prob,
    pixel_probs,
)
from firelik.errors import BoundsError, CoverageError, FirelikError, ParameterError
from firelik.geometry import GridSpec, ScalarField, read_field_csv, write_field_csv
from firelik.likelihood import (
    LikelihoodProfile,
    likelihood_profile,
    line_detect_prob,
    scene_log_likelihood,
    summarize_profile,
)
from firelik.search import CandidateGrid, SearchResult, grid_search, surface_slice
from firelik.spread import (
    ConeModel,
    IgnitionCandidate,
    LatticeModel,
    LatticeSolver,
    RosParams,
    cone_arrival,
    dome_terrain,
    northeast_wind,
    ros,
    solve_arrival,
)
from firelik.synth import PerimeterPlacement, pixels_on_perimeter, sample_detections

__version__ = "0.1.0"
