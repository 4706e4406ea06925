"""Synthetic scenes, symbol extraction and tracking metrics."""
from .features import Detector, detections, extract_symbols
from .metrics import EvalReport, TrackRow, evaluate, iou, read_tracks, write_tracks
from .pgm import read_pgm, write_pgm
from .render import Frame, GroundTruth, render, render_all
from .scenario import (ObjectSpec, Scenario, ScenarioError, crossing_scenario, format_scenario,
                       load_scenario, parse_scenario, random_template)

__all__ = [
    "Detector", "detections", "extract_symbols", "EvalReport", "TrackRow", "evaluate", "iou",
    "read_tracks", "write_tracks", "read_pgm", "write_pgm", "Frame", "GroundTruth", "render",
    "render_all", "ObjectSpec", "Scenario", "ScenarioError", "crossing_scenario",
    "format_scenario", "load_scenario", "parse_scenario", "random_template",
]
