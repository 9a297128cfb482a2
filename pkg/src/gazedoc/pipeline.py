"""Gaze stream processing: validity gating, velocity-threshold phase
classification, and recency-weighted smoothing over the fixation window.

A sample is Invalid when the tracker flags it, Saccade when the angular
velocity against the previous valid sample exceeds the configured threshold,
and Fixation otherwise. Entering Fixation after a Saccade/Invalid break resets
the window; the window never holds samples older than fixation_window_s behind
the newest. The smoothed point is the normalized recency-weighted mean of the
window's directions (weight lambda^(t_last - t_i)).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .config import EngineConfig
from .geometry import Ray, Vec3, angular_distance, normalize


class StreamOrderError(ValueError):
    """Raised when sample timestamps are not strictly increasing."""


class Phase(Enum):
    FIXATION = "fixation"
    SACCADE = "saccade"
    INVALID = "invalid"


@dataclass
class ButtonState:
    trigger_pressed: bool = False
    grab_pressed: bool = False
    trackpad_dy: float = 0.0
    lens_toggle_pressed: bool = False


@dataclass
class GazeSample:
    t: float
    ray: Ray
    valid: bool = True
    buttons: ButtonState = field(default_factory=ButtonState)


@dataclass
class FixationEstimate:
    phase: Phase
    point: Vec3 | None  # smoothed gaze direction; None while Invalid
    window_ts: list[float]
    fixation_start_t: float | None

    def to_record(self) -> dict:
        return {
            "phase": self.phase.value,
            "point": None if self.point is None else [float(c) for c in self.point],
            "window_ts": list(self.window_ts),
            "fixation_start_t": self.fixation_start_t,
        }


def classify_phase(
    last_valid: tuple[float, Vec3] | None, sample: GazeSample, velocity_threshold_deg_s: float
) -> Phase:
    """Phase of one sample given the previous valid sample (if any)."""
    if not sample.valid:
        return Phase.INVALID
    if last_valid is None:
        return Phase.FIXATION
    dt = sample.t - last_valid[0]
    velocity = angular_distance(last_valid[1], sample.ray.direction) / dt
    return Phase.SACCADE if velocity > velocity_threshold_deg_s else Phase.FIXATION


def smooth(window: list[tuple[float, Vec3]], lambda_per_s: float) -> Vec3:
    """Normalized recency-weighted mean of window directions.

    Weights are lambda^(t_last - t_i); lambda = 1 degenerates to the
    arithmetic mean. The window must be non-empty.
    """
    if not window:
        raise ValueError("smooth() requires a non-empty window")
    t_last = window[-1][0]
    ts = np.array([t for t, _ in window])
    dirs = np.array([d for _, d in window])
    weights = lambda_per_s ** (t_last - ts)
    return normalize(weights @ dirs)


class GazePipeline:
    """Stateful per-stream processor; one instance per gaze stream."""

    def __init__(self, config: EngineConfig):
        self.config = config
        self._last_t: float | None = None
        self._last_valid: tuple[float, Vec3] | None = None
        self._window: list[tuple[float, Vec3]] = []
        self._fixation_start_t: float | None = None

    def step(self, sample: GazeSample) -> FixationEstimate:
        if self._last_t is not None and sample.t <= self._last_t:
            raise StreamOrderError(
                f"sample t={sample.t} is not after previous t={self._last_t}"
            )
        self._last_t = sample.t

        phase = classify_phase(self._last_valid, sample, self.config.saccade_velocity_deg_s)
        if phase is Phase.INVALID:
            self._window.clear()
            self._fixation_start_t = None
            return FixationEstimate(Phase.INVALID, None, [], None)

        direction = sample.ray.direction
        self._last_valid = (sample.t, direction)

        if phase is Phase.SACCADE:
            self._window.clear()
            self._fixation_start_t = None
            return FixationEstimate(Phase.SACCADE, direction, [], None)

        if not self._window:
            self._fixation_start_t = sample.t
        self._window.append((sample.t, direction))
        cutoff = sample.t - self.config.fixation_window_s
        while self._window and self._window[0][0] < cutoff:
            self._window.pop(0)
        point = smooth(self._window, self.config.smoothing_lambda_per_s)
        return FixationEstimate(
            Phase.FIXATION,
            point,
            [t for t, _ in self._window],
            self._fixation_start_t,
        )


# --- trace file IO: one JSON object per line ---

TRACE_FIELDS = (
    "t",
    "ox",
    "oy",
    "oz",
    "dx",
    "dy",
    "dz",
    "valid",
    "trigger",
    "grab",
    "trackpad_dy",
    "lens_toggle",
)


def sample_to_record(s: GazeSample) -> dict:
    return {
        "t": s.t,
        "ox": float(s.ray.origin[0]),
        "oy": float(s.ray.origin[1]),
        "oz": float(s.ray.origin[2]),
        "dx": float(s.ray.direction[0]),
        "dy": float(s.ray.direction[1]),
        "dz": float(s.ray.direction[2]),
        "valid": s.valid,
        "trigger": s.buttons.trigger_pressed,
        "grab": s.buttons.grab_pressed,
        "trackpad_dy": s.buttons.trackpad_dy,
        "lens_toggle": s.buttons.lens_toggle_pressed,
    }


def record_to_sample(rec: dict) -> GazeSample:
    direction = np.array([rec["dx"], rec["dy"], rec["dz"]], dtype=float)
    if rec.get("valid", True):
        # normalize only off-unit inputs: well-formed traces pass through
        # bit-identically (live vs offline determinism depends on it)
        n = float(np.linalg.norm(direction))
        if abs(n - 1.0) > 1e-9:
            direction = direction / n
    return GazeSample(
        t=float(rec["t"]),
        ray=Ray(np.array([rec["ox"], rec["oy"], rec["oz"]], dtype=float), direction),
        valid=bool(rec.get("valid", True)),
        buttons=ButtonState(
            trigger_pressed=bool(rec.get("trigger", False)),
            grab_pressed=bool(rec.get("grab", False)),
            trackpad_dy=float(rec.get("trackpad_dy", 0.0)),
            lens_toggle_pressed=bool(rec.get("lens_toggle", False)),
        ),
    )


def write_trace(path, samples) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for s in samples:
            f.write(json.dumps(sample_to_record(s), separators=(",", ":")) + "\n")


def read_trace(path) -> list[GazeSample]:
    samples = []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
                samples.append(record_to_sample(rec))
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise ValueError(f"{path}: bad trace record on line {lineno}: {exc}") from exc
    return samples
