"""Every tunable threshold of the engine, in one dataclass.

Defaults follow the interaction design: lens within 0.5 m after a 1.5 s dwell
at 150% magnification, one sentence per 0.5 s of button dwell, a 9-line view
box of ~65-character lines at 1.2 spacing, and a 120 Hz tracker with a 30 deg/s
saccade velocity threshold.
"""

from __future__ import annotations

from dataclasses import dataclass, fields


@dataclass
class EngineConfig:
    mode: str = "gaze"  # "gaze" | "baseline"

    # select & snap
    snap_distance_m: float = 0.45
    highlight_off_hysteresis_s: float = 0.1
    cycle_dwell_s: float = 1.0

    # magnifier lens
    lens_enabled: bool = True
    lens_max_distance_m: float = 0.5
    lens_dwell_s: float = 1.5
    lens_magnification: float = 1.5
    lens_words_span: int = 4
    lens_lines_span: int = 3
    lens_camera_standoff_m: float = 0.1

    # dwell scrolling
    scroll_dwell_s: float = 0.5
    scroll_button_strip_frac: float = 0.08

    # gaze pipeline
    saccade_velocity_deg_s: float = 30.0
    fixation_window_s: float = 0.25
    smoothing_lambda_per_s: float = 0.5
    sample_rate_hz: float = 120.0

    # document layout
    chars_per_line: int = 65
    visible_lines: int = 9
    line_spacing: float = 1.2
    panel_width_m: float = 0.6
    panel_height_m: float = 0.4

    # baseline mode
    baseline_scroll_lines_per_unit: float = 3.0

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.mode not in ("gaze", "baseline"):
            raise ValueError(f"unknown mode {self.mode!r}")
        positive = [
            "snap_distance_m",
            "highlight_off_hysteresis_s",
            "cycle_dwell_s",
            "lens_max_distance_m",
            "lens_dwell_s",
            "lens_camera_standoff_m",
            "scroll_dwell_s",
            "saccade_velocity_deg_s",
            "fixation_window_s",
            "sample_rate_hz",
            "line_spacing",
            "panel_width_m",
            "panel_height_m",
            "baseline_scroll_lines_per_unit",
        ]
        for name in positive:
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")
        if not self.lens_magnification > 1.0:
            raise ValueError("lens_magnification must be > 1")
        if not (0.0 < self.smoothing_lambda_per_s <= 1.0):
            raise ValueError("smoothing_lambda_per_s must be in (0, 1]")
        if not (0.0 <= self.scroll_button_strip_frac < 0.5):
            raise ValueError("scroll_button_strip_frac must be in [0, 0.5)")
        for name in ("lens_words_span", "lens_lines_span", "chars_per_line", "visible_lines"):
            if not getattr(self, name) >= 1:
                raise ValueError(f"{name} must be >= 1")

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_dict(cls, d: dict) -> "EngineConfig":
        unknown = set(d) - {f.name for f in fields(cls)}
        if unknown:
            raise KeyError(f"unknown config fields: {sorted(unknown)}")
        return cls(**d)

    def with_overrides(self, overrides: dict) -> "EngineConfig":
        """New config with the given fields replaced; unknown keys raise KeyError."""
        merged = self.to_dict()
        unknown = set(overrides) - set(merged)
        if unknown:
            raise KeyError(f"unknown config fields: {sorted(unknown)}")
        merged.update(overrides)
        return EngineConfig(**merged)


def parse_override(text: str) -> tuple[str, object]:
    """Parse one 'key=value' override with the value typed per the config field."""
    if "=" not in text:
        raise ValueError(f"override {text!r} is not of the form key=value")
    key, raw = text.split("=", 1)
    key = key.strip()
    field_types = {f.name: f.type for f in fields(EngineConfig)}
    if key not in field_types:
        raise KeyError(f"unknown config field {key!r}")
    ftype = field_types[key]
    raw = raw.strip()
    if ftype in ("bool", bool):
        if raw.lower() in ("1", "true", "yes", "on"):
            return key, True
        if raw.lower() in ("0", "false", "no", "off"):
            return key, False
        raise ValueError(f"override {key}: expected a boolean, got {raw!r}")
    if ftype in ("int", int):
        return key, int(raw)
    if ftype in ("float", float):
        return key, float(raw)
    return key, raw
