"""Deterministic run loop: feed a gaze trace through the pipeline and engine,
collect the event log, and compute run metrics.

Metric definitions:
- reading_time_s: last sample t minus first sample t (zero for empty traces)
- per_document_gaze_s: time attributed to the panel under the gaze (smoothed
  fixation hit in gaze mode, controller-ray hit in baseline); each inter-sample
  interval is attributed to the panel gazed at its left endpoint
- lens_active_fraction: lens-on time / reading time, same left-endpoint rule
- selection_attempts: trigger press edges
- snap_count / scroll_event_count / event_counts: tallies from the event log
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .config import EngineConfig
from .engine import InteractionEngine, InteractionEvent, Scene
from .pipeline import GazePipeline, GazeSample
from .scenario import Scenario


@dataclass
class MetricsReport:
    mode: str
    reading_time_s: float = 0.0
    per_document_gaze_s: dict[str, float] = field(default_factory=dict)
    lens_active_fraction: float = 0.0
    scroll_event_count: int = 0
    selection_attempts: int = 0
    snap_count: int = 0
    event_counts: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "reading_time_s": self.reading_time_s,
            "per_document_gaze_s": dict(sorted(self.per_document_gaze_s.items())),
            "lens_active_fraction": self.lens_active_fraction,
            "scroll_event_count": self.scroll_event_count,
            "selection_attempts": self.selection_attempts,
            "snap_count": self.snap_count,
            "event_counts": dict(sorted(self.event_counts.items())),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


class SessionRunner:
    """Pipeline + engine + metrics for one sample stream.

    Both the offline run loop and the live session service feed samples
    through this one code path, which is what makes live sessions replay
    bit-identically offline.
    """

    def __init__(self, scene: Scene, config: EngineConfig):
        self.config = config
        self.engine = InteractionEngine(scene, config)
        self.pipeline = GazePipeline(config)
        self.events: list[InteractionEvent] = []
        self._first_t: float | None = None
        self._prev_t: float | None = None
        self._prev_gazed: str | None = None
        self._prev_lens_on = False
        self._prev_trigger = False
        self._gaze_s: dict[str, float] = {}
        self._lens_s = 0.0
        self._selection_attempts = 0

    @property
    def scene(self) -> Scene:
        return self.engine.scene

    def feed(self, sample: GazeSample) -> list[InteractionEvent]:
        est = self.pipeline.step(sample)
        out = self.engine.step(sample, est)
        self.events.extend(out)

        if self._first_t is None:
            self._first_t = sample.t
        if self._prev_t is not None:
            dt = sample.t - self._prev_t
            if self._prev_gazed is not None:
                self._gaze_s[self._prev_gazed] = self._gaze_s.get(self._prev_gazed, 0.0) + dt
            if self._prev_lens_on:
                self._lens_s += dt
        if sample.buttons.trigger_pressed and not self._prev_trigger:
            self._selection_attempts += 1
        self._prev_t = sample.t
        self._prev_gazed = self.engine.last_gazed_panel_id
        self._prev_lens_on = self.engine.lens_on
        self._prev_trigger = sample.buttons.trigger_pressed
        return out

    def metrics(self) -> MetricsReport:
        reading = 0.0
        if self._first_t is not None and self._prev_t is not None:
            reading = self._prev_t - self._first_t
        counts: dict[str, int] = {}
        for e in self.events:
            counts[e.kind] = counts.get(e.kind, 0) + 1
        return MetricsReport(
            mode=self.config.mode,
            reading_time_s=reading,
            per_document_gaze_s=dict(self._gaze_s),
            lens_active_fraction=(self._lens_s / reading) if reading > 0 else 0.0,
            scroll_event_count=counts.get("scroll", 0),
            selection_attempts=self._selection_attempts,
            snap_count=counts.get("snap", 0),
            event_counts=counts,
        )


def run(scenario: Scenario, samples: list[GazeSample]) -> tuple[list[InteractionEvent], MetricsReport]:
    """Run a trace against a fresh scene built from the scenario."""
    runner = SessionRunner(scenario.build_scene(), scenario.config)
    for s in samples:
        runner.feed(s)
    return runner.events, runner.metrics()


def compare_modes(scenario: Scenario, reader) -> list[MetricsReport]:
    """Paired run: the same reader intents under gaze and baseline mode."""
    from .reader import generate_trace  # local import to avoid a cycle

    reports = []
    for mode in ("gaze", "baseline"):
        sc = Scenario.from_dict(scenario.to_dict())
        sc.config = sc.config.with_overrides({"mode": mode})
        samples = generate_trace(sc, reader, mode)
        _, report = run(sc, samples)
        reports.append(report)
    return reports


def diff_event_logs(a: list[dict], b: list[dict]) -> str | None:
    """First divergence between two event logs, or None when identical."""
    for i, (ra, rb) in enumerate(zip(a, b)):
        if ra != rb:
            return f"event {i}: {json.dumps(ra, sort_keys=True)} != {json.dumps(rb, sort_keys=True)}"
    if len(a) != len(b):
        return f"length mismatch: {len(a)} vs {len(b)} events"
    return None
