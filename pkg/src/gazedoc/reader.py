"""Scripted synthetic reader: compiles mode-agnostic reading intents into a
fixed-rate sample stream (gaze rays in gaze mode, controller rays in baseline).

The generator runs the engine closed-loop while emitting samples, so dwell
lengths and scroll counts always match what the engine actually does; the
stored trace then replays bit-identically through an offline run.

Reading order is center-out (by |angle|): a snapped panel sits dead ahead and
would occlude inner semicircle positions, so the reader clears the center
first and aims at unoccluded parts of partially covered panels, exactly as a
person peeks past a front window.

Tracker noise is modelled as a per-fixation accuracy offset (|N(0, std)|
degrees in a random direction, constant for the fixation) plus an optional
small per-sample jitter. Accuracy-sized noise applied per sample would exceed
the saccade velocity threshold on every sample at 120 Hz and defeat fixation
detection outright.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .document import DocumentPanel, line_fixation_uv, nearest_hit, panel_point, topmost_hit
from .geometry import Ray, horizontal, normalize, vec3
from .pipeline import ButtonState, GazeSample
from .scenario import Scenario
from .simulate import SessionRunner

ACCURACY_BAND_DEG = (0.5, 1.1)


class TraceGenerationError(RuntimeError):
    pass


@dataclass
class ReaderModel:
    wpm: float = 200.0
    fixations_per_line: int = 3
    noise_std_deg: float = 0.0  # 0 (off) or within the tracker accuracy band
    jitter_std_deg: float = 0.0  # per-sample; keep well under the velocity threshold
    decision_delay_s: float = 0.5
    seed: int = 0
    max_duration_s: float = 1800.0

    def __post_init__(self):
        if self.wpm <= 0:
            raise ValueError("wpm must be positive")
        if self.fixations_per_line < 1:
            raise ValueError("fixations_per_line must be >= 1")
        lo, hi = ACCURACY_BAND_DEG
        if self.noise_std_deg != 0.0 and not (lo <= self.noise_std_deg <= hi):
            raise ValueError(f"noise_std_deg must be 0 or within [{lo}, {hi}]")
        if not (0.0 <= self.jitter_std_deg <= 0.1):
            raise ValueError("jitter_std_deg must be in [0, 0.1]")


def _perturb(rng: np.random.Generator, direction: np.ndarray, std_deg: float) -> np.ndarray:
    """Rotate by |N(0, std)| degrees around a random axis perpendicular to direction."""
    if std_deg <= 0.0:
        return direction
    angle = math.radians(rng.normal(0.0, std_deg))
    phi = rng.uniform(0.0, 2.0 * math.pi)
    helper = vec3(0, 1, 0) if abs(direction[1]) < 0.9 else vec3(1, 0, 0)
    e1 = normalize(np.cross(direction, helper))
    e2 = np.cross(direction, e1)
    axis = math.cos(phi) * e1 + math.sin(phi) * e2
    # Rodrigues rotation of `direction` about the perpendicular `axis`
    c, s = math.cos(angle), math.sin(angle)
    return normalize(direction * c + np.cross(axis, direction) * s)


class _Emitter:
    def __init__(self, scenario: Scenario, reader: ReaderModel, mode: str):
        config = scenario.config.with_overrides({"mode": mode})
        self.config = config
        self.runner = SessionRunner(scenario.build_scene(), config)
        self.reader = reader
        self.rng = np.random.default_rng(reader.seed)
        self.rate = config.sample_rate_hz
        self.samples: list[GazeSample] = []
        self.script: list[np.ndarray] = []  # intended (pre-noise) direction per sample
        self.i = 0

    @property
    def scene(self):
        return self.runner.scene

    @property
    def t(self) -> float:
        return self.i / self.rate

    @property
    def head_pos(self):
        return self.scene.head.position

    def emit(self, direction, origin=None, valid=True, trigger=False, grab=False,
             trackpad_dy=0.0, lens_toggle=False, intended=None) -> None:
        if self.t > self.reader.max_duration_s:
            raise TraceGenerationError(
                f"trace exceeded max_duration_s={self.reader.max_duration_s} at t={self.t:.1f}"
            )
        origin = self.head_pos.copy() if origin is None else np.asarray(origin, dtype=float)
        direction = np.asarray(direction, dtype=float)
        s = GazeSample(
            t=self.i / self.rate,
            ray=Ray(origin, direction),
            valid=valid,
            buttons=ButtonState(trigger, grab, trackpad_dy, lens_toggle),
        )
        self.runner.feed(s)
        self.samples.append(s)
        self.script.append(direction if intended is None else intended)
        self.i += 1

    # --- aiming ---

    def direction_to(self, panel: DocumentPanel, uv) -> np.ndarray:
        return normalize(panel_point(panel, uv) - self.head_pos)

    def visible_uv(self, panel: DocumentPanel, picker) -> tuple[float, float]:
        """A uv on `panel` whose sight line reaches it (per the mode's picker)."""
        candidates = [(0.5, 0.5)]
        for du in (0.15, 0.3, 0.42):
            for u in (0.5 - du, 0.5 + du):
                for v in (0.5, 0.35, 0.65):
                    candidates.append((u, v))
        docs = self.scene.document_panels()
        for uv in candidates:
            got = picker(Ray(self.head_pos.copy(), self.direction_to(panel, uv)), docs)
            if got is not None and got[0].panel_id == panel.panel_id:
                return uv
        raise TraceGenerationError(
            f"panel {panel.panel_id!r} is fully occluded from the head position"
        )

    def fixate(self, panel: DocumentPanel, uv, n_samples: int, **buttons) -> None:
        """One fixation: constant accuracy offset, optional per-sample jitter."""
        target = self.direction_to(panel, uv)
        base = _perturb(self.rng, target, self.reader.noise_std_deg)
        for _ in range(n_samples):
            d = _perturb(self.rng, base, self.reader.jitter_std_deg)
            self.emit(d, intended=target, **buttons)

    def seconds(self, s: float) -> int:
        return max(1, int(round(s * self.rate)))


def _reading_order(scenario: Scenario) -> list[str]:
    order = sorted(scenario.documents, key=lambda d: (abs(d.placement.angle_deg), d.placement.angle_deg))
    return [d.content.id for d in order]


def _line_samples(em: _Emitter, line_words: int) -> int:
    seconds = line_words / (em.reader.wpm / 60.0)
    per_fix = seconds / em.reader.fixations_per_line
    return max(1, int(round(per_fix * em.rate)))


def _read_visible_rows(em: _Emitter, panel: DocumentPanel, next_line: int) -> int:
    """Read every unread visible line with left-to-right fixations; returns the
    next unread absolute line index."""
    strip = em.config.scroll_button_strip_frac
    fpl = em.reader.fixations_per_line
    while True:
        window = panel.visible_window()
        row = next_line - panel.scroll_line
        if row < 0:  # content scrolled past; continue from the top of the window
            next_line = panel.scroll_line
            continue
        if row >= len(window):
            return next_line
        words = max(1, len(window[row].text.split()))
        n = _line_samples(em, words)
        for k in range(fpl):
            uv = line_fixation_uv(panel, row, (k + 0.5) / fpl, strip)
            em.fixate(panel, uv, n)
        next_line += 1


def _dwell_scroll_down(em: _Emitter, panel: DocumentPanel, needed_line: int) -> None:
    """Dwell on the bottom button until needed_line becomes visible."""
    strip = em.config.scroll_button_strip_frac
    uv = (0.5, 1.0 - strip / 2.0)
    stale = 0
    last_scroll = panel.scroll_line
    limit = em.seconds(em.config.scroll_dwell_s) * 12
    while needed_line >= panel.scroll_line + panel.layout.visible_lines:
        em.fixate(panel, uv, em.seconds(em.config.scroll_dwell_s / 4))
        if panel.scroll_line == last_scroll:
            stale += 1
            if panel.scroll_line >= panel.max_scroll:
                return
            if stale > limit:
                raise TraceGenerationError(
                    f"scroll dwell on {panel.panel_id!r} made no progress "
                    f"(scroll_line={panel.scroll_line}, max={panel.max_scroll})"
                )
        else:
            stale = 0
            last_scroll = panel.scroll_line


def _read_document_gaze(em: _Emitter, panel_id: str) -> None:
    panel = em.scene.panels[panel_id]
    engine = em.runner.engine
    # acquire + snap; a noisy fixation can land on an occluder at the trigger
    # instant and snap the wrong panel, so verify and retry
    for attempt in range(10):
        inner = 0
        while engine.focused_panel_id != panel_id:
            uv = em.visible_uv(panel, topmost_hit)
            em.fixate(panel, uv, em.seconds(0.3))
            inner += 1
            if inner > 10:
                raise TraceGenerationError(f"could not acquire focus on {panel_id!r}")
        uv = em.visible_uv(panel, topmost_hit)
        em.fixate(panel, uv, 2, trigger=True)
        em.fixate(panel, uv, 1)
        if engine.snapped_panel_id == panel_id:
            break
    else:
        raise TraceGenerationError(f"could not snap {panel_id!r}")

    next_line = 0
    total = panel.layout.total_lines
    while next_line < total:
        next_line = _read_visible_rows(em, panel, next_line)
        if next_line >= total:
            break
        _dwell_scroll_down(em, panel, next_line)
    em.fixate(panel, (0.5, 0.5), em.seconds(em.reader.decision_delay_s))


def _read_document_baseline(em: _Emitter, panel_id: str) -> None:
    panel = em.scene.panels[panel_id]
    engine = em.runner.engine
    cfg = em.config
    # select: hold the trigger while pointing at an unoccluded spot; the noisy
    # pointer can catch a nearer panel, so verify the selection and retry
    for attempt in range(10):
        uv = em.visible_uv(panel, nearest_hit)
        em.fixate(panel, uv, 2, trigger=True)
        em.fixate(panel, uv, 1)
        if engine.baseline_selected_panel_id == panel_id:
            break
    else:
        raise TraceGenerationError(f"could not select {panel_id!r}")
    # grab-drag the panel to reading distance along its bearing
    for attempt in range(10):
        uv = em.visible_uv(panel, nearest_hit)
        aim = em.direction_to(panel, uv)
        em.emit(aim, grab=True)
        if engine.baseline_grabbed_panel_id == panel_id:
            break
        em.emit(aim, grab=False)  # wrong panel caught: release and retry
    else:
        raise TraceGenerationError(f"could not grab {panel_id!r}")
    bearing = horizontal(panel.pose.position - em.head_pos)
    target = em.head_pos + cfg.snap_distance_m * normalize(bearing)
    target[1] = panel.pose.position[1]
    delta = target - panel.pose.position
    steps = em.seconds(0.6)
    for k in range(steps):
        origin = em.head_pos + delta * ((k + 1) / steps)
        em.emit(aim, origin=origin, grab=True)
    em.emit(aim, origin=em.head_pos + delta, grab=False)

    next_line = 0
    total = panel.layout.total_lines
    while next_line < total:
        next_line = _read_visible_rows(em, panel, next_line)
        if next_line >= total:
            break
        # trackpad: one line per sample until the next unread line is visible
        dy = 1.0 / cfg.baseline_scroll_lines_per_unit
        guard = 0
        while next_line >= panel.scroll_line + panel.layout.visible_lines:
            em.fixate(panel, (0.5, 0.5), 1, trackpad_dy=dy)
            guard += 1
            if panel.scroll_line >= panel.max_scroll:
                break
            if guard > 10 * panel.layout.total_lines:
                raise TraceGenerationError(
                    f"trackpad scrolling on {panel_id!r} made no progress"
                )
    em.fixate(panel, (0.5, 0.5), em.seconds(em.reader.decision_delay_s))


def generate_trace(
    scenario: Scenario, reader: ReaderModel, mode: str, return_script: bool = False
):
    """Sample stream enacting the scenario's reading intents under `mode`.

    With return_script=True also returns the intended (pre-noise) direction
    per sample, for measuring tracker-noise deviation against the script.
    """
    if mode not in ("gaze", "baseline"):
        raise ValueError(f"unknown mode {mode!r}")
    em = _Emitter(scenario, reader, mode)
    for panel_id in _reading_order(scenario):
        if mode == "gaze":
            _read_document_gaze(em, panel_id)
        else:
            _read_document_baseline(em, panel_id)
    if return_script:
        return em.samples, em.script
    return em.samples
