"""Interaction state machines over a panel scene.

Gaze mode runs three machines off the smoothed fixation estimate:

- select & snap: fixating a document panel highlights it; a trigger press
  snaps it upright in front of the head at the configured distance; piles of
  overlapping panels cycle their hidden members to the front while the user
  keeps dwelling without selecting
- magnifier lens: arms when the user fixates a document within
  lens_max_distance_m, turns on after lens_dwell_s of continuous satisfaction,
  follows the smoothed gaze, and drops on any condition failure (short
  tracker gaps up to fixation_window_s are tolerated); a manual toggle can
  force it off or on
- dwell scrolling: fixating a scroll-button strip owes one sentence per
  scroll_dwell_s of continuous dwell; leaving the strip resets the dwell

Baseline mode instead consumes the raw sample ray as a controller pointer:
held-trigger raycast selection, grab-follow translation, and trackpad line
scrolling.

All machines are strictly deterministic functions of the sample stream.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .config import EngineConfig
from .document import (
    DocumentContent,
    DocumentPanel,
    effective_strip_frac,
    nearest_hit,
    panel_point,
    scroll_by_sentences,
    stack_under_ray,
    strip_under_uv,
    topmost_hit,
)
from .geometry import (
    UNIT_TOL,
    Hit,
    Pose,
    Ray,
    horizontal,
    normalize,
    quat_from_matrix,
    upright_pose_facing,
    vec3,
)
from .pipeline import FixationEstimate, GazeSample, Phase, StreamOrderError

DWELL_EPS = 1e-9  # guards floor() at exact dwell-quantum boundaries


@dataclass
class InteractionEvent:
    t: float
    kind: str
    data: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        rec = {"t": self.t, "kind": self.kind}
        rec.update(self.data)
        return rec

    def to_json(self) -> str:
        return json.dumps(self.to_record(), separators=(",", ":"))


@dataclass
class LensRegion:
    panel_id: str
    center_uv: tuple[float, float]
    width_uv: float
    height_uv: float
    magnification: float
    camera: Pose

    def to_record(self) -> dict:
        return {
            "panel": self.panel_id,
            "center_uv": [self.center_uv[0], self.center_uv[1]],
            "width_uv": self.width_uv,
            "height_uv": self.height_uv,
            "magnification": self.magnification,
            "camera": self.camera.to_dict(),
        }


@dataclass
class Scene:
    panels: dict[str, DocumentPanel]
    contents: dict[str, DocumentContent]
    head: Pose

    def document_panels(self) -> list[DocumentPanel]:
        return [p for p in self.panels.values() if p.is_document]

    def promote(self, panel: DocumentPanel) -> None:
        """Raise the panel to the top z-rank (no-op if already topmost)."""
        top = max(p.z_rank for p in self.panels.values())
        if panel.z_rank != top:
            panel.z_rank = top + 1

    def validate_ranks(self) -> None:
        ranks = [p.z_rank for p in self.panels.values()]
        if len(set(ranks)) != len(ranks):
            raise ValueError("panel z-ranks must be unique")


def snap_pose(head: Pose, config: EngineConfig) -> Pose:
    """Upright reading pose: snap_distance_m along the horizontal projection of
    head forward, normal facing back at the head, up = world up."""
    fh = horizontal(head.forward())
    if float(np.linalg.norm(fh)) < UNIT_TOL:
        fh = horizontal(head.up())
    if float(np.linalg.norm(fh)) < UNIT_TOL:
        fh = vec3(0.0, 0.0, -1.0)
    fh = normalize(fh)
    position = head.position + config.snap_distance_m * fh
    return upright_pose_facing(position, head.position)


def lens_region(panel: DocumentPanel, gaze_uv: tuple[float, float], config: EngineConfig) -> LensRegion:
    """Magnified sub-view around the gaze point: lens_words_span mean word
    widths by lens_lines_span text lines, clamped to fit inside the panel."""
    layout = panel.layout
    mean_chars = layout.mean_word_chars if layout.mean_word_chars > 0 else 6.0
    width_uv = min(1.0, config.lens_words_span * mean_chars / layout.chars_per_line)
    s = effective_strip_frac(panel, config.scroll_button_strip_frac)
    height_uv = min(1.0, config.lens_lines_span * (1.0 - 2.0 * s) / layout.visible_lines)
    cu = min(1.0 - width_uv / 2.0, max(width_uv / 2.0, gaze_uv[0]))
    cv = min(1.0 - height_uv / 2.0, max(height_uv / 2.0, gaze_uv[1]))

    _, up, normal = panel.pose.axes()
    anchor = panel_point(panel, gaze_uv)
    cam_pos = anchor + config.lens_camera_standoff_m * normal
    # camera forward (-Z) anti-parallel to the panel normal, up aligned with panel up
    z = normal
    y = up
    x = np.cross(y, z)
    camera = Pose(cam_pos, quat_from_matrix(np.column_stack([x, y, z])))
    return LensRegion(
        panel_id=panel.panel_id,
        center_uv=(cu, cv),
        width_uv=width_uv,
        height_uv=height_uv,
        magnification=config.lens_magnification,
        camera=camera,
    )


def cycle_overlap(
    scene: Scene, stack: list[DocumentPanel], cursor: int
) -> tuple[DocumentPanel, int]:
    """Promote the next hidden panel of the stack (top first) to the front.

    Over n consecutive cycles every panel of an n-panel stack becomes topmost
    exactly once. Returns (promoted panel, next cursor).
    """
    if not stack:
        raise ValueError("cycle_overlap requires a non-empty stack")
    n = len(stack)
    idx = min((cursor % n) + 1, n - 1)
    promoted = stack[idx]
    scene.promote(promoted)
    return promoted, cursor + 1


class InteractionEngine:
    """One engine instance = one session; step() is strictly sequential."""

    def __init__(self, scene: Scene, config: EngineConfig):
        scene.validate_ranks()
        self.scene = scene
        self.config = config

        self._last_t: float | None = None
        self._prev_buttons = None

        # select & snap
        self._focused: str | None = None
        self._focus_last_on_t = 0.0
        self._snapped: str | None = None
        self._stack_key: frozenset | None = None
        self._stack_t0 = 0.0
        self._stack_last_ok_t = 0.0
        self._cycle_cursor = 0

        # lens: "off" | "armed" | "on" | "manual_off"
        self._lens_status = "off"
        self._lens_panel: str | None = None
        self._lens_t0 = 0.0
        self._lens_last_ok_t = 0.0
        self._lens_current: LensRegion | None = None

        # dwell scrolling
        self._scroll_key: tuple[str, str] | None = None  # (panel, "up"/"down")
        self._scroll_t0 = 0.0
        self._scroll_emitted = 0
        self._scroll_last_ok_t = 0.0

        # baseline
        self._baseline_selected: str | None = None
        self._baseline_grabbed: str | None = None
        self._grab_last_origin = None
        self._hold_selected = False
        self._trackpad_acc = 0.0

        # last-step observations (service deltas, metrics, manual toggle)
        self._last_gazed: str | None = None
        self._last_hit: Hit | None = None
        self._last_phase: Phase = Phase.INVALID

    # --- public surface ---

    @property
    def lens_on(self) -> bool:
        return self._lens_status == "on"

    @property
    def lens_region_current(self) -> LensRegion | None:
        return self._lens_current if self._lens_status == "on" else None

    @property
    def last_gazed_panel_id(self) -> str | None:
        return self._last_gazed

    @property
    def focused_panel_id(self) -> str | None:
        return self._focused

    @property
    def snapped_panel_id(self) -> str | None:
        return self._snapped

    @property
    def baseline_selected_panel_id(self) -> str | None:
        return self._baseline_selected

    @property
    def baseline_grabbed_panel_id(self) -> str | None:
        return self._baseline_grabbed

    def step(self, sample: GazeSample, est: FixationEstimate) -> list[InteractionEvent]:
        if self._last_t is not None and sample.t <= self._last_t:
            raise StreamOrderError(f"step t={sample.t} is not after previous t={self._last_t}")
        self._last_t = sample.t
        t = sample.t
        prev = self._prev_buttons
        self._prev_buttons = sample.buttons
        trigger_edge = sample.buttons.trigger_pressed and not (prev and prev.trigger_pressed)
        grab_edge = sample.buttons.grab_pressed and not (prev and prev.grab_pressed)
        grab_release = (prev and prev.grab_pressed) and not sample.buttons.grab_pressed
        toggle_edge = sample.buttons.lens_toggle_pressed and not (
            prev and prev.lens_toggle_pressed
        )

        events: list[InteractionEvent] = []
        if self.config.mode == "baseline":
            self._baseline_step(sample, t, trigger_edge, grab_edge, grab_release, events)
        else:
            gazed, hit = self._gaze_target(est)
            self._last_gazed = gazed.panel_id if gazed else None
            self._last_hit = hit
            self._last_phase = est.phase
            self._focus_step(gazed, est, t, events)
            self._cycle_step(gazed, est, t, events)
            self._snap_step(trigger_edge, t, events)
            self._lens_step(gazed, hit, est, t, toggle_edge, events)
            self._scroll_step(gazed, hit, est, t, events)
        return events

    def manual_toggle(self) -> list[InteractionEvent]:
        """Lens toggle injected outside the sample stream (session service)."""
        events: list[InteractionEvent] = []
        t = self._last_t if self._last_t is not None else 0.0
        self._apply_toggle(t, events)
        return events

    def dwell_progress(self) -> dict:
        """Progress (0..1) toward each pending dwell activation, at the last step."""
        t = self._last_t if self._last_t is not None else 0.0
        lens = 0.0
        if self._lens_status == "armed":
            lens = min(1.0, (t - self._lens_t0) / self.config.lens_dwell_s)
        elif self._lens_status == "on":
            lens = 1.0
        scroll = 0.0
        if self._scroll_key is not None:
            q = self.config.scroll_dwell_s
            scroll = ((t - self._scroll_t0 + DWELL_EPS) % q) / q
        cycle = 0.0
        if self._stack_key is not None:
            cycle = min(1.0, (t - self._stack_t0) / self.config.cycle_dwell_s)
        return {"lens": lens, "scroll": scroll, "cycle": cycle}

    # --- gaze-mode machines ---

    def _gaze_target(self, est: FixationEstimate) -> tuple[DocumentPanel | None, Hit | None]:
        if est.phase is not Phase.FIXATION or est.point is None:
            return None, None
        ray = Ray(self.scene.head.position, est.point)
        got = topmost_hit(ray, self.scene.document_panels())
        if got is None:
            return None, None
        return got

    def _focus_step(self, gazed, est, t, events):
        if gazed is not None:
            if self._focused != gazed.panel_id:
                if self._focused is not None:
                    old = self.scene.panels[self._focused]
                    old.highlighted = False
                    events.append(InteractionEvent(t, "highlight_off", {"panel": old.panel_id}))
                gazed.highlighted = True
                self._focused = gazed.panel_id
                events.append(InteractionEvent(t, "highlight_on", {"panel": gazed.panel_id}))
            self._focus_last_on_t = t
        elif self._focused is not None:
            if t - self._focus_last_on_t >= self.config.highlight_off_hysteresis_s:
                old = self.scene.panels[self._focused]
                old.highlighted = False
                events.append(InteractionEvent(t, "highlight_off", {"panel": old.panel_id}))
                self._focused = None

    def _cycle_step(self, gazed, est, t, events):
        if est.phase is not Phase.FIXATION:
            if (
                self._stack_key is not None
                and t - self._stack_last_ok_t > self.config.fixation_window_s
            ):
                self._stack_key = None
            return
        if gazed is None:
            self._stack_key = None
            return
        ray = Ray(self.scene.head.position, est.point)
        stack = stack_under_ray(ray, self.scene.document_panels())
        # cycling applies only to piles whose top is not the panel being read
        if len(stack) < 2 or stack[0].panel_id == self._snapped:
            self._stack_key = None
            return
        key = frozenset(p.panel_id for p in stack)
        if key != self._stack_key:
            self._stack_key = key
            self._stack_t0 = t
            self._cycle_cursor = 0
        self._stack_last_ok_t = t
        if t - self._stack_t0 >= self.config.cycle_dwell_s:
            promoted, self._cycle_cursor = cycle_overlap(self.scene, stack, self._cycle_cursor)
            events.append(InteractionEvent(t, "cycle_foreground", {"panel": promoted.panel_id}))
            self._stack_t0 = t

    def _snap_step(self, trigger_edge, t, events):
        if not trigger_edge or self._focused is None:
            return
        panel = self.scene.panels[self._focused]
        pose = snap_pose(self.scene.head, self.config)
        panel.pose = pose
        self.scene.promote(panel)
        self._snapped = panel.panel_id
        self._stack_key = None
        self._cycle_cursor = 0
        events.append(InteractionEvent(t, "snap", {"panel": panel.panel_id, "pose": pose.to_dict()}))

    # --- lens machine ---

    def _lens_conditions(self, gazed, hit) -> bool:
        if gazed is None or hit is None:
            return False
        if not hit.distance < self.config.lens_max_distance_m:
            return False
        if strip_under_uv(gazed, hit.uv, self.config.scroll_button_strip_frac) is not None:
            return False
        return True

    def _lens_off(self, t, events, emit=True):
        if self._lens_status == "on" and emit:
            events.append(InteractionEvent(t, "lens_off", {"panel": self._lens_panel}))
        self._lens_status = "off"
        self._lens_panel = None
        self._lens_current = None

    def _apply_toggle(self, t, events):
        if self._lens_status == "on":
            self._lens_off(t, events)
            self._lens_status = "manual_off"
            return
        # off/armed/manual_off: force on right now if the conditions hold,
        # otherwise just return to automatic behavior
        self._lens_status = "off"
        gazed = self.scene.panels.get(self._last_gazed) if self._last_gazed else None
        if (
            self._last_phase is Phase.FIXATION
            and gazed is not None
            and self._lens_conditions(gazed, self._last_hit)
        ):
            region = lens_region(gazed, self._last_hit.uv, self.config)
            self._lens_status = "on"
            self._lens_panel = gazed.panel_id
            self._lens_current = region
            self._lens_last_ok_t = t
            events.append(InteractionEvent(t, "lens_on", {"region": region.to_record()}))

    def _lens_step(self, gazed, hit, est, t, toggle_edge, events):
        if not self.config.lens_enabled:
            self._lens_off(t, events)
            return
        if toggle_edge:
            self._apply_toggle(t, events)
        if self._lens_status == "manual_off":
            return

        if est.phase is Phase.FIXATION:
            if not self._lens_conditions(gazed, hit):
                self._lens_off(t, events)
                return
            if self._lens_status == "on" and gazed.panel_id != self._lens_panel:
                self._lens_off(t, events)
            if self._lens_status == "armed" and gazed.panel_id != self._lens_panel:
                self._lens_panel = gazed.panel_id
                self._lens_t0 = t
            if self._lens_status == "off":
                self._lens_status = "armed"
                self._lens_panel = gazed.panel_id
                self._lens_t0 = t
            self._lens_last_ok_t = t
            if self._lens_status == "armed" and t - self._lens_t0 >= self.config.lens_dwell_s:
                region = lens_region(gazed, hit.uv, self.config)
                self._lens_status = "on"
                self._lens_current = region
                events.append(InteractionEvent(t, "lens_on", {"region": region.to_record()}))
            elif self._lens_status == "on":
                region = lens_region(gazed, hit.uv, self.config)
                if region.center_uv != self._lens_current.center_uv:
                    self._lens_current = region
                    events.append(InteractionEvent(t, "lens_move", {"region": region.to_record()}))
        else:
            # saccade or tracker dropout: tolerate gaps up to the fixation window
            if self._lens_status in ("armed", "on"):
                if t - self._lens_last_ok_t > self.config.fixation_window_s:
                    self._lens_off(t, events)

    # --- dwell scrolling ---

    def _scroll_step(self, gazed, hit, est, t, events):
        if est.phase is not Phase.FIXATION:
            if (
                self._scroll_key is not None
                and t - self._scroll_last_ok_t > self.config.fixation_window_s
            ):
                self._scroll_key = None
            return
        btn = None
        if gazed is not None and gazed.scrollable:
            btn = strip_under_uv(gazed, hit.uv, self.config.scroll_button_strip_frac)
        if btn is None:
            self._scroll_key = None
            return
        key = (gazed.panel_id, btn)
        if key != self._scroll_key:
            self._scroll_key = key
            self._scroll_t0 = t
            self._scroll_emitted = 0
        self._scroll_last_ok_t = t
        owed = int(math.floor((t - self._scroll_t0 + DWELL_EPS) / self.config.scroll_dwell_s))
        while self._scroll_emitted < owed:
            self._scroll_emitted += 1
            delta = scroll_by_sentences(gazed, 1 if btn == "down" else -1)
            if delta != 0:
                events.append(
                    InteractionEvent(
                        t,
                        "scroll",
                        {
                            "panel": gazed.panel_id,
                            "direction": btn,
                            "sentences": 1,
                            "scroll_line": gazed.scroll_line,
                        },
                    )
                )

    # --- baseline machine ---

    def _baseline_step(self, sample, t, trigger_edge, grab_edge, grab_release, events):
        ray = sample.ray if sample.valid else None
        hit = nearest_hit(ray, self.scene.document_panels()) if ray is not None else None

        if trigger_edge:
            self._hold_selected = False
        if sample.buttons.trigger_pressed and not self._hold_selected and hit is not None:
            panel = hit[0]
            self._baseline_selected = panel.panel_id
            self._hold_selected = True
            events.append(InteractionEvent(t, "baseline_select", {"panel": panel.panel_id}))

        if grab_edge and hit is not None:
            panel = hit[0]
            self._baseline_grabbed = panel.panel_id
            self._grab_last_origin = np.array(ray.origin, dtype=float)
            events.append(InteractionEvent(t, "baseline_grab_start", {"panel": panel.panel_id}))
        elif sample.buttons.grab_pressed and self._baseline_grabbed is not None and ray is not None:
            panel = self.scene.panels[self._baseline_grabbed]
            delta = ray.origin - self._grab_last_origin
            panel.pose.position = panel.pose.position + delta
            self._grab_last_origin = np.array(ray.origin, dtype=float)
        if grab_release and self._baseline_grabbed is not None:
            events.append(
                InteractionEvent(t, "baseline_grab_end", {"panel": self._baseline_grabbed})
            )
            self._baseline_grabbed = None
            self._grab_last_origin = None

        dy = sample.buttons.trackpad_dy
        if dy != 0.0 and self._baseline_selected is not None:
            panel = self.scene.panels[self._baseline_selected]
            self._trackpad_acc += dy * self.config.baseline_scroll_lines_per_unit
            # truncate toward zero, absorbing float accumulation error
            acc = self._trackpad_acc
            lines = int(acc + DWELL_EPS) if acc >= 0 else int(acc - DWELL_EPS)
            if lines != 0:
                self._trackpad_acc -= lines
                old = panel.scroll_line
                panel.scroll_line = max(0, min(panel.max_scroll, old + lines))
                moved = panel.scroll_line - old
                if moved != 0:
                    events.append(
                        InteractionEvent(
                            t,
                            "baseline_scroll",
                            {
                                "panel": panel.panel_id,
                                "lines": moved,
                                "scroll_line": panel.scroll_line,
                            },
                        )
                    )

        self._last_gazed = hit[0].panel_id if hit is not None else None
        self._last_hit = hit[1] if hit is not None else None
        self._last_phase = Phase.FIXATION if sample.valid else Phase.INVALID


def write_event_log(path, events: list[InteractionEvent]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for e in events:
            f.write(e.to_json() + "\n")


def read_event_log(path) -> list[dict]:
    out = []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                out.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}: bad event record on line {lineno}: {exc}") from exc
    return out
