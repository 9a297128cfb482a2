#!/usr/bin/env python3
"""Walk the three gaze interactions end to end on a tiny scene.

Builds one long document straight ahead, then scripts a gaze stream by hand:
fixate the panel (highlight), click the trigger (snap to reading distance),
keep reading (the lens arms and turns on after 1.5 s), then stare at the
bottom scroll button (one sentence per 0.5 s). Prints the resulting events.
"""

import numpy as np

from gazedoc.document import panel_point
from gazedoc.engine import InteractionEngine
from gazedoc.geometry import Ray, normalize
from gazedoc.pipeline import ButtonState, GazePipeline, GazeSample
from gazedoc.scenario import build_task_scenario

scenario = build_task_scenario("T3", seed=1, config_overrides={"lens_enabled": True})
scene = scenario.build_scene()
config = scenario.config
engine = InteractionEngine(scene, config)
pipeline = GazePipeline(config)
panel = next(iter(scene.panels.values()))

RATE = config.sample_rate_hz
i = 0


def feed(direction, n, trigger=False):
    global i
    shown = []
    for _ in range(n):
        s = GazeSample(
            t=i / RATE,
            ray=Ray(scene.head.position.copy(), direction),
            buttons=ButtonState(trigger_pressed=trigger),
        )
        for e in engine.step(s, pipeline.step(s)):
            if e.kind != "lens_move":  # one per sample while on; keep the log readable
                shown.append(e)
        i += 1
    for e in shown:
        print(f"  t={e.t:7.3f}  {e.kind:18s} {e.data.get('panel', '')}")


def aim(uv):
    return normalize(panel_point(panel, uv) - scene.head.position)


print(f"panel {panel.panel_id!r}: {panel.layout.total_lines} lines, "
      f"{panel.max_scroll} max scroll, {np.linalg.norm(panel.pose.position - scene.head.position):.2f} m away")

print("\n1. fixate the panel center (highlight):")
feed(aim((0.5, 0.5)), int(0.3 * RATE))

print("\n2. trigger click (snap upright at reading distance):")
feed(aim((0.5, 0.5)), 2, trigger=True)
feed(aim((0.5, 0.5)), 1)
print(f"   panel now {np.linalg.norm(panel.pose.position - scene.head.position):.2f} m away")

print("\n3. keep fixating 1.6 s (the lens arms, then turns on at +1.5 s):")
feed(aim((0.5, 0.4)), int(1.6 * RATE))

print("\n4. stare at the bottom scroll button for 2.0 s (four sentences):")
feed(aim((0.5, 0.97)), 2)  # the flight to the button is a saccade; dwell starts on arrival
feed(aim((0.5, 0.97)), int(2.0 * RATE) + 1)
print(f"   scroll_line is now {panel.scroll_line}")
