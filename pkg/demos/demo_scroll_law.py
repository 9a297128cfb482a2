#!/usr/bin/env python3
"""The dwell-scroll law, measured from the engine.

One sentence is owed per 0.5 s of continuous dwell on a scroll button:
floor(d / 0.5) sentences for a dwell of d seconds, independent of the sample
rate. Sweeps dwell durations at three tracker rates and prints the totals.
"""

import math

from gazedoc.document import panel_point
from gazedoc.engine import InteractionEngine
from gazedoc.geometry import Ray, normalize
from gazedoc.pipeline import GazePipeline, GazeSample
from gazedoc.scenario import build_task_scenario


def scrolled_sentences(dwell_s, rate_hz):
    scenario = build_task_scenario("T3", seed=1)
    scene = scenario.build_scene()
    config = scenario.config
    engine = InteractionEngine(scene, config)
    pipeline = GazePipeline(config)
    panel = next(iter(scene.panels.values()))
    button = normalize(panel_point(panel, (0.5, 0.97)) - scene.head.position)
    total = 0
    for i in range(int(round(dwell_s * rate_hz)) + 1):
        s = GazeSample(t=i / rate_hz, ray=Ray(scene.head.position.copy(), button))
        for e in engine.step(s, pipeline.step(s)):
            if e.kind == "scroll":
                total += e.data["sentences"]
    return total


dwells = [0.2, 0.4, 0.5, 0.9, 1.0, 2.0, 3.7, 5.0]
rates = [60.0, 90.0, 120.0]

header = "dwell (s) | " + " | ".join(f"{int(r)} Hz" for r in rates) + " | floor(d/0.5)"
print(header)
print("-" * len(header))
for d in dwells:
    row = [scrolled_sentences(d, r) for r in rates]
    law = math.floor(d / 0.5)
    ok = "ok" if all(v == law for v in row) else "MISMATCH"
    print(f"{d:>9.1f} | " + " | ".join(f"{v:>5}" for v in row) + f" | {law:>12} {ok}")
