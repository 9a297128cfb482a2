#!/usr/bin/env python3
"""Paired run of the combined task: gaze tools vs. the controller baseline.

The same scripted reader (same intents, same seed) reads two short passages
and one long one under both interaction modes; the paired metrics show where
the modes differ (snaps vs. grabs, sentence dwell-scrolls vs. trackpad line
scrolls, lens usage).
"""

from gazedoc.reader import ReaderModel
from gazedoc.scenario import build_task_scenario
from gazedoc.simulate import compare_modes

scenario = build_task_scenario("T4", seed=7)
reader = ReaderModel(wpm=240, fixations_per_line=3, noise_std_deg=0.8, jitter_std_deg=0.03, seed=7)
gaze, baseline = compare_modes(scenario, reader)

rows = [
    ("reading time (s)", f"{gaze.reading_time_s:.1f}", f"{baseline.reading_time_s:.1f}"),
    ("selection attempts", gaze.selection_attempts, baseline.selection_attempts),
    ("snaps", gaze.snap_count, baseline.snap_count),
    ("grabs", gaze.event_counts.get("baseline_grab_start", 0),
     baseline.event_counts.get("baseline_grab_start", 0)),
    ("sentence scrolls", gaze.scroll_event_count, baseline.scroll_event_count),
    ("trackpad line scrolls", gaze.event_counts.get("baseline_scroll", 0),
     baseline.event_counts.get("baseline_scroll", 0)),
    ("lens active fraction", f"{gaze.lens_active_fraction:.3f}", f"{baseline.lens_active_fraction:.3f}"),
]

print(f"{'metric':<24} {'gaze':>10} {'baseline':>10}")
print("-" * 46)
for name, g, b in rows:
    print(f"{name:<24} {g:>10} {b:>10}")

print("\nper-document gaze time (s):")
for doc in sorted(gaze.per_document_gaze_s):
    print(f"  {doc:<12} gaze {gaze.per_document_gaze_s[doc]:6.1f}   "
          f"baseline {baseline.per_document_gaze_s.get(doc, 0.0):6.1f}")
