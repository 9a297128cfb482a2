#!/usr/bin/env python3
"""Show what the fixation smoother does to tracker noise.

Generates fixation windows of unit directions scattered around a true target
with 1.1 degree noise (the weak end of the tracker's accuracy band), smooths
them with the recency-weighted mean, and compares the smoothed error against
the raw per-sample errors.
"""

import math

import numpy as np

from gazedoc.geometry import angular_distance, normalize, vec3
from gazedoc.pipeline import smooth

rng = np.random.default_rng(7)
target = normalize(vec3(0.1, -0.1, -1.0))
e1 = normalize(np.cross(target, vec3(0, 1, 0)))
e2 = np.cross(target, e1)


def noisy(std_deg):
    theta = math.radians(rng.normal(0, std_deg))
    phi = rng.uniform(0, 2 * math.pi)
    axis = math.cos(phi) * e1 + math.sin(phi) * e2
    return normalize(target * math.cos(theta) + np.cross(axis, target) * math.sin(theta))


print(f"{'window':>6} {'worst sample':>14} {'mean sample':>13} {'smoothed':>10}")
worst_ratio = 0.0
for n in (5, 10, 20, 30):
    raw_errs, smooth_errs = [], []
    for _ in range(2000):
        dirs = [noisy(1.1) for _ in range(n)]
        ts = np.sort(rng.uniform(0, 0.25, size=n))
        out = smooth(list(zip(ts, dirs)), 0.5)
        errs = [angular_distance(target, d) for d in dirs]
        raw_errs.append((max(errs), float(np.mean(errs))))
        smooth_errs.append(angular_distance(target, out))
        worst_ratio = max(worst_ratio, smooth_errs[-1] / max(errs))
    worst, mean = np.mean([w for w, _ in raw_errs]), np.mean([m for _, m in raw_errs])
    print(f"{n:>6} {worst:>13.3f}° {mean:>12.3f}° {np.mean(smooth_errs):>9.3f}°")

print(f"\nsmoothed error never exceeds the worst sample (worst ratio: {worst_ratio:.3f})")
print("the smoothed point is a convex combination of the samples, so it stays")
print("inside their cone; larger windows average the scatter further down.")
