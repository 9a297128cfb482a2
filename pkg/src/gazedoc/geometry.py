"""Minimal 3D math for the panel scene: vectors, quaternions, poses, rays.

Conventions used throughout the package:

- world up is +Y; a "forward" direction for heads/cameras is local -Z
- panel local frame: +X right, +Y up, +Z is the outward normal (faces the
  reader); uv origin at the panel's top-left corner, v increasing downward
  so line indices grow with v
- quaternions are (w, x, y, z), unit norm

Tolerances live in one place so callers and tests agree:
UNIT_TOL for unit-norm checks, PARALLEL_EPS for ray/plane degeneracy,
GEOM_TOL for geometric assertions (on-plane, anti-parallel).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

UNIT_TOL = 1e-9
PARALLEL_EPS = 1e-9
GEOM_TOL = 1e-6

Vec3 = np.ndarray  # shape (3,), float64

WORLD_UP = np.array([0.0, 1.0, 0.0])


def vec3(x: float, y: float, z: float) -> Vec3:
    return np.array([x, y, z], dtype=float)


def norm(v) -> float:
    return float(np.linalg.norm(v))


def normalize(v) -> Vec3:
    v = np.asarray(v, dtype=float)
    n = float(np.linalg.norm(v))
    if n < UNIT_TOL:
        raise ValueError("cannot normalize a near-zero vector")
    return v / n


def is_unit(v) -> bool:
    return abs(float(np.linalg.norm(v)) - 1.0) <= UNIT_TOL


def angular_distance(a: Vec3, b: Vec3) -> float:
    """Angle between two unit vectors, in degrees, in [0, 180]."""
    d = float(np.dot(a, b))
    d = max(-1.0, min(1.0, d))
    return math.degrees(math.acos(d))


# --- quaternions (w, x, y, z) ---

QUAT_IDENTITY = np.array([1.0, 0.0, 0.0, 0.0])


def quat_normalize(q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    n = float(np.linalg.norm(q))
    if n < UNIT_TOL:
        raise ValueError("cannot normalize a near-zero quaternion")
    return q / n


def quat_mul(a, b) -> np.ndarray:
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return np.array(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ]
    )


def quat_conjugate(q) -> np.ndarray:
    w, x, y, z = q
    return np.array([w, -x, -y, -z])


def quat_rotate(q, v) -> Vec3:
    """Rotate vector v by unit quaternion q."""
    w = q[0]
    u = np.asarray(q[1:4], dtype=float)
    t = 2.0 * np.cross(u, v)
    return np.asarray(v, dtype=float) + w * t + np.cross(u, t)


def quat_from_axis_angle(axis, angle_rad: float) -> np.ndarray:
    axis = normalize(axis)
    half = 0.5 * angle_rad
    s = math.sin(half)
    return np.array([math.cos(half), axis[0] * s, axis[1] * s, axis[2] * s])


def quat_from_matrix(m: np.ndarray) -> np.ndarray:
    """Unit quaternion from a 3x3 rotation matrix (columns = local axes)."""
    t = m[0, 0] + m[1, 1] + m[2, 2]
    if t > 0.0:
        s = math.sqrt(t + 1.0) * 2.0
        w = 0.25 * s
        x = (m[2, 1] - m[1, 2]) / s
        y = (m[0, 2] - m[2, 0]) / s
        z = (m[1, 0] - m[0, 1]) / s
    elif m[0, 0] > m[1, 1] and m[0, 0] > m[2, 2]:
        s = math.sqrt(1.0 + m[0, 0] - m[1, 1] - m[2, 2]) * 2.0
        w = (m[2, 1] - m[1, 2]) / s
        x = 0.25 * s
        y = (m[0, 1] + m[1, 0]) / s
        z = (m[0, 2] + m[2, 0]) / s
    elif m[1, 1] > m[2, 2]:
        s = math.sqrt(1.0 + m[1, 1] - m[0, 0] - m[2, 2]) * 2.0
        w = (m[0, 2] - m[2, 0]) / s
        x = (m[0, 1] + m[1, 0]) / s
        y = 0.25 * s
        z = (m[1, 2] + m[2, 1]) / s
    else:
        s = math.sqrt(1.0 + m[2, 2] - m[0, 0] - m[1, 1]) * 2.0
        w = (m[1, 0] - m[0, 1]) / s
        x = (m[0, 2] + m[2, 0]) / s
        y = (m[1, 2] + m[2, 1]) / s
        z = 0.25 * s
    return quat_normalize(np.array([w, x, y, z]))


def quat_axes(q) -> tuple[Vec3, Vec3, Vec3]:
    """Local +X, +Y, +Z axes of the rotation, as world vectors."""
    return (
        quat_rotate(q, np.array([1.0, 0.0, 0.0])),
        quat_rotate(q, np.array([0.0, 1.0, 0.0])),
        quat_rotate(q, np.array([0.0, 0.0, 1.0])),
    )


@dataclass
class Pose:
    """Position + orientation. Treat `orientation` as immutable after
    construction (replace the whole Pose to rotate); positions may be mutated
    in place. The local axes are cached on first use."""

    position: Vec3
    orientation: np.ndarray = field(default_factory=lambda: QUAT_IDENTITY.copy())

    def __post_init__(self):
        self.position = np.asarray(self.position, dtype=float)
        self.orientation = quat_normalize(self.orientation)
        self._axes: tuple[Vec3, Vec3, Vec3] | None = None

    def axes(self) -> tuple[Vec3, Vec3, Vec3]:
        if self._axes is None:
            self._axes = quat_axes(self.orientation)
        return self._axes

    def forward(self) -> Vec3:
        """Gaze/camera forward: local -Z in world coordinates."""
        return quat_rotate(self.orientation, np.array([0.0, 0.0, -1.0]))

    def up(self) -> Vec3:
        return quat_rotate(self.orientation, np.array([0.0, 1.0, 0.0]))

    def to_dict(self) -> dict:
        return {
            "position": [float(c) for c in self.position],
            "orientation": [float(c) for c in self.orientation],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Pose":
        return cls(np.asarray(d["position"], dtype=float), np.asarray(d["orientation"], dtype=float))


@dataclass
class Ray:
    origin: Vec3
    direction: Vec3

    def __post_init__(self):
        self.origin = np.asarray(self.origin, dtype=float)
        self.direction = np.asarray(self.direction, dtype=float)


@dataclass
class PanelExtent:
    width: float
    height: float

    def __post_init__(self):
        if not (self.width > 0.0 and self.height > 0.0):
            raise ValueError("panel extent must be positive")


@dataclass
class Hit:
    point: Vec3
    uv: tuple[float, float]
    distance: float


def ray_panel_intersect(ray: Ray, panel_pose: Pose, extent: PanelExtent) -> Hit | None:
    """Intersect a ray with a finite rectangle centered at panel_pose.

    Returns None when the ray is parallel to the plane (|n.d| < PARALLEL_EPS),
    hits behind the origin (distance <= 0), or misses the rectangle.
    uv = (0.5, 0.5) is the panel center; v increases downward.
    """
    right, up, normal = panel_pose.axes()
    denom = float(np.dot(normal, ray.direction))
    if abs(denom) < PARALLEL_EPS:
        return None
    rel = panel_pose.position - ray.origin
    t = float(np.dot(normal, rel)) / denom
    if t <= 0.0:
        return None
    point = ray.origin + t * ray.direction
    local = point - panel_pose.position
    u = 0.5 + float(np.dot(local, right)) / extent.width
    v = 0.5 - float(np.dot(local, up)) / extent.height
    if u < 0.0 or u > 1.0 or v < 0.0 or v > 1.0:
        return None
    return Hit(point=point, uv=(u, v), distance=t)


def uv_to_point(panel_pose: Pose, extent: PanelExtent, uv: tuple[float, float]) -> Vec3:
    """World point on the panel plane for a uv coordinate (inverse of the hit mapping)."""
    right, up, _ = panel_pose.axes()
    return (
        panel_pose.position
        + (uv[0] - 0.5) * extent.width * right
        + (0.5 - uv[1]) * extent.height * up
    )


def horizontal(v: Vec3) -> Vec3:
    """Projection onto the horizontal (XZ) plane; not normalized."""
    return np.array([v[0], 0.0, v[2]])


def upright_pose_facing(position: Vec3, toward: Vec3) -> Pose:
    """Pose at `position` with world-up +Y and the +Z normal aimed horizontally at `toward`.

    Falls back to world -Z facing when `toward` sits (nearly) straight above
    or below `position`.
    """
    z = horizontal(np.asarray(toward, dtype=float) - np.asarray(position, dtype=float))
    if float(np.linalg.norm(z)) < UNIT_TOL:
        z = np.array([0.0, 0.0, 1.0])
    else:
        z = normalize(z)
    y = WORLD_UP
    x = np.cross(y, z)
    m = np.column_stack([x, y, z])
    return Pose(position=np.asarray(position, dtype=float), orientation=quat_from_matrix(m))
