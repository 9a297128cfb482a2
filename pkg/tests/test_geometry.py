"""Geometry tests, checked against independent oracles.

The plane-intersection oracle solves the plane equation directly and projects
into a basis obtained from scipy's quaternion implementation, so it shares no
code path with gazedoc.geometry. The angle oracle uses mpmath at 50 digits.
"""

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial.transform import Rotation

from gazedoc.geometry import (
    GEOM_TOL,
    PanelExtent,
    Pose,
    Ray,
    angular_distance,
    normalize,
    quat_axes,
    quat_from_axis_angle,
    quat_from_matrix,
    quat_mul,
    quat_rotate,
    ray_panel_intersect,
    upright_pose_facing,
    uv_to_point,
    vec3,
)


def oracle_plane_intersect(ray_origin, ray_dir, center, quat_wxyz, width, height):
    """Independent rectangle intersection: plane equation + basis projection.

    Returns (point, (u, v), t) or None. Basis comes from scipy (xyzw order).
    """
    w, x, y, z = quat_wxyz
    rot = Rotation.from_quat([x, y, z, w])
    right = rot.apply([1.0, 0.0, 0.0])
    up = rot.apply([0.0, 1.0, 0.0])
    n = rot.apply([0.0, 0.0, 1.0])
    # plane: n . (p - center) = 0 ; p = o + t d
    nd = float(np.dot(n, ray_dir))
    if abs(nd) < 1e-9:
        return None
    t = float(np.dot(n, np.asarray(center) - np.asarray(ray_origin))) / nd
    if t <= 0.0:
        return None
    p = np.asarray(ray_origin) + t * np.asarray(ray_dir)
    du = float(np.dot(p - center, right))
    dv = float(np.dot(p - center, up))
    if abs(du) > width / 2 or abs(dv) > height / 2:
        return None
    return p, (0.5 + du / width, 0.5 - dv / height), t


def random_unit(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def random_quat(rng):
    q = rng.normal(size=4)
    q = q / np.linalg.norm(q)
    return q


class TestRayPanelIntersect:
    def test_perpendicular_center_hit(self):
        ray = Ray(vec3(0, 0, 0), vec3(0, 0, -1))
        panel = Pose(vec3(0, 0, -1))  # identity orientation: normal +Z, faces origin
        hit = ray_panel_intersect(ray, panel, PanelExtent(1.0, 1.0))
        assert hit is not None
        np.testing.assert_allclose(hit.point, [0, 0, -1], atol=1e-12)
        assert hit.uv == pytest.approx((0.5, 0.5), abs=1e-12)
        assert hit.distance == pytest.approx(1.0, abs=1e-12)

    def test_behind_origin_is_absent(self):
        ray = Ray(vec3(0, 0, 0), vec3(0, 0, 1))
        panel = Pose(vec3(0, 0, -1))
        assert ray_panel_intersect(ray, panel, PanelExtent(1.0, 1.0)) is None

    def test_parallel_ray_is_absent(self):
        ray = Ray(vec3(0, 0, 0), vec3(1, 0, 0))
        panel = Pose(vec3(0, 0, -1))
        assert ray_panel_intersect(ray, panel, PanelExtent(1.0, 1.0)) is None

    def test_oblique_hit_matches_oracle(self):
        origin = vec3(0.2, 0.1, 0.0)
        direction = normalize(vec3(0.1, -0.05, -1.0))
        ray = Ray(origin, direction)
        panel = Pose(vec3(0, 0, -1))
        hit = ray_panel_intersect(ray, panel, PanelExtent(1.0, 1.0))
        expected = oracle_plane_intersect(origin, direction, [0, 0, -1], [1, 0, 0, 0], 1.0, 1.0)
        assert hit is not None and expected is not None
        np.testing.assert_allclose(hit.point, expected[0], atol=1e-12)
        assert hit.uv == pytest.approx(expected[1], abs=1e-12)
        assert hit.distance == pytest.approx(expected[2], abs=1e-12)

    def test_randomized_rays_match_oracle(self):
        rng = np.random.default_rng(7)
        hits = misses = 0
        for i in range(2000):
            origin = rng.uniform(-2, 2, size=3)
            center = rng.uniform(-2, 2, size=3)
            quat = random_quat(rng)
            width = rng.uniform(0.2, 2.0)
            height = rng.uniform(0.2, 2.0)
            if i % 2 == 0:
                direction = random_unit(rng)
            else:
                # aim near the panel so the hit branch is exercised too
                direction = normalize(center - origin + rng.normal(scale=0.2, size=3))
            got = ray_panel_intersect(
                Ray(origin, direction), Pose(center, quat), PanelExtent(width, height)
            )
            want = oracle_plane_intersect(origin, direction, center, quat, width, height)
            if want is None:
                assert got is None
                misses += 1
            else:
                assert got is not None
                np.testing.assert_allclose(got.point, want[0], atol=1e-6)
                assert got.uv == pytest.approx(want[1], abs=1e-6)
                assert got.distance == pytest.approx(want[2], abs=1e-6)
                hits += 1
        assert hits > 100 and misses > 100  # the sample exercises both branches

    def test_hit_point_on_plane_and_inside_extent(self):
        rng = np.random.default_rng(11)
        for _ in range(500):
            origin = rng.uniform(-2, 2, size=3)
            direction = random_unit(rng)
            pose = Pose(rng.uniform(-2, 2, size=3), random_quat(rng))
            extent = PanelExtent(rng.uniform(0.2, 2.0), rng.uniform(0.2, 2.0))
            hit = ray_panel_intersect(Ray(origin, direction), pose, extent)
            if hit is None:
                continue
            _, _, normal = pose.axes()
            assert abs(float(np.dot(hit.point - pose.position, normal))) < 1e-6
            assert 0.0 <= hit.uv[0] <= 1.0 and 0.0 <= hit.uv[1] <= 1.0

    def test_rigid_transform_invariance(self):
        rng = np.random.default_rng(13)
        for _ in range(200):
            origin = rng.uniform(-1, 1, size=3)
            direction = random_unit(rng)
            pose = Pose(rng.uniform(-1, 1, size=3), random_quat(rng))
            extent = PanelExtent(1.3, 0.8)
            hit = ray_panel_intersect(Ray(origin, direction), pose, extent)
            if hit is None:
                continue
            # apply the same rigid transform to ray and panel
            tq = random_quat(rng)
            tp = rng.uniform(-3, 3, size=3)
            o2 = quat_rotate(tq, origin) + tp
            d2 = quat_rotate(tq, direction)
            pose2 = Pose(quat_rotate(tq, pose.position) + tp, quat_mul(tq, pose.orientation))
            hit2 = ray_panel_intersect(Ray(o2, d2), pose2, extent)
            assert hit2 is not None
            assert hit2.uv == pytest.approx(hit.uv, abs=1e-6)
            assert hit2.distance == pytest.approx(hit.distance, abs=1e-6)

    def test_uv_to_point_roundtrip(self):
        rng = np.random.default_rng(17)
        for _ in range(200):
            pose = Pose(rng.uniform(-1, 1, size=3), random_quat(rng))
            extent = PanelExtent(0.6, 0.4)
            uv = (rng.uniform(0.02, 0.98), rng.uniform(0.02, 0.98))
            point = uv_to_point(pose, extent, uv)
            eye = pose.position + 0.8 * quat_rotate(pose.orientation, vec3(0, 0, 1))
            ray = Ray(eye, normalize(point - eye))
            hit = ray_panel_intersect(ray, pose, extent)
            assert hit is not None
            assert hit.uv == pytest.approx(uv, abs=1e-9)


class TestAngularDistance:
    def test_identical_vectors(self):
        assert angular_distance(vec3(0, 0, -1), vec3(0, 0, -1)) == 0.0

    def test_orthogonal_vectors(self):
        assert angular_distance(vec3(1, 0, 0), vec3(0, 1, 0)) == pytest.approx(90.0, abs=1e-12)

    def test_small_angle_against_mpmath(self):
        a = vec3(0, 0, -1)
        b = normalize(vec3(0.01745, 0.0, -1.0))
        with mpmath.workdps(50):
            dot = mpmath.mpf(-1) * mpmath.mpf(float(b[2]))
            expected = float(mpmath.degrees(mpmath.acos(dot)))
        got = angular_distance(a, b)
        assert got == pytest.approx(expected, abs=1e-9)
        assert got == pytest.approx(0.9998, abs=1e-3)

    def test_random_angles_against_mpmath(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            a = random_unit(rng)
            b = random_unit(rng)
            got = angular_distance(a, b)
            with mpmath.workdps(50):
                dot = sum(mpmath.mpf(float(x)) * mpmath.mpf(float(y)) for x, y in zip(a, b))
                dot = max(mpmath.mpf(-1), min(mpmath.mpf(1), dot))
                expected = float(mpmath.degrees(mpmath.acos(dot)))
            assert got == pytest.approx(expected, abs=1e-9)
            assert 0.0 <= got <= 180.0

    @given(st.integers(min_value=0, max_value=2**32 - 1))
    @settings(max_examples=50, deadline=None)
    def test_symmetry_and_triangle_inequality(self, seed):
        rng = np.random.default_rng(seed)
        a, b, c = (random_unit(rng) for _ in range(3))
        assert angular_distance(a, b) == pytest.approx(angular_distance(b, a), abs=1e-12)
        assert angular_distance(a, c) <= angular_distance(a, b) + angular_distance(b, c) + 1e-9


class TestQuaternions:
    def test_rotate_matches_scipy(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            q = random_quat(rng)
            v = rng.uniform(-2, 2, size=3)
            w, x, y, z = q
            expected = Rotation.from_quat([x, y, z, w]).apply(v)
            np.testing.assert_allclose(quat_rotate(q, v), expected, atol=1e-12)

    def test_matrix_roundtrip(self):
        rng = np.random.default_rng(9)
        for _ in range(200):
            q = random_quat(rng)
            x, y, z = quat_axes(q)
            q2 = quat_from_matrix(np.column_stack([x, y, z]))
            # q and -q are the same rotation
            for v in (vec3(1, 0, 0), vec3(0, 1, 0), vec3(0, 0, 1)):
                np.testing.assert_allclose(quat_rotate(q2, v), quat_rotate(q, v), atol=1e-9)

    def test_axis_angle(self):
        q = quat_from_axis_angle(vec3(0, 1, 0), math.pi / 2)
        np.testing.assert_allclose(quat_rotate(q, vec3(0, 0, -1)), [-1, 0, 0], atol=1e-12)


class TestUprightPoseFacing:
    def test_faces_target_horizontally(self):
        pose = upright_pose_facing(vec3(0, 1.4, -1), vec3(0, 1.4, 0))
        _, up, normal = pose.axes()
        np.testing.assert_allclose(normal, [0, 0, 1], atol=1e-12)
        np.testing.assert_allclose(up, [0, 1, 0], atol=1e-12)

    def test_target_above_uses_fallback(self):
        pose = upright_pose_facing(vec3(0, 0, 0), vec3(0, 5, 0))
        _, up, normal = pose.axes()
        np.testing.assert_allclose(up, [0, 1, 0], atol=1e-12)
        assert abs(float(np.dot(normal, [0, 1, 0]))) < GEOM_TOL

    def test_random_targets_upright_and_horizontal(self):
        rng = np.random.default_rng(21)
        for _ in range(200):
            pos = rng.uniform(-2, 2, size=3)
            target = rng.uniform(-2, 2, size=3)
            if np.linalg.norm((target - pos)[[0, 2]]) < 1e-6:
                continue
            pose = upright_pose_facing(pos, target)
            right, up, normal = pose.axes()
            np.testing.assert_allclose(up, [0, 1, 0], atol=1e-9)
            assert abs(normal[1]) < 1e-9
            want = normalize(np.array([target[0] - pos[0], 0.0, target[2] - pos[2]]))
            np.testing.assert_allclose(normal, want, atol=1e-9)
