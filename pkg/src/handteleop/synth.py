"""Synthetic hands: gesture templates, projection, datasets, and sessions.

Templates are 21-landmark metric skeletons (centroid at the origin, flat
in the z = 0 plane, fingers along +y) built from a small parametric
finger model: one curl value per finger folds its phalanx headings
progressively toward the palm. Placing a template at a pose and
projecting it through pinhole intrinsics yields wire-valid landmark
frames, which drive the dataset generator, the scripted replay sessions,
and the browser console's virtual hand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .geometry import CameraIntrinsics, Point3, Pose6D, euler_to_matrix
from .landmarks import Landmark, LandmarkFrame, LandmarkLog, SKELETON_EDGES, extract_features
from .mlp import CLASS_INDEX, CLASS_ORDER, Dataset, Gesture

DEFAULT_INTRINSICS = CameraIntrinsics(fx=600.0, fy=600.0, cx=320.0, cy=240.0, width=640, height=480)
DEFAULT_INTRINSICS_ID = "synth-cam"
DEFAULT_HAND_DISTANCE = 0.5  # meters in front of the camera


# One finger: palm segment from the wrist to the base joint, then three
# phalanges. Headings are degrees from +x; bends fold each phalanx
# heading toward the palm as curl goes 0 -> 1.
_FINGERS = (
    # (palm_heading, palm_len, phalanx_heading, phalanx_lens, full_bends)
    (152.0, 0.034, 132.0, (0.032, 0.028, 0.024), (55.0, 65.0, 55.0)),  # thumb
    (100.0, 0.082, 96.0, (0.036, 0.024, 0.021), (80.0, 100.0, 70.0)),  # index
    (90.0, 0.086, 90.0, (0.040, 0.027, 0.024), (80.0, 100.0, 70.0)),  # middle
    (79.0, 0.080, 84.0, (0.036, 0.025, 0.022), (80.0, 100.0, 70.0)),  # ring
    (66.0, 0.070, 74.0, (0.028, 0.020, 0.018), (80.0, 100.0, 70.0)),  # pinky
)

# Per-gesture: curl per finger (thumb..pinky) and optional heading tweaks
# that spread the extended fingers apart.
_GESTURE_SHAPES = {
    Gesture.ONE: ((0.85, 0.0, 1.0, 1.0, 1.0), {}),
    Gesture.TWO: ((0.85, 0.0, 0.0, 1.0, 1.0), {1: 104.0, 2: 78.0}),
    Gesture.THREE: ((0.85, 0.0, 0.0, 0.0, 1.0), {1: 106.0, 2: 90.0, 3: 72.0}),
    Gesture.OPEN: ((0.0, 0.0, 0.0, 0.0, 0.0), {}),
    Gesture.CLOSE: ((1.0, 1.0, 1.0, 1.0, 1.0), {}),
}


def _finger_points(palm_heading, palm_len, heading, lengths, bends, curl):
    pts = []
    h = math.radians(palm_heading)
    base = np.array([palm_len * math.cos(h), palm_len * math.sin(h)])
    pts.append(base)
    pos = base
    angle = heading
    for seg_len, bend in zip(lengths, bends):
        angle = angle - curl * bend
        rad = math.radians(angle)
        pos = pos + np.array([seg_len * math.cos(rad), seg_len * math.sin(rad)])
        pts.append(pos)
    return pts


def _build_template(gesture: Gesture, curl_jitter=None, spread_jitter=None) -> np.ndarray:
    """Metric 21-landmark skeleton for a gesture, centroid at the origin.

    ``curl_jitter`` perturbs the per-finger curl values (clipped to
    [0, 1]) and ``spread_jitter`` the phalanx headings in degrees; both
    default to the canonical shape.
    """
    curls, spreads = _GESTURE_SHAPES[gesture]
    pts = [np.zeros(2)]  # wrist
    for f, (palm_heading, palm_len, heading, lengths, bends) in enumerate(_FINGERS):
        curl = min(1.0, max(0.0, curls[f] + (curl_jitter[f] if curl_jitter is not None else 0.0)))
        head = spreads.get(f, heading) + (spread_jitter[f] if spread_jitter is not None else 0.0)
        pts.extend(_finger_points(palm_heading, palm_len, head, lengths, bends, curl))
    flat = np.column_stack([np.array(pts), np.zeros(len(pts))])
    return flat - flat.mean(axis=0)


GESTURE_TEMPLATES: dict[Gesture, np.ndarray] = {g: _build_template(g) for g in CLASS_ORDER}


def place_hand(template: np.ndarray, pose: Pose6D) -> np.ndarray:
    """Rotate and translate a template into the camera frame, (21, 3)."""
    rot = euler_to_matrix(pose.rx, pose.ry, pose.rz)
    return template @ rot.T + pose.translation.as_array()


def project_points(points: np.ndarray, intr: CameraIntrinsics) -> np.ndarray:
    """Pinhole projection of metric points to (u, v, z) rows."""
    if (points[:, 2] <= 0).any():
        raise DomainError("all points must be in front of the camera")
    u = intr.fx * points[:, 0] / points[:, 2] + intr.cx
    v = intr.fy * points[:, 1] / points[:, 2] + intr.cy
    return np.column_stack([u, v, points[:, 2]])


def make_frame(
    gesture: Gesture,
    pose: Pose6D,
    intr: CameraIntrinsics = DEFAULT_INTRINSICS,
    t: float = 0.0,
    intrinsics_id: str = DEFAULT_INTRINSICS_ID,
) -> LandmarkFrame:
    """Project a posed gesture template into one landmark frame."""
    uvz = project_points(place_hand(GESTURE_TEMPLATES[gesture], pose), intr)
    return LandmarkFrame(
        t=t,
        landmarks=tuple(Landmark(*row) for row in uvz.tolist()),
        intrinsics_id=intrinsics_id,
    )


def facing_pose(x: float = 0.0, y: float = 0.0, z: float = DEFAULT_HAND_DISTANCE) -> Pose6D:
    """Flat hand facing the camera at the given position."""
    return Pose6D(Point3(x, y, z), 0.0, 0.0, 0.0)


# --------------------------------------------------------------------------
# Dataset generation

def generate_synthetic_dataset(
    seed: int,
    per_class: int,
    noise: float = 1.0,
    intr: CameraIntrinsics = DEFAULT_INTRINSICS,
) -> Dataset:
    """Noisy template variants passed through feature extraction.

    Each sample redraws the hand shape (per-finger curl and spread
    jitter), then applies a pixel-space similarity jitter (scale,
    in-plane rotation, translation) plus per-landmark Gaussian noise.
    The ``noise`` factor scales every jitter magnitude, so noise=0
    reproduces the template features exactly. Deterministic per seed.
    """
    if per_class < 1:
        raise DomainError("per_class must be at least 1")
    rng = np.random.default_rng(seed)
    features = np.empty((per_class * len(CLASS_ORDER), 62), dtype=np.float64)
    labels = np.empty(per_class * len(CLASS_ORDER), dtype=np.intp)
    row = 0
    for gesture in CLASS_ORDER:
        for _ in range(per_class):
            shape = _build_template(
                gesture,
                curl_jitter=noise * rng.normal(0.0, 0.18, size=5),
                spread_jitter=noise * rng.normal(0.0, 4.0, size=5),
            )
            base = project_points(shape + (0.0, 0.0, DEFAULT_HAND_DISTANCE), intr)[:, :2]
            center = base.mean(axis=0)
            scale = 1.0 + noise * rng.uniform(-0.2, 0.2)
            theta = math.radians(noise * rng.normal(0.0, 10.0))
            c, s = math.cos(theta), math.sin(theta)
            rot = np.array([[c, -s], [s, c]])
            shift = noise * rng.uniform(-40.0, 40.0, size=2)
            jitter = noise * rng.normal(0.0, 2.5, size=base.shape)
            px = (base - center) @ rot.T * scale + center + shift + jitter
            frame = LandmarkFrame(
                t=0.0,
                landmarks=tuple(Landmark(u, v, DEFAULT_HAND_DISTANCE) for u, v in px.tolist()),
                intrinsics_id=DEFAULT_INTRINSICS_ID,
            )
            features[row] = extract_features(frame)
            labels[row] = CLASS_INDEX[gesture]
            row += 1
    return Dataset(features=features, labels=labels)


# --------------------------------------------------------------------------
# Scripted sessions

Script = list[tuple[Gesture, Pose6D]]


def _ramp(start: Pose6D, end: Pose6D, n: int) -> list[Pose6D]:
    """n poses linearly interpolated from just after start to exactly end."""
    out = []
    a, b = start.as_array(), end.as_array()
    for i in range(1, n + 1):
        out.append(Pose6D.from_array(a + (b - a) * (i / n)))
    return out


def script_mode_move(
    mode_gesture: Gesture,
    end: Pose6D,
    start: Pose6D | None = None,
    hold: int = 5,
    move: int = 30,
) -> Script:
    """Gesture sequence: select a mode, anchor with Open, glide the hand
    from start to end, then Close. ``hold`` frames per static gesture.
    """
    start = start or facing_pose()
    script: Script = [(mode_gesture, start)] * hold
    script += [(Gesture.OPEN, start)] * hold
    script += [(Gesture.OPEN, p) for p in _ramp(start, end, move)]
    script += [(Gesture.CLOSE, end)] * hold
    return script


def frames_from_script(
    script: Script,
    intr: CameraIntrinsics = DEFAULT_INTRINSICS,
    fps: float = 30.0,
    intrinsics_id: str = DEFAULT_INTRINSICS_ID,
) -> LandmarkLog:
    """Render a script to a landmark log at a fixed frame rate."""
    frames = tuple(
        make_frame(g, pose, intr, t=i / fps, intrinsics_id=intrinsics_id)
        for i, (g, pose) in enumerate(script)
    )
    return LandmarkLog(intrinsics={intrinsics_id: intr}, frames=frames)


def jitter_log(log: LandmarkLog, seed: int, px_sigma: float, depth_sigma: float) -> LandmarkLog:
    """Add Gaussian pixel and depth noise to every landmark of a log."""
    rng = np.random.default_rng(seed)
    frames = []
    for frame in log.frames:
        noisy = tuple(
            Landmark(
                lm.u + rng.normal(0.0, px_sigma),
                lm.v + rng.normal(0.0, px_sigma),
                max(lm.z + rng.normal(0.0, depth_sigma), 1e-3),
            )
            for lm in frame.landmarks
        )
        frames.append(
            LandmarkFrame(t=frame.t, landmarks=noisy, intrinsics_id=frame.intrinsics_id)
        )
    return LandmarkLog(intrinsics=dict(log.intrinsics), frames=tuple(frames))


# --------------------------------------------------------------------------
# Static template export (consumed by the browser console)

def export_templates() -> dict:
    """Templates, topology, default intrinsics, and projection fixtures.

    The fixtures pin the placement/projection math so an independent
    client implementation can verify itself against this package.
    """
    fixture_pose = Pose6D(Point3(0.04, -0.02, 0.55), 10.0, 20.0, 30.0)
    fixtures = {
        "facing": {
            "gesture": Gesture.OPEN.value,
            "pose": _pose_dict(facing_pose()),
            "uvz": project_points(
                place_hand(GESTURE_TEMPLATES[Gesture.OPEN], facing_pose()), DEFAULT_INTRINSICS
            ).tolist(),
        },
        "posed": {
            "gesture": Gesture.TWO.value,
            "pose": _pose_dict(fixture_pose),
            "uvz": project_points(
                place_hand(GESTURE_TEMPLATES[Gesture.TWO], fixture_pose), DEFAULT_INTRINSICS
            ).tolist(),
        },
        "rotation_matrix": {
            "euler": [10.0, 20.0, 30.0],
            "matrix": euler_to_matrix(10.0, 20.0, 30.0).tolist(),
        },
    }
    return {
        "format": "handteleop-templates",
        "version": 1,
        "intrinsics": {
            "id": DEFAULT_INTRINSICS_ID,
            "fx": DEFAULT_INTRINSICS.fx,
            "fy": DEFAULT_INTRINSICS.fy,
            "cx": DEFAULT_INTRINSICS.cx,
            "cy": DEFAULT_INTRINSICS.cy,
            "width": DEFAULT_INTRINSICS.width,
            "height": DEFAULT_INTRINSICS.height,
        },
        "hand_distance": DEFAULT_HAND_DISTANCE,
        "edges": [list(e) for e in SKELETON_EDGES],
        "templates": {g.value: GESTURE_TEMPLATES[g].tolist() for g in CLASS_ORDER},
        "fixtures": fixtures,
    }


def _pose_dict(pose: Pose6D) -> dict:
    t = pose.translation
    return {"x": t.x, "y": t.y, "z": t.z, "rx": pose.rx, "ry": pose.ry, "rz": pose.rz}
