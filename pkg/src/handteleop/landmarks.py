"""Hand-landmark frames: log parsing, validation, and the 62-value feature vector.

A landmark frame is one capture of the 21 canonical hand keypoints
(wrist, then four joints per finger) as pixel coordinates plus metric
depth. The landmark log is JSON Lines: intrinsics declarations followed
by frame records, see docs/protocol.md for the exact schema.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .errors import DegenerateInputError, ParseError, StructuralError, ValidationError
from .geometry import CameraIntrinsics

LANDMARK_COUNT = 21

# Canonical landmark indices.
WRIST = 0
THUMB_TIP = 4
INDEX_MCP = 5
MIDDLE_MCP = 9
PINKY_MCP = 17

# The 20 bone segments of the 21-keypoint hand: each finger is a chain
# rooted at the wrist (thumb, index, middle, ring, pinky).
FINGER_CHAINS = (
    (0, 1, 2, 3, 4),
    (0, 5, 6, 7, 8),
    (0, 9, 10, 11, 12),
    (0, 13, 14, 15, 16),
    (0, 17, 18, 19, 20),
)
SKELETON_EDGES = tuple(
    (chain[i], chain[i + 1]) for chain in FINGER_CHAINS for i in range(len(chain) - 1)
)

FEATURE_SIZE = 2 * LANDMARK_COUNT + len(SKELETON_EDGES)  # 42 coords + 20 edges


class Landmark(NamedTuple):
    """One keypoint: pixel column u, pixel row v, metric depth z."""

    u: float
    v: float
    z: float


@dataclass(frozen=True, slots=True)
class LandmarkFrame:
    """One timestamped capture of all 21 landmarks."""

    t: float
    landmarks: tuple[Landmark, ...]
    intrinsics_id: str

    def __post_init__(self):
        if len(self.landmarks) != LANDMARK_COUNT:
            raise StructuralError(
                f"expected {LANDMARK_COUNT} landmarks, got {len(self.landmarks)}"
            )
        if not math.isfinite(self.t):
            raise ValidationError("non-finite timestamp")
        for i, lm in enumerate(self.landmarks):
            if not all(math.isfinite(v) for v in lm):
                raise ValidationError(f"non-finite landmark {i}")
            if lm.z <= 0.0:
                raise ValidationError(f"landmark {i} has non-positive depth {lm.z}")

    def pixels(self) -> np.ndarray:
        """(21, 2) array of (u, v)."""
        return np.array([(lm.u, lm.v) for lm in self.landmarks], dtype=np.float64)

    def depths(self) -> np.ndarray:
        return np.array([lm.z for lm in self.landmarks], dtype=np.float64)


def validate_bounds(frame: LandmarkFrame, intr: CameraIntrinsics) -> None:
    """Check every landmark lies inside the image; raises ValidationError."""
    for i, lm in enumerate(frame.landmarks):
        if not intr.contains(lm.u, lm.v):
            raise ValidationError(
                f"landmark {i} at ({lm.u}, {lm.v}) outside {intr.width}x{intr.height}"
            )


# --------------------------------------------------------------------------
# Landmark-log records (JSON Lines)

def frame_to_json(frame: LandmarkFrame) -> str:
    """Serialize a frame record. Canonical field order: t, lm, intr."""
    lm = [[p.u, p.v, p.z] for p in frame.landmarks]
    return json.dumps(
        {"t": frame.t, "lm": lm, "intr": frame.intrinsics_id},
        separators=(",", ":"),
    )


def intrinsics_to_json(intr_id: str, intr: CameraIntrinsics) -> str:
    """Serialize an intrinsics declaration record."""
    return json.dumps(
        {
            "intr": intr_id,
            "fx": intr.fx,
            "fy": intr.fy,
            "cx": intr.cx,
            "cy": intr.cy,
            "width": intr.width,
            "height": intr.height,
        },
        separators=(",", ":"),
    )


def _load_record(line: str) -> dict:
    try:
        rec = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}") from exc
    if not isinstance(rec, dict):
        raise ParseError("record is not a JSON object")
    return rec


def parse_frame(line: str) -> LandmarkFrame:
    """Parse one frame record; field errors name the offending field."""
    return frame_from_record(_load_record(line))


def frame_from_record(rec: dict) -> LandmarkFrame:
    """Build a validated frame from an already-decoded record dict."""
    for field in ("t", "lm", "intr"):
        if field not in rec:
            raise ParseError("missing field", field=field)
    try:
        t = float(rec["t"])
    except (TypeError, ValueError) as exc:
        raise ParseError("timestamp is not a number", field="t") from exc
    lm = rec["lm"]
    if not isinstance(lm, list):
        raise ParseError("landmark list is not an array", field="lm")
    if len(lm) != LANDMARK_COUNT:
        raise StructuralError(f"expected {LANDMARK_COUNT} landmarks, got {len(lm)}")
    points = []
    for i, entry in enumerate(lm):
        if not isinstance(entry, list) or len(entry) != 3:
            raise ParseError(f"landmark {i} is not a [u, v, z] triple", field="lm")
        try:
            points.append(Landmark(*(float(v) for v in entry)))
        except (TypeError, ValueError) as exc:
            raise ParseError(f"landmark {i} has a non-numeric entry", field="lm") from exc
    intr_id = rec["intr"]
    if not isinstance(intr_id, str):
        raise ParseError("intrinsics id is not a string", field="intr")
    return LandmarkFrame(t=t, landmarks=tuple(points), intrinsics_id=intr_id)


def parse_intrinsics(line: str) -> tuple[str, CameraIntrinsics]:
    """Parse one intrinsics declaration record."""
    rec = _load_record(line)
    for field in ("intr", "fx", "fy", "cx", "cy", "width", "height"):
        if field not in rec:
            raise ParseError("missing field", field=field)
    intr_id = rec["intr"]
    if not isinstance(intr_id, str):
        raise ParseError("intrinsics id is not a string", field="intr")
    try:
        intr = CameraIntrinsics(
            fx=float(rec["fx"]),
            fy=float(rec["fy"]),
            cx=float(rec["cx"]),
            cy=float(rec["cy"]),
            width=int(rec["width"]),
            height=int(rec["height"]),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ParseError("non-numeric intrinsics entry", field="intr") from exc
    return intr_id, intr


@dataclass(frozen=True)
class LandmarkLog:
    """A parsed landmark log: intrinsics registry plus ordered frames."""

    intrinsics: dict[str, CameraIntrinsics]
    frames: tuple[LandmarkFrame, ...]


def read_log(lines: Iterable[str]) -> LandmarkLog:
    """Parse a landmark log, validating bounds against declared intrinsics.

    Raises ParseError (with a line number) on malformed records, unknown
    intrinsics ids, or out-of-order timestamps.
    """
    intrinsics: dict[str, CameraIntrinsics] = {}
    frames: list[LandmarkFrame] = []
    last_t = None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            rec = _load_record(line)
            if "lm" in rec:
                frame = parse_frame(line)
                if frame.intrinsics_id not in intrinsics:
                    raise ParseError(
                        f"undeclared intrinsics id {frame.intrinsics_id!r}",
                        field="intr",
                    )
                validate_bounds(frame, intrinsics[frame.intrinsics_id])
                if last_t is not None and frame.t <= last_t:
                    raise ParseError(
                        f"timestamps must be strictly increasing ({frame.t} after {last_t})",
                        field="t",
                    )
                last_t = frame.t
                frames.append(frame)
            elif "fx" in rec:
                intr_id, intr = parse_intrinsics(line)
                intrinsics[intr_id] = intr
            else:
                raise ParseError("record is neither a frame nor an intrinsics declaration")
        except ParseError as exc:
            raise ParseError(str(exc), line=lineno) from exc
        except (StructuralError, ValidationError) as exc:
            raise type(exc)(f"line {lineno}: {exc}") from exc
    return LandmarkLog(intrinsics=intrinsics, frames=tuple(frames))


def read_log_file(path) -> LandmarkLog:
    with open(path, "r", encoding="utf-8") as fh:
        return read_log(fh)


def write_log(log: LandmarkLog) -> str:
    """Serialize a log; reading the result back reproduces it bit-exactly."""
    lines = [intrinsics_to_json(k, v) for k, v in log.intrinsics.items()]
    lines.extend(frame_to_json(f) for f in log.frames)
    return "\n".join(lines) + "\n"


def write_log_file(log: LandmarkLog, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(write_log(log))


# --------------------------------------------------------------------------
# Feature extraction

def extract_features(frame: LandmarkFrame) -> np.ndarray:
    """Build the 62-value classifier input from one frame.

    Layout: 42 bounding-box-normalized pixel coordinates interleaved as
    (x0, y0, x1, y1, ...), then the 20 skeleton-edge lengths divided by
    the longest edge. Every value lies in [0, 1]; the vector is invariant
    under translation and uniform scaling of the pixel coordinates.
    """
    px = frame.pixels()
    mins = px.min(axis=0)
    extents = px.max(axis=0) - mins
    if extents[0] == 0.0 or extents[1] == 0.0:
        raise DegenerateInputError("landmark bounding box has zero width or height")
    coords = (px - mins) / extents

    edges = np.array(SKELETON_EDGES, dtype=np.intp)
    deltas = px[edges[:, 0]] - px[edges[:, 1]]
    lengths = np.hypot(deltas[:, 0], deltas[:, 1])
    lengths = lengths / lengths.max()

    return np.concatenate([coords.ravel(), lengths])
