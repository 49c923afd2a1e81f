"""Wire protocol for operator sessions.

Messages are JSON objects carried one-per-frame on a WebSocket (the
transport provides the length framing); every message has a ``type``
tag and a protocol version ``v``. docs/protocol.md holds the bit-exact
schema. Message kinds:

  frame   client -> server   one landmark capture (same fields as a log
                             frame record)
  state   server -> client   the reply to every frame: gesture, class
                             probabilities, mode, tracking flag, hand
                             pose, robot pose
  config  client -> server   partial session reconfiguration, optionally
                             declaring intrinsics
  error   server -> client   code + text; the session survives except
                             after a version error
"""

from __future__ import annotations

import json

from .errors import ProtocolError, TeleopError
from .geometry import CameraIntrinsics, Pose6D
from .landmarks import LandmarkFrame, frame_from_record
from .session import StepResult

PROTOCOL_VERSION = 1

# Error codes carried by error messages.
ERR_PARSE = "parse"
ERR_VERSION = "version"
ERR_FRAME = "frame"
ERR_POSE = "pose"
ERR_CONFIG = "config"


def _pose_dict(pose: Pose6D) -> dict:
    t = pose.translation
    return {"x": t.x, "y": t.y, "z": t.z, "rx": pose.rx, "ry": pose.ry, "rz": pose.rz}


def encode_frame(frame: LandmarkFrame) -> str:
    return json.dumps(
        {
            "type": "frame",
            "v": PROTOCOL_VERSION,
            "t": frame.t,
            "lm": [[p.u, p.v, p.z] for p in frame.landmarks],
            "intr": frame.intrinsics_id,
        },
        separators=(",", ":"),
    )


def encode_state(result: StepResult) -> str:
    return json.dumps(
        {
            "type": "state",
            "v": PROTOCOL_VERSION,
            "t": result.t,
            "gesture": result.gesture.value,
            "probs": [float(p) for p in result.probs],
            "mode": result.mode.value,
            "tracking": result.tracking,
            "hand": _pose_dict(result.hand),
            "robot": _pose_dict(result.robot),
        },
        separators=(",", ":"),
    )


def encode_error(code: str, text: str) -> str:
    return json.dumps(
        {"type": "error", "v": PROTOCOL_VERSION, "code": code, "text": text},
        separators=(",", ":"),
    )


def encode_config(partial: dict) -> str:
    return json.dumps(
        {"type": "config", "v": PROTOCOL_VERSION, **partial}, separators=(",", ":")
    )


def decode_message(text: str) -> tuple[str, dict]:
    """Split a raw message into (type, record); checks tag and version.

    Raises ProtocolError with a marker prefix of "version:" when the
    version is unsupported, which callers treat as fatal for the session.
    """
    try:
        rec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProtocolError(f"invalid JSON: {exc.msg}") from exc
    if not isinstance(rec, dict):
        raise ProtocolError("message is not a JSON object")
    if "type" not in rec:
        raise ProtocolError("missing message type")
    if rec.get("v") != PROTOCOL_VERSION:
        raise ProtocolError(f"version: unsupported protocol version {rec.get('v')!r}")
    kind = rec["type"]
    if kind not in ("frame", "config", "state", "error"):
        raise ProtocolError(f"unknown message type {kind!r}")
    return kind, rec


def frame_from_message(rec: dict) -> LandmarkFrame:
    """Validated landmark frame from a decoded ``frame`` message."""
    try:
        return frame_from_record({k: rec[k] for k in ("t", "lm", "intr") if k in rec})
    except TeleopError as exc:
        raise ProtocolError(f"bad frame: {exc}") from exc


def intrinsics_from_config(rec: dict) -> tuple[str, CameraIntrinsics] | None:
    """Intrinsics declaration from a ``config`` message, if present."""
    if "intrinsics" not in rec:
        return None
    decl = rec["intrinsics"]
    try:
        return str(decl["id"]), CameraIntrinsics(
            fx=float(decl["fx"]),
            fy=float(decl["fy"]),
            cx=float(decl["cx"]),
            cy=float(decl["cy"]),
            width=int(decl["width"]),
            height=int(decl["height"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ProtocolError(f"bad intrinsics declaration: {exc}") from exc


def config_fields(rec: dict) -> dict:
    """Partial session-config fields of a decoded ``config`` message."""
    return {
        k: rec[k]
        for k in ("threshold", "debounce", "linear_gain", "angular_gain", "limits")
        if k in rec
    }
