"""WebSocket operator service.

Each connection gets its own isolated session (FSM plus simulated
robot); model parameters are shared and immutable. Frames are processed
strictly in arrival order within a connection, and every frame message
is answered by exactly one state or error message. Malformed messages
produce an error reply and the session continues; a protocol version
mismatch produces an error and closes the connection.
"""

from __future__ import annotations

import asyncio
from typing import Optional

from websockets.asyncio.server import serve as ws_serve

from . import protocol
from .errors import (
    DegenerateAxisError,
    DegenerateInputError,
    DegeneratePlaneError,
    ProtocolError,
    TeleopError,
)
from .geometry import CameraIntrinsics
from .mlp import MlpParams
from .session import Session, SessionConfig


def handle_message(session: Session, raw: str) -> tuple[list[str], bool]:
    """Process one raw wire message.

    Returns (replies, close): the replies to send in order, and whether
    the connection must be closed afterwards.
    """
    try:
        kind, rec = protocol.decode_message(raw)
    except ProtocolError as exc:
        text = str(exc)
        if text.startswith("version:"):
            return [protocol.encode_error(protocol.ERR_VERSION, text)], True
        return [protocol.encode_error(protocol.ERR_PARSE, text)], False

    if kind == "frame":
        try:
            frame = protocol.frame_from_message(rec)
        except ProtocolError as exc:
            return [protocol.encode_error(protocol.ERR_PARSE, str(exc))], False
        try:
            result = session.process(frame)
        except (DegenerateInputError, DegeneratePlaneError, DegenerateAxisError) as exc:
            return [protocol.encode_error(protocol.ERR_POSE, str(exc))], False
        except TeleopError as exc:
            return [protocol.encode_error(protocol.ERR_FRAME, str(exc))], False
        return [protocol.encode_state(result)], False

    if kind == "config":
        try:
            decl = protocol.intrinsics_from_config(rec)
            if decl is not None:
                session.add_intrinsics(*decl)
            fields = protocol.config_fields(rec)
            if fields:
                session.reconfigure(fields)
        except (ProtocolError, TeleopError) as exc:
            return [protocol.encode_error(protocol.ERR_CONFIG, str(exc))], False
        return [], False

    # state/error are server-to-client kinds; receiving one is a client bug.
    return [
        protocol.encode_error(protocol.ERR_PARSE, f"unexpected {kind} message from client")
    ], False


class TeleopServer:
    """Session factory plus the connection handler."""

    def __init__(
        self,
        params: MlpParams,
        config: SessionConfig = SessionConfig(),
        intrinsics: Optional[dict[str, CameraIntrinsics]] = None,
    ):
        self.params = params
        self.config = config
        self.intrinsics = dict(intrinsics or {})

    def make_session(self) -> Session:
        return Session(self.params, self.config, intrinsics=dict(self.intrinsics))

    async def handle_connection(self, websocket) -> None:
        session = self.make_session()
        async for raw in websocket:
            replies, close = handle_message(session, raw)
            for reply in replies:
                await websocket.send(reply)
            if close:
                await websocket.close(code=1002, reason="protocol version mismatch")
                return


async def serve(
    server: TeleopServer,
    host: str,
    port: int,
    ready: "Optional[asyncio.Future[int]]" = None,
):
    """Run the service until cancelled.

    Once listening, the bound port is published through ``ready`` (useful
    with port 0 for tests).
    """
    async with ws_serve(server.handle_connection, host, port) as ws_server:
        if ready is not None:
            ready.set_result(ws_server.sockets[0].getsockname()[1])
        await ws_server.serve_forever()


def run_server(server: TeleopServer, host: str, port: int) -> None:
    try:
        asyncio.run(serve(server, host, port))
    except KeyboardInterrupt:
        pass
