"""WebSocket service around a teleop session.

One session per process; any number of read-only subscribers. Command
ingestion and shape recomputation run concurrently: at most one solve is
in flight, and if commands arrive mid-solve the result is discarded and
the solve reruns with the newest values, so shape events always match the
latest command set.

Wire protocol (JSON text frames):
  client -> server: {"seq": n, "kind": "command", "set": {...}, "delta": {...}}
                    {"kind": "snapshot"}
  server -> client: {"seq": n, "kind": "snapshot" | "status" | "shape" |
                     "reach" | "error", ...}
"""

from __future__ import annotations

import asyncio
import contextlib
import json
import logging
from pathlib import Path

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.staticfiles import StaticFiles

from .session import TeleopConfig, TeleopSession

__all__ = ["make_app", "serve"]

log = logging.getLogger("helirod.teleop")


def make_app(config: TeleopConfig, static_dir: str | None = None) -> FastAPI:
    @contextlib.asynccontextmanager
    async def lifespan(app: FastAPI):
        worker = asyncio.create_task(recompute_worker())
        yield
        worker.cancel()

    app = FastAPI(title="helirod teleop", lifespan=lifespan)
    session = TeleopSession(config)
    subscribers: set[asyncio.Queue] = set()
    wake = asyncio.Event()
    lock = asyncio.Lock()
    app.state.session = session

    def broadcast(events):
        for ev in events:
            wire = ev.to_wire()
            for q in subscribers:
                q.put_nowait(wire)

    async def recompute_worker():
        while True:
            await wake.wait()
            wake.clear()
            while session.dirty:
                events = await asyncio.to_thread(session.recompute_shape)
                if events and events[0].kind == "error":
                    broadcast(events)
                    break
                if not session.dirty:
                    broadcast(events)
                # else: commands changed mid-solve; recompute with new values

    @app.get("/healthz")
    async def healthz():
        return {"ok": True}

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket):
        await ws.accept()
        queue: asyncio.Queue = asyncio.Queue()
        subscribers.add(queue)

        async def sender():
            while True:
                msg = await queue.get()
                await ws.send_text(json.dumps(msg))

        send_task = asyncio.create_task(sender())
        try:
            async with lock:
                await ws.send_text(json.dumps(session.snapshot().to_wire()))
            while True:
                raw = await ws.receive_text()
                try:
                    msg = json.loads(raw)
                except json.JSONDecodeError as exc:
                    await ws.send_text(
                        json.dumps({"kind": "error", "message": f"bad JSON: {exc}"})
                    )
                    continue
                kind = msg.get("kind")
                if kind == "command":
                    async with lock:
                        events = session.apply_command(
                            set_values=msg.get("set"), delta=msg.get("delta")
                        )
                        broadcast(events)
                    wake.set()
                elif kind == "snapshot":
                    async with lock:
                        await ws.send_text(json.dumps(session.snapshot().to_wire()))
                else:
                    await ws.send_text(
                        json.dumps({"kind": "error", "message": f"unknown kind {kind!r}"})
                    )
        except WebSocketDisconnect:
            pass
        finally:
            send_task.cancel()
            subscribers.discard(queue)

    if static_dir and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    return app


def serve(config: TeleopConfig, host: str = "127.0.0.1", port: int = 8720,
          static_dir: str | None = None):
    """Run the teleop service (blocking)."""
    import uvicorn

    app = make_app(config, static_dir=static_dir)
    log.info("teleop service on ws://%s:%d/ws", host, port)
    uvicorn.run(app, host=host, port=port, log_level="warning")
