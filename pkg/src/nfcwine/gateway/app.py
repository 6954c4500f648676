"""FastAPI service exposing the registry at POST <base>/app/<action>.

The service is stateless: all protocol state (pending rotations, archive,
counters) lives in the journal-backed registry, so the process can die and
restart between a scan and its commit without breaking recovery.  CORS is
wide open; this runs at desk scale behind nothing.
"""

from __future__ import annotations

import datetime as _dt
import json
from dataclasses import dataclass

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from ..hashing import DEFAULT_SALT
from ..registry import Registry
from .dispatch import dispatch

DEFAULT_BASE_PATH = "/NFCWine2013"


@dataclass
class ServerConfig:
    host: str = "127.0.0.1"
    port: int = 45678
    base_path: str = DEFAULT_BASE_PATH
    salt: str = DEFAULT_SALT
    journal_path: str | None = None
    fixed_date: str | None = None  # "dd-MM-yyyy"; None means wall clock

    def __post_init__(self) -> None:
        if not self.base_path:
            raise ValueError("base path must be non-empty")
        if not self.base_path.startswith("/"):
            self.base_path = "/" + self.base_path


def build_registry(config: ServerConfig) -> Registry:
    clock = None
    if config.fixed_date is not None:
        pinned = _dt.datetime.strptime(config.fixed_date, "%d-%m-%Y").date()
        clock = lambda: pinned  # noqa: E731
    reg = Registry(salt=config.salt, journal_path=config.journal_path, clock=clock)
    if config.journal_path is not None:
        # resume from whatever the previous process committed
        reg.replay_journal(config.journal_path)
    return reg


def create_app(registry: Registry, base_path: str = DEFAULT_BASE_PATH) -> FastAPI:
    app = FastAPI(title="nfcwine gateway")
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])
    app.state.registry = registry

    @app.post(base_path + "/app/{action}")
    async def handle(action: str, request: Request) -> JSONResponse:
        body = await _read_body(request)
        if body is None:
            return JSONResponse(
                {"error": "MalformedBody", "detail": "expected a JSON object"},
                status_code=400)
        status, payload = dispatch(registry, action, body)
        return JSONResponse(payload, status_code=status)

    return app


async def _read_body(request: Request) -> dict | None:
    """JSON object bodies are the contract; form bodies accepted for tooling."""
    raw = await request.body()
    if not raw:
        return {}
    content_type = request.headers.get("content-type", "")
    if "application/x-www-form-urlencoded" in content_type:
        form = await request.form()
        return {k: v for k, v in form.items()}
    try:
        body = json.loads(raw)
    except ValueError:
        return None
    return body if isinstance(body, dict) else None


def serve(config: ServerConfig) -> None:
    """Run the gateway until interrupted."""
    import uvicorn

    registry = build_registry(config)
    app = create_app(registry, base_path=config.base_path)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
