"""Thin HTTP client mirroring the apps' single success/error callback split.

``client_request`` either returns the parsed JSON body of a 200 response or
raises :class:`ClientError` -- exactly one of the two, never both.  The
``kind`` attribute separates transport failures, non-200 statuses and
unparseable bodies.
"""

from __future__ import annotations

import json

import httpx


class ClientError(Exception):
    def __init__(self, kind: str, detail: str, status: int | None = None,
                 body: object = None) -> None:
        super().__init__(f"{kind}: {detail}")
        self.kind = kind  # "transport" | "status" | "json"
        self.status = status
        self.body = body


class HttpClient:
    """Bound form of :func:`client_request` for callers that hold a client."""

    def __init__(self, base_url: str, timeout: float = 10.0) -> None:
        self.base_url = base_url
        self.timeout = timeout

    def call(self, action: str, payload: dict) -> dict:
        return client_request(self.base_url, action, payload, timeout=self.timeout)


class LocalClient:
    """In-process client over the same dispatch table the HTTP app uses.

    Bodies are forced through JSON so behavior matches the wire exactly.
    """

    def __init__(self, registry) -> None:
        self.registry = registry

    def call(self, action: str, payload: dict) -> dict:
        from .dispatch import dispatch

        status, body = dispatch(self.registry, action, json.loads(json.dumps(payload)))
        body = json.loads(json.dumps(body))
        if status != 200:
            raise ClientError("status", f"HTTP {status} from {action}",
                              status=status, body=body)
        return body


def client_request(base_url: str, action: str, payload: dict,
                   timeout: float = 10.0) -> dict:
    """POST ``payload`` as JSON to ``<base_url>/app/<action>``."""
    url = base_url.rstrip("/") + "/app/" + action
    try:
        resp = httpx.post(url, json=payload, timeout=timeout)
    except httpx.HTTPError as exc:
        raise ClientError("transport", str(exc)) from exc
    if resp.status_code != 200:
        try:
            body = resp.json()
        except ValueError:
            body = resp.text
        raise ClientError("status", f"HTTP {resp.status_code} from {action}",
                          status=resp.status_code, body=body)
    try:
        return resp.json()
    except ValueError as exc:
        raise ClientError("json", f"unparseable body from {action}") from exc
