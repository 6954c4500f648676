from .app import ServerConfig, build_registry, create_app, serve
from .client import ClientError, HttpClient, LocalClient, client_request
from .dispatch import ACTIONS, dispatch

__all__ = [
    "ACTIONS", "dispatch",
    "ServerConfig", "create_app", "build_registry", "serve",
    "ClientError", "client_request", "HttpClient", "LocalClient",
]
