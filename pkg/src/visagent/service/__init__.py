from .http import ServiceHandle, serve_app
from .manager import InvalidTransition, SessionManager, UnknownSession

__all__ = ["InvalidTransition", "ServiceHandle", "SessionManager", "UnknownSession", "serve_app"]
