"""Interactive evolution of vertex-shader displacement expressions."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import Server as _Server

__version__ = "0.1.0"


class Client:
    """JSON convenience wrapper over the in-process REST router."""

    def __init__(self, db_path=":memory:"):
        self._server = _Server(db_path)

    def call(self, method, path, payload=None, query=None):
        body = "" if payload is None else _json.dumps(payload)
        status, raw, content_type = self._server.request(method, path, body, query or {})
        if content_type == "application/json":
            return status, _json.loads(raw)
        return status, raw
