"""Shared fixtures."""

from __future__ import annotations

import threading

import pytest

from stubserver import StubServer


@pytest.fixture
def stub(monkeypatch):
    # requests must not route loopback through a proxy
    for name in ("HTTP_PROXY", "HTTPS_PROXY", "http_proxy", "https_proxy"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("NO_PROXY", "127.0.0.1,localhost")
    server = StubServer()
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield server
    server.shutdown()
    server.server_close()
