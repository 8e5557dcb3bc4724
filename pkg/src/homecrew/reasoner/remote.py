"""Client for an OpenAI-compatible chat-completions endpoint.

Requests are sent at temperature 0 with the rendered prompt as a single user
message. The API key is read from an environment variable at call time and
never stored on the instance, logged, or echoed into traces. Transport
failures retry with a short backoff up to the request budget, then surface
as RemoteBackendError for the caller's fallback path to handle.
"""

from __future__ import annotations

import os
import threading
import time
from typing import Optional

import requests

from ..errors import RemoteBackendError
from .base import TEXT, Reasoner, ReasonerRequest, ReasonerResponse

DEFAULT_KEY_ENV = "HOMECREW_API_KEY"
RETRY_BACKOFF_S = 0.05


class RemoteReasoner(Reasoner):
    name = "remote"
    produces = TEXT

    def __init__(
        self,
        endpoint_url: str,
        model: str,
        api_key_env: str = DEFAULT_KEY_ENV,
        timeout_s: Optional[float] = None,
        max_concurrency: int = 4,
    ):
        if not endpoint_url:
            raise RemoteBackendError("remote backend needs an endpoint URL")
        self.endpoint_url = endpoint_url.rstrip("/")
        self.model = model
        self.api_key_env = api_key_env
        self.timeout_s = timeout_s
        self._gate = threading.Semaphore(max(1, max_concurrency))
        self._session = requests.Session()

    def _headers(self) -> dict:
        headers = {"Content-Type": "application/json"}
        api_key = os.environ.get(self.api_key_env, "")
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        return headers

    def invoke(self, request: ReasonerRequest) -> ReasonerResponse:
        body = {
            "model": self.model,
            "temperature": 0,
            "messages": [{"role": "user", "content": request.rendered_prompt}],
        }
        timeout = self.timeout_s if self.timeout_s is not None else request.budget.timeout_s
        url = f"{self.endpoint_url}/chat/completions"
        attempts = 1 + request.budget.transport_retries
        last_error = "no attempt made"
        for attempt in range(attempts):
            if attempt:
                time.sleep(RETRY_BACKOFF_S)
            started = time.monotonic()
            try:
                with self._gate:
                    reply = self._session.post(
                        url, json=body, headers=self._headers(), timeout=timeout
                    )
            except requests.RequestException as exc:
                last_error = f"transport error: {exc.__class__.__name__}"
                continue
            latency = time.monotonic() - started
            if reply.status_code != 200:
                last_error = f"HTTP {reply.status_code}"
                continue
            try:
                payload = reply.json()
                text = payload["choices"][0]["message"]["content"]
            except (ValueError, LookupError, TypeError):
                last_error = "malformed completion payload"
                continue
            usage = payload.get("usage") or {}
            counts = {
                key: int(value)
                for key, value in usage.items()
                if isinstance(value, int)
            }
            return ReasonerResponse(
                raw_text=str(text), latency_s=latency, token_counts=counts
            )
        raise RemoteBackendError(
            f"{last_error} after {attempts} attempt(s) to {url}"
        )
