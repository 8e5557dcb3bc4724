"""Shared exception types.

Callers distinguish bad configuration (reject before running), contract
violations (a caller broke a documented precondition), and recoverable
reasoner problems (parse failures, exhausted fixtures, transport errors).
"""

from __future__ import annotations


class EngineError(Exception):
    """Base class for engine-raised errors."""


class ConfigError(EngineError):
    """Invalid configuration or scenario definition."""


class ContractViolation(EngineError):
    """A documented precondition was broken by the caller."""


class ResponseParseError(EngineError):
    """A reasoner response did not match the expected grammar."""

    def __init__(self, reason: str, line: str | None = None):
        self.reason = reason
        self.line = line
        detail = reason if line is None else f"{reason}: {line!r}"
        super().__init__(detail)


class FixtureExhausted(EngineError):
    """The scripted backend ran out of recorded responses for a key."""


class RemoteBackendError(EngineError):
    """The remote endpoint failed after exhausting transport retries."""
