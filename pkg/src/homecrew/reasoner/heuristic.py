"""Deterministic structured backend.

Computes every decision directly from the request's structured payload, so
runs need no network and are exactly reproducible. This is also the engine
behind the degraded fallbacks of the text path, which keeps fallback and
backend behavior identical by construction.
"""

from __future__ import annotations

from ..errors import ContractViolation
from .base import (
    ALLOCATE,
    PROPOSE,
    STRUCTURED,
    SUMMARIZE,
    Reasoner,
    ReasonerRequest,
    ReasonerResponse,
)


class HeuristicReasoner(Reasoner):
    name = "heuristic"
    produces = STRUCTURED

    def invoke(self, request: ReasonerRequest) -> ReasonerResponse:
        # Deferred: these modules depend on this package for base/prompts.
        if request.kind == PROPOSE:
            from ..coordination.negotiate import heuristic_proposal

            return ReasonerResponse(parsed=heuristic_proposal(request.structured_payload))
        if request.kind == ALLOCATE:
            from ..coordination.allocate import heuristic_allocation

            return ReasonerResponse(parsed=heuristic_allocation(request.structured_payload))
        if request.kind == SUMMARIZE:
            from ..summaries import template_digest

            inputs = request.structured_payload
            return ReasonerResponse(
                parsed=template_digest(inputs.records, inputs.delta)
            )
        raise ContractViolation(f"unknown request kind {request.kind!r}")
