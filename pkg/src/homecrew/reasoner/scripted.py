"""Replay backend: canned text responses keyed by decision point.

Fixtures map (kind, tick, agent_id) to a FIFO queue of raw responses, which
is exactly the information a trace's exchange records carry. Replaying a
trace therefore reproduces the original episode without any live backend;
running past the recorded script is a hard error rather than a silent
improvisation.
"""

from __future__ import annotations

import json
from typing import Dict, Iterable, List, Optional, Tuple

from ..errors import FixtureExhausted, RemoteBackendError
from .base import TEXT, Reasoner, ReasonerRequest, ReasonerResponse

FixtureKey = Tuple[str, int, int]

# A None response replays a recorded transport failure.
FixtureValue = Optional[str]


class ScriptedReasoner(Reasoner):
    name = "scripted"
    produces = TEXT

    def __init__(self, fixtures: Dict[FixtureKey, List[FixtureValue]]):
        self._queues: Dict[FixtureKey, List[FixtureValue]] = {
            key: list(responses) for key, responses in fixtures.items()
        }

    @classmethod
    def from_exchanges(
        cls, exchanges: Iterable[Tuple[str, int, int, FixtureValue]]
    ) -> "ScriptedReasoner":
        """Build from (kind, tick, agent_id, raw_text) tuples in replay order."""
        fixtures: Dict[FixtureKey, List[FixtureValue]] = {}
        for kind, tick, agent_id, raw_text in exchanges:
            fixtures.setdefault((kind, tick, agent_id), []).append(raw_text)
        return cls(fixtures)

    def pending(self) -> int:
        return sum(len(queue) for queue in self._queues.values())

    def invoke(self, request: ReasonerRequest) -> ReasonerResponse:
        key = (request.kind, request.tick, request.agent_id)
        queue = self._queues.get(key)
        if not queue:
            raise FixtureExhausted(f"no scripted response for {key}")
        value = queue.pop(0)
        if value is None:
            raise RemoteBackendError(f"scripted transport failure for {key}")
        return ReasonerResponse(raw_text=value)


def load_fixtures(path: str) -> Dict[FixtureKey, List[str]]:
    """Read fixtures from JSONL: one object per line with kind, tick,
    agent_id, and response fields (a null response replays a transport
    failure). Repeated keys queue in file order."""
    fixtures: Dict[FixtureKey, List[FixtureValue]] = {}
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            key = (record["kind"], int(record["tick"]), int(record["agent_id"]))
            fixtures.setdefault(key, []).append(record.get("response"))
    return fixtures
