"""Episode history records: one row per agent per tick."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from ..world.types import Action, Event


@dataclass(frozen=True)
class HistoryRecord:
    """What one agent did at one tick and what came of it.

    tick is the post-transition tick: the first tick at which the action's
    effects are part of the world. belief_digest is a compact rendering of
    the merged team belief at that same tick.
    """

    tick: int
    agent_id: int
    action: Action
    events: Tuple[Event, ...] = ()
    belief_digest: str = ""
