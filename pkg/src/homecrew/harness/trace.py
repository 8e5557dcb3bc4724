"""Episode traces: deterministic JSONL, one record per line.

Serialization is pinned to json.dumps(sort_keys=True, separators=(",", ":")),
and records carry no wall-clock material, so equal runs produce byte-equal
files. Record types: header, exchange, allocation, summary, tick, end.
Exchange records hold every raw text-backend response (null for a transport
failure), which is exactly what a replay needs to rebuild the backends.
"""

from __future__ import annotations

import hashlib
import json
from typing import Dict, List, Optional, Tuple

from ..errors import ContractViolation

TRACE_FORMAT = 1


def render_line(record: dict) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


def render_trace(records: List[dict]) -> str:
    return "\n".join(render_line(record) for record in records) + "\n"


def trace_sha256(records: List[dict]) -> str:
    return hashlib.sha256(render_trace(records).encode("utf-8")).hexdigest()


def write_trace(records: List[dict], path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(render_trace(records))


def load_trace(path: str) -> List[dict]:
    records = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                records.append(json.loads(line))
    return records


def header_of(records: List[dict]) -> dict:
    if not records or records[0].get("type") != "header":
        raise ContractViolation("trace does not start with a header record")
    return records[0]


def end_of(records: List[dict]) -> dict:
    if not records or records[-1].get("type") != "end":
        raise ContractViolation("trace does not finish with an end record")
    return records[-1]


def exchanges_of(
    records: List[dict],
) -> List[Tuple[str, int, int, Optional[str]]]:
    """(kind, tick, agent_id, response) tuples in recorded order, ready for
    ScriptedReasoner.from_exchanges."""
    return [
        (r["kind"], int(r["tick"]), int(r["agent_id"]), r.get("response"))
        for r in records
        if r.get("type") == "exchange"
    ]


def action_stream(records: List[dict]) -> List[Tuple[int, Dict[str, str]]]:
    """Per-tick primitive actions, the unit replay fidelity is judged on."""
    return [
        (int(r["tick"]), dict(r["actions"]))
        for r in records
        if r.get("type") == "tick"
    ]
