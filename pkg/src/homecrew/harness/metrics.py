"""Benchmark metrics.

The step measure for one cell is the mean episode length, with failed
episodes entering at the step cap. Efficiency improvement between two step
measures is their signed difference as a percentage of the larger one,
rounded to an integer; each cell reports it against the single-agent full
run of the same task.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

VARIANT_ORDER = ("full", "no_summary", "no_allocation", "no_allocation+no_summary")


def efficiency_fraction(first: float, second: float) -> float:
    """Signed fractional improvement from first to second, normalized by the
    larger measure; positive when second is the smaller (better) one."""
    m0 = max(first, second)
    if m0 <= 0:
        return 0.0
    return (first - second) / m0


def compute_ei(first: float, second: float) -> int:
    return round(100.0 * efficiency_fraction(first, second))


@dataclass(frozen=True)
class CellMetrics:
    task: str
    variant: str
    num_agents: int
    episodes: int
    successes: int
    mean_steps: float
    success_rate: float
    ei_vs_single: Optional[int]

    def as_dict(self) -> dict:
        return {
            "task": self.task,
            "variant": self.variant,
            "num_agents": self.num_agents,
            "episodes": self.episodes,
            "successes": self.successes,
            "mean_steps": round(self.mean_steps, 3),
            "success_rate": round(self.success_rate, 3),
            "ei_vs_single": self.ei_vs_single,
        }


def _variant_rank(variant: str) -> int:
    return (
        VARIANT_ORDER.index(variant)
        if variant in VARIANT_ORDER
        else len(VARIANT_ORDER)
    )


def aggregate(rows: Sequence[dict]) -> List[CellMetrics]:
    """Cell metrics from per-episode rows, ordered (task, variant, agents).
    The EI column compares each cell to the same task's full single-agent
    cell and is omitted when that baseline is absent."""
    grouped: Dict[Tuple[str, str, int], List[dict]] = {}
    for row in rows:
        key = (str(row["task"]), str(row["variant"]), int(row["num_agents"]))
        grouped.setdefault(key, []).append(row)
    means = {
        key: sum(int(r["steps"]) for r in cell_rows) / len(cell_rows)
        for key, cell_rows in grouped.items()
    }
    cells = []
    for key in sorted(grouped, key=lambda k: (k[0], _variant_rank(k[1]), k[2])):
        task, variant, num_agents = key
        cell_rows = grouped[key]
        baseline = means.get((task, "full", 1))
        cells.append(
            CellMetrics(
                task=task,
                variant=variant,
                num_agents=num_agents,
                episodes=len(cell_rows),
                successes=sum(1 for r in cell_rows if r["success"] in (True, "True", 1)),
                mean_steps=means[key],
                success_rate=sum(
                    1 for r in cell_rows if r["success"] in (True, "True", 1)
                )
                / len(cell_rows),
                ei_vs_single=(
                    compute_ei(baseline, means[key]) if baseline is not None else None
                ),
            )
        )
    return cells


LONG_FIELDS = [
    "task",
    "variant",
    "num_agents",
    "seed",
    "success",
    "steps",
    "satisfied",
    "total",
    "summaries",
    "degraded_exchanges",
]


def long_csv(rows: Sequence[dict]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=LONG_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({field: row[field] for field in LONG_FIELDS})
    return buffer.getvalue()


def read_long_csv(path: str) -> List[dict]:
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as handle:
        for row in csv.DictReader(handle):
            row["num_agents"] = int(row["num_agents"])
            row["seed"] = int(row["seed"])
            row["steps"] = int(row["steps"])
            row["success"] = row["success"] == "True"
            rows.append(row)
    return rows


def metrics_csv(cells: Sequence[CellMetrics]) -> str:
    buffer = io.StringIO()
    fields = [
        "task",
        "variant",
        "num_agents",
        "episodes",
        "successes",
        "mean_steps",
        "success_rate",
        "ei_vs_single",
    ]
    writer = csv.DictWriter(buffer, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for cell in cells:
        writer.writerow(cell.as_dict())
    return buffer.getvalue()


def metrics_json(cells: Sequence[CellMetrics]) -> str:
    return json.dumps([cell.as_dict() for cell in cells], sort_keys=True, indent=2)


def format_table(cells: Sequence[CellMetrics]) -> str:
    """Aligned text table for terminal output."""
    header = ["task", "variant", "agents", "runs", "ok", "mean steps", "EI%"]
    body = [
        [
            cell.task,
            cell.variant,
            str(cell.num_agents),
            str(cell.episodes),
            str(cell.successes),
            f"{cell.mean_steps:.1f}",
            "-" if cell.ei_vs_single is None else str(cell.ei_vs_single),
        ]
        for cell in cells
    ]
    widths = [
        max(len(row[col]) for row in [header] + body) for col in range(len(header))
    ]
    lines = []
    for row in [header] + body:
        lines.append("  ".join(value.ljust(width) for value, width in zip(row, widths)))
    return "\n".join(lines)
