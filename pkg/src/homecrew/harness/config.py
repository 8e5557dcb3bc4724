"""Run configuration and backend construction.

An EpisodeConfig pins everything a run depends on; two runs with equal
configs and backends must produce byte-identical traces. Remote endpoint
details live in RemoteConfig; the API key itself is only ever read from the
named environment variable when a request is sent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from ..errors import ConfigError
from ..reasoner import (
    Budget,
    HeuristicReasoner,
    Reasoner,
    RemoteReasoner,
    ScriptedReasoner,
    TEMPLATE_V1,
    load_fixtures,
)
from ..reasoner.remote import DEFAULT_KEY_ENV
from ..world import task_categories

BACKENDS = ("heuristic", "remote", "scripted")

DEFAULT_MAX_STEPS = 250


@dataclass(frozen=True)
class RemoteConfig:
    endpoint_url: str = ""
    model: str = ""
    api_key_env: str = DEFAULT_KEY_ENV
    timeout_s: float = 30.0
    transport_retries: int = 2
    max_concurrency: int = 4


@dataclass(frozen=True)
class EpisodeConfig:
    task: str
    num_agents: int = 2
    seed: int = 0
    manager_backend: str = "heuristic"
    member_backend: str = "heuristic"
    use_allocation: bool = True
    use_summaries: bool = True
    max_steps: int = DEFAULT_MAX_STEPS
    parse_retries: int = 2
    template: str = TEMPLATE_V1
    remote: RemoteConfig = field(default_factory=RemoteConfig)
    fixtures_path: Optional[str] = None

    def __post_init__(self):
        if self.task not in task_categories():
            raise ConfigError(f"unknown task category {self.task!r}")
        if not 1 <= self.num_agents <= 3:
            raise ConfigError("num_agents must be 1, 2, or 3")
        if self.max_steps < 1:
            raise ConfigError("max_steps must be positive")
        for name in (self.manager_backend, self.member_backend):
            if name not in BACKENDS:
                raise ConfigError(f"unknown backend {name!r}")

    @property
    def variant(self) -> str:
        if self.use_allocation and self.use_summaries:
            return "full"
        if not self.use_allocation and not self.use_summaries:
            return "no_allocation+no_summary"
        return "no_allocation" if not self.use_allocation else "no_summary"

    def budget(self) -> Budget:
        return Budget(
            timeout_s=self.remote.timeout_s,
            parse_retries=self.parse_retries,
            transport_retries=self.remote.transport_retries,
        )


def build_reasoner(config: EpisodeConfig, backend: str) -> Reasoner:
    if backend == "heuristic":
        return HeuristicReasoner()
    if backend == "remote":
        remote = config.remote
        if not remote.endpoint_url or not remote.model:
            raise ConfigError("remote backend needs --endpoint-url and --model")
        return RemoteReasoner(
            endpoint_url=remote.endpoint_url,
            model=remote.model,
            api_key_env=remote.api_key_env,
            timeout_s=remote.timeout_s,
            max_concurrency=remote.max_concurrency,
        )
    if backend == "scripted":
        if not config.fixtures_path:
            raise ConfigError("scripted backend needs --fixtures")
        return ScriptedReasoner(load_fixtures(config.fixtures_path))
    raise ConfigError(f"unknown backend {backend!r}")


def load_config_file(path: str) -> dict:
    """JSON file of CLI defaults; keys mirror the long option names."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}")
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    return data
