"""One episode end to end, plus trace replay.

Per tick: everyone observes and folds the observation into their belief, the
merged team belief stamps the pending history records, a summary is written
if the believed satisfied-count moved (covering exactly the records since
the last change), then members propose, the manager allocates (or, with
allocation disabled, each member self-executes its own candidate), macros
expand to primitives against the team belief, and the world transitions.
The lowest agent id doubles as manager; a single-agent run is the same loop
with a one-entry team.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from ..agents import (
    Belief,
    belief_digest,
    expand_macro,
    merge_team_belief,
    perceive,
)
from ..agents.records import HistoryRecord
from ..coordination import (
    AgentView,
    JointAction,
    allocate_with_report,
    assemble_context,
    make_proposal,
)
from ..errors import RemoteBackendError
from ..reasoner import (
    HeuristicReasoner,
    Reasoner,
    ReasonerRequest,
    ReasonerResponse,
    ScriptedReasoner,
    TEXT,
)
from ..summaries import (
    CollaborativeSummary,
    append,
    detect_change,
    slice_history,
    summarize,
)
from ..world import (
    TaskProgress,
    evaluate_progress,
    init_world,
    observe,
    transition,
)
from .config import EpisodeConfig, build_reasoner
from .trace import TRACE_FORMAT, action_stream, end_of, exchanges_of, header_of


@dataclass(frozen=True)
class EpisodeResult:
    task: str
    num_agents: int
    seed: int
    variant: str
    success: bool
    steps: int
    satisfied: int
    total: int
    num_summaries: int
    degraded_exchanges: int
    records: Tuple[dict, ...]

    def as_row(self) -> dict:
        return {
            "task": self.task,
            "num_agents": self.num_agents,
            "seed": self.seed,
            "variant": self.variant,
            "success": self.success,
            "steps": self.steps,
            "satisfied": self.satisfied,
            "total": self.total,
            "summaries": self.num_summaries,
            "degraded_exchanges": self.degraded_exchanges,
        }


class RecordingReasoner(Reasoner):
    """Pass-through wrapper that appends every text exchange (response or
    transport failure) to the trace sink. Structured backends leave no
    exchanges; they are reproduced by rerunning, not by replaying text."""

    def __init__(self, inner: Reasoner, sink: List[dict]):
        self.inner = inner
        self.sink = sink
        self.name = inner.name
        self.produces = inner.produces

    def invoke(self, request: ReasonerRequest) -> ReasonerResponse:
        if self.produces != TEXT:
            return self.inner.invoke(request)
        entry = {
            "type": "exchange",
            "kind": request.kind,
            "tick": request.tick,
            "agent_id": request.agent_id,
        }
        try:
            response = self.inner.invoke(request)
        except RemoteBackendError:
            entry["response"] = None
            self.sink.append(entry)
            raise
        entry["response"] = response.raw_text
        self.sink.append(entry)
        return response


def run_episode(
    config: EpisodeConfig,
    manager: Optional[Reasoner] = None,
    member: Optional[Reasoner] = None,
) -> EpisodeResult:
    state, goal = init_world(config.task, config.num_agents, config.seed)
    agent_ids = sorted(state.agents)
    budget = config.budget()
    if manager is None:
        manager = build_reasoner(config, config.manager_backend)
    if member is None:
        member = (
            manager
            if config.member_backend == config.manager_backend
            else build_reasoner(config, config.member_backend)
        )
    sink: List[dict] = [
        {
            "type": "header",
            "format": TRACE_FORMAT,
            "task": config.task,
            "num_agents": config.num_agents,
            "seed": config.seed,
            "variant": config.variant,
            "manager_backend": manager.name,
            "member_backend": member.name,
            "max_steps": config.max_steps,
            "template": config.template,
        }
    ]
    recording_manager = RecordingReasoner(manager, sink)
    recording_member = RecordingReasoner(member, sink)

    beliefs: Dict[int, Belief] = {i: Belief.empty() for i in agent_ids}
    team = Belief.empty()
    history: List[HistoryRecord] = []
    collected = CollaborativeSummary.empty()
    last_believed = TaskProgress(
        0, goal.total_units(), tuple(0 for _ in goal.predicates)
    )
    t_last = 0
    pending: List[Tuple[int, object, tuple]] = []
    degraded = 0
    success = False

    while True:
        observations = {i: observe(state, i) for i in agent_ids}
        for i in agent_ids:
            beliefs[i] = perceive(observations[i], beliefs[i])
        team = merge_team_belief([beliefs[i] for i in agent_ids])
        if pending:
            digest = belief_digest(team, goal)
            for agent_id, action, events in pending:
                history.append(
                    HistoryRecord(
                        tick=state.tick,
                        agent_id=agent_id,
                        action=action,
                        events=events,
                        belief_digest=digest,
                    )
                )
            pending = []
        believed = evaluate_progress(team, goal)
        if config.use_summaries and detect_change(believed, last_believed):
            window = slice_history(history, t_last, state.tick)
            if window:
                summary = summarize(
                    recording_manager,
                    window,
                    believed.satisfied - last_believed.satisfied,
                    (t_last, state.tick),
                    index=len(collected) + 1,
                    goal_text=goal.render(),
                    budget=budget,
                    template=config.template,
                )
                collected = append(collected, summary)
                degraded += int(summary.degraded)
                sink.append(
                    {
                        "type": "summary",
                        "tick": state.tick,
                        "index": summary.index,
                        "interval": list(summary.interval),
                        "delta": summary.delta,
                        "text": summary.text,
                        "degraded": summary.degraded,
                    }
                )
                t_last = state.tick
                last_believed = believed
        progress = evaluate_progress(state, goal)
        if progress.done():
            success = True
            steps = state.tick
            break
        if state.tick >= config.max_steps:
            steps = config.max_steps
            break

        window_records = tuple(slice_history(history, t_last, state.tick))
        proposals = []
        for i in agent_ids:
            view = AgentView(
                agent_id=i,
                tick=state.tick,
                num_agents=config.num_agents,
                house=state.house,
                goal=goal,
                progress=believed,
                observation=observations[i],
                belief=beliefs[i],
                history_window=window_records,
            )
            # Proposals are member work even for the agent carrying the
            # manager role; only ALLOCATE/SUMMARIZE use the manager backend.
            proposal = make_proposal(recording_member, view, budget, config.template)
            degraded += int(proposal.degraded)
            proposals.append(proposal)
        proposal_lines = {str(p.agent_id): p.candidate.render() for p in proposals}
        if config.use_allocation:
            context = assemble_context(
                proposals, beliefs, observations, state.house, goal
            )
            prompt_summaries = (
                collected if config.use_summaries else CollaborativeSummary.empty()
            )
            joint, report = allocate_with_report(
                recording_manager,
                context,
                prompt_summaries,
                believed,
                goal,
                budget,
                config.template,
            )
            degraded += int(report.degraded)
            mode, attempts, was_degraded = "centralized", report.attempts, report.degraded
        else:
            joint = JointAction(tasks={p.agent_id: p.candidate for p in proposals})
            mode, attempts, was_degraded = "self", 0, False
        sink.append(
            {
                "type": "allocation",
                "tick": state.tick,
                "mode": mode,
                "attempts": attempts,
                "degraded": was_degraded,
                "joint": {str(a): task.render() for a, task in joint.items()},
                "proposals": proposal_lines,
            }
        )
        actions = {
            i: expand_macro(joint.task_for(i), team, observations[i], state.house)
            for i in agent_ids
        }
        state, events = transition(state, actions)
        pending = [
            (i, actions[i], tuple(e for e in events if e.agent_id == i))
            for i in agent_ids
        ]
        sink.append(
            {
                "type": "tick",
                "tick": state.tick,
                "actions": {str(i): actions[i].render() for i in agent_ids},
                "events": [e.render() for e in events],
                "satisfied": evaluate_progress(state, goal).satisfied,
            }
        )

    sink.append(
        {
            "type": "end",
            "success": success,
            "steps": steps,
            "satisfied": progress.satisfied,
            "total": progress.total,
            "summaries": len(collected),
            "degraded_exchanges": degraded,
        }
    )
    return EpisodeResult(
        task=config.task,
        num_agents=config.num_agents,
        seed=config.seed,
        variant=config.variant,
        success=success,
        steps=steps,
        satisfied=progress.satisfied,
        total=progress.total,
        num_summaries=len(collected),
        degraded_exchanges=degraded,
        records=tuple(sink),
    )


def config_from_header(header: dict) -> EpisodeConfig:
    variant = header["variant"]
    return EpisodeConfig(
        task=header["task"],
        num_agents=int(header["num_agents"]),
        seed=int(header["seed"]),
        manager_backend=header["manager_backend"],
        member_backend=header["member_backend"],
        use_allocation="no_allocation" not in variant,
        use_summaries="no_summary" not in variant,
        max_steps=int(header["max_steps"]),
        template=header["template"],
    )


def replay_trace(records: List[dict]) -> Tuple[EpisodeResult, bool, str]:
    """Rerun a trace with its text exchanges scripted back and compare step
    count plus the per-tick action stream against the recording."""
    header = header_of(records)
    config = config_from_header(header)
    scripted = ScriptedReasoner.from_exchanges(exchanges_of(records))
    manager = (
        HeuristicReasoner()
        if header["manager_backend"] == "heuristic"
        else scripted
    )
    member = (
        HeuristicReasoner()
        if header["member_backend"] == "heuristic"
        else scripted
    )
    result = run_episode(config, manager, member)
    recorded_end = end_of(records)
    problems = []
    if result.steps != int(recorded_end["steps"]):
        problems.append(
            f"steps diverged: recorded {recorded_end['steps']}, replayed {result.steps}"
        )
    if bool(recorded_end["success"]) != result.success:
        problems.append("success flag diverged")
    original = action_stream(records)
    replayed = action_stream(list(result.records))
    if original != replayed:
        first_bad = next(
            (
                (tick, a, b)
                for (tick, a), (_, b) in zip(original, replayed)
                if a != b
            ),
            None,
        )
        problems.append(f"action stream diverged, first difference: {first_bad}")
    return result, not problems, "; ".join(problems)
