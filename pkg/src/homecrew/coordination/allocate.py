"""Centralized allocation over the members' proposals.

The manager assembles every agent's proposal, belief digest, and observation
into one shared context, then picks the joint assignment. The deterministic
path enumerates each agent's candidate plus alternatives plus Idle, filters
joints that violate the conflict rules, and takes the first strict maximum of
score_joint (agents ascending, option order as listed). Text backends are
asked for an assignment line per agent and fall back to that same
deterministic path after budget.parse_retries unusable responses.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from ..agents.belief import Belief, merge_team_belief
from ..agents.execution import (
    EXPLORE_ROOM,
    FETCH_PLACE,
    IDLE,
    MacroTask,
    believed_instance,
    room_hides_content,
)
from ..agents.textify import belief_digest, render_observation
from ..errors import RemoteBackendError, ResponseParseError
from ..reasoner.base import ALLOCATE, Budget, Reasoner, ReasonerRequest, STRUCTURED
from ..reasoner.parsing import parse_allocation
from ..reasoner.prompts import TEMPLATE_V1, AgentBlock, AllocatePayload, render_prompt
from ..summaries import CollaborativeSummary
from ..world.types import (
    GoalSpec,
    HouseMap,
    IN,
    LOC_AGENT,
    LOC_CONTAINER,
    LOC_SURFACE,
    Location,
    Observation,
    TaskProgress,
)
from .types import (
    AllocationInputs,
    ContextEntry,
    CrossAgentContext,
    JointAction,
    Proposal,
    Vocabulary,
    check_conflicts,
    remaining_by_predicate,
)

# Per-agent option cap: candidate + this many alternatives + Idle.
JOINT_ALTERNATIVES = 3

# Placing one needed goal unit outweighs any travel the house can require.
RELEVANCE_WEIGHT = 10
# Sweeping a room that can still hide objects must beat idling from anywhere,
# so this exceeds the longest path in the house.
NOVELTY_WEIGHT = 3


@dataclass(frozen=True)
class AllocationReport:
    """How the decision was reached; recorded in traces, never in prompts."""

    attempts: int
    degraded: bool
    note: str = ""


def assemble_context(
    proposals: Sequence[Proposal],
    beliefs: Dict[int, Belief],
    observations: Dict[int, Observation],
    house: HouseMap,
    goal: GoalSpec,
) -> CrossAgentContext:
    """Bundle every agent's round contribution, ordered by agent id."""
    ordered = sorted(proposals, key=lambda p: p.agent_id)
    entries = tuple(
        ContextEntry(
            agent_id=p.agent_id,
            proposal=p,
            belief_digest=belief_digest(beliefs[p.agent_id], goal),
            observation_digest=render_observation(observations[p.agent_id]),
            belief=beliefs[p.agent_id],
            observation=observations[p.agent_id],
        )
        for p in ordered
    )
    tick = entries[0].observation.tick if entries else 0
    vocabulary = Vocabulary.from_house(house, tuple(e.agent_id for e in entries))
    return CrossAgentContext(
        tick=tick, entries=entries, vocabulary=vocabulary, house=house
    )


def _agent_options(entry: ContextEntry, k: int) -> List[MacroTask]:
    options: List[MacroTask] = [entry.proposal.candidate]
    for task in entry.proposal.alternatives[:k]:
        if task not in options:
            options.append(task)
    idle = MacroTask.idle()
    if idle not in options:
        options.append(idle)
    return options


def enumerate_joint_space(
    context: CrossAgentContext,
    k: int = JOINT_ALTERNATIVES,
    remaining: Optional[Dict[Tuple[str, str, str], int]] = None,
) -> List[JointAction]:
    """Conflict-free joint assignments from the proposed options, in a fixed
    order: agents ascending, per-agent options as proposed (candidate first,
    then alternatives, then Idle), cartesian product row-major."""
    per_agent = [
        (entry.agent_id, _agent_options(entry, k)) for entry in context.entries
    ]
    agent_ids = [agent_id for agent_id, _ in per_agent]
    joints: List[JointAction] = []
    for combo in itertools.product(*[options for _, options in per_agent]):
        joint = JointAction(tasks=dict(zip(agent_ids, combo)))
        if not check_conflicts(joint, remaining):
            joints.append(joint)
    return joints


def _held_matches(task: MacroTask, held: str, house: HouseMap) -> bool:
    if task.object_id is not None:
        return held == task.object_id
    return house.object_classes.get(held) == task.object_class


def _goal_location(task: MacroTask) -> Location:
    kind = LOC_CONTAINER if task.relation == IN else LOC_SURFACE
    return Location(kind, str(task.target))


def _fetch_distance(task: MacroTask, entry: ContextEntry, house: HouseMap) -> int:
    """Believed rooms of travel left: straight to the target when the agent
    already holds a matching object, else out to the believed object and from
    there to the target. Counting both legs keeps a carried object from
    looking dearer than one still on a shelf, which would tell the agent to
    drop it. Unknown positions cost nothing rather than guessing."""
    room = entry.observation.room
    target_room = house.room_of(str(task.target))
    held = entry.observation.held
    if held is not None and _held_matches(task, held, house):
        return house.distance(room, target_room)
    fact = believed_instance(task, entry.belief, room, house)
    if fact is None or fact.location.kind == LOC_AGENT:
        return 0
    object_room = str(house.location_room(fact.location))
    return house.distance(room, object_room) + house.distance(object_room, target_room)


def _can_complete(task: MacroTask, entry: ContextEntry, house: HouseMap) -> bool:
    """Whether this agent's belief leaves the fetch achievable: the object
    (or some instance of the class) is not already at the target and not in
    another agent's hand. Unknown objects stay optimistic."""
    held = entry.observation.held
    if held is not None and _held_matches(task, held, house):
        return True
    target_loc = _goal_location(task)
    if task.object_id is not None:
        fact = entry.belief.facts.get(task.object_id)
        if fact is None:
            return True
        if fact.location == target_loc:
            return False
        if fact.location.kind == LOC_AGENT and int(fact.location.ref) != entry.agent_id:
            return False
        return True
    known = [
        fact
        for fact in entry.belief.facts.values()
        if fact.object_class == task.object_class
    ]
    if not known:
        return True
    for fact in known:
        if fact.location == target_loc:
            continue
        if fact.location.kind == LOC_AGENT and int(fact.location.ref) != entry.agent_id:
            continue
        return True
    return False


def score_joint(
    joint: JointAction,
    context: CrossAgentContext,
    progress: TaskProgress,
    goal: GoalSpec,
) -> int:
    """Deterministic utility of a joint assignment: per agent, goal relevance
    (a needed, achievable fetch unit) weighted RELEVANCE_WEIGHT, minus rooms
    of travel to the next waypoint, plus NOVELTY_WEIGHT for exploring a room
    the team has not exhausted. Duplicate credit never pays: extra agents past
    a predicate's remaining units score no relevance, and only the lowest-id
    explorer of a still-hidden room earns novelty."""
    remaining = remaining_by_predicate(goal, progress)
    house = context.house
    team = merge_team_belief([entry.belief for entry in context.entries])
    fetch_assignees: Dict[Tuple[str, str, str], List[int]] = {}
    explore_assignees: Dict[str, List[int]] = {}
    for agent_id, task in joint.items():
        if task.kind == FETCH_PLACE:
            key = task.predicate_key()
            assert key is not None
            fetch_assignees.setdefault(key, []).append(agent_id)
        elif task.kind == EXPLORE_ROOM:
            explore_assignees.setdefault(str(task.room), []).append(agent_id)
    total = 0
    for agent_id, task in joint.items():
        if task.kind == IDLE:
            continue
        entry = context.entry(agent_id)
        if task.kind == EXPLORE_ROOM:
            room = str(task.room)
            novel = (
                room_hides_content(team, room, house)
                and explore_assignees[room][0] == agent_id
            )
            total += NOVELTY_WEIGHT * int(novel)
            total -= house.distance(entry.observation.room, room)
            continue
        key = task.predicate_key()
        assert key is not None
        need = remaining.get(key, 0)
        within_quota = agent_id in fetch_assignees[key][:need]
        if within_quota and _can_complete(task, entry, house):
            total += RELEVANCE_WEIGHT
        total -= _fetch_distance(task, entry, house)
    return total


def heuristic_allocation(inputs: AllocationInputs) -> JointAction:
    """First strict maximum of score_joint over the enumerated joint space.
    The all-Idle joint always survives the conflict filter, so this never
    comes up empty."""
    remaining = remaining_by_predicate(inputs.goal, inputs.progress)
    best: Optional[JointAction] = None
    best_score = 0
    for joint in enumerate_joint_space(inputs.context, JOINT_ALTERNATIVES, remaining):
        score = score_joint(joint, inputs.context, inputs.progress, inputs.goal)
        if best is None or score > best_score:
            best, best_score = joint, score
    assert best is not None
    return best


def _allocate_request(
    inputs: AllocationInputs, budget: Budget, template: str
) -> ReasonerRequest:
    context = inputs.context
    blocks = tuple(
        AgentBlock(
            agent_id=entry.agent_id,
            proposal_line=entry.proposal.candidate.render(),
            rationale=entry.proposal.rationale,
            alternative_lines=entry.proposal.render_alternatives(),
            belief_text=entry.belief_digest,
            observation_text=entry.observation_digest,
        )
        for entry in context.entries
    )
    payload = AllocatePayload(
        tick=context.tick,
        goal_text=inputs.goal.render(),
        progress_line=(
            f"{inputs.progress.satisfied}/{inputs.progress.total} goal units "
            f"satisfied (tick {context.tick})"
        ),
        summary_lines=inputs.summaries.rendered_lines(),
        blocks=blocks,
        agent_ids=context.agent_ids(),
        task_forms=context.vocabulary.task_form_lines(),
    )
    manager_id = min(context.agent_ids()) if context.entries else 0
    return ReasonerRequest(
        kind=ALLOCATE,
        rendered_prompt=render_prompt(ALLOCATE, payload, template),
        structured_payload=inputs,
        budget=budget,
        tick=context.tick,
        agent_id=manager_id,
    )


def allocate_with_report(
    reasoner: Reasoner,
    context: CrossAgentContext,
    summaries: CollaborativeSummary,
    progress: TaskProgress,
    goal: GoalSpec,
    budget: Budget = Budget(),
    template: str = TEMPLATE_V1,
) -> Tuple[JointAction, AllocationReport]:
    """Allocation plus how it went. Text backends re-ask with the identical
    prompt after malformed or conflicting responses; once the budget is
    spent (or the backend errors out) the deterministic path takes over and
    the report is marked degraded."""
    inputs = AllocationInputs(
        context=context, summaries=summaries, progress=progress, goal=goal
    )
    request = _allocate_request(inputs, budget, template)
    if reasoner.produces == STRUCTURED:
        joint = reasoner.invoke(request).parsed
        return joint, AllocationReport(attempts=1, degraded=False)
    remaining = remaining_by_predicate(goal, progress)
    attempts = 0
    note = ""
    for _ in range(1 + budget.parse_retries):
        attempts += 1
        try:
            response = reasoner.invoke(request)
        except RemoteBackendError as exc:
            note = str(exc)
            break
        try:
            joint = parse_allocation(response.raw_text or "", context, remaining)
        except ResponseParseError as exc:
            note = str(exc)
            continue
        return joint, AllocationReport(attempts=attempts, degraded=False)
    joint = heuristic_allocation(inputs)
    return joint, AllocationReport(attempts=attempts, degraded=True, note=note)


def allocate(
    reasoner: Reasoner,
    context: CrossAgentContext,
    summaries: CollaborativeSummary,
    progress: TaskProgress,
    goal: GoalSpec,
    budget: Budget = Budget(),
    template: str = TEMPLATE_V1,
) -> JointAction:
    """The joint assignment alone; see allocate_with_report."""
    joint, _ = allocate_with_report(
        reasoner, context, summaries, progress, goal, budget, template
    )
    return joint
