"""Symbolic household world: rooms, furniture, objects, and dynamics."""

from .engine import evaluate_progress, legal_actions, observe, reward, transition
from .scenarios import build_goal, build_house, init_world, load_catalog, task_categories
from .types import (
    EXPLORE,
    IN,
    LOC_AGENT,
    LOC_CONTAINER,
    LOC_ROOM,
    LOC_SURFACE,
    ON,
    WAIT,
    Action,
    AgentState,
    Event,
    GoalPredicate,
    GoalSpec,
    HouseMap,
    Location,
    Observation,
    ObjectSighting,
    TaskProgress,
    WorldState,
    close_container,
    go_to,
    grab,
    open_container,
    put_in,
    put_on,
)

__all__ = [
    "Action",
    "AgentState",
    "EXPLORE",
    "Event",
    "GoalPredicate",
    "GoalSpec",
    "HouseMap",
    "IN",
    "LOC_AGENT",
    "LOC_CONTAINER",
    "LOC_ROOM",
    "LOC_SURFACE",
    "Location",
    "ON",
    "Observation",
    "ObjectSighting",
    "TaskProgress",
    "WAIT",
    "WorldState",
    "build_goal",
    "build_house",
    "close_container",
    "evaluate_progress",
    "go_to",
    "grab",
    "init_world",
    "legal_actions",
    "load_catalog",
    "observe",
    "open_container",
    "put_in",
    "put_on",
    "reward",
    "task_categories",
    "transition",
]
