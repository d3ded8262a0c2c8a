"""Shared domain types: grid positions, agents, commands, modals, session state.

This module is the leaf of the dependency graph; level logic lives in
``level1``/``level2``/``level3`` and the tick dispatcher in ``engine``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from .events import GameEvent
from .rng import Rng


class MLQuestError(Exception):
    """Base class for all engine errors."""


class InvalidCommand(MLQuestError):
    """Command not applicable in the current level or phase; state unchanged."""


class ParseError(MLQuestError):
    """A document (level file, save, message) failed strict parsing."""


def check_keys(data: dict, required: set[str], optional: set[str] = frozenset(), where: str = "document") -> None:
    """Strict-parsing guard: every required key present, no unknown keys."""
    if not isinstance(data, dict):
        raise ParseError(f"{where}: expected an object, got {type(data).__name__}")
    missing = required - data.keys()
    if missing:
        raise ParseError(f"{where}: missing keys {sorted(missing)}")
    unknown = data.keys() - required - optional
    if unknown:
        raise ParseError(f"{where}: unknown keys {sorted(unknown)}")


class Direction(str, Enum):
    NORTH = "north"
    SOUTH = "south"
    EAST = "east"
    WEST = "west"

    @property
    def opposite(self) -> "Direction":
        return _OPPOSITE[self]

    @property
    def delta(self) -> tuple[int, int]:
        """(row, col) offset; north decreases the row."""
        return _DELTA[self]


_OPPOSITE = {
    Direction.NORTH: Direction.SOUTH,
    Direction.SOUTH: Direction.NORTH,
    Direction.EAST: Direction.WEST,
    Direction.WEST: Direction.EAST,
}

_DELTA = {
    Direction.NORTH: (-1, 0),
    Direction.SOUTH: (1, 0),
    Direction.EAST: (0, 1),
    Direction.WEST: (0, -1),
}

# Fixed scan order wherever neighbours are enumerated; randomness must not
# depend on dict or set iteration order.
DIRECTION_ORDER = (Direction.NORTH, Direction.EAST, Direction.SOUTH, Direction.WEST)


@dataclass(frozen=True, order=True)
class GridPos:
    row: int
    col: int

    def step(self, direction: Direction) -> "GridPos":
        dr, dc = direction.delta
        return GridPos(self.row + dr, self.col + dc)

    def direction_to(self, other: "GridPos") -> Direction:
        """Direction of the single-step move from self to an adjacent cell."""
        for direction in DIRECTION_ORDER:
            if self.step(direction) == other:
                return direction
        raise ValueError(f"{other} is not one step from {self}")

    def chebyshev(self, other: "GridPos") -> int:
        return max(abs(self.row - other.row), abs(self.col - other.col))

    def euclidean(self, other: "GridPos") -> float:
        return math.hypot(self.row - other.row, self.col - other.col)

    def to_list(self) -> list[int]:
        return [self.row, self.col]

    @classmethod
    def from_list(cls, data) -> "GridPos":
        if not isinstance(data, (list, tuple)) or len(data) != 2:
            raise ParseError(f"position must be [row, col], got {data!r}")
        return cls(int(data[0]), int(data[1]))


class AgentKind(str, Enum):
    PLAYER = "player"
    RED_MAN = "red_man"
    BOB = "bob"


MAX_HEALTH = 100


@dataclass
class AgentState:
    id: str
    kind: AgentKind
    pos: GridPos
    health: int | None = None  # players only, clamped to [0, MAX_HEALTH]
    votes: int | None = None  # voting agents only

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind.value,
            "pos": self.pos.to_list(),
            "health": self.health,
            "votes": self.votes,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AgentState":
        check_keys(data, {"id", "kind", "pos", "health", "votes"}, where="agent")
        return cls(
            id=str(data["id"]),
            kind=AgentKind(data["kind"]),
            pos=GridPos.from_list(data["pos"]),
            health=None if data["health"] is None else int(data["health"]),
            votes=None if data["votes"] is None else int(data["votes"]),
        )


class CommandKind(str, Enum):
    MOVE = "move"
    ACKNOWLEDGE = "acknowledge"
    RESTART = "restart"


@dataclass(frozen=True)
class InputCommand:
    """One quantized player action fed to the tick function."""

    kind: CommandKind
    direction: Direction | None = None

    def __post_init__(self) -> None:
        if self.kind is CommandKind.MOVE and self.direction is None:
            raise ValueError("move command requires a direction")
        if self.kind is not CommandKind.MOVE and self.direction is not None:
            raise ValueError(f"{self.kind.value} command takes no direction")

    def to_dict(self) -> dict:
        data: dict = {"kind": self.kind.value}
        if self.direction is not None:
            data["direction"] = self.direction.value
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "InputCommand":
        check_keys(data, {"kind"}, {"direction"}, where="command")
        try:
            kind = CommandKind(data["kind"])
        except ValueError as exc:
            raise ParseError(f"unknown command kind {data['kind']!r}") from exc
        direction = None
        if "direction" in data:
            try:
                direction = Direction(data["direction"])
            except ValueError as exc:
                raise ParseError(f"unknown direction {data['direction']!r}") from exc
        try:
            return cls(kind=kind, direction=direction)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc


def move(direction: Direction) -> InputCommand:
    return InputCommand(CommandKind.MOVE, direction)


ACKNOWLEDGE = InputCommand(CommandKind.ACKNOWLEDGE)
RESTART = InputCommand(CommandKind.RESTART)


@dataclass(frozen=True)
class OutcomeContent:
    """End-of-level reveal: concept definition plus game-step-to-concept mapping."""

    concept_name: str
    definition: str
    mapping: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        if not self.mapping:
            raise ValueError("outcome mapping must be non-empty")

    def to_dict(self) -> dict:
        return {
            "concept_name": self.concept_name,
            "definition": self.definition,
            "mapping": [[game, concept] for game, concept in self.mapping],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "OutcomeContent":
        check_keys(data, {"concept_name", "definition", "mapping"}, where="outcome")
        mapping = tuple((str(pair[0]), str(pair[1])) for pair in data["mapping"])
        return cls(str(data["concept_name"]), str(data["definition"]), mapping)


class ModalKind(str, Enum):
    WARNING = "warning"
    DIALOGUE = "dialogue"
    OUTCOME = "outcome"


@dataclass(frozen=True)
class Modal:
    """Blocking prompt; only Acknowledge is accepted while one is open."""

    kind: ModalKind
    text: str
    button: str  # "Next" on outcome modals, per the level-transition flow
    outcome: OutcomeContent | None = None

    def to_dict(self) -> dict:
        data: dict = {"kind": self.kind.value, "text": self.text, "button": self.button}
        data["outcome"] = self.outcome.to_dict() if self.outcome else None
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "Modal":
        check_keys(data, {"kind", "text", "button", "outcome"}, where="modal")
        outcome = None if data["outcome"] is None else OutcomeContent.from_dict(data["outcome"])
        return cls(ModalKind(data["kind"]), str(data["text"]), str(data["button"]), outcome)


@dataclass
class SessionState:
    """Full deterministic state of one level in play.

    ``spec`` is the immutable level description (Level1Spec/Level2Spec/
    Level3Spec), ``level_state`` its runtime record. ``log`` holds this
    level's events; the campaign layer accumulates the cross-level log.
    """

    level: int
    spec: Any
    level_state: Any
    agents: list[AgentState]
    rng: Rng
    tick: int = 0
    score: int = 0
    score_at_entry: int = 0
    pending_modal: Modal | None = None
    outcome_acknowledged: bool = False
    log: list[GameEvent] = field(default_factory=list)

    def emit(self, kind, **payload) -> GameEvent:
        payload.setdefault("level", self.level)
        event = GameEvent(tick=self.tick, kind=kind, payload=payload)
        self.log.append(event)
        return event

    @property
    def player(self) -> AgentState:
        for agent in self.agents:
            if agent.kind is AgentKind.PLAYER:
                return agent
        raise MLQuestError("session has no player agent")

    def agents_of(self, kind: AgentKind) -> list[AgentState]:
        return [agent for agent in self.agents if agent.kind is kind]

    @property
    def completed(self) -> bool:
        return bool(getattr(self.level_state, "completed", False))


@dataclass(frozen=True)
class SlopeReadout:
    """HUD label for one corridor leaving the current junction."""

    direction: Direction
    slope: float  # full precision; renderers round to 1 decimal
    edge_id: str

    def to_dict(self) -> dict:
        return {"direction": self.direction.value, "slope": self.slope, "edge_id": self.edge_id}


@dataclass(frozen=True)
class StateSnapshot:
    """Read-only render projection of a SessionState.

    Contains every HUD element the renderer needs and nothing the current
    phase hides (the recorded sequence never appears after training).
    """

    version: int
    level: int
    tick: int
    phase: str
    score: int
    health: int
    raster: tuple[str, ...]
    minimap: tuple[str, ...]
    instructions: tuple[str, ...]
    agents: tuple[dict, ...]
    modal: Modal | None
    slopes: tuple[SlopeReadout, ...] | None  # level 2, at a junction
    distance_player_to_bob: float | None  # level 3 meters, 1-decimal display
    distance_enemy_to_bob: float | None
    red_men_reached: int | None
    population: int | None
    bob_tag: str | None
    completed: bool

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "level": self.level,
            "tick": self.tick,
            "phase": self.phase,
            "score": self.score,
            "health": self.health,
            "raster": list(self.raster),
            "minimap": list(self.minimap),
            "instructions": list(self.instructions),
            "agents": list(self.agents),
            "modal": self.modal.to_dict() if self.modal else None,
            "slopes": None if self.slopes is None else [s.to_dict() for s in self.slopes],
            "distance_player_to_bob": self.distance_player_to_bob,
            "distance_enemy_to_bob": self.distance_enemy_to_bob,
            "red_men_reached": self.red_men_reached,
            "population": self.population,
            "bob_tag": self.bob_tag,
            "completed": self.completed,
        }
