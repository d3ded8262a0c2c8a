"""Level 1: record a direction sequence, then solve the maze by exact replay.

Training walks the marked overworld path while each move is noted on the
instruction board; inference demands the identical sequence through the
maze. Any inference deviation warns and restarts the level.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from . import mazes
from .model import (
    AgentKind,
    AgentState,
    Direction,
    GridPos,
    InvalidCommand,
    MAX_HEALTH,
    Modal,
    ModalKind,
    OutcomeContent,
    ParseError,
    check_keys,
)
from .events import EventKind


class Phase(str, Enum):
    TRAINING = "training"
    INFERENCE = "inference"
    COMPLETED = "completed"


@dataclass(frozen=True)
class Level1Spec:
    overworld_rows: int
    overworld_cols: int
    spawn: GridPos
    maze: mazes.Maze
    entrance: GridPos
    exit: GridPos
    canonical_sequence: tuple[Direction, ...]
    diamonds: tuple[GridPos, ...]
    outcome: OutcomeContent
    diamond_value: int = 10

    @property
    def red_path(self) -> list[GridPos]:
        """Overworld cells from spawn to the maze gate, one per recorded move."""
        path = [self.spawn]
        for direction in self.canonical_sequence:
            path.append(path[-1].step(direction))
        return path

    @property
    def solution_path(self) -> list[GridPos]:
        path = [self.entrance]
        for direction in self.canonical_sequence:
            path.append(path[-1].step(direction))
        return path

    def to_dict(self) -> dict:
        return {
            "version": 1,
            "level": 1,
            "overworld_rows": self.overworld_rows,
            "overworld_cols": self.overworld_cols,
            "spawn": self.spawn.to_list(),
            "maze": self.maze.to_dict(),
            "entrance": self.entrance.to_list(),
            "exit": self.exit.to_list(),
            "canonical_sequence": [d.value for d in self.canonical_sequence],
            "diamonds": [d.to_list() for d in self.diamonds],
            "diamond_value": self.diamond_value,
            "outcome": self.outcome.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Level1Spec":
        check_keys(
            data,
            {
                "version",
                "level",
                "overworld_rows",
                "overworld_cols",
                "spawn",
                "maze",
                "entrance",
                "exit",
                "canonical_sequence",
                "diamonds",
                "diamond_value",
                "outcome",
            },
            where="level1 spec",
        )
        if data["version"] != 1:
            raise ParseError(f"unsupported level file version {data['version']!r}")
        if data["level"] != 1:
            raise ParseError(f"expected level 1, got {data['level']!r}")
        return cls(
            overworld_rows=int(data["overworld_rows"]),
            overworld_cols=int(data["overworld_cols"]),
            spawn=GridPos.from_list(data["spawn"]),
            maze=mazes.Maze.from_dict(data["maze"]),
            entrance=GridPos.from_list(data["entrance"]),
            exit=GridPos.from_list(data["exit"]),
            canonical_sequence=tuple(Direction(d) for d in data["canonical_sequence"]),
            diamonds=tuple(GridPos.from_list(d) for d in data["diamonds"]),
            diamond_value=int(data["diamond_value"]),
            outcome=OutcomeContent.from_dict(data["outcome"]),
        )


@dataclass
class Level1State:
    phase: Phase = Phase.TRAINING
    recorded: list[Direction] = field(default_factory=list)  # instruction board
    train_index: int = 0  # position along the red path
    replay_index: int = 0
    diamonds_collected: int = 0
    diamonds_remaining: set[GridPos] = field(default_factory=set)

    @property
    def completed(self) -> bool:
        return self.phase is Phase.COMPLETED

    def to_dict(self) -> dict:
        return {
            "phase": self.phase.value,
            "recorded": [d.value for d in self.recorded],
            "train_index": self.train_index,
            "replay_index": self.replay_index,
            "diamonds_collected": self.diamonds_collected,
            "diamonds_remaining": sorted(d.to_list() for d in self.diamonds_remaining),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Level1State":
        check_keys(
            data,
            {"phase", "recorded", "train_index", "replay_index", "diamonds_collected", "diamonds_remaining"},
            where="level1 state",
        )
        return cls(
            phase=Phase(data["phase"]),
            recorded=[Direction(d) for d in data["recorded"]],
            train_index=int(data["train_index"]),
            replay_index=int(data["replay_index"]),
            diamonds_collected=int(data["diamonds_collected"]),
            diamonds_remaining={GridPos.from_list(d) for d in data["diamonds_remaining"]},
        )


def initial_state(spec: Level1Spec) -> Level1State:
    return Level1State(diamonds_remaining=set(spec.diamonds))


def initial_agents(spec: Level1Spec) -> list[AgentState]:
    return [AgentState(id="player", kind=AgentKind.PLAYER, pos=spec.spawn, health=MAX_HEALTH)]


def reset(session) -> None:
    """Back to the start of training; the attempt's score is reverted."""
    spec: Level1Spec = session.spec
    state: Level1State = session.level_state
    state.phase = Phase.TRAINING
    state.recorded.clear()
    state.train_index = 0
    state.replay_index = 0
    state.diamonds_collected = 0
    state.diamonds_remaining = set(spec.diamonds)
    session.player.pos = spec.spawn
    session.score = session.score_at_entry


def _collect_diamond(session, pos: GridPos) -> None:
    state: Level1State = session.level_state
    if pos in state.diamonds_remaining:
        state.diamonds_remaining.discard(pos)
        state.diamonds_collected += 1
        session.score += session.spec.diamond_value
        session.emit(
            EventKind.DIAMOND_COLLECTED,
            row=pos.row,
            col=pos.col,
            value=session.spec.diamond_value,
            score=session.score,
        )


def _complete(session) -> None:
    state: Level1State = session.level_state
    state.phase = Phase.COMPLETED
    outcome: OutcomeContent = session.spec.outcome
    session.emit(EventKind.OUTCOME_DISPLAYED, concept=outcome.concept_name)
    session.emit(EventKind.LEVEL_COMPLETED, score=session.score)
    session.pending_modal = Modal(
        kind=ModalKind.OUTCOME, text=outcome.definition, button="Next", outcome=outcome
    )


def training_move(session, direction: Direction) -> None:
    """Follow the red path one cell; the move is noted on the board.

    Off-path moves are rejected in place with a warning so the training
    walk stays frustration-free.
    """
    spec: Level1Spec = session.spec
    state: Level1State = session.level_state
    expected = spec.canonical_sequence[state.train_index]
    if direction is not expected:
        session.emit(EventKind.WARNING, reason="off_path", message="Follow the red path.")
        return
    state.train_index += 1
    state.recorded.append(direction)
    session.player.pos = spec.red_path[state.train_index]
    session.emit(
        EventKind.MOVE,
        direction=direction.value,
        row=session.player.pos.row,
        col=session.player.pos.col,
    )
    if state.train_index == len(spec.canonical_sequence):
        # Gate reached: enter the maze at its entrance cell.
        state.phase = Phase.INFERENCE
        session.player.pos = spec.entrance
        _collect_diamond(session, spec.entrance)


def inference_move(session, direction: Direction) -> None:
    """Replay one recorded move; any deviation warns and restarts the level."""
    spec: Level1Spec = session.spec
    state: Level1State = session.level_state
    expected = state.recorded[state.replay_index]
    if direction is not expected:
        session.emit(EventKind.WARNING, reason="wrong_path", message="Wrong path! That is not the recorded direction.")
        session.emit(EventKind.RESTART, reason="wrong_path")
        reset(session)
        session.pending_modal = Modal(
            kind=ModalKind.WARNING,
            text="Wrong path! The level restarts from the red path.",
            button="OK",
        )
        return
    state.replay_index += 1
    session.player.pos = session.player.pos.step(direction)
    session.emit(
        EventKind.MOVE,
        direction=direction.value,
        row=session.player.pos.row,
        col=session.player.pos.col,
    )
    _collect_diamond(session, session.player.pos)
    if state.replay_index == len(state.recorded):
        _complete(session)


def handle_move(session, direction: Direction) -> None:
    state: Level1State = session.level_state
    if state.phase is Phase.TRAINING:
        training_move(session, direction)
    elif state.phase is Phase.INFERENCE:
        inference_move(session, direction)
    else:
        raise InvalidCommand("level 1 already completed")


def view(session) -> dict:
    """Level-specific snapshot fields; the recorded sequence is shown only
    while training (afterwards the player must rely on memory)."""
    spec: Level1Spec = session.spec
    state: Level1State = session.level_state
    player = session.player.pos

    if state.phase is Phase.TRAINING:
        grid = [["." for _ in range(spec.overworld_cols)] for _ in range(spec.overworld_rows)]
        for cell in spec.red_path:
            grid[cell.row][cell.col] = "*"
        gate = spec.red_path[-1]
        grid[gate.row][gate.col] = "G"
        minimap = ["".join(row) for row in grid]
        grid[player.row][player.col] = "P"
        raster = ["".join(row) for row in grid]
        instructions = [d.value for d in state.recorded]
    else:
        marks = {spec.exit: "G"}
        for diamond in state.diamonds_remaining:
            marks[diamond] = "D"
        minimap = mazes.render_raster(spec.maze, marks)
        marks[player] = "P"
        raster = mazes.render_raster(spec.maze, marks)
        instructions = [f"Replay your recorded moves from memory ({state.replay_index}/{len(state.recorded)})."]

    return {
        "phase": state.phase.value,
        "raster": tuple(raster),
        "minimap": tuple(minimap),
        "instructions": tuple(instructions),
    }
