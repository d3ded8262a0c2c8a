"""Level 2: descend a junction maze by always taking the steepest edge.

Every junction shows the slope of each outgoing corridor. Picking the
maximum slope at every junction is the one route to the magical door at
the bottom; every other branch dead-ends. Red men wander their patches
of the maze and drain health on contact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import mazes
from .model import (
    DIRECTION_ORDER,
    AgentKind,
    AgentState,
    Direction,
    GridPos,
    InvalidCommand,
    MAX_HEALTH,
    MLQuestError,
    Modal,
    ModalKind,
    OutcomeContent,
    ParseError,
    SlopeReadout,
    check_keys,
)
from .events import EventKind

DAMAGE_PER_TICK = 10
DAMAGE_RADIUS = 1  # Chebyshev tiles


class NotAtJunction(MLQuestError):
    """Raised when junction options are requested away from any junction."""


@dataclass(frozen=True)
class Edge:
    """Directed corridor run between two junction nodes."""

    src: GridPos
    dst: GridPos
    cells: tuple[GridPos, ...]  # src..dst inclusive, adjacent open cells
    slope: float  # (elevation(src) - elevation(dst)) / length

    @property
    def length(self) -> int:
        return len(self.cells) - 1

    @property
    def id(self) -> str:
        return f"{self.src.row},{self.src.col}->{self.dst.row},{self.dst.col}"

    @property
    def first_step(self) -> Direction:
        return self.cells[0].direction_to(self.cells[1])

    def to_dict(self) -> dict:
        return {
            "from": self.src.to_list(),
            "to": self.dst.to_list(),
            "cells": [c.to_list() for c in self.cells],
            "length": self.length,
            "slope": self.slope,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Edge":
        check_keys(data, {"from", "to", "cells", "length", "slope"}, where="edge")
        edge = cls(
            src=GridPos.from_list(data["from"]),
            dst=GridPos.from_list(data["to"]),
            cells=tuple(GridPos.from_list(c) for c in data["cells"]),
            slope=float(data["slope"]),
        )
        if int(data["length"]) != edge.length:
            raise ParseError(f"edge {edge.id}: length field disagrees with cells")
        return edge


@dataclass(frozen=True)
class RedManSpec:
    spawn: GridPos
    walk_domain: frozenset[GridPos]

    def to_dict(self) -> dict:
        return {
            "spawn": self.spawn.to_list(),
            "walk_domain": sorted(c.to_list() for c in self.walk_domain),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RedManSpec":
        check_keys(data, {"spawn", "walk_domain"}, where="red man")
        return cls(
            spawn=GridPos.from_list(data["spawn"]),
            walk_domain=frozenset(GridPos.from_list(c) for c in data["walk_domain"]),
        )


@dataclass(frozen=True)
class Level2Spec:
    maze: mazes.Maze
    start: GridPos
    goal: GridPos
    elevations: dict[GridPos, float]  # one entry per junction node
    edges: tuple[Edge, ...]  # both directions of every corridor
    red_men: tuple[RedManSpec, ...]
    outcome: OutcomeContent

    def edges_from(self, node: GridPos) -> list[Edge]:
        """Outgoing edges in a fixed N/E/S/W first-step order."""
        out = [e for e in self.edges if e.src == node]
        order = {d: i for i, d in enumerate(DIRECTION_ORDER)}
        out.sort(key=lambda e: order[e.first_step])
        return out

    def edge_by_id(self, edge_id: str) -> Edge:
        for edge in self.edges:
            if edge.id == edge_id:
                return edge
        raise KeyError(edge_id)

    def to_dict(self) -> dict:
        return {
            "version": 1,
            "level": 2,
            "maze": self.maze.to_dict(),
            "start": self.start.to_list(),
            "goal": self.goal.to_list(),
            "junctions": [
                {"pos": pos.to_list(), "elevation": self.elevations[pos]}
                for pos in sorted(self.elevations)
            ],
            "edges": [e.to_dict() for e in self.edges],
            "red_men": [r.to_dict() for r in self.red_men],
            "outcome": self.outcome.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Level2Spec":
        check_keys(
            data,
            {"version", "level", "maze", "start", "goal", "junctions", "edges", "red_men", "outcome"},
            where="level2 spec",
        )
        if data["version"] != 1:
            raise ParseError(f"unsupported level file version {data['version']!r}")
        if data["level"] != 2:
            raise ParseError(f"expected level 2, got {data['level']!r}")
        elevations: dict[GridPos, float] = {}
        for entry in data["junctions"]:
            check_keys(entry, {"pos", "elevation"}, where="junction")
            elevations[GridPos.from_list(entry["pos"])] = float(entry["elevation"])
        return cls(
            maze=mazes.Maze.from_dict(data["maze"]),
            start=GridPos.from_list(data["start"]),
            goal=GridPos.from_list(data["goal"]),
            elevations=elevations,
            edges=tuple(Edge.from_dict(e) for e in data["edges"]),
            red_men=tuple(RedManSpec.from_dict(r) for r in data["red_men"]),
            outcome=OutcomeContent.from_dict(data["outcome"]),
        )


@dataclass
class Level2State:
    completed: bool = False

    def to_dict(self) -> dict:
        return {"completed": self.completed}

    @classmethod
    def from_dict(cls, data: dict) -> "Level2State":
        check_keys(data, {"completed"}, where="level2 state")
        return cls(completed=bool(data["completed"]))


def initial_state(spec: Level2Spec) -> Level2State:
    return Level2State()


def initial_agents(spec: Level2Spec) -> list[AgentState]:
    agents = [AgentState(id="player", kind=AgentKind.PLAYER, pos=spec.start, health=MAX_HEALTH)]
    for i, red in enumerate(spec.red_men, start=1):
        agents.append(AgentState(id=f"red{i}", kind=AgentKind.RED_MAN, pos=red.spawn))
    return agents


def reset(session) -> None:
    spec: Level2Spec = session.spec
    session.level_state.completed = False
    player = session.player
    player.pos = spec.start
    player.health = MAX_HEALTH
    for agent, red in zip(session.agents_of(AgentKind.RED_MAN), spec.red_men):
        agent.pos = red.spawn
    session.score = session.score_at_entry


def junction_options(session) -> list[SlopeReadout]:
    """Slope readouts for the junction the player stands on.

    Slopes are kept at full precision; rendering rounds to 1 decimal.
    """
    spec: Level2Spec = session.spec
    pos = session.player.pos
    if pos not in spec.elevations:
        raise NotAtJunction(f"({pos.row}, {pos.col}) is not a junction")
    if pos == spec.goal:
        return []  # terminal node; the door ends the descent
    return [
        SlopeReadout(direction=e.first_step, slope=e.slope, edge_id=e.id)
        for e in spec.edges_from(pos)
    ]


def enemy_tick(session, rng) -> None:
    """One uniform-random step per red man inside its walk domain, then
    proximity damage. Enemies update in agent order so RNG draws are
    reproducible."""
    spec: Level2Spec = session.spec
    player = session.player
    reds = session.agents_of(AgentKind.RED_MAN)
    for agent, red in zip(reds, spec.red_men):
        options = [c for c in spec.maze.neighbors(agent.pos) if c in red.walk_domain]
        if options:
            agent.pos = options[rng.randrange(len(options))]
    for agent in reds:
        if agent.pos.chebyshev(player.pos) <= DAMAGE_RADIUS:
            player.health = max(0, player.health - DAMAGE_PER_TICK)
            session.emit(
                EventKind.HEALTH_CHANGED,
                health=player.health,
                damage=DAMAGE_PER_TICK,
                enemy=agent.id,
            )
            if player.health == 0:
                session.emit(EventKind.RESTART, reason="health_zero")
                reset(session)
                session.pending_modal = Modal(
                    kind=ModalKind.WARNING,
                    text="The red men caught you. The level restarts.",
                    button="OK",
                )
                return


def _complete(session) -> None:
    session.level_state.completed = True
    outcome: OutcomeContent = session.spec.outcome
    session.emit(EventKind.OUTCOME_DISPLAYED, concept=outcome.concept_name)
    session.emit(EventKind.LEVEL_COMPLETED, score=session.score)
    session.pending_modal = Modal(
        kind=ModalKind.OUTCOME, text=outcome.definition, button="Next", outcome=outcome
    )


def handle_move(session, direction: Direction) -> None:
    spec: Level2Spec = session.spec
    state: Level2State = session.level_state
    if state.completed:
        raise InvalidCommand("level 2 already completed")
    player = session.player
    if not spec.maze.is_open(player.pos, direction):
        raise InvalidCommand("a wall blocks that direction")
    player.pos = player.pos.step(direction)
    session.emit(
        EventKind.MOVE,
        direction=direction.value,
        row=player.pos.row,
        col=player.pos.col,
    )
    if player.pos == spec.goal:
        _complete(session)
        return
    enemy_tick(session, session.rng)


def choose_edge(session, edge_id: str) -> list:
    """Walk a whole corridor, one tick per tile; a convenience wrapper
    over repeated moves. Stops short if a restart knocks the player off
    the corridor."""
    from . import engine
    from .model import move

    spec: Level2Spec = session.spec
    edge = spec.edge_by_id(edge_id)
    if session.player.pos != edge.src:
        raise InvalidCommand(f"player is not at junction {edge.src.to_list()}")
    events = []
    for prev, cell in zip(edge.cells, edge.cells[1:]):
        _, emitted = engine.tick(session, move(prev.direction_to(cell)))
        events.extend(emitted)
        if session.player.pos != cell:
            break  # health ran out mid-corridor and the level reset
        if session.level_state.completed:
            break
    return events


def view(session) -> dict:
    spec: Level2Spec = session.spec
    state: Level2State = session.level_state
    marks: dict[GridPos, str] = {spec.goal: "G"}
    minimap = mazes.render_raster(spec.maze, marks)
    for agent in session.agents_of(AgentKind.RED_MAN):
        marks[agent.pos] = "r"
    marks[session.player.pos] = "P"
    raster = mazes.render_raster(spec.maze, marks)

    instructions = ["Reach the magical door at the bottom. The slope numbers are a hint."]
    slopes: tuple[SlopeReadout, ...] = ()
    if not state.completed and session.player.pos in spec.elevations:
        slopes = tuple(junction_options(session))
    return {
        "phase": "completed" if state.completed else "descending",
        "raster": tuple(raster),
        "minimap": tuple(minimap),
        "instructions": tuple(instructions),
        "slopes": slopes,
    }
