"""Level 3: race the red men to each Bob and win the majority vote.

Three Bobs wait in an open town. The player carries two votes, each red
man one; with k = 3 the first side to two votes claims the active Bob.
Reaching Bob first wins him over, a heart seals it, and the hunt moves
to the next Bob. If two red men get there first the level restarts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import (
    DIRECTION_ORDER,
    AgentKind,
    AgentState,
    GridPos,
    InvalidCommand,
    MAX_HEALTH,
    MLQuestError,
    Modal,
    ModalKind,
    OutcomeContent,
    ParseError,
    check_keys,
)
from .events import EventKind


class EvenK(MLQuestError):
    """Even k would allow ties, so it is rejected outright."""


class AlreadyArrived(MLQuestError):
    pass


class AlreadyResolved(MLQuestError):
    pass


class NotYetResolved(MLQuestError):
    pass


def majority_threshold(k: int) -> int:
    """Votes needed to claim a Bob among k nearest claimants."""
    if k < 1 or k % 2 == 0:
        raise EvenK(f"k must be odd and positive, got {k}")
    return k // 2 + 1


@dataclass(frozen=True)
class PursuerSpec:
    spawn: GridPos
    speed: float  # tiles per tick, at most 1.0 (the player's speed)

    def to_dict(self) -> dict:
        return {"spawn": self.spawn.to_list(), "speed": self.speed}

    @classmethod
    def from_dict(cls, data: dict) -> "PursuerSpec":
        check_keys(data, {"spawn", "speed"}, where="red man")
        return cls(spawn=GridPos.from_list(data["spawn"]), speed=float(data["speed"]))


@dataclass(frozen=True)
class Level3Spec:
    rows: int
    cols: int
    spawn: GridPos
    bobs: tuple[GridPos, ...]  # exactly 3, rescued in order
    red_men: tuple[PursuerSpec, ...]
    outcome: OutcomeContent
    k: int = 3
    player_votes: int = 2
    enemy_votes: int = 1
    arrival_radius: int = 1

    # Invariants (3 Bobs, >= 2 red men, odd k, speeds in (0, 1]) are the
    # validator's job so that broken level files parse and then fail
    # validation with a named violation instead of a parse error.

    def in_bounds(self, pos: GridPos) -> bool:
        return 0 <= pos.row < self.rows and 0 <= pos.col < self.cols

    def to_dict(self) -> dict:
        return {
            "version": 1,
            "level": 3,
            "rows": self.rows,
            "cols": self.cols,
            "spawn": self.spawn.to_list(),
            "bobs": [b.to_list() for b in self.bobs],
            "red_men": [r.to_dict() for r in self.red_men],
            "k": self.k,
            "player_votes": self.player_votes,
            "enemy_votes": self.enemy_votes,
            "arrival_radius": self.arrival_radius,
            "outcome": self.outcome.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Level3Spec":
        check_keys(
            data,
            {
                "version",
                "level",
                "rows",
                "cols",
                "spawn",
                "bobs",
                "red_men",
                "k",
                "player_votes",
                "enemy_votes",
                "arrival_radius",
                "outcome",
            },
            where="level3 spec",
        )
        if data["version"] != 1:
            raise ParseError(f"unsupported level file version {data['version']!r}")
        if data["level"] != 3:
            raise ParseError(f"expected level 3, got {data['level']!r}")
        return cls(
            rows=int(data["rows"]),
            cols=int(data["cols"]),
            spawn=GridPos.from_list(data["spawn"]),
            bobs=tuple(GridPos.from_list(b) for b in data["bobs"]),
            red_men=tuple(PursuerSpec.from_dict(r) for r in data["red_men"]),
            outcome=OutcomeContent.from_dict(data["outcome"]),
            k=int(data["k"]),
            player_votes=int(data["player_votes"]),
            enemy_votes=int(data["enemy_votes"]),
            arrival_radius=int(data["arrival_radius"]),
        )


@dataclass
class Level3State:
    active_bob_index: int = 0
    arrivals: list[tuple[str, int]] = field(default_factory=list)  # (agent id, votes)
    rescued: int = 0
    lost: bool = False
    resolved_side: str | None = None  # "player" | "enemy" | None
    dialogue_pending: bool = False
    heart_pending: bool = False
    move_count: int = 0  # drives fractional enemy speeds
    completed: bool = False

    def to_dict(self) -> dict:
        return {
            "active_bob_index": self.active_bob_index,
            "arrivals": [[agent, votes] for agent, votes in self.arrivals],
            "rescued": self.rescued,
            "lost": self.lost,
            "resolved_side": self.resolved_side,
            "dialogue_pending": self.dialogue_pending,
            "heart_pending": self.heart_pending,
            "move_count": self.move_count,
            "completed": self.completed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Level3State":
        check_keys(
            data,
            {
                "active_bob_index",
                "arrivals",
                "rescued",
                "lost",
                "resolved_side",
                "dialogue_pending",
                "heart_pending",
                "move_count",
                "completed",
            },
            where="level3 state",
        )
        return cls(
            active_bob_index=int(data["active_bob_index"]),
            arrivals=[(str(agent), int(votes)) for agent, votes in data["arrivals"]],
            rescued=int(data["rescued"]),
            lost=bool(data["lost"]),
            resolved_side=data["resolved_side"],
            dialogue_pending=bool(data["dialogue_pending"]),
            heart_pending=bool(data["heart_pending"]),
            move_count=int(data["move_count"]),
            completed=bool(data["completed"]),
        )


def initial_state(spec: Level3Spec) -> Level3State:
    return Level3State()


def initial_agents(spec: Level3Spec) -> list[AgentState]:
    agents = [
        AgentState(
            id="player",
            kind=AgentKind.PLAYER,
            pos=spec.spawn,
            health=MAX_HEALTH,
            votes=spec.player_votes,
        )
    ]
    for i, red in enumerate(spec.red_men, start=1):
        agents.append(
            AgentState(id=f"red{i}", kind=AgentKind.RED_MAN, pos=red.spawn, votes=spec.enemy_votes)
        )
    for i, pos in enumerate(spec.bobs, start=1):
        agents.append(AgentState(id=f"bob{i}", kind=AgentKind.BOB, pos=pos))
    return agents


def reset(session) -> None:
    """Losing a Bob resets the whole level: all three rescues start over."""
    spec: Level3Spec = session.spec
    session.level_state = initial_state(spec)
    session.player.pos = spec.spawn
    for agent, red in zip(session.agents_of(AgentKind.RED_MAN), spec.red_men):
        agent.pos = red.spawn
    session.score = session.score_at_entry


def active_bob(session) -> AgentState:
    state: Level3State = session.level_state
    return session.agents_of(AgentKind.BOB)[state.active_bob_index]


def _arrived_ids(state: Level3State) -> set[str]:
    return {agent for agent, _ in state.arrivals}


def _side_votes(session, side_kind: AgentKind) -> int:
    by_id = {a.id: a for a in session.agents}
    return sum(votes for agent, votes in session.level_state.arrivals if by_id[agent].kind is side_kind)


def register_arrival(session, agent: AgentState) -> None:
    """Record an agent reaching the active Bob and resolve the vote when
    one side hits the majority threshold."""
    spec: Level3Spec = session.spec
    state: Level3State = session.level_state
    if state.resolved_side is not None:
        raise AlreadyResolved(f"bob{state.active_bob_index + 1} is already classified")
    if agent.id in _arrived_ids(state):
        raise AlreadyArrived(agent.id)
    bob = active_bob(session)
    if agent.pos.chebyshev(bob.pos) > spec.arrival_radius:
        raise MLQuestError(f"{agent.id} is not within reach of the active Bob")

    state.arrivals.append((agent.id, agent.votes or 0))
    threshold = majority_threshold(spec.k)
    if agent.kind is AgentKind.PLAYER and _side_votes(session, AgentKind.PLAYER) >= threshold:
        state.resolved_side = "player"
        state.dialogue_pending = True
        state.heart_pending = True
        session.emit(EventKind.DIALOGUE_SHOWN, bob=bob.id)
        session.pending_modal = Modal(
            kind=ModalKind.DIALOGUE,
            text="You reached Bob first! Your two votes carry the majority.",
            button="Collect heart",
        )
    elif agent.kind is AgentKind.RED_MAN and _side_votes(session, AgentKind.RED_MAN) >= threshold:
        state.resolved_side = "enemy"
        state.lost = True
        session.emit(
            EventKind.BOB_CLASSIFIED,
            bob=bob.id,
            side="enemy",
            player_votes=_side_votes(session, AgentKind.PLAYER),
            enemy_votes=_side_votes(session, AgentKind.RED_MAN),
        )
        session.emit(EventKind.RESTART, reason="bob_lost")
        reset(session)
        session.pending_modal = Modal(
            kind=ModalKind.WARNING,
            text="Two red men reached Bob first. He takes their side and the level restarts.",
            button="OK",
        )


def collect_heart(session) -> None:
    """Acknowledge the rescue dialogue: the heart drops, Bob is counted
    for the player, and the next Bob becomes active."""
    state: Level3State = session.level_state
    if not state.dialogue_pending:
        raise InvalidCommand("no rescue dialogue is open")
    bob = active_bob(session)
    state.dialogue_pending = False
    state.heart_pending = False
    session.emit(
        EventKind.BOB_CLASSIFIED,
        bob=bob.id,
        side="player",
        player_votes=_side_votes(session, AgentKind.PLAYER),
        enemy_votes=_side_votes(session, AgentKind.RED_MAN),
    )
    advance_rescue(session)


def advance_rescue(session) -> None:
    spec: Level3Spec = session.spec
    state: Level3State = session.level_state
    if state.resolved_side != "player" or state.dialogue_pending or state.heart_pending:
        raise NotYetResolved("the active Bob has not been won yet")
    state.rescued += 1
    state.arrivals.clear()
    state.resolved_side = None
    for agent, red in zip(session.agents_of(AgentKind.RED_MAN), spec.red_men):
        agent.pos = red.spawn
    if state.rescued == len(spec.bobs):
        state.completed = True
        outcome: OutcomeContent = spec.outcome
        session.emit(EventKind.OUTCOME_DISPLAYED, concept=outcome.concept_name)
        session.emit(EventKind.LEVEL_COMPLETED, score=session.score)
        session.pending_modal = Modal(
            kind=ModalKind.OUTCOME, text=outcome.definition, button="Next", outcome=outcome
        )
    else:
        state.active_bob_index += 1


def distance_meters(session) -> tuple[float, float]:
    """(player-to-Bob, nearest-red-man-to-Bob) in tile units, full
    precision; rendering rounds to 1 decimal."""
    bob = active_bob(session)
    player_d = session.player.pos.euclidean(bob.pos)
    enemy_d = min(a.pos.euclidean(bob.pos) for a in session.agents_of(AgentKind.RED_MAN))
    return player_d, enemy_d


def _pursuit_step(spec: Level3Spec, pos: GridPos, target: GridPos) -> GridPos:
    """One tile along a shortest grid path, first improving direction in
    N/E/S/W order."""
    here = abs(pos.row - target.row) + abs(pos.col - target.col)
    for direction in DIRECTION_ORDER:
        nxt = pos.step(direction)
        if not spec.in_bounds(nxt):
            continue
        if abs(nxt.row - target.row) + abs(nxt.col - target.col) < here:
            return nxt
    return pos


def _steps_due(speed: float, move_count: int) -> int:
    return int(move_count * speed) - int((move_count - 1) * speed)


def handle_move(session, direction) -> None:
    spec: Level3Spec = session.spec
    state: Level3State = session.level_state
    if state.completed:
        raise InvalidCommand("level 3 already completed")
    player = session.player
    nxt = player.pos.step(direction)
    if not spec.in_bounds(nxt):
        raise InvalidCommand("the town ends there")
    player.pos = nxt
    state.move_count += 1
    session.emit(
        EventKind.MOVE,
        direction=direction.value,
        row=player.pos.row,
        col=player.pos.col,
    )

    bob = active_bob(session)
    arrived = _arrived_ids(state)
    if player.id not in arrived and player.pos.chebyshev(bob.pos) <= spec.arrival_radius:
        register_arrival(session, player)
        if state.resolved_side is not None:
            return  # dialogue is up; red men hold still until it closes

    for agent, red in zip(session.agents_of(AgentKind.RED_MAN), spec.red_men):
        if agent.id in _arrived_ids(state):
            continue
        for _ in range(_steps_due(red.speed, state.move_count)):
            agent.pos = _pursuit_step(spec, agent.pos, bob.pos)
            if agent.pos.chebyshev(bob.pos) <= spec.arrival_radius:
                break
        if agent.pos.chebyshev(bob.pos) <= spec.arrival_radius:
            register_arrival(session, agent)
            if state.resolved_side is not None:
                return  # the vote resolved; stop processing this tick


def view(session) -> dict:
    spec: Level3Spec = session.spec
    state: Level3State = session.level_state

    grid = [["." for _ in range(spec.cols)] for _ in range(spec.rows)]
    for i, agent in enumerate(session.agents_of(AgentKind.BOB)):
        if i < state.rescued:
            mark = "v"  # already rescued
        elif i == state.active_bob_index and not state.completed:
            mark = "B"
        else:
            mark = "b"
        grid[agent.pos.row][agent.pos.col] = mark
    minimap = ["".join(row) for row in grid]
    for agent in session.agents_of(AgentKind.RED_MAN):
        grid[agent.pos.row][agent.pos.col] = "r"
    player = session.player.pos
    grid[player.row][player.col] = "P"
    raster = ["".join(row) for row in grid]

    fields: dict = {
        "phase": "completed" if state.completed else "rescuing",
        "raster": tuple(raster),
        "minimap": tuple(minimap),
        "instructions": ("Reach Bob before two red men do. Your two votes beat their one.",),
        "population": state.rescued,
        "red_men_reached": sum(
            1 for agent, _ in state.arrivals if agent != session.player.id
        ),
    }
    if not state.completed:
        player_d, enemy_d = distance_meters(session)
        fields["bob_tag"] = active_bob(session).id
        fields["distance_player_to_bob"] = round(player_d, 1)
        fields["distance_enemy_to_bob"] = round(enemy_d, 1)
    return fields
