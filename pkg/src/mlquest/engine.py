"""The tick loop: command validation, dispatch, and snapshot projection.

A rejected command raises InvalidCommand and leaves the session exactly
as it was; an accepted command advances the tick counter by one and
appends whatever events it produced to the log.
"""

from __future__ import annotations

from typing import Any

from . import level1, level2, level3
from .events import EventKind, GameEvent
from .model import (
    CommandKind,
    InputCommand,
    InvalidCommand,
    ModalKind,
    SessionState,
    StateSnapshot,
)
from .rng import Rng

_MODULES = {1: level1, 2: level2, 3: level3}

_SPEC_LEVELS = {
    level1.Level1Spec: 1,
    level2.Level2Spec: 2,
    level3.Level3Spec: 3,
}


def level_of(spec: Any) -> int:
    try:
        return _SPEC_LEVELS[type(spec)]
    except KeyError:
        raise TypeError(f"not a level spec: {type(spec).__name__}") from None


def new_session(spec: Any, rng: Rng, score: int = 0) -> SessionState:
    level = level_of(spec)
    mod = _MODULES[level]
    return SessionState(
        level=level,
        spec=spec,
        level_state=mod.initial_state(spec),
        agents=mod.initial_agents(spec),
        rng=rng,
        score=score,
        score_at_entry=score,
    )


def tick(session: SessionState, cmd: InputCommand) -> tuple[SessionState, list[GameEvent]]:
    """Apply one command; returns the session and the events it emitted.

    InvalidCommand is raised before any mutation, so a rejected command
    is unobservable in the state and the log.
    """
    if session.pending_modal is not None and cmd.kind is not CommandKind.ACKNOWLEDGE:
        raise InvalidCommand("a modal is open; acknowledge it first")
    if cmd.kind is CommandKind.ACKNOWLEDGE and session.pending_modal is None:
        raise InvalidCommand("no modal is open")
    if session.completed and session.outcome_acknowledged:
        raise InvalidCommand("the level is finished")

    session.tick += 1
    before = len(session.log)
    try:
        _apply(session, cmd)
    except InvalidCommand:
        session.tick -= 1
        if len(session.log) != before:
            raise AssertionError("rejected command mutated the log")
        raise
    return session, session.log[before:]


def _apply(session: SessionState, cmd: InputCommand) -> None:
    mod = _MODULES[session.level]
    if cmd.kind is CommandKind.MOVE:
        mod.handle_move(session, cmd.direction)
    elif cmd.kind is CommandKind.RESTART:
        if session.completed:
            raise InvalidCommand("the level is already completed")
        session.emit(EventKind.RESTART, reason="player_restart")
        mod.reset(session)
    else:
        modal = session.pending_modal
        session.pending_modal = None
        if modal.kind is ModalKind.DIALOGUE and session.level == 3:
            level3.collect_heart(session)
        elif modal.kind is ModalKind.OUTCOME:
            session.outcome_acknowledged = True


def snapshot(session: SessionState) -> StateSnapshot:
    """Pure render projection; never reveals hidden solution data."""
    fields = _MODULES[session.level].view(session)
    return StateSnapshot(
        version=1,
        level=session.level,
        tick=session.tick,
        phase=fields["phase"],
        score=session.score,
        health=session.player.health if session.player.health is not None else 0,
        raster=fields["raster"],
        minimap=fields["minimap"],
        instructions=fields["instructions"],
        agents=tuple(agent.to_dict() for agent in session.agents),
        modal=session.pending_modal,
        slopes=fields.get("slopes"),
        distance_player_to_bob=fields.get("distance_player_to_bob"),
        distance_enemy_to_bob=fields.get("distance_enemy_to_bob"),
        red_men_reached=fields.get("red_men_reached"),
        population=fields.get("population"),
        bob_tag=fields.get("bob_tag"),
        completed=session.completed,
    )
