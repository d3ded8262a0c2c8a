"""Tick discipline: rejection leaves no trace, modals gate, restarts reset."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mlquest import engine
from mlquest.events import EventKind
from mlquest.model import ACKNOWLEDGE, RESTART, Direction, InvalidCommand, move
from mlquest.rng import Rng

from helpers import make_level1

E, S, N, W = Direction.EAST, Direction.SOUTH, Direction.NORTH, Direction.WEST


def fresh():
    spec = make_level1((E, S, E))
    return spec, engine.new_session(spec, Rng(1))


def observable(session) -> tuple:
    return (
        session.tick,
        len(session.log),
        session.score,
        session.player.pos,
        session.rng.state(),
        engine.snapshot(session).to_dict(),
    )


def test_accepted_command_advances_tick_by_one():
    spec, session = fresh()
    assert session.tick == 0
    engine.tick(session, move(E))
    assert session.tick == 1
    engine.tick(session, move(S))
    assert session.tick == 2


def test_rejected_command_changes_nothing():
    spec, session = fresh()
    run = [move(d) for d in spec.canonical_sequence] * 2
    for cmd in run:
        engine.tick(session, cmd)
    engine.tick(session, ACKNOWLEDGE)  # outcome confirmed; level over
    before = observable(session)
    with pytest.raises(InvalidCommand):
        engine.tick(session, move(E))
    assert observable(session) == before


def test_acknowledge_without_modal_is_rejected():
    spec, session = fresh()
    before = observable(session)
    with pytest.raises(InvalidCommand):
        engine.tick(session, ACKNOWLEDGE)
    assert observable(session) == before


def test_modal_blocks_everything_but_acknowledge():
    spec, session = fresh()
    for d in spec.canonical_sequence:
        engine.tick(session, move(d))
    engine.tick(session, move(N))  # deviation: warning modal opens
    assert session.pending_modal is not None
    before = observable(session)
    for cmd in (move(E), RESTART):
        with pytest.raises(InvalidCommand):
            engine.tick(session, cmd)
        assert observable(session) == before
    engine.tick(session, ACKNOWLEDGE)
    assert session.pending_modal is None


def test_restart_command_resets_the_level():
    spec, session = fresh()
    engine.tick(session, move(E))
    _, events = engine.tick(session, RESTART)
    assert [e.kind for e in events] == [EventKind.RESTART]
    assert events[0].payload["reason"] == "player_restart"
    assert session.player.pos == spec.spawn
    assert session.level_state.recorded == []


def test_restart_after_completion_is_rejected():
    spec, session = fresh()
    for d in spec.canonical_sequence * 2:
        engine.tick(session, move(d))
    with pytest.raises(InvalidCommand):
        engine.tick(session, RESTART)


def test_snapshot_carries_session_fields():
    spec, session = fresh()
    engine.tick(session, move(E))
    snap = engine.snapshot(session)
    assert snap.version == 1
    assert snap.level == 1
    assert snap.tick == 1
    assert snap.health == 100
    assert snap.completed is False
    assert snap.modal is None


@given(st.lists(st.sampled_from([move(d) for d in Direction] + [ACKNOWLEDGE, RESTART]), max_size=60))
@settings(max_examples=60, deadline=None)
def test_random_scripts_keep_invariants(script):
    """Ticks count accepted commands; health stays in bounds; the log only grows."""
    spec = make_level1((E, S, E))
    session = engine.new_session(spec, Rng(7))
    accepted = 0
    log_sizes = [0]
    for cmd in script:
        try:
            engine.tick(session, cmd)
            accepted += 1
        except InvalidCommand:
            pass
        assert 0 <= session.player.health <= 100
        assert session.score >= 0
        log_sizes.append(len(session.log))
    assert session.tick == accepted
    assert log_sizes == sorted(log_sizes)
