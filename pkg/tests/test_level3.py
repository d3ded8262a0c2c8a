"""Level 3: majority voting at each Bob, pursuit pacing, rescue flow."""

import itertools

import pytest

from mlquest import engine
from mlquest.events import EventKind
from mlquest.level3 import (
    AlreadyArrived,
    AlreadyResolved,
    EvenK,
    Level3Spec,
    PursuerSpec,
    _steps_due,
    majority_threshold,
    register_arrival,
)
from mlquest.model import AgentKind, Direction, GridPos, InvalidCommand, MLQuestError, ModalKind, ParseError, move, ACKNOWLEDGE
from mlquest.rng import Rng

from helpers import TEST_OUTCOME, toward


def make_level3(**overrides) -> Level3Spec:
    fields = dict(
        rows=9,
        cols=9,
        spawn=GridPos(4, 4),
        bobs=(GridPos(0, 0), GridPos(0, 8), GridPos(8, 0)),
        red_men=(PursuerSpec(GridPos(8, 8), 0.5), PursuerSpec(GridPos(8, 7), 0.5)),
        outcome=TEST_OUTCOME,
    )
    fields.update(overrides)
    return Level3Spec(**fields)


def fresh(**overrides):
    spec = make_level3(**overrides)
    return spec, engine.new_session(spec, Rng(0))


def test_threshold_matches_brute_force():
    """Smallest vote count that beats the remainder, for odd k."""
    for k in range(1, 16, 2):
        smallest = next(m for m in range(1, k + 1) if m > k - m)
        assert majority_threshold(k) == smallest == k // 2 + 1


@pytest.mark.parametrize("k", [0, 2, 4, 10, -3])
def test_even_or_empty_k_is_rejected(k):
    with pytest.raises(EvenK):
        majority_threshold(k)


def _classified_side(session) -> str:
    for event in session.log:
        if event.kind is EventKind.DIALOGUE_SHOWN:
            return "player"
        if event.kind is EventKind.BOB_CLASSIFIED and event.payload["side"] == "enemy":
            return "enemy"
    raise AssertionError("vote never resolved")


def test_all_arrival_orders_match_the_voting_rule():
    """Player (2 votes) wins exactly when arriving before the second enemy."""
    for order in itertools.permutations(("player", "red1", "red2")):
        spec, session = fresh()
        bob = spec.bobs[0]
        by_id = {a.id: a for a in session.agents}
        for agent_id in order:
            by_id[agent_id].pos = bob  # within any arrival radius
        resolved = False
        for agent_id in order:
            register_arrival(session, by_id[agent_id])
            if session.pending_modal is not None:
                resolved = True
                break
        assert resolved
        second_enemy_at = max(order.index("red1"), order.index("red2"))
        expected = "player" if order.index("player") < second_enemy_at else "enemy"
        assert _classified_side(session) == expected


def test_register_twice_is_an_error():
    spec, session = fresh()
    red = session.agents_of(AgentKind.RED_MAN)[0]
    red.pos = spec.bobs[0]
    register_arrival(session, red)
    with pytest.raises(AlreadyArrived):
        register_arrival(session, red)


def test_register_after_resolution_is_an_error():
    spec, session = fresh()
    player = session.player
    player.pos = spec.bobs[0]
    register_arrival(session, player)
    red = session.agents_of(AgentKind.RED_MAN)[0]
    red.pos = spec.bobs[0]
    with pytest.raises(AlreadyResolved):
        register_arrival(session, red)


def test_register_out_of_reach_is_an_error():
    spec, session = fresh()
    with pytest.raises(MLQuestError):
        register_arrival(session, session.player)  # spawn is far from bob1


def test_enemy_win_restarts_the_whole_level():
    spec, session = fresh()
    reds = session.agents_of(AgentKind.RED_MAN)
    bob = spec.bobs[0]
    reds[0].pos = GridPos(bob.row + 1, bob.col)
    reds[1].pos = GridPos(bob.row, bob.col + 1)
    _, events = engine.tick(session, move(Direction.NORTH))
    kinds = [e.kind for e in events]
    assert EventKind.BOB_CLASSIFIED in kinds and EventKind.RESTART in kinds
    classified = next(e for e in events if e.kind is EventKind.BOB_CLASSIFIED)
    assert classified.payload["side"] == "enemy"
    assert classified.payload["enemy_votes"] == 2
    # the level is back at square one
    assert session.level_state.rescued == 0
    assert session.level_state.active_bob_index == 0
    assert session.level_state.arrivals == []
    assert session.player.pos == spec.spawn
    assert [a.pos for a in session.agents_of(AgentKind.RED_MAN)] == [r.spawn for r in spec.red_men]
    assert session.pending_modal.kind is ModalKind.WARNING


def test_half_speed_pursuers_step_every_other_tick():
    assert [_steps_due(0.5, mc) for mc in range(1, 7)] == [0, 1, 0, 1, 0, 1]
    assert [_steps_due(1.0, mc) for mc in range(1, 4)] == [1, 1, 1]


def test_pursuers_close_in_at_half_speed():
    spec, session = fresh()
    red = session.agents_of(AgentKind.RED_MAN)[0]
    bob = spec.bobs[0]
    gaps = [abs(red.pos.row - bob.row) + abs(red.pos.col - bob.col)]
    for d in (Direction.NORTH, Direction.WEST, Direction.NORTH, Direction.WEST):
        engine.tick(session, move(d))
        gaps.append(abs(red.pos.row - bob.row) + abs(red.pos.col - bob.col))
    assert gaps[1] == gaps[0]  # move 1: no step due
    assert gaps[2] == gaps[0] - 1  # move 2: one step
    assert gaps[3] == gaps[2]
    assert gaps[4] == gaps[2] - 1


def test_rescue_flow_dialogue_heart_classification():
    spec, session = fresh()
    while session.pending_modal is None:
        d = toward(session.player.pos, spec.bobs[0], spec.arrival_radius)
        engine.tick(session, move(d))
    assert session.pending_modal.kind is ModalKind.DIALOGUE
    assert session.pending_modal.button == "Collect heart"
    dialogue_events = [e.kind for e in session.log]
    assert EventKind.DIALOGUE_SHOWN in dialogue_events
    assert EventKind.BOB_CLASSIFIED not in dialogue_events  # not before the heart

    _, events = engine.tick(session, ACKNOWLEDGE)
    classified = next(e for e in events if e.kind is EventKind.BOB_CLASSIFIED)
    assert classified.payload["side"] == "player"
    assert classified.payload["bob"] == "bob1"
    state = session.level_state
    assert state.rescued == 1
    assert state.active_bob_index == 1
    assert state.arrivals == []
    assert [a.pos for a in session.agents_of(AgentKind.RED_MAN)] == [r.spawn for r in spec.red_men]


def test_three_rescues_complete_the_level():
    spec, session = fresh()
    for expected in (1, 2, 3):
        bob = spec.bobs[session.level_state.active_bob_index]
        while session.pending_modal is None:
            d = toward(session.player.pos, bob, spec.arrival_radius)
            assert d is not None
            engine.tick(session, move(d))
        engine.tick(session, ACKNOWLEDGE)
        if expected < 3:
            assert session.level_state.rescued == expected
    assert session.completed
    assert session.pending_modal.kind is ModalKind.OUTCOME
    kinds = [e.kind for e in session.log]
    assert kinds[-2:] == [EventKind.OUTCOME_DISPLAYED, EventKind.LEVEL_COMPLETED]
    assert kinds.count(EventKind.BOB_CLASSIFIED) == 3


def test_leaving_town_is_rejected():
    spec, session = fresh(spawn=GridPos(0, 4))
    with pytest.raises(InvalidCommand):
        engine.tick(session, move(Direction.NORTH))


def test_snapshot_population_and_distances():
    spec, session = fresh()
    snap = engine.snapshot(session)
    assert snap.population == 0
    assert snap.bob_tag == "bob1"
    assert snap.red_men_reached == 0
    assert snap.distance_player_to_bob == round(spec.spawn.euclidean(spec.bobs[0]), 1)
    assert snap.distance_enemy_to_bob == round(
        min(r.spawn.euclidean(spec.bobs[0]) for r in spec.red_men), 1
    )


def test_spec_dict_roundtrip_is_strict():
    spec = make_level3()
    data = spec.to_dict()
    assert Level3Spec.from_dict(data).to_dict() == data
    data["bonus"] = True
    with pytest.raises(ParseError):
        Level3Spec.from_dict(data)
