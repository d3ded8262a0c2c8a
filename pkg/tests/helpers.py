"""Shared test utilities: hand-built specs and scripted campaign solvers."""

from mlquest.level1 import Level1Spec
from mlquest.mazes import Maze
from mlquest.model import ACKNOWLEDGE, DIRECTION_ORDER, Direction, GridPos, InputCommand, OutcomeContent, move
from mlquest.session import Campaign

TEST_OUTCOME = OutcomeContent(
    concept_name="Test Concept",
    definition="A placeholder definition used by the tests.",
    mapping=(("step in game", "step in theory"),),
)


def _shifted_walk(seq) -> tuple[list[GridPos], GridPos]:
    """Walk the moves from the origin, then shift everything into quadrant I."""
    path = [GridPos(0, 0)]
    for d in seq:
        path.append(path[-1].step(d))
    min_r = min(p.row for p in path)
    min_c = min(p.col for p in path)
    shifted = [GridPos(p.row - min_r, p.col - min_c) for p in path]
    return shifted, shifted[0]


def make_level1(seq, diamond_indices=(1,), extra_cells=1) -> Level1Spec:
    """Level-1 spec whose maze solution is exactly ``seq`` (self-avoiding).

    The maze is the carved walk plus enough filler cells to stay a tree,
    so the walk is the unique entrance-to-exit path by construction.
    """
    seq = tuple(seq)
    path, entrance = _shifted_walk(seq)
    assert len(set(path)) == len(path), "sequence must be self-avoiding"
    rows = max(p.row for p in path) + 1 + extra_cells
    cols = max(p.col for p in path) + 1
    maze = Maze(rows, cols)
    attached = set(path)
    for a, b in zip(path, path[1:]):
        maze.carve(a, a.direction_to(b))
    while len(attached) < rows * cols:
        for cell in maze.cells():
            if cell in attached:
                continue
            for d in DIRECTION_ORDER:
                nb = cell.step(d)
                if maze.in_bounds(nb) and nb in attached:
                    maze.carve(cell, d)
                    attached.add(cell)
                    break
    red_path, spawn = _shifted_walk(seq)
    return Level1Spec(
        overworld_rows=max(p.row for p in red_path) + 1,
        overworld_cols=max(p.col for p in red_path) + 1,
        spawn=spawn,
        maze=maze,
        entrance=entrance,
        exit=path[-1],
        canonical_sequence=seq,
        diamonds=tuple(path[i] for i in diamond_indices),
        outcome=TEST_OUTCOME,
    )


def greedy_route(spec) -> list[Direction]:
    """Level-2 moves obtained by always taking the steepest edge."""
    moves = []
    pos = spec.start
    visited = set()
    while pos != spec.goal:
        assert pos not in visited, "greedy walk revisited a junction"
        visited.add(pos)
        best = max(spec.edges_from(pos), key=lambda e: e.slope)
        for a, b in zip(best.cells, best.cells[1:]):
            moves.append(a.direction_to(b))
        pos = best.dst
    return moves


def toward(pos, target, radius) -> Direction | None:
    """One move that shrinks the gap to the target beyond the radius."""
    dr, dc = target.row - pos.row, target.col - pos.col
    if abs(dr) > radius:
        return Direction.SOUTH if dr > 0 else Direction.NORTH
    if abs(dc) > radius:
        return Direction.EAST if dc > 0 else Direction.WEST
    return None


def campaign_script(specs, seed: int) -> list[InputCommand]:
    """Commands that drive a fresh campaign at this seed to the end.

    Plays adaptively against a scratch campaign and records what it
    sent; determinism makes the recording replayable verbatim.
    """
    campaign = Campaign.new(list(specs), seed)
    script: list[InputCommand] = []

    def send(cmd):
        script.append(cmd)
        campaign.apply(cmd)

    for d in specs[0].canonical_sequence:  # training walk
        send(move(d))
    for d in specs[0].canonical_sequence:  # maze replay
        send(move(d))
    send(ACKNOWLEDGE)

    for d in greedy_route(specs[1]):
        send(move(d))
        if campaign.session.completed:
            break
    send(ACKNOWLEDGE)

    spec3 = specs[2]
    for _ in range(3):
        bob = spec3.bobs[campaign.session.level_state.active_bob_index]
        steps = 0
        while campaign.session.pending_modal is None:
            d = toward(campaign.session.player.pos, bob, spec3.arrival_radius)
            assert d is not None, "inside the radius but never registered"
            send(move(d))
            steps += 1
            assert steps < 500, "rescue walk did not terminate"
        send(ACKNOWLEDGE)  # heart
    send(ACKNOWLEDGE)  # learning outcome
    assert campaign.finished
    return script
