#!/usr/bin/env python3
"""Generate a three-level campaign and play it to the end, narrating the
event log as it grows. Everything is deterministic in --seed."""

import argparse

from mlquest.events import format_hash
from mlquest.levelgen import GenConfig, generate
from mlquest.model import ACKNOWLEDGE, Direction, move
from mlquest.session import Campaign


def steepest_route(spec):
    """Per-cell moves for always taking the steepest downhill corridor."""
    moves = []
    pos = spec.start
    while pos != spec.goal:
        edge = max(spec.edges_from(pos), key=lambda e: e.slope)
        for a, b in zip(edge.cells, edge.cells[1:]):
            moves.append(a.direction_to(b))
        pos = edge.dst
    return moves


def step_toward(pos, target, radius):
    dr, dc = target.row - pos.row, target.col - pos.col
    if abs(dr) > radius:
        return Direction.SOUTH if dr > 0 else Direction.NORTH
    if abs(dc) > radius:
        return Direction.EAST if dc > 0 else Direction.WEST
    return None


def send(campaign, cmd):
    for event in campaign.apply(cmd):
        print(f"  tick {event.tick:3d}  {event.kind.value:18s} {event.payload}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=20)
    args = parser.parse_args()

    specs = [generate(GenConfig(seed=args.seed), level) for level in (1, 2, 3)]
    campaign = Campaign.new(specs, seed=args.seed)

    print(f"campaign seed {args.seed}")
    print("level 1: walk the red path, then repeat it inside the maze")
    for d in specs[0].canonical_sequence:
        send(campaign, move(d))
    for d in specs[0].canonical_sequence:
        send(campaign, move(d))
    send(campaign, ACKNOWLEDGE)

    print(f"level 2: follow the steepest slope down (score so far {campaign.session.score})")
    for d in steepest_route(specs[1]):
        send(campaign, move(d))
        if campaign.session.completed:
            break
    send(campaign, ACKNOWLEDGE)

    print("level 3: reach each Bob before the second red man does")
    spec3 = specs[2]
    for _ in range(3):
        bob = spec3.bobs[campaign.session.level_state.active_bob_index]
        while campaign.session.pending_modal is None:
            send(campaign, move(step_toward(campaign.session.player.pos, bob, spec3.arrival_radius)))
        send(campaign, ACKNOWLEDGE)  # collect the heart
    send(campaign, ACKNOWLEDGE)  # close the learning outcome

    print(f"finished: {campaign.finished}, score {campaign.session.score}")
    print(f"events {len(campaign.events)}, log_hash {format_hash(campaign.events_hash())}")


if __name__ == "__main__":
    main()
