#!/usr/bin/env python3
"""Play the first level, save between levels, resume from the file and
keep going. Also shows that the checksum rejects a tampered save."""

import argparse
import tempfile
from pathlib import Path

from mlquest.events import format_hash
from mlquest.levelgen import GenConfig, generate
from mlquest.model import ACKNOWLEDGE, move
from mlquest.session import Campaign, CorruptDocument, load_file, save, save_file


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=20)
    parser.add_argument("--out", type=Path, default=None, help="save location (default: temp file)")
    args = parser.parse_args()
    path = args.out or Path(tempfile.mkdtemp()) / "campaign.json"

    specs = [generate(GenConfig(seed=args.seed), level) for level in (1, 2, 3)]
    campaign = Campaign.new(specs, seed=args.seed)
    for d in specs[0].canonical_sequence:
        campaign.apply(move(d))
    for d in specs[0].canonical_sequence:
        campaign.apply(move(d))
    campaign.apply(ACKNOWLEDGE)
    print(f"level 1 done, score {campaign.session.score}, now on level {campaign.session.level}")

    save_file(campaign, path)
    print(f"saved {path.stat().st_size} bytes to {path}")

    resumed = load_file(path)
    assert save(resumed) == save(campaign), "resumed campaign diverged from the original"
    print(f"resumed at level {resumed.session.level}, tick {resumed.session.tick}, "
          f"score {resumed.session.score}")

    edge = max(specs[1].edges_from(specs[1].start), key=lambda e: e.slope)
    for a, b in zip(edge.cells, edge.cells[1:]):
        resumed.apply(move(a.direction_to(b)))
    print(f"walked one corridor after resuming, {len(resumed.events)} events total, "
          f"log_hash {format_hash(resumed.events_hash())}")

    text = path.read_text()
    flipped = "0" if text[-20] != "0" else "1"
    path.write_text(text[:-20] + flipped + text[-19:])
    try:
        load_file(path)
    except CorruptDocument as exc:
        print(f"tampered save rejected: {exc}")


if __name__ == "__main__":
    main()
