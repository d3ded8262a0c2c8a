#!/usr/bin/env python3
"""Synthesize survey responses for the default instrument and print the
full analysis report (item stats, demographics, factor correlations)."""

import argparse
import random

from mlquest.survey import DEFAULT_INSTRUMENT, format_report, load_dataset, report


def synthesize(participants: int, seed: int) -> str:
    rng = random.Random(seed)
    items = [i.code for i in DEFAULT_INSTRUMENT.items]
    header = items + [d.code for d in DEFAULT_INSTRUMENT.demographics]
    lines = [",".join(header)]
    for _ in range(participants):
        row = [str(min(5, max(1, round(rng.gauss(3.7, 0.9))))) for _ in items]
        for question in DEFAULT_INSTRUMENT.demographics:
            if question.kind == "single_select":
                row.append(rng.choice(question.options))
            else:
                chosen = [o for o in question.options if rng.random() < 0.6]
                row.append(";".join(chosen))
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--participants", type=int, default=30)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--population-sd", action="store_true",
                        help="divide by n instead of n-1 in the standard deviation")
    args = parser.parse_args()

    dataset = load_dataset(synthesize(args.participants, args.seed))
    print(format_report(report(dataset, population=args.population_sd)))


if __name__ == "__main__":
    main()
