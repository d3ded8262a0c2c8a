"""Generated levels satisfy their validator; broken ones name the fault."""

import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mlquest import mazes
from mlquest.levelgen import ConfigInvalid, GenConfig, generate, validate


def names(report):
    return [name for name, _ in report.violations]


def retuned(spec, elevations):
    """Rebuild a descent spec around new junction heights, keeping every
    stored slope consistent with them."""
    edges = tuple(
        dataclasses.replace(e, slope=(elevations[e.src] - elevations[e.dst]) / e.length)
        for e in spec.edges
    )
    return dataclasses.replace(spec, elevations=elevations, edges=edges)


@given(st.integers(min_value=0, max_value=2**32))
@settings(max_examples=15, deadline=None)
def test_generated_levels_validate(seed):
    cfg = GenConfig(seed=seed)
    for level in (1, 2, 3):
        report = validate(generate(cfg, level), level)
        assert report.passed, (level, report.violations)
        assert report.level == level
        assert report.violations == ()


def test_generation_is_deterministic():
    cfg = GenConfig(seed=77)
    for level in (1, 2, 3):
        assert generate(cfg, level).to_dict() == generate(cfg, level).to_dict()


def test_config_shapes_the_output():
    cfg = GenConfig(seed=6, maze_width=11, maze_height=7, diamond_count=2, red_man_count=3)
    one = generate(cfg, 1)
    assert (one.maze.rows, one.maze.cols) == (3, 5)
    assert len(one.diamonds) == 2
    three = generate(cfg, 3)
    assert (three.rows, three.cols) == (cfg.town_rows, cfg.town_cols)
    assert len(three.red_men) == 3


@pytest.mark.parametrize(
    "kwargs",
    [
        {"maze_width": 4},
        {"maze_width": 3},
        {"maze_height": 8},
        {"junction_limit": 0},
        {"diamond_count": 0},
        {"town_rows": 3},
        {"red_man_count": 0},
    ],
)
def test_bad_config_is_rejected(kwargs):
    with pytest.raises(ConfigInvalid):
        generate(GenConfig(seed=1, **kwargs), 1)


def test_unplaceable_diamonds_are_rejected():
    with pytest.raises(ConfigInvalid):
        generate(GenConfig(seed=1, maze_width=5, maze_height=5, diamond_count=4), 1)


def test_unknown_level_is_rejected():
    with pytest.raises(ConfigInvalid):
        generate(GenConfig(seed=1), 4)
    report = validate(generate(GenConfig(seed=1), 1), 2)
    assert names(report) == ["level-mismatch"]
    assert not report.passed


def test_report_serializes():
    report = validate(generate(GenConfig(seed=2), 1), 1)
    assert report.to_dict() == {"level": 1, "passed": True, "violations": []}


def test_broken_level1_specs_name_the_fault():
    spec = generate(GenConfig(seed=5), 1)
    path = set(mazes.unique_path(spec.maze, spec.entrance, spec.exit))
    off = next(c for c in spec.maze.cells() if c not in path)
    assert "diamond-off-path" in names(validate(dataclasses.replace(spec, diamonds=(off,)), 1))
    twice = dataclasses.replace(spec, diamonds=(spec.diamonds[0], spec.diamonds[0]))
    assert "diamond-duplicate" in names(validate(twice, 1))
    assert "diamond-value" in names(validate(dataclasses.replace(spec, diamond_value=0), 1))
    cut = dataclasses.replace(spec, canonical_sequence=spec.canonical_sequence[:-1])
    assert "sequence-unsolved" in names(validate(cut, 1))
    swapped = dataclasses.replace(spec, entrance=spec.exit, exit=spec.entrance)
    assert "sequence-unsolved" in names(validate(swapped, 1))


def test_level2_slope_tampering_is_caught():
    spec = generate(GenConfig(seed=5), 2)
    edges = list(spec.edges)
    edges[0] = dataclasses.replace(edges[0], slope=edges[0].slope + 0.5)
    assert "slope-inconsistent" in names(validate(dataclasses.replace(spec, edges=tuple(edges)), 2))


def test_level2_goal_must_be_the_minimum():
    spec = generate(GenConfig(seed=5), 2)
    elevations = dict(spec.elevations)
    elevations[spec.goal] = max(elevations.values()) + 1.0
    report = validate(retuned(spec, elevations), 2)
    assert "goal-not-minimum" in names(report)
    assert "slope-inconsistent" not in names(report)


def test_level2_greedy_tie_is_caught():
    spec = generate(GenConfig(seed=5), 2)
    node, came_from, pick = spec.start, None, None
    while node != spec.goal:
        ranked = sorted(spec.edges_from(node), key=lambda e: e.slope, reverse=True)
        side = [e for e in ranked[1:] if e.dst not in (spec.goal, came_from)]
        if side:
            pick = (node, ranked[0], side[0])
            break
        came_from, node = node, ranked[0].dst
    assert pick is not None, "branch-free descent; use another seed"
    node, best, runner = pick
    elevations = dict(spec.elevations)
    elevations[runner.dst] = elevations[node] - best.slope * runner.length
    report = validate(retuned(spec, elevations), 2)
    assert "non-unique-greedy-edge" in names(report)
    assert "slope-inconsistent" not in names(report)


def test_broken_level3_specs_name_the_fault():
    spec = generate(GenConfig(seed=5), 3)
    assert "even-k" in names(validate(dataclasses.replace(spec, k=4), 3))
    assert "bob-count" in names(validate(dataclasses.replace(spec, bobs=spec.bobs[:2]), 3))
    fewer = dataclasses.replace(spec, red_men=spec.red_men[:1])
    assert "red-man-count" in names(validate(fewer, 3))
    slow = dataclasses.replace(spec, red_men=(dataclasses.replace(spec.red_men[0], speed=0.0),) + spec.red_men[1:])
    assert "speed-invalid" in names(validate(slow, 3))
    crowded = dataclasses.replace(spec, spawn=spec.bobs[0])
    assert "position-conflict" in names(validate(crowded, 3))
