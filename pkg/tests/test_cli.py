"""Command-line behavior: exit codes, deterministic output, file flows."""

import json
from pathlib import Path

import pytest

from mlquest.cli import EX_FAILURE, EX_IO, EX_OK, EX_USAGE, main
from mlquest.levelgen import GenConfig, generate

from helpers import campaign_script

SEED = 4
FIXTURE = Path(__file__).parent / "data" / "reference_survey.csv"


@pytest.fixture(scope="module")
def specs():
    return [generate(GenConfig(seed=SEED), level) for level in (1, 2, 3)]


@pytest.fixture(scope="module")
def campaign_dir(specs, tmp_path_factory):
    root = tmp_path_factory.mktemp("campaign")
    for level, spec in zip((1, 2, 3), specs):
        (root / f"level{level}.json").write_text(json.dumps(spec.to_dict()), encoding="utf-8")
    return root


@pytest.fixture(scope="module")
def script_file(specs, tmp_path_factory):
    script = campaign_script(specs, SEED)
    path = tmp_path_factory.mktemp("scripts") / "run.json"
    document = {"version": 1, "commands": [cmd.to_dict() for cmd in script]}
    path.write_text(json.dumps(document), encoding="utf-8")
    return path


def test_gen_writes_a_valid_spec(tmp_path, capsys):
    out = tmp_path / "one.json"
    assert main(["gen", "--level", "1", "--seed", "7", "--out", str(out)]) == EX_OK
    data = json.loads(out.read_text(encoding="utf-8"))
    assert data["level"] == 1
    assert main(["validate", str(out)]) == EX_OK
    assert capsys.readouterr().out == "level 1: ok\n"


def test_gen_is_deterministic(capsys):
    assert main(["gen", "--level", "2", "--seed", "3"]) == EX_OK
    first = capsys.readouterr().out
    assert main(["gen", "--level", "2", "--seed", "3"]) == EX_OK
    assert capsys.readouterr().out == first
    assert json.loads(first)["level"] == 2


def test_gen_rejects_impossible_shapes(capsys):
    assert main(["gen", "--level", "1", "--seed", "1", "--maze-width", "4"]) == EX_USAGE
    assert "maze_width" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["gen"],
        ["gen", "--level", "9", "--seed", "1"],
        ["observe"],
        ["serve"],
        ["survey"],
    ],
)
def test_usage_errors_exit_64(argv, capsys):
    with pytest.raises(SystemExit) as err:
        main(argv)
    assert err.value.code == EX_USAGE
    capsys.readouterr()


def test_validate_names_the_violation(tmp_path, capsys, specs):
    for spec, expected in ((specs[0], "diamond-value"), (specs[1], "slope-inconsistent"), (specs[2], "even-k")):
        data = spec.to_dict()
        if expected == "diamond-value":
            data["diamond_value"] = 0
        elif expected == "slope-inconsistent":
            data["edges"][0]["slope"] += 0.5
        else:
            data["k"] = 4
        path = tmp_path / f"{expected}.json"
        path.write_text(json.dumps(data), encoding="utf-8")
        assert main(["validate", str(path)]) == EX_FAILURE
        out = capsys.readouterr().out
        assert f"violation: {expected}" in out


def test_validate_missing_file_is_io_error(tmp_path, capsys):
    assert main(["validate", str(tmp_path / "absent.json")]) == EX_IO
    assert "error:" in capsys.readouterr().err


def test_validate_rejects_non_spec_json(tmp_path, capsys):
    path = tmp_path / "odd.json"
    path.write_text('{"level": 9}', encoding="utf-8")
    assert main(["validate", str(path)]) == EX_IO
    capsys.readouterr()


def test_simulate_prints_a_deterministic_log(campaign_dir, script_file, capsys):
    argv = ["simulate", "--campaign", str(campaign_dir), "--script", str(script_file), "--seed", str(SEED)]
    assert main(argv) == EX_OK
    first = capsys.readouterr().out
    assert main(argv) == EX_OK
    assert capsys.readouterr().out == first
    lines = first.strip().splitlines()
    assert lines[-1] == "complete true"
    assert lines[-2].startswith("log_hash ")
    assert all(json.loads(line)["kind"] for line in lines[:-2])


def test_simulate_reads_the_campaign_from_the_environment(campaign_dir, script_file, capsys, monkeypatch):
    monkeypatch.setenv("ML_QUEST_DATA_DIR", str(campaign_dir))
    assert main(["simulate", "--script", str(script_file), "--seed", str(SEED)]) == EX_OK
    assert capsys.readouterr().out.strip().splitlines()[-1] == "complete true"


def test_simulate_replay_roundtrip(campaign_dir, script_file, tmp_path, capsys):
    log = tmp_path / "log.json"
    argv = [
        "simulate", "--campaign", str(campaign_dir),
        "--script", str(script_file), "--seed", str(SEED), "--out", str(log),
    ]
    assert main(argv) == EX_OK
    capsys.readouterr()
    assert main(["replay", str(log)]) == EX_OK
    out = capsys.readouterr().out
    assert out.startswith("log_hash ") and out.rstrip().endswith("verified")


def test_replay_flags_tampered_logs(campaign_dir, script_file, tmp_path, capsys):
    log = tmp_path / "log.json"
    argv = [
        "simulate", "--campaign", str(campaign_dir),
        "--script", str(script_file), "--seed", str(SEED), "--out", str(log),
    ]
    assert main(argv) == EX_OK
    capsys.readouterr()

    data = json.loads(log.read_text(encoding="utf-8"))
    data["events"][0]["tick"] += 1
    tampered = tmp_path / "tampered.json"
    tampered.write_text(json.dumps(data), encoding="utf-8")
    assert main(["replay", str(tampered)]) == EX_FAILURE
    assert "mismatch" in capsys.readouterr().out

    data = json.loads(log.read_text(encoding="utf-8"))
    data["log_hash"] = "0" * 16
    claimed = tmp_path / "claimed.json"
    claimed.write_text(json.dumps(data), encoding="utf-8")
    assert main(["replay", str(claimed)]) == EX_FAILURE
    capsys.readouterr()


def test_replay_rejects_malformed_logs(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{forget it", encoding="utf-8")
    assert main(["replay", str(bad)]) == EX_IO
    wrong = tmp_path / "wrong.json"
    wrong.write_text('{"version": 1}', encoding="utf-8")
    assert main(["replay", str(wrong)]) == EX_IO
    capsys.readouterr()


def test_broken_campaign_dir_is_io_error(campaign_dir, script_file, tmp_path, capsys):
    partial = tmp_path / "partial"
    partial.mkdir()
    (partial / "level1.json").write_text((campaign_dir / "level1.json").read_text(), encoding="utf-8")
    argv = ["simulate", "--campaign", str(partial), "--script", str(script_file), "--seed", str(SEED)]
    assert main(argv) == EX_IO
    capsys.readouterr()


def test_survey_analyze_prints_the_tables(capsys):
    assert main(["survey", "analyze", str(FIXTURE)]) == EX_OK
    out = capsys.readouterr().out
    assert "3.52" in out and "69.6" in out and "47.8" in out


def test_survey_analyze_json_output(capsys):
    assert main(["survey", "analyze", str(FIXTURE), "--json"]) == EX_OK
    data = json.loads(capsys.readouterr().out)
    assert data["participants"] == 23
    assert data["sd_estimator"] == "sample"
    assert main(["survey", "analyze", str(FIXTURE), "--json", "--population-sd"]) == EX_OK
    assert json.loads(capsys.readouterr().out)["sd_estimator"] == "population"


def test_survey_analyze_error_codes(tmp_path, capsys):
    assert main(["survey", "analyze", str(tmp_path / "absent.csv")]) == EX_IO
    weird = tmp_path / "weird.csv"
    weird.write_text("EU1,EU9\n3,3\n", encoding="utf-8")
    assert main(["survey", "analyze", str(weird)]) == EX_IO
    empty = tmp_path / "empty.csv"
    empty.write_text("EU1,EU2\n", encoding="utf-8")
    assert main(["survey", "analyze", str(empty)]) == EX_FAILURE
    capsys.readouterr()
