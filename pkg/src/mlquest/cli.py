"""Command-line surface: generation, validation, headless simulation,
log verification, the network endpoint, and survey analysis.

Exit codes: 0 success, 1 validation failure, 2 I/O or parse error,
64 usage error. All output is deterministic for fixed inputs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import levelgen, protocol, survey
from .content import reference_specs
from .events import GameEvent, format_hash, log_hash
from .model import InputCommand, MLQuestError, ParseError, check_keys
from .session import CorruptDocument, _canonical_json, _spec_from_dict, replay

EX_OK = 0
EX_FAILURE = 1
EX_IO = 2
EX_USAGE = 64

SCRIPT_VERSION = 1
LOG_VERSION = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _read_json(path: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _IOFailure(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise _IOFailure(f"{path}: bad JSON: {exc.msg} (line {exc.lineno})") from exc
    if not isinstance(data, dict):
        raise _IOFailure(f"{path}: expected a JSON object")
    return data


class _IOFailure(Exception):
    pass


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        try:
            Path(path).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise _IOFailure(f"cannot write {path}: {exc}") from exc


def _campaign_specs(campaign_dir: str | None) -> list:
    """Load level1..3.json from the directory, or fall back to the
    built-in reference campaign. ML_QUEST_DATA_DIR supplies the default
    directory."""
    if campaign_dir is None:
        campaign_dir = os.environ.get("ML_QUEST_DATA_DIR")
    if campaign_dir is None:
        return reference_specs()
    specs = []
    for level in (1, 2, 3):
        path = Path(campaign_dir) / f"level{level}.json"
        data = _read_json(str(path))
        if data.get("level") != level:
            raise _IOFailure(f"{path}: expected a level {level} spec, found {data.get('level')!r}")
        try:
            specs.append(_spec_from_dict(data))
        except ParseError as exc:
            raise _IOFailure(f"{path}: {exc}") from exc
    return specs


def _load_script(path: str) -> list[InputCommand]:
    data = _read_json(path)
    try:
        check_keys(data, {"version", "commands"}, where="script file")
        if data["version"] != SCRIPT_VERSION:
            raise ParseError(f"unsupported script version {data['version']!r}")
        if not isinstance(data["commands"], list):
            raise ParseError("commands must be a list")
        return [InputCommand.from_dict(entry) for entry in data["commands"]]
    except ParseError as exc:
        raise _IOFailure(f"{path}: {exc}") from exc


# -- subcommands --


def _cmd_gen(args) -> int:
    cfg = levelgen.GenConfig(
        seed=args.seed,
        maze_width=args.maze_width,
        maze_height=args.maze_height,
        junction_limit=args.junction_limit,
        diamond_count=args.diamond_count,
        town_rows=args.town_rows,
        town_cols=args.town_cols,
        red_man_count=args.red_men,
    )
    spec = levelgen.generate(cfg, args.level)
    _write_text(args.out, json.dumps(spec.to_dict(), indent=2, sort_keys=True) + "\n")
    return EX_OK


def _cmd_validate(args) -> int:
    data = _read_json(args.file)
    try:
        level = data.get("level")
        spec = _spec_from_dict(data)
    except ParseError as exc:
        raise _IOFailure(f"{args.file}: {exc}") from exc
    report = levelgen.validate(spec, level)
    if report.passed:
        print(f"level {report.level}: ok")
        return EX_OK
    for name, witness in report.violations:
        print(f"violation: {name} ({witness})")
    return EX_FAILURE


def _simulate(args) -> tuple[list, list[GameEvent], bool]:
    specs = _campaign_specs(args.campaign)
    script = _load_script(args.script)
    result = replay(specs, script, args.seed)
    return specs, result.events, result.complete


def _cmd_simulate(args) -> int:
    specs, events, complete = _simulate(args)
    for event in events:
        print(_canonical_json(event.to_dict()))
    digest = format_hash(log_hash(events))
    print(f"log_hash {digest}")
    print(f"complete {'true' if complete else 'false'}")
    if args.out is not None:
        document = {
            "version": LOG_VERSION,
            "seed": args.seed,
            "specs": [spec.to_dict() for spec in specs],
            "script": _read_json(args.script)["commands"],
            "events": [event.to_dict() for event in events],
            "log_hash": digest,
            "complete": complete,
        }
        _write_text(args.out, json.dumps(document, indent=2, sort_keys=True) + "\n")
    return EX_OK


def _cmd_replay(args) -> int:
    data = _read_json(args.file)
    try:
        check_keys(
            data,
            {"version", "seed", "specs", "script", "events", "log_hash", "complete"},
            where="log file",
        )
        if data["version"] != LOG_VERSION:
            raise ParseError(f"unsupported log version {data['version']!r}")
        specs = [_spec_from_dict(entry) for entry in data["specs"]]
        script = [InputCommand.from_dict(entry) for entry in data["script"]]
        recorded = [GameEvent.from_dict(entry) for entry in data["events"]]
        claimed = data["log_hash"]
    except ParseError as exc:
        raise _IOFailure(f"{args.file}: {exc}") from exc
    if len(specs) != 3:
        raise _IOFailure(f"{args.file}: expected 3 specs, got {len(specs)}")

    result = replay(specs, script, data["seed"])
    actual = format_hash(result.events_hash())
    recorded_hash = format_hash(log_hash(recorded))
    if actual == claimed == recorded_hash:
        print(f"log_hash {actual} verified")
        return EX_OK
    print(f"log_hash mismatch: recomputed {actual}, file claims {claimed}, events hash to {recorded_hash}")
    return EX_FAILURE


def _cmd_serve(args) -> int:
    specs = _campaign_specs(args.campaign)
    server = protocol.GameServer(
        specs,
        seed=args.seed,
        host=args.host,
        port=args.port,
        http_port=args.http_port,
        static_dir=args.static,
    )
    server.start()
    host, port = server.tcp_address
    print(f"listening on {host}:{port}")
    if args.http_port is not None:
        http_host, http_port = server.http_address
        print(f"http/ws on {http_host}:{http_port}")
    sys.stdout.flush()
    try:
        while True:
            time.sleep(3600)
    except KeyboardInterrupt:
        return EX_OK
    finally:
        server.stop()


def _cmd_survey(args) -> int:
    try:
        text = Path(args.file).read_text(encoding="utf-8")
    except OSError as exc:
        raise _IOFailure(f"cannot read {args.file}: {exc}") from exc
    try:
        dataset = survey.load_dataset(text)
    except ParseError as exc:
        raise _IOFailure(f"{args.file}: {exc}") from exc
    data = survey.report(dataset, population=args.population_sd)
    if args.json:
        print(_canonical_json(data))
    else:
        sys.stdout.write(survey.format_report(data))
    return EX_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="mlquest", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    gen = sub.add_parser("gen", help="generate a level spec")
    gen.add_argument("--level", type=int, choices=(1, 2, 3), required=True)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--out", help="output file (default stdout)")
    gen.add_argument("--maze-width", type=int, default=9, help="tile columns, odd")
    gen.add_argument("--maze-height", type=int, default=9, help="tile rows, odd")
    gen.add_argument("--junction-limit", type=int, default=50)
    gen.add_argument("--diamond-count", type=int, default=3)
    gen.add_argument("--town-rows", type=int, default=11)
    gen.add_argument("--town-cols", type=int, default=11)
    gen.add_argument("--red-men", type=int, default=2)
    gen.set_defaults(func=_cmd_gen)

    validate = sub.add_parser("validate", help="check a level spec's invariants")
    validate.add_argument("file")
    validate.set_defaults(func=_cmd_validate)

    simulate = sub.add_parser("simulate", help="run a command script headlessly")
    simulate.add_argument("--campaign", help="directory with level1..3.json")
    simulate.add_argument("--script", required=True)
    simulate.add_argument("--seed", type=int, required=True)
    simulate.add_argument("--out", help="write a verifiable log document")
    simulate.set_defaults(func=_cmd_simulate)

    replay_cmd = sub.add_parser("replay", help="re-verify a simulate log")
    replay_cmd.add_argument("file")
    replay_cmd.set_defaults(func=_cmd_replay)

    serve = sub.add_parser("serve", help="start the session endpoint")
    serve.add_argument("--campaign", help="directory with level1..3.json")
    serve.add_argument("--port", type=int, required=True)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--seed", type=int, default=0)
    serve.add_argument("--http-port", type=int, help="also serve HTTP + /ws here")
    serve.add_argument("--static", help="directory with the UI bundle")
    serve.set_defaults(func=_cmd_serve)

    survey_cmd = sub.add_parser("survey", help="questionnaire analytics")
    survey_sub = survey_cmd.add_subparsers(dest="survey_command", required=True)
    analyze = survey_sub.add_parser("analyze", help="print the report tables")
    analyze.add_argument("file")
    analyze.add_argument("--population-sd", action="store_true",
                         help="use the n denominator instead of n-1")
    analyze.add_argument("--json", action="store_true", help="machine-readable output")
    analyze.set_defaults(func=_cmd_survey)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _IOFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_IO
    except CorruptDocument as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_IO
    except levelgen.ConfigInvalid as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_USAGE
    except MLQuestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_FAILURE


if __name__ == "__main__":
    sys.exit(main())
