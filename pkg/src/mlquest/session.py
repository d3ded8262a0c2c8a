"""Campaign progression: gating, score carry-over, saves, scripted replay.

A campaign runs the three levels in concept order. The next level opens
only after the current one's learning outcome has been shown and
acknowledged; score carries across levels; the random stream continues
uninterrupted so a whole campaign is a pure function of (seed, script).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from . import engine, level1, level2, level3
from .events import GameEvent, fnv1a64, log_hash
from .model import InputCommand, InvalidCommand, MLQuestError, Modal, ParseError, check_keys
from .rng import Rng


class OutcomeNotAcknowledged(MLQuestError):
    """The current level's outcome has not been displayed and confirmed."""


class CampaignFinished(MLQuestError):
    """All three levels are done; there is nothing to advance into."""


class CorruptDocument(MLQuestError):
    """A save document failed its version, schema, or checksum check."""


_SPEC_TYPES = {1: level1.Level1Spec, 2: level2.Level2Spec, 3: level3.Level3Spec}
_STATE_TYPES = {1: level1.Level1State, 2: level2.Level2State, 3: level3.Level3State}

SAVE_VERSION = 1


@dataclass
class Campaign:
    specs: list  # exactly 3, concept order: replay, descent, vote
    seed: int
    session: engine.SessionState
    level_index: int = 0
    acknowledged: set[int] = field(default_factory=set)
    finished: bool = False
    past_events: list[GameEvent] = field(default_factory=list)

    @classmethod
    def new(cls, specs: list, seed: int) -> "Campaign":
        if len(specs) != 3:
            raise ValueError(f"a campaign needs 3 level specs, got {len(specs)}")
        rng = Rng(seed)
        return cls(specs=list(specs), seed=seed, session=engine.new_session(specs[0], rng))

    @property
    def events(self) -> list[GameEvent]:
        return self.past_events + list(self.session.log)

    def events_hash(self) -> int:
        return log_hash(self.events)

    def apply(self, cmd: InputCommand) -> list[GameEvent]:
        """One player command; advances to the next level automatically
        once the outcome modal has been acknowledged."""
        if self.finished:
            raise InvalidCommand("the campaign is finished")
        _, emitted = engine.tick(self.session, cmd)
        if self.session.completed and self.session.outcome_acknowledged:
            if self.level_index < 2:
                self.advance()
            else:
                self.acknowledged.add(self.level_index)
                self.past_events.extend(self.session.log)
                self.session.log = []
                self.finished = True
        return emitted

    def advance(self) -> "Campaign":
        if self.finished:
            raise CampaignFinished("all levels are complete")
        current = self.session
        if not (current.completed and current.outcome_acknowledged):
            raise OutcomeNotAcknowledged(f"level {current.level} is still in progress")
        if self.level_index == 2:
            raise CampaignFinished("all levels are complete")
        self.acknowledged.add(self.level_index)
        self.past_events.extend(current.log)
        self.level_index += 1
        # Same rng stream, carried score, fresh tick counter.
        self.session = engine.new_session(self.specs[self.level_index], current.rng, score=current.score)
        return self

    def snapshot(self):
        return engine.snapshot(self.session)


@dataclass(frozen=True)
class ReplayResult:
    events: list[GameEvent]
    complete: bool  # False when the script ran out before the campaign ended
    campaign: Campaign

    def events_hash(self) -> int:
        return log_hash(self.events)


def replay(specs: list, script: list[InputCommand], seed: int) -> ReplayResult:
    """Run a campaign headlessly. Commands that are invalid in their
    moment are skipped, so scripts stay usable across minor layout
    edits; determinism is unaffected since rejected commands leave no
    trace."""
    campaign = Campaign.new(specs, seed)
    for cmd in script:
        if campaign.finished:
            break
        try:
            campaign.apply(cmd)
        except InvalidCommand:
            continue
    return ReplayResult(events=campaign.events, complete=campaign.finished, campaign=campaign)


# --- persistence -------------------------------------------------------------

def _canonical_json(data) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def _spec_to_dict(spec) -> dict:
    return spec.to_dict()


def _spec_from_dict(data) -> object:
    if not isinstance(data, dict) or "level" not in data:
        raise ParseError("level spec document lacks a level field")
    try:
        spec_type = _SPEC_TYPES[data["level"]]
    except (KeyError, TypeError):
        raise ParseError(f"unknown level {data.get('level')!r}") from None
    return spec_type.from_dict(data)


def save(campaign: Campaign) -> dict:
    """Serializable document; byte-stable for identical states."""
    session = campaign.session
    body = {
        "seed": campaign.seed,
        "level_index": campaign.level_index,
        "acknowledged": sorted(campaign.acknowledged),
        "finished": campaign.finished,
        "specs": [_spec_to_dict(s) for s in campaign.specs],
        "past_events": [e.to_dict() for e in campaign.past_events],
        "session": {
            "level": session.level,
            "tick": session.tick,
            "score": session.score,
            "score_at_entry": session.score_at_entry,
            "outcome_acknowledged": session.outcome_acknowledged,
            "pending_modal": session.pending_modal.to_dict() if session.pending_modal else None,
            "agents": [a.to_dict() for a in session.agents],
            "level_state": session.level_state.to_dict(),
            "rng": list(session.rng.state()),
            "log": [e.to_dict() for e in session.log],
        },
    }
    checksum = fnv1a64(_canonical_json(body).encode("utf-8"))
    return {"version": SAVE_VERSION, "checksum": f"{checksum:016x}", "body": body}


def load(document: dict) -> Campaign:
    try:
        check_keys(document, {"version", "checksum", "body"}, where="save document")
        if document["version"] != SAVE_VERSION:
            raise CorruptDocument(f"unsupported save version {document['version']!r}")
        body = document["body"]
        actual = f"{fnv1a64(_canonical_json(body).encode('utf-8')):016x}"
        if actual != document["checksum"]:
            raise CorruptDocument("checksum mismatch; the save file is damaged")
        check_keys(
            body,
            {"seed", "level_index", "acknowledged", "finished", "specs", "past_events", "session"},
            where="save body",
        )
        specs = [_spec_from_dict(s) for s in body["specs"]]
        if len(specs) != 3:
            raise CorruptDocument(f"expected 3 level specs, found {len(specs)}")
        raw = body["session"]
        check_keys(
            raw,
            {
                "level",
                "tick",
                "score",
                "score_at_entry",
                "outcome_acknowledged",
                "pending_modal",
                "agents",
                "level_state",
                "rng",
                "log",
            },
            where="save session",
        )
        level = int(raw["level"])
        if level not in _STATE_TYPES:
            raise CorruptDocument(f"save names unknown level {level}")
        if level != int(body["level_index"]) + 1:
            raise CorruptDocument("session level disagrees with the campaign position")
        from .model import AgentState

        session = engine.SessionState(
            level=level,
            spec=specs[int(body["level_index"])],
            level_state=_STATE_TYPES[level].from_dict(raw["level_state"]),
            agents=[AgentState.from_dict(a) for a in raw["agents"]],
            rng=Rng.from_state(tuple(int(w) for w in raw["rng"])),
            tick=int(raw["tick"]),
            score=int(raw["score"]),
            score_at_entry=int(raw["score_at_entry"]),
            pending_modal=None if raw["pending_modal"] is None else Modal.from_dict(raw["pending_modal"]),
            outcome_acknowledged=bool(raw["outcome_acknowledged"]),
            log=[GameEvent.from_dict(e) for e in raw["log"]],
        )
        return Campaign(
            specs=specs,
            seed=int(body["seed"]),
            session=session,
            level_index=int(body["level_index"]),
            acknowledged={int(i) for i in body["acknowledged"]},
            finished=bool(body["finished"]),
            past_events=[GameEvent.from_dict(e) for e in body["past_events"]],
        )
    except CorruptDocument:
        raise
    except (ParseError, ValueError, KeyError, TypeError, IndexError) as exc:
        raise CorruptDocument(f"malformed save document: {exc}") from exc


def save_file(campaign: Campaign, path: str | Path) -> None:
    """Write-temp-then-rename so a crash never leaves a torn save."""
    path = Path(path)
    payload = _canonical_json(save(campaign)) + "\n"
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(payload, encoding="utf-8")
    os.replace(tmp, path)


def load_file(path: str | Path) -> Campaign:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CorruptDocument(f"cannot read save file: {exc}") from exc
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorruptDocument(f"save file is not valid JSON: {exc}") from exc
    return load(document)
