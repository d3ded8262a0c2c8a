"""Typed game events, their canonical byte encoding, and the log digest.

Every run appends events to an ordered log; two runs are "the same run"
exactly when their logs hash equal. The encoding is fixed so other
implementations can reproduce digests: event fields in declaration order
(tick, kind, payload), integers little-endian, strings length-prefixed
UTF-8, payload entries sorted by key.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Union

PayloadValue = Union[int, float, str, bool]

FNV64_OFFSET = 0xCBF29CE484222325
FNV64_PRIME = 0x100000001B3


class EventKind(str, Enum):
    MOVE = "move"
    WARNING = "warning"
    RESTART = "restart"
    DIAMOND_COLLECTED = "diamond_collected"
    HEALTH_CHANGED = "health_changed"
    BOB_CLASSIFIED = "bob_classified"
    OUTCOME_DISPLAYED = "outcome_displayed"
    LEVEL_COMPLETED = "level_completed"
    DIALOGUE_SHOWN = "dialogue_shown"


@dataclass(frozen=True)
class GameEvent:
    """One log entry; ordered by (tick, position in the log)."""

    tick: int
    kind: EventKind
    payload: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"tick": self.tick, "kind": self.kind.value, "payload": dict(self.payload)}

    @classmethod
    def from_dict(cls, data: dict) -> "GameEvent":
        return cls(tick=int(data["tick"]), kind=EventKind(data["kind"]), payload=dict(data["payload"]))


def fnv1a64(data: bytes, digest: int = FNV64_OFFSET) -> int:
    """64-bit FNV-1a over ``data``, continuing from ``digest``."""
    for byte in data:
        digest ^= byte
        digest = (digest * FNV64_PRIME) & 0xFFFFFFFFFFFFFFFF
    return digest


def _encode_str(text: str) -> bytes:
    raw = text.encode("utf-8")
    return struct.pack("<I", len(raw)) + raw


def _encode_value(value: PayloadValue) -> bytes:
    # bool before int: bool is an int subclass.
    if isinstance(value, bool):
        return b"b" + (b"\x01" if value else b"\x00")
    if isinstance(value, int):
        return b"i" + struct.pack("<q", value)
    if isinstance(value, float):
        return b"f" + struct.pack("<d", value)
    if isinstance(value, str):
        return b"s" + _encode_str(value)
    raise TypeError(f"unsupported payload value type: {type(value).__name__}")


def encode_event(event: GameEvent) -> bytes:
    """Canonical bytes for one event."""
    parts = [struct.pack("<q", event.tick), _encode_str(event.kind.value)]
    items = sorted(event.payload.items())
    parts.append(struct.pack("<I", len(items)))
    for key, value in items:
        parts.append(_encode_str(key))
        parts.append(_encode_value(value))
    return b"".join(parts)


def log_hash(log: Iterable[GameEvent]) -> int:
    """FNV-1a digest of the whole log; the empty log hashes to the offset basis."""
    digest = FNV64_OFFSET
    for event in log:
        digest = fnv1a64(encode_event(event), digest)
    return digest


def format_hash(digest: int) -> str:
    return f"{digest:016x}"
