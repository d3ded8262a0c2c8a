"""A turn-based puzzle campaign that teaches three machine-learning
ideas by play: supervised learning as record-then-replay, gradient
descent as steepest-slope maze descent, and k-nearest-neighbour voting
as a race to out-vote pursuers.

Deterministic core: same seed and command script, same event log, on
every platform.
"""

from .engine import new_session, snapshot, tick
from .events import EventKind, GameEvent, format_hash, log_hash
from .levelgen import GenConfig, ValidationReport, generate, validate
from .model import Direction, GridPos, InputCommand, InvalidCommand, MLQuestError, ParseError
from .rng import Rng
from .session import Campaign, load, load_file, replay, save, save_file

__version__ = "0.1.0"

__all__ = [
    "Campaign",
    "Direction",
    "EventKind",
    "GameEvent",
    "GenConfig",
    "GridPos",
    "InputCommand",
    "InvalidCommand",
    "MLQuestError",
    "ParseError",
    "Rng",
    "ValidationReport",
    "__version__",
    "format_hash",
    "generate",
    "load",
    "load_file",
    "log_hash",
    "new_session",
    "replay",
    "save",
    "save_file",
    "snapshot",
    "tick",
    "validate",
]
