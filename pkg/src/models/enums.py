from __future__ import annotations

from enum import StrEnum
from typing import Dict, Iterable, List, Tuple


class HandId(StrEnum):
    LEFT = "left"
    RIGHT = "right"


class Signal(StrEnum):
    NS = "NS"
    HW = "HW"
    HD = "HD"
    TR = "TR"
    SC = "SC"
    SD = "SD"


class PartnerMode(StrEnum):
    COMPLIANT = "compliant-follower"
    RESISTIVE = "resistive"
    PUSH_AWAY = "push-away"
    ABSENT = "absent"
    CONSTANT = "constant"


class Vote(StrEnum):
    BEST = "best"
    WORST = "worst"
    NONE = "none"


HAPTIC_SIGNALS = frozenset({Signal.HW, Signal.HD})
VISUAL_SIGNALS = frozenset({Signal.TR})
AUDIO_SIGNALS = frozenset({Signal.SC, Signal.SD})


def signal_channels(signals: Iterable[Signal]) -> List[str]:
    """Sensory channels a signal set leads through, in the order haptic, visual, audio."""
    signals = set(signals)
    groups = (("haptic", HAPTIC_SIGNALS), ("visual", VISUAL_SIGNALS), ("audio", AUDIO_SIGNALS))
    return [name for name, group in groups if signals & group]


# Canonical order used when printing trial labels, e.g. "HW+HD+TR", "SC+HW".
SIGNAL_ORDER: List[Signal] = [Signal.SC, Signal.SD, Signal.HW, Signal.HD, Signal.TR, Signal.NS]

# Three blocks of 8, 2 and 3 trials. HW+HD appears twice in block 1.
PROTOCOL_BLOCKS: List[List[str]] = [
    ["NS", "HW", "HD", "TR", "HW+HD", "HW+HD", "HW+TR", "HW+HD+TR"],
    ["SC", "SD"],
    ["SC+HW", "SC+HD", "SC+TR"],
]

# Leader box step: (foot, forward multiplier, lateral multiplier); +lateral is to the left.
BOX_STEP_PATTERN: List[Tuple[str, float, float]] = [
    ("left", 1.0, 0.0),
    ("right", 1.0, -1.0),
    ("left", 0.0, -1.0),
    ("right", -1.0, 0.0),
    ("left", -1.0, 1.0),
    ("right", 0.0, 1.0),
]

STEP_COUNT_WORDS: Dict[int, str] = {1: "One", 2: "Two", 3: "Three", 4: "Four", 5: "Five", 6: "Six"}

# Words spoken for SD, keyed by the follower's mirrored motion.
STEP_DESCRIPTIONS: Dict[str, str] = {
    "forward": "Step forward",
    "back": "Step back",
    "side": "Step side",
    "close": "Step close",
}

TASK_AXES: List[str] = ["fx", "fy", "fz", "mx", "my", "mz"]
