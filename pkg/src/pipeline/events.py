from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List


@dataclass(frozen=True)
class TrialEvent:
    time: float
    kind: str
    payload: Dict[str, Any]

    def to_dict(self) -> Dict[str, Any]:
        return {"time": self.time, "kind": self.kind, "payload": self.payload}


@dataclass
class EventRecorder:
    events: List[TrialEvent] = field(default_factory=list)

    def add(self, time: float, kind: str, **payload: Any) -> None:
        self.events.append(TrialEvent(time=time, kind=kind, payload=payload))

    def snapshot(self) -> List[TrialEvent]:
        """Events in timestamp order; ties keep recording order."""
        return sorted(self.events, key=lambda e: e.time)
