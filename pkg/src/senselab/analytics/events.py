"""Event log records and their newline-delimited JSON export format."""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from typing import IO, Iterable, Iterator

from senselab.protocol import SensorType


class EventKind(str, Enum):
    INQUIRY_CREATED = "inquiry_created"
    DATA_CAPTURED = "data_captured"
    PUBLISHED = "published"
    COMMENT = "comment"
    REPLICATION = "replication"
    REMIX = "remix"
    SESSION_START = "session_start"


# Kinds that denote a new inquiry coming into existence.  Replication and
# remix each log exactly one record (one write, one event), so inquiry
# totals count all three.
CREATION_KINDS = frozenset(
    {EventKind.INQUIRY_CREATED, EventKind.REPLICATION, EventKind.REMIX}
)


@dataclass(frozen=True)
class EventRecord:
    timestamp: datetime
    actor_id: str
    kind: EventKind
    subject_id: str
    sensor_type: SensorType | None = None

    def to_dict(self) -> dict:
        return {
            "timestamp": self.timestamp.isoformat(),
            "actor_id": self.actor_id,
            "kind": self.kind.value,
            "subject_id": self.subject_id,
            "sensor_type": None if self.sensor_type is None else self.sensor_type.wire_name,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EventRecord":
        sensor = data.get("sensor_type")
        return cls(
            timestamp=datetime.fromisoformat(data["timestamp"]),
            actor_id=data["actor_id"],
            kind=EventKind(data["kind"]),
            subject_id=data["subject_id"],
            sensor_type=None if sensor is None else SensorType.from_wire_name(sensor),
        )


class LogFormatError(ValueError):
    """A log line could not be parsed; carries the 1-based line number."""

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


def utc_now() -> datetime:
    return datetime.now(timezone.utc).replace(microsecond=0)


def write_event_log(fh: IO[str], events: Iterable[EventRecord]) -> int:
    count = 0
    for event in events:
        fh.write(json.dumps(event.to_dict(), separators=(",", ":")) + "\n")
        count += 1
    return count


def read_event_log(fh: IO[str]) -> Iterator[EventRecord]:
    """Parse an NDJSON event log; malformed lines raise LogFormatError."""
    for line_number, line in enumerate(fh, start=1):
        if not line.strip():
            continue
        try:
            data = json.loads(line)
            yield EventRecord.from_dict(data)
        except (json.JSONDecodeError, KeyError, ValueError, TypeError) as exc:
            raise LogFormatError(line_number, str(exc)) from exc
