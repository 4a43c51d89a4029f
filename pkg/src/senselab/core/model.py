"""Domain model of the inquiry workflow.

Values are immutable; all state transitions happen in the storage layer
inside one transaction and return fresh values.  No type here carries
personally identifiable information: accounts are a generic handle plus a
role.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime
from enum import Enum

from senselab.protocol import Measurement, SensorType

# Text caps; storage sanity, adjustable per deployment.
MAX_TITLE_LEN = 120
MAX_COMMENT_LEN = 500
MAX_LABEL_LEN = 80
MAX_SLOTS = 3
JOIN_CODE_LEN = 6
JOIN_CODE_ALPHABET = "ABCDEFGHJKLMNPQRSTUVWXYZ23456789"  # no 0/O/1/I lookalikes


class Role(str, Enum):
    TEACHER = "teacher"
    STUDENT = "student"
    RESEARCHER = "researcher"

    @property
    def can_manage_classes(self) -> bool:
        return self in (Role.TEACHER, Role.RESEARCHER)


class InquiryStatus(str, Enum):
    DRAFT = "draft"
    PUBLISHED = "published"


class LineageKind(str, Enum):
    REPLICATION = "replication"
    REMIX = "remix"


class SourceClass(str, Enum):
    OTHER_STUDENT = "other_student"
    EXEMPLAR = "exemplar"
    OWN = "own"


@dataclass(frozen=True)
class UserAccount:
    id: str
    username: str
    role: Role
    class_ids: frozenset[str] = frozenset()


@dataclass(frozen=True)
class ClassGroup:
    id: str
    name: str
    join_code: str
    teacher_id: str
    created_at: datetime


@dataclass(frozen=True)
class CaptureSlot:
    index: int
    measurement: Measurement
    label: str = ""
    photo_ref: str | None = None

    def __post_init__(self):
        if not 0 <= self.index < MAX_SLOTS:
            raise ValueError(f"slot index must be 0..{MAX_SLOTS - 1}, got {self.index}")
        if len(self.label) > MAX_LABEL_LEN:
            raise ValueError(f"label longer than {MAX_LABEL_LEN} chars")


@dataclass(frozen=True)
class LineageLink:
    kind: LineageKind
    source_inquiry_id: str
    source_class: SourceClass


@dataclass(frozen=True)
class Comment:
    id: str
    inquiry_id: str
    author_id: str
    body: str
    created_at: datetime

    def __post_init__(self):
        if not self.body.strip():
            raise ValueError("comment body must be nonempty")
        if len(self.body) > MAX_COMMENT_LEN:
            raise ValueError(f"comment longer than {MAX_COMMENT_LEN} chars")


@dataclass(frozen=True)
class ScoreOverride:
    """Manual re-coding of an inquiry's rubric category, with audit trail."""

    category: str  # ScoreCategory wire name; stored as text to keep model thin
    reason: str
    set_by: str


@dataclass(frozen=True)
class Inquiry:
    id: str
    author_id: str
    class_id: str | None
    sensor_type: SensorType
    title: str = ""
    description: str = ""
    notes: str = ""
    slots: tuple[CaptureSlot, ...] = ()
    status: InquiryStatus = InquiryStatus.DRAFT
    lineage: LineageLink | None = None
    created_at: datetime | None = None
    published_at: datetime | None = None
    is_exemplar: bool = False
    override: ScoreOverride | None = None

    def __post_init__(self):
        if len(self.title) > MAX_TITLE_LEN:
            raise ValueError(f"title longer than {MAX_TITLE_LEN} chars")
        if len(self.slots) > MAX_SLOTS:
            raise ValueError(f"more than {MAX_SLOTS} capture slots")
        indices = [s.index for s in self.slots]
        if len(set(indices)) != len(indices):
            raise ValueError("duplicate slot indices")
        if (self.published_at is not None) != (self.status is InquiryStatus.PUBLISHED):
            raise ValueError("published_at present iff status is published")

    @property
    def is_published(self) -> bool:
        return self.status is InquiryStatus.PUBLISHED


# -- serialization (NDJSON corpus, HTTP bodies) ---------------------------------

def _dt_to_wire(dt: datetime | None) -> str | None:
    return None if dt is None else dt.isoformat()


def _dt_from_wire(value: str | None) -> datetime | None:
    return None if value is None else datetime.fromisoformat(value)


def slot_to_dict(slot: CaptureSlot) -> dict:
    return {
        "index": slot.index,
        "label": slot.label,
        "photo_ref": slot.photo_ref,
        "measurement": {
            "sensor_type": slot.measurement.sensor_type.wire_name,
            "timestamp_ms": slot.measurement.timestamp_ms,
            "values": list(slot.measurement.values),
        },
    }


def slot_from_dict(data: dict) -> CaptureSlot:
    m = data["measurement"]
    return CaptureSlot(
        index=data["index"],
        label=data.get("label", ""),
        photo_ref=data.get("photo_ref"),
        measurement=Measurement(
            SensorType.from_wire_name(m["sensor_type"]),
            m["timestamp_ms"],
            tuple(m["values"]),
        ),
    )


def inquiry_to_dict(inquiry: Inquiry) -> dict:
    lineage = None
    if inquiry.lineage is not None:
        lineage = {
            "kind": inquiry.lineage.kind.value,
            "source_inquiry_id": inquiry.lineage.source_inquiry_id,
            "source_class": inquiry.lineage.source_class.value,
        }
    override = None
    if inquiry.override is not None:
        override = {
            "category": inquiry.override.category,
            "reason": inquiry.override.reason,
            "set_by": inquiry.override.set_by,
        }
    return {
        "id": inquiry.id,
        "author_id": inquiry.author_id,
        "class_id": inquiry.class_id,
        "sensor_type": inquiry.sensor_type.wire_name,
        "title": inquiry.title,
        "description": inquiry.description,
        "notes": inquiry.notes,
        "slots": [slot_to_dict(s) for s in inquiry.slots],
        "status": inquiry.status.value,
        "lineage": lineage,
        "created_at": _dt_to_wire(inquiry.created_at),
        "published_at": _dt_to_wire(inquiry.published_at),
        "is_exemplar": inquiry.is_exemplar,
        "override": override,
    }


def inquiry_from_dict(data: dict) -> Inquiry:
    lineage = None
    if data.get("lineage"):
        raw = data["lineage"]
        lineage = LineageLink(
            LineageKind(raw["kind"]),
            raw["source_inquiry_id"],
            SourceClass(raw["source_class"]),
        )
    override = None
    if data.get("override"):
        raw = data["override"]
        override = ScoreOverride(raw["category"], raw["reason"], raw.get("set_by", ""))
    return Inquiry(
        id=data["id"],
        author_id=data["author_id"],
        class_id=data.get("class_id"),
        sensor_type=SensorType.from_wire_name(data["sensor_type"]),
        title=data.get("title", ""),
        description=data.get("description", ""),
        notes=data.get("notes", ""),
        slots=tuple(slot_from_dict(s) for s in data.get("slots", [])),
        status=InquiryStatus(data.get("status", "draft")),
        lineage=lineage,
        created_at=_dt_from_wire(data.get("created_at")),
        published_at=_dt_from_wire(data.get("published_at")),
        is_exemplar=bool(data.get("is_exemplar", False)),
        override=override,
    )
