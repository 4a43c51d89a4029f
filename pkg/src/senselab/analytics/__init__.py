"""Event log and engagement report computation."""

from .events import (
    CREATION_KINDS,
    EventKind,
    EventRecord,
    LogFormatError,
    read_event_log,
    utc_now,
    write_event_log,
)
from .report import (
    EngagementReport,
    IngestError,
    IntegrityError,
    LineageSlice,
    WeekBucket,
    compute_report,
    format_report_table,
    lineage_breakdown,
    score_distribution,
    weekly_activity,
)

__all__ = [
    "CREATION_KINDS",
    "EngagementReport",
    "EventKind",
    "EventRecord",
    "IngestError",
    "IntegrityError",
    "LineageSlice",
    "LogFormatError",
    "WeekBucket",
    "compute_report",
    "format_report_table",
    "lineage_breakdown",
    "read_event_log",
    "score_distribution",
    "utc_now",
    "weekly_activity",
    "write_event_log",
]
