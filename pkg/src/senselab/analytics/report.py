"""Engagement aggregates over the event log and inquiry corpus.

The report is a pure fold: the same log and inquiries always produce the
same numbers.  Counts that a replayed log must reconstruct (totals, statuses,
sensors, weekly series) come from events; lineage buckets and rubric
categories come from the inquiry records themselves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timedelta
from typing import Iterable, Sequence

from senselab.core import Inquiry, SourceClass
from senselab.protocol import SensorType
from senselab.scoring import CueConfig, DEFAULT_CUES, ScoreCategory, score_inquiry

from .events import CREATION_KINDS, EventKind, EventRecord


class IngestError(ValueError):
    """The event stream violates its ordering contract."""


class IntegrityError(ValueError):
    """Events and inquiry records disagree or a lineage link dangles."""


@dataclass(frozen=True)
class LineageSlice:
    count: int
    percentage: float  # of replications + remixes combined, 2 decimals


@dataclass(frozen=True)
class WeekBucket:
    start: datetime
    events: int


@dataclass(frozen=True)
class EngagementReport:
    total_inquiries: int
    active_users: int
    published: int
    drafts: int
    replications: int
    remixes: int
    lineage_breakdown: dict[SourceClass, LineageSlice]
    sensor_usage: dict[SensorType, int]
    score_distribution: dict[ScoreCategory, int]
    weekly_activity: tuple[WeekBucket, ...]

    def to_dict(self) -> dict:
        return {
            "total_inquiries": self.total_inquiries,
            "active_users": self.active_users,
            "published": self.published,
            "drafts": self.drafts,
            "replications": self.replications,
            "remixes": self.remixes,
            "lineage_breakdown": {
                sc.value: {"count": s.count, "percentage": s.percentage}
                for sc, s in self.lineage_breakdown.items()
            },
            "sensor_usage": {
                st.wire_name: n for st, n in self.sensor_usage.items()
            },
            "score_distribution": {
                cat.wire_name: n for cat, n in self.score_distribution.items()
            },
            "weekly_activity": [
                {"week_start": b.start.isoformat(), "events": b.events}
                for b in self.weekly_activity
            ],
        }


def lineage_breakdown(inquiries: Iterable[Inquiry]) -> dict[SourceClass, LineageSlice]:
    """Counts and percentages by source class over replications + remixes.

    The percentage denominator is the combined lineage count, so the three
    slices always total 100.00 (absent rounding stalemates).
    """
    counts: dict[SourceClass, int] = {}
    for inquiry in inquiries:
        if inquiry.lineage is None:
            continue
        counts[inquiry.lineage.source_class] = (
            counts.get(inquiry.lineage.source_class, 0) + 1
        )
    total = sum(counts.values())
    if total == 0:
        return {}
    return {
        source: LineageSlice(n, round(n / total * 100, 2))
        for source, n in sorted(counts.items(), key=lambda kv: -kv[1])
    }


def score_distribution(
    inquiries: Iterable[Inquiry], cues: CueConfig = DEFAULT_CUES
) -> dict[ScoreCategory, int]:
    """Inquiries per rubric category (manual overrides win), all four keys."""
    counts = {category: 0 for category in ScoreCategory}
    for inquiry in inquiries:
        counts[score_inquiry(inquiry, cues).category] += 1
    return counts


def weekly_activity(
    events: Sequence[EventRecord], bucket_days: int = 7
) -> tuple[WeekBucket, ...]:
    """Event counts per bucket, first bucket anchored on the first event's date."""
    if not events:
        return ()
    first = min(e.timestamp for e in events)
    start = first.replace(hour=0, minute=0, second=0, microsecond=0)
    width = timedelta(days=bucket_days)
    last = max(e.timestamp for e in events)
    n_buckets = int((last - start) / width) + 1
    counts = [0] * n_buckets
    for event in events:
        counts[int((event.timestamp - start) / width)] += 1
    return tuple(
        WeekBucket(start + i * width, counts[i]) for i in range(n_buckets)
    )


def _check_ordering(events: Sequence[EventRecord]) -> None:
    previous: datetime | None = None
    for index, event in enumerate(events):
        if previous is not None and event.timestamp < previous:
            raise IngestError(
                f"out-of-order timestamp at record {index}: "
                f"{event.timestamp.isoformat()} after {previous.isoformat()} "
                f"(kind={event.kind.value}, subject={event.subject_id})"
            )
        previous = event.timestamp


def compute_report(
    events: Iterable[EventRecord],
    inquiries: Iterable[Inquiry] = (),
    *,
    cues: CueConfig = DEFAULT_CUES,
    known_ids: set[str] | None = None,
) -> EngagementReport:
    """Fold the event stream (and inquiry snapshot) into the report.

    Exemplar inquiries are library content, not student output: they carry
    no events and are excluded from distribution counts.  An active user is
    a distinct author of at least one plain inquiry_created event.

    ``known_ids`` lists extra valid lineage targets, for scoped reports
    whose snapshot omits the rest of the platform (class reports: a source
    may live in another class).
    """
    event_list = list(events)
    _check_ordering(event_list)
    all_inquiries = list(inquiries)
    inquiry_list = [i for i in all_inquiries if not i.is_exemplar]

    total = sum(1 for e in event_list if e.kind in CREATION_KINDS)
    published = sum(1 for e in event_list if e.kind is EventKind.PUBLISHED)
    replications = sum(1 for e in event_list if e.kind is EventKind.REPLICATION)
    remixes = sum(1 for e in event_list if e.kind is EventKind.REMIX)
    authors = {e.actor_id for e in event_list if e.kind is EventKind.INQUIRY_CREATED}

    sensor_usage = {sensor: 0 for sensor in SensorType}
    for event in event_list:
        if event.kind in CREATION_KINDS and event.sensor_type is not None:
            sensor_usage[event.sensor_type] += 1

    if inquiry_list:
        if len(inquiry_list) != total:
            raise IntegrityError(
                f"event log shows {total} inquiries, snapshot has {len(inquiry_list)}"
            )
        known = {i.id for i in all_inquiries}  # exemplars are valid sources
        known |= known_ids or set()
        for inquiry in inquiry_list:
            link = inquiry.lineage
            if link is not None and link.source_inquiry_id not in known:
                raise IntegrityError(
                    f"inquiry {inquiry.id} has dangling lineage source "
                    f"{link.source_inquiry_id}"
                )

    return EngagementReport(
        total_inquiries=total,
        active_users=len(authors),
        published=published,
        drafts=total - published,
        replications=replications,
        remixes=remixes,
        lineage_breakdown=lineage_breakdown(inquiry_list),
        sensor_usage=sensor_usage,
        score_distribution=(
            score_distribution(inquiry_list, cues) if inquiry_list
            else {category: 0 for category in ScoreCategory}
        ),
        weekly_activity=weekly_activity(event_list),
    )


def format_report_table(report: EngagementReport) -> str:
    """Plain-text rendering of the report."""
    lines = [
        "Engagement report",
        "=" * 17,
        f"Total inquiries   {report.total_inquiries}",
        f"Active users      {report.active_users}",
        f"Published         {report.published}",
        f"Drafts            {report.drafts}",
        f"Replications      {report.replications}",
        f"Remixes           {report.remixes}",
        "",
        "Lineage sources (of replications + remixes)",
    ]
    if report.lineage_breakdown:
        for source, piece in report.lineage_breakdown.items():
            label = source.value.replace("_", " ")
            lines.append(f"  {label:<14} {piece.count:>5}  {piece.percentage:6.2f}%")
    else:
        lines.append("  (none)")
    lines += ["", "Sensor usage"]
    for sensor, n in sorted(report.sensor_usage.items(), key=lambda kv: -kv[1]):
        lines.append(f"  {sensor.wire_name:<14} {n:>5}")
    lines += ["", "Score distribution"]
    for category in ScoreCategory:
        lines.append(
            f"  {category.display:<14} {report.score_distribution[category]:>5}"
        )
    lines += ["", "Weekly activity (events per 7-day bucket)"]
    for bucket in report.weekly_activity:
        lines.append(f"  {bucket.start.date().isoformat()}  {bucket.events:>5}")
    return "\n".join(lines) + "\n"
