"""Analytics fold: counts, lineage percentages, buckets, ordering errors."""

from __future__ import annotations

import io
from datetime import datetime, timedelta, timezone

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from senselab.analytics import (
    EventKind,
    EventRecord,
    IngestError,
    IntegrityError,
    LogFormatError,
    compute_report,
    format_report_table,
    lineage_breakdown,
    read_event_log,
    weekly_activity,
    write_event_log,
)
from senselab.core import Inquiry, InquiryStatus, LineageKind, LineageLink, SourceClass
from senselab.protocol import SensorType

T0 = datetime(2021, 6, 1, 9, 0, tzinfo=timezone.utc)


def ev(minutes: int, kind: EventKind, actor="u1", subject="q1",
       sensor: SensorType | None = None) -> EventRecord:
    return EventRecord(T0 + timedelta(minutes=minutes), actor, kind, subject, sensor)


def make_inquiry(id: str, *, author="u1", lineage=None, status="published",
                 is_exemplar=False, title="t", sensor=SensorType.HEART_RATE) -> Inquiry:
    return Inquiry(
        id=id,
        author_id=author,
        class_id=None if is_exemplar else "c1",
        sensor_type=sensor,
        title=title,
        status=InquiryStatus(status),
        created_at=T0,
        published_at=T0 if status == "published" else None,
        lineage=lineage,
        is_exemplar=is_exemplar,
    )


# -- event log round trip -----------------------------------------------------------

def test_event_log_round_trip():
    events = [
        ev(0, EventKind.SESSION_START),
        ev(1, EventKind.INQUIRY_CREATED, sensor=SensorType.VOC),
        ev(2, EventKind.PUBLISHED),
    ]
    buf = io.StringIO()
    assert write_event_log(buf, events) == 3
    buf.seek(0)
    assert list(read_event_log(buf)) == events


def test_malformed_line_names_line_number():
    buf = io.StringIO('{"timestamp":"2021-06-01T09:00:00+00:00","actor_id":"u1",'
                      '"kind":"published","subject_id":"q1","sensor_type":null}\n'
                      "not json\n")
    with pytest.raises(LogFormatError) as excinfo:
        list(read_event_log(buf))
    assert excinfo.value.line_number == 2


# -- compute_report -------------------------------------------------------------------

def test_empty_log_gives_zero_report():
    report = compute_report([], [])
    assert report.total_inquiries == 0
    assert report.active_users == 0
    assert report.published == 0
    assert report.drafts == 0
    assert report.lineage_breakdown == {}
    assert sum(report.sensor_usage.values()) == 0
    assert report.weekly_activity == ()


def test_basic_counts():
    events = [
        ev(0, EventKind.INQUIRY_CREATED, "u1", "q1", SensorType.HEART_RATE),
        ev(1, EventKind.DATA_CAPTURED, "u1", "q1", SensorType.HEART_RATE),
        ev(2, EventKind.PUBLISHED, "u1", "q1", SensorType.HEART_RATE),
        ev(3, EventKind.INQUIRY_CREATED, "u2", "q2", SensorType.VOC),
        ev(4, EventKind.REPLICATION, "u2", "q3", SensorType.HEART_RATE),
        ev(5, EventKind.COMMENT, "u3", "q1"),
    ]
    inquiries = [
        make_inquiry("q1", author="u1"),
        make_inquiry("q2", author="u2", status="draft", sensor=SensorType.VOC),
        make_inquiry(
            "q3", author="u2", status="draft",
            lineage=LineageLink(LineageKind.REPLICATION, "q1", SourceClass.OTHER_STUDENT),
        ),
    ]
    report = compute_report(events, inquiries)
    assert report.total_inquiries == 3  # creations + replications + remixes
    assert report.active_users == 2  # u3 only commented
    assert report.published == 1
    assert report.drafts == 2
    assert report.replications == 1
    assert report.remixes == 0
    assert report.sensor_usage[SensorType.HEART_RATE] == 2
    assert report.sensor_usage[SensorType.VOC] == 1
    assert report.published + report.drafts == report.total_inquiries


def test_out_of_order_timestamps_rejected():
    events = [ev(5, EventKind.SESSION_START), ev(1, EventKind.SESSION_START)]
    with pytest.raises(IngestError) as excinfo:
        compute_report(events, [])
    assert "record 1" in str(excinfo.value)


def test_snapshot_count_mismatch_is_integrity_error():
    events = [ev(0, EventKind.INQUIRY_CREATED, "u1", "q1", SensorType.VOC)]
    with pytest.raises(IntegrityError):
        compute_report(events, [make_inquiry("q1"), make_inquiry("q2")])


def test_dangling_lineage_is_integrity_error():
    events = [
        ev(0, EventKind.REPLICATION, "u1", "q1", SensorType.HEART_RATE),
    ]
    broken = make_inquiry(
        "q1",
        lineage=LineageLink(LineageKind.REPLICATION, "missing", SourceClass.OWN),
    )
    with pytest.raises(IntegrityError):
        compute_report(events, [broken])


def test_exemplar_source_is_a_valid_lineage_target():
    events = [ev(0, EventKind.REPLICATION, "u1", "q1", SensorType.HEART_RATE)]
    exemplar = make_inquiry("x1", author="r1", is_exemplar=True)
    derived = make_inquiry(
        "q1", lineage=LineageLink(LineageKind.REPLICATION, "x1", SourceClass.EXEMPLAR)
    )
    report = compute_report(events, [derived, exemplar])
    assert report.total_inquiries == 1  # exemplar not counted
    assert report.lineage_breakdown[SourceClass.EXEMPLAR].count == 1


# -- lineage breakdown -------------------------------------------------------------

def test_lineage_percentages_use_combined_denominator():
    inquiries = []
    buckets = [
        (SourceClass.OTHER_STUDENT, 49),
        (SourceClass.EXEMPLAR, 24),
        (SourceClass.OWN, 8),
    ]
    n = 0
    for source_class, count in buckets:
        for _ in range(count):
            n += 1
            inquiries.append(
                make_inquiry(
                    f"q{n}",
                    lineage=LineageLink(LineageKind.REPLICATION, "src", source_class),
                )
            )
    breakdown = lineage_breakdown(inquiries)
    assert breakdown[SourceClass.OTHER_STUDENT].percentage == 60.49
    assert breakdown[SourceClass.EXEMPLAR].percentage == 29.63
    assert breakdown[SourceClass.OWN].percentage == 9.88
    total_pct = sum(s.percentage for s in breakdown.values())
    assert abs(total_pct - 100.0) <= 0.01


def test_single_lineage_is_100_percent():
    only = make_inquiry(
        "q1", lineage=LineageLink(LineageKind.REMIX, "src", SourceClass.OWN)
    )
    breakdown = lineage_breakdown([only])
    assert breakdown[SourceClass.OWN].count == 1
    assert breakdown[SourceClass.OWN].percentage == 100.0


def test_no_lineage_no_division():
    assert lineage_breakdown([make_inquiry("q1")]) == {}


# -- weekly activity ----------------------------------------------------------------

def test_single_event_single_bucket():
    series = weekly_activity([ev(0, EventKind.SESSION_START)])
    assert len(series) == 1
    assert series[0].events == 1


def test_buckets_partition_events():
    events = [
        ev(0, EventKind.SESSION_START),
        ev(60 * 24 * 3, EventKind.SESSION_START),   # day 3
        ev(60 * 24 * 8, EventKind.SESSION_START),   # day 8 -> second bucket
        ev(60 * 24 * 20, EventKind.SESSION_START),  # day 20 -> third bucket
    ]
    series = weekly_activity(events)
    assert [b.events for b in series] == [2, 1, 1]
    assert sum(b.events for b in series) == len(events)
    assert series[0].start.date().isoformat() == "2021-06-01"


@given(st.lists(st.integers(min_value=0, max_value=60 * 24 * 200), max_size=120))
@settings(max_examples=60)
def test_bucket_totals_always_sum_to_event_count(offsets):
    events = [ev(minutes, EventKind.SESSION_START) for minutes in sorted(offsets)]
    series = weekly_activity(events)
    assert sum(b.events for b in series) == len(events)


# -- determinism and rendering ---------------------------------------------------------

def test_report_is_a_pure_fold():
    events = [
        ev(0, EventKind.INQUIRY_CREATED, "u1", "q1", SensorType.CONDUCTANCE),
        ev(9, EventKind.PUBLISHED, "u1", "q1"),
    ]
    inquiries = [make_inquiry("q1", sensor=SensorType.CONDUCTANCE)]
    assert compute_report(events, inquiries) == compute_report(events, inquiries)


def test_table_contains_headline_numbers():
    events = [ev(0, EventKind.INQUIRY_CREATED, "u1", "q1", SensorType.HEART_RATE)]
    table = format_report_table(compute_report(events, [make_inquiry("q1", status="draft")]))
    assert "Total inquiries   1" in table
    assert "heart_rate" in table
