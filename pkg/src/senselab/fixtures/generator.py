"""Deterministic generator for the bundled evaluation corpus.

The corpus reproduces the platform's reported aggregates exactly: 1336
inquiries from 409 active users, 988 published and 348 drafts, 74
replications and 7 remixes split 49/24/8 by source, heart rate 336 and
ambient temperature 275 by sensor, 13 Informed inquiries with Naive modal,
and a deep activity trough across the spring school-closure window.  Counts
that the study never reported (remaining sensor shares, Null/Emerging sizes,
weekly heights) are synthetic choices recorded in the manifest.

Texts are composed against the rubric and machine-verified, so the engine
agrees with every authored label by construction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone

from senselab.analytics import EventKind, EventRecord, compute_report
from senselab.core import (
    CaptureSlot,
    ClassGroup,
    Inquiry,
    InquiryStatus,
    LineageKind,
    LineageLink,
    Role,
    SourceClass,
    UserAccount,
    generate_join_code,
    require_publishable,
)
from senselab.protocol import Measurement, SensorType
from senselab.scoring import ScoreCategory, score_inquiry

from .texts import COMMENT_BODIES, COMPOSERS, TOPICS

DEFAULT_SEED = 20210601

START_DATE = datetime(2021, 6, 1, tzinfo=timezone.utc)
LAST_DAY = 185  # 2021-12-03
LOCKDOWN_START = datetime(2021, 8, 18, tzinfo=timezone.utc)
LOCKDOWN_END = datetime(2021, 11, 10, tzinfo=timezone.utc)

N_CLASSES = 18
N_STUDENTS = 420
N_AUTHORS = 409
FOCUS_CLASSES = 4  # classes that drive most replication/remix activity

TOTAL_INQUIRIES = 1336
PUBLISHED_COUNT = 988
COMMENT_COUNT = 240

SENSOR_TARGETS: dict[SensorType, int] = {
    SensorType.HEART_RATE: 336,      # reported: most used
    SensorType.TEMP_HUMIDITY: 275,   # reported: ambient temperature second
    SensorType.LIGHT_UV: 210,        # synthetic
    SensorType.CONDUCTANCE: 195,     # synthetic
    SensorType.BODY_TEMP: 185,       # synthetic
    SensorType.VOC: 135,             # synthetic, least used
}

# Sensors of the 81 derived inquiries (they inherit their source's sensor).
LINEAGE_SENSORS: dict[SensorType, int] = {
    SensorType.HEART_RATE: 30,
    SensorType.TEMP_HUMIDITY: 15,
    SensorType.LIGHT_UV: 12,
    SensorType.CONDUCTANCE: 10,
    SensorType.BODY_TEMP: 8,
    SensorType.VOC: 6,
}

SCORE_TARGETS: dict[str, int] = {
    "null": 400,       # synthetic
    "naive": 650,      # modal, per the score distribution figure
    "emerging": 273,   # synthetic
    "informed": 13,    # reported
}

# (kind, source bucket, count); buckets total 49 / 24 / 8 across both kinds.
LINEAGE_BUCKETS: list[tuple[LineageKind, SourceClass, int]] = [
    (LineageKind.REPLICATION, SourceClass.OTHER_STUDENT, 45),
    (LineageKind.REPLICATION, SourceClass.EXEMPLAR, 22),
    (LineageKind.REPLICATION, SourceClass.OWN, 7),
    (LineageKind.REMIX, SourceClass.OTHER_STUDENT, 4),
    (LineageKind.REMIX, SourceClass.EXEMPLAR, 2),
    (LineageKind.REMIX, SourceClass.OWN, 1),
]
FOCUS_LINEAGE_COUNT = 71  # "recorded from just four classes": 71/81 = 87.65%

# New inquiries per 7-day bucket from 2021-06-01; the deep middle run is the
# school-closure trough visible in the activity series.
WEEK_WEIGHTS = [
    55, 75, 90, 100, 105, 110, 105, 100, 95, 90, 80,   # June .. mid August
    6, 4, 3, 2, 2, 2, 2, 2, 2, 3, 4, 5, 8,             # closure trough
    95, 105, 86,                                        # mid November .. Dec 3
]

MEASUREMENT_RANGES: dict[SensorType, list[tuple[float, float]]] = {
    SensorType.HEART_RATE: [(55.0, 130.0)],
    SensorType.TEMP_HUMIDITY: [(15.0, 30.0), (30.0, 70.0)],
    SensorType.LIGHT_UV: [(80.0, 2000.0), (0.0, 8.0)],
    SensorType.CONDUCTANCE: [(5.0, 1500.0)],
    SensorType.BODY_TEMP: [(1400.0, 2100.0)],
    SensorType.VOC: [(50.0, 900.0)],
}


@dataclass
class Corpus:
    users: list[UserAccount]
    classes: list[ClassGroup]
    inquiries: list[Inquiry]  # student output, time-ordered
    exemplars: list[Inquiry]
    events: list[EventRecord]
    authored_scores: dict[str, str]  # inquiry id -> authored category
    manifest: dict


@dataclass
class _Shell:
    """One inquiry being assembled."""

    created_at: datetime
    lineage_kind: LineageKind | None = None
    lineage_bucket: SourceClass | None = None
    sensor: SensorType | None = None
    author: str | None = None
    category: str | None = None
    status: str | None = None
    source_id: str | None = None
    id: str | None = None
    focus_author: bool = False


def _weekday_times(rng: random.Random) -> list[datetime]:
    """Creation instants for all inquiries, weekday school hours, sorted."""
    times = []
    for week, count in enumerate(WEEK_WEIGHTS):
        day_options = [
            d for d in range(week * 7, min(week * 7 + 7, LAST_DAY + 1))
            if (START_DATE + timedelta(days=d)).weekday() < 5
        ]
        for _ in range(count):
            day = rng.choice(day_options)
            times.append(
                START_DATE + timedelta(
                    days=day, hours=rng.randrange(9, 15),
                    minutes=rng.randrange(60), seconds=rng.randrange(60),
                )
            )
    times.sort()
    return times


def _expand(counts: dict, rng: random.Random) -> list:
    items = [key for key, n in counts.items() for _ in range(n)]
    rng.shuffle(items)
    return items


def _slot_values(sensor: SensorType, rng: random.Random) -> tuple[float, ...]:
    return tuple(
        round(rng.uniform(lo, hi), 2) for lo, hi in MEASUREMENT_RANGES[sensor]
    )


def generate_corpus(seed: int = DEFAULT_SEED) -> Corpus:
    rng = random.Random(seed)

    # -- people and classes -------------------------------------------------
    teachers = [
        UserAccount(f"t{i + 1:02d}", f"teacher{i + 1:02d}", Role.TEACHER,
                    frozenset({f"c{i + 1:02d}"}))
        for i in range(N_CLASSES)
    ]
    researcher = UserAccount("r01", "exemplar-team", Role.RESEARCHER)
    students = [
        UserAccount(
            f"s{i + 1:04d}", f"student{i + 1:04d}", Role.STUDENT,
            frozenset({f"c{(i % N_CLASSES) + 1:02d}"}),
        )
        for i in range(N_STUDENTS)
    ]
    classes = [
        ClassGroup(f"c{i + 1:02d}", f"Class {i + 1:02d}", generate_join_code(rng),
                   teachers[i].id, START_DATE - timedelta(days=14))
        for i in range(N_CLASSES)
    ]
    authors = students[:N_AUTHORS]
    class_of = {u.id: next(iter(u.class_ids)) for u in students}
    focus_ids = {f"c{i + 1:02d}" for i in range(FOCUS_CLASSES)}
    focus_authors = [a for a in authors if class_of[a.id] in focus_ids]
    other_authors = [a for a in authors if class_of[a.id] not in focus_ids]

    # -- one exemplar per sensor, researcher-authored library content -------
    exemplars = []
    for n, sensor in enumerate(SensorType):
        body = COMPOSERS["informed"](sensor, rng)
        when = START_DATE - timedelta(days=8) + timedelta(hours=n)
        exemplars.append(
            Inquiry(
                id=f"x{n + 1:02d}",
                author_id=researcher.id,
                class_id=None,
                sensor_type=sensor,
                title=body["title"],
                description=body["description"],
                notes=body["notes"],
                slots=_make_slots(sensor, body["labels"], rng),
                status=InquiryStatus.PUBLISHED,
                created_at=when,
                published_at=when,
                is_exemplar=True,
            )
        )
    exemplar_by_sensor = {e.sensor_type: e for e in exemplars}

    # -- shells: one per inquiry, time-ordered --------------------------------
    shells = [_Shell(created_at=t) for t in _weekday_times(rng)]
    assert len(shells) == TOTAL_INQUIRIES

    # Which creations are derived (replication/remix): only after sources
    # have had a month to accumulate.
    eligible = [
        i for i, shell in enumerate(shells)
        if shell.created_at >= START_DATE + timedelta(days=30)
    ]
    lineage_indices = sorted(rng.sample(eligible, k=sum(
        n for _, _, n in LINEAGE_BUCKETS
    )))
    lineage_set = set(lineage_indices)

    buckets = [
        (kind, bucket)
        for kind, bucket, n in LINEAGE_BUCKETS
        for _ in range(n)
    ]
    rng.shuffle(buckets)
    focus_flags = [True] * FOCUS_LINEAGE_COUNT + \
        [False] * (len(buckets) - FOCUS_LINEAGE_COUNT)
    rng.shuffle(focus_flags)
    for index, (kind, bucket), focus in zip(lineage_indices, buckets, focus_flags):
        shells[index].lineage_kind = kind
        shells[index].lineage_bucket = bucket
        shells[index].focus_author = focus or bucket is SourceClass.OWN

    # -- sensors ----------------------------------------------------------------
    lineage_sensor_pool = _expand(LINEAGE_SENSORS, rng)
    regular_sensor_pool = _expand(
        {s: SENSOR_TARGETS[s] - LINEAGE_SENSORS[s] for s in SensorType}, rng
    )
    for i, shell in enumerate(shells):
        shell.sensor = (
            lineage_sensor_pool.pop() if i in lineage_set
            else regular_sensor_pool.pop()
        )

    # -- authors: every author gets at least one plain inquiry -------------------
    regular_indices = [i for i in range(TOTAL_INQUIRIES) if i not in lineage_set]
    author_pool = [a.id for a in authors]
    author_pool += [
        rng.choice(authors).id for _ in range(len(regular_indices) - len(authors))
    ]
    rng.shuffle(author_pool)
    for i, author_id in zip(regular_indices, author_pool):
        shells[i].author = author_id

    # -- categories ----------------------------------------------------------------
    c01_students = {a.id for a in authors if class_of[a.id] == "c01"}
    c01_regular = [i for i in regular_indices if shells[i].author in c01_students]
    non_c01_regular = [i for i in regular_indices if shells[i].author not in c01_students]
    informed_indices = set(
        rng.sample(c01_regular, 6) + rng.sample(non_c01_regular, 7)
    )
    water_candidates = [
        i for i in regular_indices
        if i not in informed_indices and shells[i].sensor is SensorType.TEMP_HUMIDITY
    ]
    water_index = rng.choice(water_candidates)
    for i in informed_indices:
        shells[i].category = "informed"
    shells[water_index].category = "naive"
    remaining = [i for i in range(TOTAL_INQUIRIES)
                 if shells[i].category is None]
    category_pool = _expand(
        {"null": SCORE_TARGETS["null"],
         "naive": SCORE_TARGETS["naive"] - 1,
         "emerging": SCORE_TARGETS["emerging"]},
        rng,
    )
    assert len(category_pool) == len(remaining)
    for i, category in zip(remaining, category_pool):
        shells[i].category = category

    # -- statuses, with showcase inquiries forced to published ----------------------
    # The discover feed lists published inquiries only, and filtering it by
    # heart rate must surface all 336 of them; heart-rate drafts are
    # therefore zero by construction, with the 348 drafts spread across the
    # other five sensor families.
    hr_indices = [i for i, s in enumerate(shells)
                  if s.sensor is SensorType.HEART_RATE]
    other_indices = [i for i, s in enumerate(shells)
                     if s.sensor is not SensorType.HEART_RATE]
    for i in hr_indices:
        shells[i].status = "published"
    status_pool = _expand(
        {"published": PUBLISHED_COUNT - len(hr_indices),
         "draft": TOTAL_INQUIRIES - PUBLISHED_COUNT}, rng,
    )
    for i, status in zip(other_indices, status_pool):
        shells[i].status = status
    must_publish = sorted(informed_indices) + [water_index]
    swappable = [
        i for i in other_indices
        if shells[i].status == "published" and i not in informed_indices
        and i != water_index
    ]
    for i in must_publish:
        if shells[i].status == "draft":
            j = swappable.pop()
            shells[i].status, shells[j].status = "published", "draft"

    # -- ids (chronological) ----------------------------------------------------------
    for n, shell in enumerate(shells):
        shell.id = f"q{n + 1:04d}"

    # -- lineage sources ------------------------------------------------------------------
    margin = timedelta(hours=1)
    for index in lineage_indices:
        shell = shells[index]
        bucket = shell.lineage_bucket
        if bucket is SourceClass.EXEMPLAR:
            shell.source_id = exemplar_by_sensor[shell.sensor].id
            pool = focus_authors if shell.focus_author else other_authors
            shell.author = rng.choice(pool).id
            continue
        candidates = [
            s for i, s in enumerate(shells)
            if i not in lineage_set
            and s.status == "published"
            and s.sensor is shell.sensor
            and s.created_at + margin < shell.created_at
        ]
        if bucket is SourceClass.OWN:
            focus_pool = [s for s in candidates if class_of[s.author] in focus_ids]
            chosen = rng.choice(focus_pool or candidates)
            shell.source_id = chosen.id
            shell.author = chosen.author
        else:  # OTHER_STUDENT
            chosen = rng.choice(candidates)
            shell.source_id = chosen.id
            pool = focus_authors if shell.focus_author else other_authors
            author = rng.choice(pool).id
            while author == chosen.author:
                author = rng.choice(pool).id
            shell.author = author

    # -- texts, slots, events -----------------------------------------------------------------
    shells_by_id = {s.id: s for s in shells}
    inquiries: list[Inquiry] = []
    events: list[EventRecord] = []
    authored: dict[str, str] = {}

    for i, shell in enumerate(shells):
        sensor = shell.sensor
        body = COMPOSERS[shell.category](sensor, rng)
        if i == water_index:
            body = {
                "title": "Water molecules", "description": "", "notes": "",
                "labels": ["glass water", "outside", "breath"],
            }
        labels = list(body["labels"])
        if shell.status == "draft" and shell.category == "null" and rng.random() < 0.4:
            labels = []  # abandoned empty draft
        title = body["title"]
        if shell.lineage_kind is not None:
            source_shell = shells_by_id.get(shell.source_id)
            source_title = (
                source_shell and _title_of(source_shell, inquiries)
            ) or exemplar_by_sensor[sensor].title
            title = (
                source_title + " (remix)"
                if shell.lineage_kind is LineageKind.REMIX else source_title
            )
        lineage = None
        if shell.lineage_kind is not None:
            lineage = LineageLink(shell.lineage_kind, shell.source_id,
                                  shell.lineage_bucket)

        slots = _make_slots(sensor, labels, rng)
        capture_times = []
        t = shell.created_at
        for _ in slots:
            t = t + timedelta(minutes=rng.randrange(1, 5), seconds=rng.randrange(60))
            capture_times.append(t)
        published_at = None
        if shell.status == "published":
            published_at = t + timedelta(
                minutes=rng.randrange(2, 10), seconds=rng.randrange(60)
            )

        inquiry = Inquiry(
            id=shell.id,
            author_id=shell.author,
            class_id=class_of[shell.author],
            sensor_type=sensor,
            title=title,
            description=body["description"],
            notes=body["notes"],
            slots=slots,
            status=InquiryStatus(shell.status),
            lineage=lineage,
            created_at=shell.created_at,
            published_at=published_at,
        )
        inquiries.append(inquiry)
        authored[inquiry.id] = shell.category

        creation_kind = {
            None: EventKind.INQUIRY_CREATED,
            LineageKind.REPLICATION: EventKind.REPLICATION,
            LineageKind.REMIX: EventKind.REMIX,
        }[shell.lineage_kind]
        events.append(EventRecord(shell.created_at, shell.author, creation_kind,
                                  inquiry.id, sensor))
        for when in capture_times:
            events.append(EventRecord(when, shell.author, EventKind.DATA_CAPTURED,
                                      inquiry.id, sensor))
        if published_at is not None:
            events.append(EventRecord(published_at, shell.author,
                                      EventKind.PUBLISHED, inquiry.id, sensor))

    # -- comments (classmates, including never-authoring lurkers) --------------------------
    published_inquiries = [i for i in inquiries if i.is_published]
    students_by_class: dict[str, list[UserAccount]] = {}
    for student in students:
        students_by_class.setdefault(class_of[student.id], []).append(student)
    last_moment = START_DATE + timedelta(days=LAST_DAY, hours=23)
    for _ in range(COMMENT_COUNT):
        target = rng.choice(published_inquiries)
        commenter = rng.choice(students_by_class[target.class_id]).id
        if commenter == target.author_id and rng.random() < 0.8:
            commenter = rng.choice(students).id
        when = min(
            target.published_at + timedelta(minutes=rng.randrange(10, 600)),
            last_moment,
        )
        events.append(EventRecord(when, commenter, EventKind.COMMENT,
                                  target.id, target.sensor_type))

    # -- login sessions, proportional to weekly activity --------------------------------------
    for week, weight in enumerate(WEEK_WEIGHTS):
        day_options = [
            d for d in range(week * 7, min(week * 7 + 7, LAST_DAY + 1))
            if (START_DATE + timedelta(days=d)).weekday() < 5
        ]
        for _ in range(max(1, round(weight * 1.1))):
            actor = rng.choice(students).id
            when = START_DATE + timedelta(
                days=rng.choice(day_options), hours=rng.randrange(8, 15),
                minutes=rng.randrange(60), seconds=rng.randrange(60),
            )
            events.append(EventRecord(when, actor, EventKind.SESSION_START, actor))

    events.sort(key=lambda e: e.timestamp)

    manifest = _build_manifest(seed, classes, teachers, students)
    corpus = Corpus(
        users=[researcher] + teachers + students,
        classes=classes,
        inquiries=inquiries,
        exemplars=exemplars,
        events=events,
        authored_scores=authored,
        manifest=manifest,
    )
    _verify(corpus)
    return corpus


def _title_of(shell: _Shell, built: list[Inquiry]) -> str | None:
    index = int(shell.id[1:]) - 1
    return built[index].title if index < len(built) else None


def _make_slots(sensor: SensorType, labels: list[str],
                rng: random.Random) -> tuple[CaptureSlot, ...]:
    slots = []
    for index, label in enumerate(labels[:3]):
        slots.append(
            CaptureSlot(
                index=index,
                label=label,
                measurement=Measurement(
                    sensor, index * rng.randrange(20, 90) * 1000,
                    _slot_values(sensor, rng),
                ),
            )
        )
    return tuple(slots)


def _build_manifest(seed, classes, teachers, students) -> dict:
    return {
        "seed": seed,
        "window": {"start": "2021-06-01", "end": "2021-12-03"},
        "low_activity_window": {
            "start": LOCKDOWN_START.date().isoformat(),
            "end": LOCKDOWN_END.date().isoformat(),
            "cause": "nationwide school closure",
        },
        "organization": {
            "classes": len(classes),
            "students": len(students),
            "active_authors": N_AUTHORS,
            "lurkers": len(students) - N_AUTHORS,
            "lineage_focus_classes": sorted(
                f"c{i + 1:02d}" for i in range(FOCUS_CLASSES)
            ),
        },
        "class_kit": {
            "units_per_sensor_type": 20,
            "sensor_types": [s.wire_name for s in SensorType],
        },
        "targets": {
            "total_inquiries": TOTAL_INQUIRIES,
            "active_users": N_AUTHORS,
            "published": PUBLISHED_COUNT,
            "drafts": TOTAL_INQUIRIES - PUBLISHED_COUNT,
            "replications": 74,
            "remixes": 7,
            "lineage_sources": {"other_student": 49, "exemplar": 24, "own": 8},
            "sensor_usage": {s.wire_name: n for s, n in SENSOR_TARGETS.items()},
            "score_distribution": dict(SCORE_TARGETS),
        },
        "synthetic_choices": [
            "sensor counts for light_uv, conductance, body_temp, voc (voc least used)",
            "null and emerging score counts",
            "weekly activity heights (trough location mirrors the closure window)",
            "class and student organization, comment and session volumes",
        ],
        "files": {
            "events": "events.ndjson",
            "inquiries": "inquiries.ndjson",
            "users": "users.ndjson",
            "classes": "classes.ndjson",
        },
        "demo_password": "senselab",
    }


def _verify(corpus: Corpus) -> None:
    """Generation-time gate: authored labels and every headline aggregate."""
    for inquiry in corpus.inquiries:
        expected = corpus.authored_scores[inquiry.id]
        got = score_inquiry(inquiry).category.wire_name
        if got != expected:
            raise AssertionError(
                f"{inquiry.id} authored {expected} but engine says {got}: "
                f"{inquiry.title!r} / {inquiry.description!r} / {inquiry.notes!r}"
            )
        if inquiry.is_published:
            require_publishable(inquiry)

    report = compute_report(corpus.events, corpus.inquiries + corpus.exemplars)
    checks = {
        "total": (report.total_inquiries, TOTAL_INQUIRIES),
        "active": (report.active_users, N_AUTHORS),
        "published": (report.published, PUBLISHED_COUNT),
        "drafts": (report.drafts, TOTAL_INQUIRIES - PUBLISHED_COUNT),
        "replications": (report.replications, 74),
        "remixes": (report.remixes, 7),
        "informed": (report.score_distribution[ScoreCategory.INFORMED], 13),
    }
    for name, (got, expected) in checks.items():
        if got != expected:
            raise AssertionError(f"{name}: got {got}, expected {expected}")
    for sensor, target in SENSOR_TARGETS.items():
        if report.sensor_usage[sensor] != target:
            raise AssertionError(
                f"sensor {sensor.wire_name}: {report.sensor_usage[sensor]} != {target}"
            )
    published_hr = sum(
        1 for i in corpus.inquiries
        if i.sensor_type is SensorType.HEART_RATE and i.is_published
    )
    if published_hr != SENSOR_TARGETS[SensorType.HEART_RATE]:
        raise AssertionError(
            f"discover(heart_rate) would show {published_hr}, expected all "
            f"{SENSOR_TARGETS[SensorType.HEART_RATE]}"
        )
    breakdown = report.lineage_breakdown
    expected_pct = {
        SourceClass.OTHER_STUDENT: (49, 60.49),
        SourceClass.EXEMPLAR: (24, 29.63),
        SourceClass.OWN: (8, 9.88),
    }
    for source, (count, pct) in expected_pct.items():
        if (breakdown[source].count, breakdown[source].percentage) != (count, pct):
            raise AssertionError(f"lineage {source.value}: {breakdown[source]}")
    naive = report.score_distribution[ScoreCategory.NAIVE]
    others = [n for cat, n in report.score_distribution.items()
              if cat is not ScoreCategory.NAIVE]
    if not all(naive > n for n in others):
        raise AssertionError("naive is not the strict mode")
    if sum(report.score_distribution.values()) != TOTAL_INQUIRIES:
        raise AssertionError("score distribution does not cover every inquiry")
