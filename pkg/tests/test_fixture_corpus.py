"""The bundled corpus: integrity, determinism, and headline aggregates."""

from __future__ import annotations

import hashlib
from datetime import timedelta
from pathlib import Path

import pytest

from senselab.analytics import compute_report
from senselab.core import SourceClass
from senselab.fixtures import (
    LOCKDOWN_END,
    LOCKDOWN_START,
    bundled_corpus_dir,
    generate_corpus,
    load_corpus_into_db,
    read_corpus,
    write_corpus,
)
from senselab.protocol import SensorType
from senselab.scoring import ScoreCategory, score_inquiry
from senselab.service.db import PlatformDB


@pytest.fixture(scope="module")
def corpus():
    return read_corpus()


@pytest.fixture(scope="module")
def report(corpus):
    return compute_report(corpus.events, corpus.inquiries)


def test_bundled_files_exist():
    root = bundled_corpus_dir()
    for name in ("events.ndjson", "inquiries.ndjson", "users.ndjson",
                 "classes.ndjson", "manifest.json"):
        assert (root / name).exists(), name


def test_headline_counts(report):
    assert report.total_inquiries == 1336
    assert report.active_users == 409
    assert report.published == 988
    assert report.drafts == 348
    assert report.replications == 74
    assert report.remixes == 7


def test_lineage_breakdown(report):
    breakdown = report.lineage_breakdown
    assert breakdown[SourceClass.OTHER_STUDENT].count == 49
    assert breakdown[SourceClass.EXEMPLAR].count == 24
    assert breakdown[SourceClass.OWN].count == 8
    assert breakdown[SourceClass.OTHER_STUDENT].percentage == 60.49
    assert breakdown[SourceClass.EXEMPLAR].percentage == 29.63
    assert breakdown[SourceClass.OWN].percentage == 9.88


def test_sensor_usage(report):
    usage = report.sensor_usage
    assert usage[SensorType.HEART_RATE] == 336
    assert usage[SensorType.TEMP_HUMIDITY] == 275
    assert usage[SensorType.VOC] == min(usage.values())  # least used
    assert sum(usage.values()) == report.total_inquiries


def test_score_distribution(report):
    dist = report.score_distribution
    assert dist[ScoreCategory.INFORMED] == 13
    naive = dist[ScoreCategory.NAIVE]
    assert all(naive > n for cat, n in dist.items() if cat is not ScoreCategory.NAIVE)
    assert sum(dist.values()) == report.total_inquiries


def test_engine_matches_every_authored_label(corpus):
    students = [i for i in corpus.inquiries if not i.is_exemplar]
    assert len(corpus.authored_scores) == len(students)
    for inquiry in students:
        expected = corpus.authored_scores[inquiry.id]
        assert score_inquiry(inquiry).category.wire_name == expected, inquiry.id


def test_water_molecules_inquiry_is_present(corpus):
    matches = [i for i in corpus.inquiries if i.title == "Water molecules"]
    assert len(matches) == 1
    inquiry = matches[0]
    labels = {s.label for s in inquiry.slots}
    assert labels == {"glass water", "outside", "breath"}
    assert inquiry.description == "" and inquiry.notes == ""
    assert score_inquiry(inquiry).category is ScoreCategory.NAIVE


def test_lockdown_trough_is_contiguous_and_deep(corpus, report):
    inside, outside = [], []
    for bucket in report.weekly_activity:
        if bucket.start >= LOCKDOWN_START and \
                bucket.start + timedelta(days=7) <= LOCKDOWN_END:
            inside.append(bucket.events)
        else:
            outside.append(bucket.events)
    assert len(inside) >= 8  # a months-long window
    outside_mean = sum(outside) / len(outside)
    assert max(inside) < 0.25 * outside_mean
    # Contiguity: every quiet bucket sits inside one run.
    quiet = [b.events < 0.25 * outside_mean for b in report.weekly_activity]
    runs = sum(
        1 for i, q in enumerate(quiet) if q and (i == 0 or not quiet[i - 1])
    )
    assert runs == 1


def test_exemplars_one_per_sensor(corpus):
    exemplars = [i for i in corpus.inquiries if i.is_exemplar]
    assert len(exemplars) == 6
    assert {e.sensor_type for e in exemplars} == set(SensorType)
    assert all(e.is_published for e in exemplars)


def test_lineage_sources_resolve_and_predate(corpus):
    by_id = {i.id: i for i in corpus.inquiries}
    for inquiry in corpus.inquiries:
        if inquiry.lineage is None:
            continue
        source = by_id[inquiry.lineage.source_inquiry_id]
        assert source.is_published
        assert source.sensor_type is inquiry.sensor_type
        assert source.created_at < inquiry.created_at
        if inquiry.lineage.source_class is SourceClass.EXEMPLAR:
            assert source.is_exemplar
        elif inquiry.lineage.source_class is SourceClass.OWN:
            assert source.author_id == inquiry.author_id
        else:
            assert source.author_id != inquiry.author_id
            assert not source.is_exemplar


def test_regeneration_is_deterministic(tmp_path):
    write_corpus(generate_corpus(), tmp_path)
    for name in ("events.ndjson", "inquiries.ndjson", "users.ndjson",
                 "classes.ndjson", "manifest.json"):
        fresh = hashlib.sha256((tmp_path / name).read_bytes()).hexdigest()
        shipped = hashlib.sha256(
            (bundled_corpus_dir() / name).read_bytes()
        ).hexdigest()
        assert fresh == shipped, f"{name} drifted from the generator output"


def test_replay_into_fresh_store_reproduces_report(corpus, report):
    db = PlatformDB()
    load_corpus_into_db(db, corpus)
    replayed = compute_report(db.events(), db.all_inquiries())
    assert replayed == report
    db.close()
