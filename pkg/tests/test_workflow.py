"""Workflow rules through the store: authorization, state machine, lineage."""

from __future__ import annotations

from datetime import datetime, timedelta, timezone

import pytest

from senselab.core import (
    AuthorizationError,
    ExpiredCodeError,
    NotFoundError,
    Role,
    SlotLimitError,
    SourceClass,
    StateError,
    ValidationError,
)
from senselab.protocol import Measurement, SensorType
from senselab.scoring import ScoreCategory, score_inquiry
from senselab.service.db import PlatformDB


@pytest.fixture
def db():
    store = PlatformDB()
    yield store
    store.close()


@pytest.fixture
def world(db):
    teacher = db.create_user("teach", "pw", Role.TEACHER)
    alice = db.create_user("alice", "pw", Role.STUDENT)
    bob = db.create_user("bob", "pw", Role.STUDENT)
    group = db.create_class(teacher.id, "Year 9 Science")
    db.join_class(alice.id, group.join_code)
    db.join_class(bob.id, group.join_code)
    return db, teacher, alice, bob, group


def hr(timestamp_ms=1000, bpm=72.0) -> Measurement:
    return Measurement(SensorType.HEART_RATE, timestamp_ms, (bpm,))


def draft(db, author, group, title="Pulse check", slots=1):
    inquiry = db.create_inquiry(author.id, group.id, SensorType.HEART_RATE, title=title)
    for i in range(slots):
        db.capture_data_point(author.id, inquiry.id, hr(i * 500), label=f"point {i}")
    return db.get_inquiry(author.id, inquiry.id)


# -- classes and membership ------------------------------------------------------

def test_students_cannot_create_classes(world):
    db, _, alice, _, _ = world
    with pytest.raises(AuthorizationError):
        db.create_class(alice.id, "Rogue class")


def test_join_codes_are_distinct_and_well_formed(world):
    db, teacher, _, _, group = world
    other = db.create_class(teacher.id, "Second class")
    assert group.join_code != other.join_code
    assert len(group.join_code) == 6
    assert group.join_code.isupper() or group.join_code.isalnum()


def test_join_is_idempotent(world):
    db, _, alice, _, group = world
    db.join_class(alice.id, group.join_code)
    db.join_class(alice.id, group.join_code)
    assert db.get_user(alice.id).class_ids == {group.id}


def test_unknown_code_is_not_found(world):
    db, _, alice, _, _ = world
    with pytest.raises(NotFoundError):
        db.join_class(alice.id, "ZZZZZZ")


def test_regenerated_code_expires_the_old_one(world):
    db, teacher, alice, _, group = world
    old_code = group.join_code
    updated = db.regenerate_join_code(teacher.id, group.id)
    assert updated.join_code != old_code
    with pytest.raises(ExpiredCodeError):
        db.join_class(alice.id, old_code)
    db.join_class(alice.id, updated.join_code)


# -- capture slots ------------------------------------------------------------------

def test_capture_assigns_sequential_indices(world):
    db, _, alice, _, group = world
    inquiry = draft(db, alice, group, slots=0)
    slot = db.capture_data_point(alice.id, inquiry.id, hr(), label="resting")
    assert slot.index == 0
    slot = db.capture_data_point(alice.id, inquiry.id, hr(2000), label="running")
    assert slot.index == 1


def test_fourth_capture_hits_slot_limit(world):
    db, _, alice, _, group = world
    inquiry = draft(db, alice, group, slots=3)
    with pytest.raises(SlotLimitError):
        db.capture_data_point(alice.id, inquiry.id, hr(9000), label="one too many")
    assert len(db.get_inquiry(alice.id, inquiry.id).slots) == 3


def test_non_author_cannot_capture(world):
    db, _, alice, bob, group = world
    inquiry = draft(db, alice, group)
    with pytest.raises(AuthorizationError):
        db.capture_data_point(bob.id, inquiry.id, hr(), label="sneak")


def test_capture_on_published_is_state_error(world):
    db, _, alice, _, group = world
    inquiry = draft(db, alice, group)
    db.publish_inquiry(alice.id, inquiry.id)
    with pytest.raises(StateError):
        db.capture_data_point(alice.id, inquiry.id, hr(), label="late")


def test_capture_sensor_must_match_inquiry(world):
    db, _, alice, _, group = world
    inquiry = draft(db, alice, group, slots=0)
    wrong = Measurement(SensorType.VOC, 0, (120.0,))
    with pytest.raises(ValidationError):
        db.capture_data_point(alice.id, inquiry.id, wrong)


# -- publishing -----------------------------------------------------------------------

def test_publish_sets_timestamp_and_feeds_discover(world):
    db, _, alice, _, group = world
    inquiry = draft(db, alice, group)
    published = db.publish_inquiry(alice.id, inquiry.id)
    assert published.is_published and published.published_at is not None
    assert any(i.id == inquiry.id for i in db.discover().items)


def test_publish_untitled_lists_missing_fields(world):
    db, _, alice, _, group = world
    inquiry = draft(db, alice, group, title="", slots=0)
    with pytest.raises(ValidationError) as excinfo:
        db.publish_inquiry(alice.id, inquiry.id)
    assert set(excinfo.value.fields) == {"title", "slots"}


def test_double_publish_is_state_error(world):
    db, _, alice, _, group = world
    inquiry = draft(db, alice, group)
    db.publish_inquiry(alice.id, inquiry.id)
    with pytest.raises(StateError):
        db.publish_inquiry(alice.id, inquiry.id)


def test_drafts_invisible_to_others(world):
    db, teacher, alice, bob, group = world
    inquiry = draft(db, alice, group)
    with pytest.raises(NotFoundError):
        db.get_inquiry(bob.id, inquiry.id)
    # Teachers cannot see drafts either.
    with pytest.raises(NotFoundError):
        db.get_inquiry(teacher.id, inquiry.id)
    assert db.get_inquiry(alice.id, inquiry.id).id == inquiry.id
    assert all(i.id != inquiry.id for i in db.discover().items)


# -- comments ----------------------------------------------------------------------------

def test_comments_attach_only_to_published(world):
    db, _, alice, bob, group = world
    inquiry = draft(db, alice, group)
    with pytest.raises(NotFoundError):
        db.add_comment(bob.id, inquiry.id, "nice")  # invisible draft
    with pytest.raises(StateError):
        db.add_comment(alice.id, inquiry.id, "note to self")
    db.publish_inquiry(alice.id, inquiry.id)
    comment = db.add_comment(bob.id, inquiry.id, "nice work")
    assert [c.id for c in db.comments_for(inquiry.id)] == [comment.id]


# -- replication and remix -----------------------------------------------------------------

def test_replicate_other_student(world):
    db, _, alice, bob, group = world
    source = draft(db, alice, group)
    db.publish_inquiry(alice.id, source.id)
    derived = db.replicate_inquiry(bob.id, source.id)
    assert derived.lineage.source_class is SourceClass.OTHER_STUDENT
    assert derived.slots == ()  # data gets re-collected
    assert derived.title == source.title
    assert not derived.is_published


def test_replicate_own(world):
    db, _, alice, _, group = world
    source = draft(db, alice, group)
    db.publish_inquiry(alice.id, source.id)
    derived = db.replicate_inquiry(alice.id, source.id)
    assert derived.lineage.source_class is SourceClass.OWN


def test_replicate_exemplar(world):
    db, teacher, alice, _, _ = world
    exemplar = db.create_exemplar(
        teacher.id, SensorType.LIGHT_UV, "Which foil blocks UV?"
    )
    derived = db.replicate_inquiry(alice.id, exemplar.id)
    assert derived.lineage.source_class is SourceClass.EXEMPLAR
    assert derived.sensor_type is SensorType.LIGHT_UV


def test_replicate_draft_is_not_found(world):
    db, _, alice, bob, group = world
    source = draft(db, alice, group)
    with pytest.raises(NotFoundError):
        db.replicate_inquiry(bob.id, source.id)
    with pytest.raises(NotFoundError):
        db.replicate_inquiry(alice.id, source.id)  # even the author


def test_remix_prefills_title_and_description(world):
    db, _, alice, bob, group = world
    source = db.create_inquiry(
        alice.id, group.id, SensorType.CONDUCTANCE,
        title="Milk conductivity", description="Fat content vs current",
    )
    db.capture_data_point(alice.id, source.id,
                          Measurement(SensorType.CONDUCTANCE, 0, (700.0,)), "milk")
    db.publish_inquiry(alice.id, source.id)
    remix = db.remix_inquiry(bob.id, source.id)
    assert remix.title == "Milk conductivity (remix)"
    assert remix.description == "Fat content vs current"
    assert remix.slots == ()
    assert remix.lineage.kind.value == "remix"


def test_exemplars_do_not_appear_in_discover(world):
    db, teacher, _, _, _ = world
    db.create_exemplar(teacher.id, SensorType.VOC, "Smell of markers")
    assert db.discover().total == 0
    assert len(db.list_exemplars()) == 1


# -- discover filter and pagination ----------------------------------------------------------

def test_discover_filters_by_sensor(world):
    db, _, alice, _, group = world
    a = draft(db, alice, group, title="hr one")
    db.publish_inquiry(alice.id, a.id)
    voc = db.create_inquiry(alice.id, group.id, SensorType.VOC, title="voc one")
    db.capture_data_point(alice.id, voc.id, Measurement(SensorType.VOC, 0, (150.0,)))
    db.publish_inquiry(alice.id, voc.id)
    assert db.discover(sensor_type=SensorType.HEART_RATE).total == 1
    assert db.discover(sensor_type="voc").total == 1
    assert db.discover(sensor_type=SensorType.BODY_TEMP).items == []
    assert db.discover().total == 2


def test_discover_orders_newest_first_and_paginates(db):
    fake_now = [datetime(2021, 6, 1, 9, 0, tzinfo=timezone.utc)]
    db.clock = lambda: fake_now[0]
    teacher = db.create_user("t", "pw", Role.TEACHER)
    group = db.create_class(teacher.id, "C")
    student = db.create_user("s", "pw", Role.STUDENT)
    db.join_class(student.id, group.join_code)
    ids = []
    for n in range(45):
        fake_now[0] += timedelta(minutes=1)
        inquiry = db.create_inquiry(
            student.id, group.id, SensorType.HEART_RATE, title=f"i{n:02d}"
        )
        db.capture_data_point(student.id, inquiry.id, hr())
        db.publish_inquiry(student.id, inquiry.id)
        ids.append(inquiry.id)

    seen = []
    cursor = None
    pages = 0
    while True:
        page = db.discover(cursor=cursor, limit=20)
        seen.extend(i.id for i in page.items)
        pages += 1
        if page.next_cursor is None:
            break
        cursor = page.next_cursor
    assert pages == 3
    assert seen == list(reversed(ids))  # newest first, no dupes, no gaps


# -- score override ---------------------------------------------------------------------------

def test_override_requires_teacher_and_reason(world):
    db, teacher, alice, _, group = world
    inquiry = draft(db, alice, group)
    with pytest.raises(AuthorizationError):
        db.override_score(alice.id, inquiry.id, ScoreCategory.EMERGING, "because")
    with pytest.raises(ValidationError):
        db.override_score(teacher.id, inquiry.id, ScoreCategory.EMERGING, "   ")
    updated = db.override_score(
        teacher.id, inquiry.id, ScoreCategory.EMERGING,
        "interview revealed a hypothesis",
    )
    score = score_inquiry(updated)
    assert score.category is ScoreCategory.EMERGING
    assert score.overridden
    assert updated.override.set_by == teacher.id


# -- photos ------------------------------------------------------------------------------------

def test_photo_content_addressing(db):
    first = db.put_photo(b"jpegbytes", "image/jpeg")
    second = db.put_photo(b"jpegbytes", "image/jpeg")
    assert first.id == second.id
    data, media_type = db.get_photo(first.id)
    assert data == b"jpegbytes"
    assert media_type == "image/jpeg"


def test_photo_size_limit(db):
    with pytest.raises(ValidationError):
        db.put_photo(b"x" * (5 * 1024 * 1024 + 1))


def test_capture_with_unknown_photo_fails(world):
    db, _, alice, _, group = world
    inquiry = draft(db, alice, group, slots=0)
    with pytest.raises(NotFoundError):
        db.capture_data_point(alice.id, inquiry.id, hr(), photo_ref="nope")


# -- sessions ------------------------------------------------------------------------------------

def test_expired_tokens_rejected(db):
    user = db.create_user("u", "pw", Role.STUDENT)
    token = db.issue_token(user.id, ttl=timedelta(seconds=-1))
    with pytest.raises(AuthorizationError):
        db.resolve_token(token.token)


def test_login_emits_session_start(db):
    user = db.create_user("u", "pw", Role.STUDENT)
    db.issue_token(user.id)
    kinds = [e.kind.value for e in db.events()]
    assert kinds == ["session_start"]


def test_authenticate_checks_password(db):
    db.create_user("u", "right", Role.STUDENT)
    assert db.authenticate("u", "right").username == "u"
    with pytest.raises(AuthorizationError):
        db.authenticate("u", "wrong")
