"""SQLite-backed store for the inquiry platform.

All workflow writes run inside one transaction and append exactly one event
record of the matching kind (the event vocabulary is the analytics contract,
so registration and class management write no events).  Domain rules live in
``senselab.core``; the schema's constraints are a backstop, not the rule
source.
"""

from __future__ import annotations

import hashlib
import json
import random
import secrets
import sqlite3
import threading
import uuid
from dataclasses import dataclass
from datetime import datetime, timedelta
from pathlib import Path
from typing import Callable, Iterable

from senselab.analytics import EventKind, EventRecord, utc_now
from senselab.core import (
    AuthorizationError,
    CaptureSlot,
    ClassGroup,
    Comment,
    ExpiredCodeError,
    Inquiry,
    InquiryStatus,
    LineageKind,
    LineageLink,
    NotFoundError,
    Role,
    ScoreOverride,
    SlotLimitError,
    SourceClass,
    StateError,
    UserAccount,
    ValidationError,
    classify_source,
    generate_join_code,
    next_slot_index,
    remix_title,
    require_publishable,
)
from senselab.protocol import Measurement, SensorType
from senselab.scoring import ScoreCategory

MAX_PHOTO_BYTES = 5 * 1024 * 1024
DEFAULT_TOKEN_TTL = timedelta(hours=12)
DISCOVER_PAGE_SIZE = 20

_SCHEMA = """
CREATE TABLE IF NOT EXISTS users (
    id TEXT PRIMARY KEY,
    username TEXT NOT NULL UNIQUE,
    password_hash TEXT NOT NULL,
    role TEXT NOT NULL CHECK (role IN ('teacher', 'student', 'researcher'))
);
CREATE TABLE IF NOT EXISTS classes (
    id TEXT PRIMARY KEY,
    name TEXT NOT NULL,
    join_code TEXT NOT NULL UNIQUE,
    teacher_id TEXT NOT NULL REFERENCES users(id),
    created_at TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS revoked_codes (
    code TEXT PRIMARY KEY,
    class_id TEXT NOT NULL REFERENCES classes(id)
);
CREATE TABLE IF NOT EXISTS memberships (
    user_id TEXT NOT NULL REFERENCES users(id),
    class_id TEXT NOT NULL REFERENCES classes(id),
    PRIMARY KEY (user_id, class_id)
);
CREATE TABLE IF NOT EXISTS inquiries (
    id TEXT PRIMARY KEY,
    author_id TEXT NOT NULL REFERENCES users(id),
    class_id TEXT REFERENCES classes(id),
    sensor_type TEXT NOT NULL,
    title TEXT NOT NULL DEFAULT '',
    description TEXT NOT NULL DEFAULT '',
    notes TEXT NOT NULL DEFAULT '',
    status TEXT NOT NULL CHECK (status IN ('draft', 'published')),
    is_exemplar INTEGER NOT NULL DEFAULT 0,
    created_at TEXT NOT NULL,
    published_at TEXT,
    lineage_kind TEXT CHECK (lineage_kind IN ('replication', 'remix')),
    lineage_source_id TEXT REFERENCES inquiries(id),
    lineage_source_class TEXT,
    override_category TEXT,
    override_reason TEXT,
    override_by TEXT
);
CREATE INDEX IF NOT EXISTS idx_inquiries_discover
    ON inquiries(status, is_exemplar, sensor_type, published_at);
CREATE TABLE IF NOT EXISTS slots (
    inquiry_id TEXT NOT NULL REFERENCES inquiries(id),
    idx INTEGER NOT NULL CHECK (idx BETWEEN 0 AND 2),
    label TEXT NOT NULL DEFAULT '',
    photo_id TEXT REFERENCES photos(id),
    timestamp_ms INTEGER NOT NULL,
    values_json TEXT NOT NULL,
    PRIMARY KEY (inquiry_id, idx)
);
CREATE TABLE IF NOT EXISTS comments (
    id TEXT PRIMARY KEY,
    inquiry_id TEXT NOT NULL REFERENCES inquiries(id),
    author_id TEXT NOT NULL REFERENCES users(id),
    body TEXT NOT NULL,
    created_at TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS events (
    seq INTEGER PRIMARY KEY AUTOINCREMENT,
    timestamp TEXT NOT NULL,
    actor_id TEXT NOT NULL,
    kind TEXT NOT NULL,
    subject_id TEXT NOT NULL,
    sensor_type TEXT
);
CREATE TABLE IF NOT EXISTS photos (
    id TEXT PRIMARY KEY,
    media_type TEXT NOT NULL,
    size INTEGER NOT NULL,
    data BLOB NOT NULL
);
CREATE TABLE IF NOT EXISTS sessions (
    token TEXT PRIMARY KEY,
    user_id TEXT NOT NULL REFERENCES users(id),
    expires_at TEXT NOT NULL
);
"""


@dataclass(frozen=True)
class SessionToken:
    token: str
    user_id: str
    expires_at: datetime


@dataclass(frozen=True)
class PhotoBlob:
    id: str
    media_type: str
    size: int


@dataclass(frozen=True)
class DiscoverPage:
    items: list[Inquiry]
    next_cursor: str | None
    total: int


def _hash_password(password: str, salt: bytes | None = None) -> str:
    salt = salt if salt is not None else secrets.token_bytes(16)
    digest = hashlib.pbkdf2_hmac("sha256", password.encode(), salt, 50_000)
    return salt.hex() + ":" + digest.hex()


def _verify_password(password: str, stored: str) -> bool:
    salt_hex, digest_hex = stored.split(":", 1)
    candidate = _hash_password(password, bytes.fromhex(salt_hex))
    return secrets.compare_digest(candidate.split(":")[1], digest_hex)


class PlatformDB:
    """One platform instance: users, classes, inquiries, events, photos.

    Safe for many reader threads and one writer at a time; every mutator
    takes the write lock and commits or rolls back atomically.
    """

    def __init__(
        self,
        path: str = ":memory:",
        *,
        clock: Callable[[], datetime] = utc_now,
        rng: random.Random | None = None,
        photo_dir: str | None = None,
    ):
        self.clock = clock
        self.rng = rng or random.Random()
        self.photo_dir = Path(photo_dir) if photo_dir else None
        if self.photo_dir is not None:
            self.photo_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.RLock()
        self._conn = sqlite3.connect(path, check_same_thread=False)
        self._conn.row_factory = sqlite3.Row
        self._conn.isolation_level = None  # explicit transactions only
        with self._lock:
            self._conn.execute("PRAGMA foreign_keys = ON")
            self._conn.executescript(_SCHEMA)

    def close(self) -> None:
        self._conn.close()

    # -- transaction plumbing ------------------------------------------------

    def _write(self):
        return _WriteTransaction(self)

    def _new_id(self) -> str:
        return uuid.uuid4().hex[:12]

    def _append_event(
        self,
        kind: EventKind,
        actor_id: str,
        subject_id: str,
        sensor_type: SensorType | None = None,
        timestamp: datetime | None = None,
    ) -> None:
        self._conn.execute(
            "INSERT INTO events (timestamp, actor_id, kind, subject_id, sensor_type)"
            " VALUES (?, ?, ?, ?, ?)",
            (
                (timestamp or self.clock()).isoformat(),
                actor_id,
                kind.value,
                subject_id,
                sensor_type.wire_name if sensor_type else None,
            ),
        )

    # -- users and sessions ----------------------------------------------------

    def create_user(self, username: str, password: str, role: Role | str,
                    user_id: str | None = None) -> UserAccount:
        role = Role(role)
        username = username.strip()
        if not username:
            raise ValidationError("username must be nonempty", ["username"])
        with self._write():
            try:
                user_id = user_id or self._new_id()
                self._conn.execute(
                    "INSERT INTO users (id, username, password_hash, role)"
                    " VALUES (?, ?, ?, ?)",
                    (user_id, username, _hash_password(password), role.value),
                )
            except sqlite3.IntegrityError:
                raise ValidationError(
                    f"username {username!r} is taken", ["username"]
                ) from None
        return self.get_user(user_id)

    def import_user(self, user_id: str, username: str, role: Role | str,
                    password_hash: str) -> None:
        """Insert a user row with a precomputed hash (corpus load path)."""
        with self._write():
            self._conn.execute(
                "INSERT INTO users (id, username, password_hash, role)"
                " VALUES (?, ?, ?, ?)",
                (user_id, username, password_hash, Role(role).value),
            )

    def get_user(self, user_id: str) -> UserAccount:
        with self._lock:
            row = self._conn.execute(
                "SELECT * FROM users WHERE id = ?", (user_id,)
            ).fetchone()
            if row is None:
                raise NotFoundError(f"no user {user_id}")
            class_rows = self._conn.execute(
                "SELECT class_id FROM memberships WHERE user_id = ?", (user_id,)
            ).fetchall()
        return UserAccount(
            id=row["id"],
            username=row["username"],
            role=Role(row["role"]),
            class_ids=frozenset(r["class_id"] for r in class_rows),
        )

    def authenticate(self, username: str, password: str) -> UserAccount:
        with self._lock:
            row = self._conn.execute(
                "SELECT id, password_hash FROM users WHERE username = ?", (username,)
            ).fetchone()
        if row is None or not _verify_password(password, row["password_hash"]):
            raise AuthorizationError("unknown username or wrong password")
        return self.get_user(row["id"])

    def issue_token(self, user_id: str, ttl: timedelta = DEFAULT_TOKEN_TTL) -> SessionToken:
        """Create a session; logging in is the one write that logs session_start."""
        self.get_user(user_id)
        token = secrets.token_hex(16)
        expires = self.clock() + ttl
        with self._write():
            self._conn.execute(
                "INSERT INTO sessions (token, user_id, expires_at) VALUES (?, ?, ?)",
                (token, user_id, expires.isoformat()),
            )
            self._append_event(EventKind.SESSION_START, user_id, user_id)
        return SessionToken(token, user_id, expires)

    def resolve_token(self, token: str) -> UserAccount:
        with self._lock:
            row = self._conn.execute(
                "SELECT user_id, expires_at FROM sessions WHERE token = ?", (token,)
            ).fetchone()
        if row is None:
            raise AuthorizationError("invalid session token")
        if datetime.fromisoformat(row["expires_at"]) <= self.clock():
            raise AuthorizationError("session token expired")
        return self.get_user(row["user_id"])

    # -- classes -----------------------------------------------------------------

    def _unique_join_code(self) -> str:
        while True:
            code = generate_join_code(self.rng)
            active = self._conn.execute(
                "SELECT 1 FROM classes WHERE join_code = ?", (code,)
            ).fetchone()
            revoked = self._conn.execute(
                "SELECT 1 FROM revoked_codes WHERE code = ?", (code,)
            ).fetchone()
            if active is None and revoked is None:
                return code

    def create_class(self, caller_id: str, name: str,
                     class_id: str | None = None) -> ClassGroup:
        caller = self.get_user(caller_id)
        if not caller.role.can_manage_classes:
            raise AuthorizationError("only teachers can create classes")
        if not name.strip():
            raise ValidationError("class name must be nonempty", ["name"])
        with self._write():
            class_id = class_id or self._new_id()
            code = self._unique_join_code()
            now = self.clock()
            self._conn.execute(
                "INSERT INTO classes (id, name, join_code, teacher_id, created_at)"
                " VALUES (?, ?, ?, ?, ?)",
                (class_id, name.strip(), code, caller_id, now.isoformat()),
            )
        return self.get_class(class_id)

    def get_class(self, class_id: str) -> ClassGroup:
        with self._lock:
            row = self._conn.execute(
                "SELECT * FROM classes WHERE id = ?", (class_id,)
            ).fetchone()
        if row is None:
            raise NotFoundError(f"no class {class_id}")
        return ClassGroup(
            id=row["id"],
            name=row["name"],
            join_code=row["join_code"],
            teacher_id=row["teacher_id"],
            created_at=datetime.fromisoformat(row["created_at"]),
        )

    def regenerate_join_code(self, caller_id: str, class_id: str) -> ClassGroup:
        group = self.get_class(class_id)
        if group.teacher_id != caller_id:
            raise AuthorizationError("only the class teacher can regenerate the code")
        with self._write():
            self._conn.execute(
                "INSERT OR IGNORE INTO revoked_codes (code, class_id) VALUES (?, ?)",
                (group.join_code, class_id),
            )
            self._conn.execute(
                "UPDATE classes SET join_code = ? WHERE id = ?",
                (self._unique_join_code(), class_id),
            )
        return self.get_class(class_id)

    def join_class(self, caller_id: str, join_code: str) -> ClassGroup:
        """Membership by code; joining twice is a no-op."""
        self.get_user(caller_id)
        code = join_code.strip().upper()
        with self._lock:
            row = self._conn.execute(
                "SELECT id FROM classes WHERE join_code = ?", (code,)
            ).fetchone()
            revoked = None if row is not None else self._conn.execute(
                "SELECT class_id FROM revoked_codes WHERE code = ?", (code,)
            ).fetchone()
        if row is None:
            if revoked is not None:
                raise ExpiredCodeError("this class code has been regenerated")
            raise NotFoundError("unknown class code")
        with self._write():
            self._conn.execute(
                "INSERT OR IGNORE INTO memberships (user_id, class_id) VALUES (?, ?)",
                (caller_id, row["id"]),
            )
        return self.get_class(row["id"])

    def import_class(self, class_id: str, name: str, join_code: str,
                     teacher_id: str, created_at: str) -> None:
        """Insert a class row verbatim (corpus load path)."""
        with self._write():
            self._conn.execute(
                "INSERT INTO classes (id, name, join_code, teacher_id, created_at)"
                " VALUES (?, ?, ?, ?, ?)",
                (class_id, name, join_code, teacher_id, created_at),
            )

    def add_membership(self, user_id: str, class_id: str) -> None:
        with self._write():
            self._conn.execute(
                "INSERT OR IGNORE INTO memberships (user_id, class_id) VALUES (?, ?)",
                (user_id, class_id),
            )

    def members_of(self, class_id: str) -> set[str]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT user_id FROM memberships WHERE class_id = ?", (class_id,)
            ).fetchall()
            teacher = self._conn.execute(
                "SELECT teacher_id FROM classes WHERE id = ?", (class_id,)
            ).fetchone()
        members = {r["user_id"] for r in rows}
        if teacher is not None:
            members.add(teacher["teacher_id"])
        return members

    def is_member(self, user_id: str, class_id: str) -> bool:
        with self._lock:
            if self._conn.execute(
                "SELECT 1 FROM memberships WHERE user_id = ? AND class_id = ?",
                (user_id, class_id),
            ).fetchone():
                return True
            row = self._conn.execute(
                "SELECT 1 FROM classes WHERE id = ? AND teacher_id = ?",
                (class_id, user_id),
            ).fetchone()
            return row is not None

    # -- inquiries ------------------------------------------------------------------

    def _load_inquiry(self, inquiry_id: str) -> Inquiry:
        with self._lock:
            row = self._conn.execute(
                "SELECT * FROM inquiries WHERE id = ?", (inquiry_id,)
            ).fetchone()
            if row is None:
                raise NotFoundError(f"no inquiry {inquiry_id}")
            return self._row_to_inquiry(row)

    def _row_to_inquiry(self, row: sqlite3.Row) -> Inquiry:
        sensor_type = SensorType.from_wire_name(row["sensor_type"])
        with self._lock:
            slot_rows = self._conn.execute(
                "SELECT * FROM slots WHERE inquiry_id = ? ORDER BY idx", (row["id"],)
            ).fetchall()
        slots = tuple(
            CaptureSlot(
                index=s["idx"],
                label=s["label"],
                photo_ref=s["photo_id"],
                measurement=Measurement(
                    sensor_type, s["timestamp_ms"], tuple(json.loads(s["values_json"]))
                ),
            )
            for s in slot_rows
        )
        lineage = None
        if row["lineage_kind"]:
            lineage = LineageLink(
                LineageKind(row["lineage_kind"]),
                row["lineage_source_id"],
                SourceClass(row["lineage_source_class"]),
            )
        override = None
        if row["override_category"]:
            override = ScoreOverride(
                row["override_category"], row["override_reason"] or "",
                row["override_by"] or "",
            )
        return Inquiry(
            id=row["id"],
            author_id=row["author_id"],
            class_id=row["class_id"],
            sensor_type=sensor_type,
            title=row["title"],
            description=row["description"],
            notes=row["notes"],
            slots=slots,
            status=InquiryStatus(row["status"]),
            lineage=lineage,
            created_at=datetime.fromisoformat(row["created_at"]),
            published_at=(
                datetime.fromisoformat(row["published_at"])
                if row["published_at"] else None
            ),
            is_exemplar=bool(row["is_exemplar"]),
            override=override,
        )

    def get_inquiry(self, caller_id: str, inquiry_id: str) -> Inquiry:
        """Drafts are visible to their author only; published to everyone."""
        inquiry = self._load_inquiry(inquiry_id)
        if inquiry.status is InquiryStatus.DRAFT and inquiry.author_id != caller_id:
            raise NotFoundError(f"no inquiry {inquiry_id}")
        return inquiry

    def create_inquiry(
        self,
        caller_id: str,
        class_id: str,
        sensor_type: SensorType | str,
        title: str = "",
        description: str = "",
        notes: str = "",
    ) -> Inquiry:
        sensor = (
            sensor_type if isinstance(sensor_type, SensorType)
            else SensorType.from_wire_name(sensor_type)
        )
        self.get_class(class_id)
        if not self.is_member(caller_id, class_id):
            raise AuthorizationError("caller is not a member of this class")
        if len(title) > 120:
            raise ValidationError("title longer than 120 chars", ["title"])
        with self._write():
            inquiry_id = self._new_id()
            now = self.clock()
            self._conn.execute(
                "INSERT INTO inquiries (id, author_id, class_id, sensor_type, title,"
                " description, notes, status, created_at)"
                " VALUES (?, ?, ?, ?, ?, ?, ?, 'draft', ?)",
                (inquiry_id, caller_id, class_id, sensor.wire_name, title,
                 description, notes, now.isoformat()),
            )
            self._append_event(EventKind.INQUIRY_CREATED, caller_id, inquiry_id, sensor)
        return self._load_inquiry(inquiry_id)

    def update_inquiry_text(
        self,
        caller_id: str,
        inquiry_id: str,
        *,
        title: str | None = None,
        description: str | None = None,
        notes: str | None = None,
    ) -> Inquiry:
        """Edit the text of one's own draft; no event (text is not a count)."""
        inquiry = self._load_inquiry(inquiry_id)
        if inquiry.author_id != caller_id:
            raise AuthorizationError("only the author can edit an inquiry")
        if inquiry.status is not InquiryStatus.DRAFT:
            raise StateError("published inquiries are immutable")
        if title is not None and len(title) > 120:
            raise ValidationError("title longer than 120 chars", ["title"])
        with self._write():
            self._conn.execute(
                "UPDATE inquiries SET title = COALESCE(?, title),"
                " description = COALESCE(?, description),"
                " notes = COALESCE(?, notes) WHERE id = ?",
                (title, description, notes, inquiry_id),
            )
        return self._load_inquiry(inquiry_id)

    def capture_data_point(
        self,
        caller_id: str,
        inquiry_id: str,
        measurement: Measurement,
        label: str = "",
        photo_ref: str | None = None,
    ) -> CaptureSlot:
        inquiry = self._load_inquiry(inquiry_id)
        if inquiry.author_id != caller_id:
            raise AuthorizationError("only the author can capture data points")
        if inquiry.status is not InquiryStatus.DRAFT:
            raise StateError("cannot capture into a published inquiry")
        if measurement.sensor_type is not inquiry.sensor_type:
            raise ValidationError(
                f"measurement is {measurement.sensor_type.wire_name}, inquiry uses "
                f"{inquiry.sensor_type.wire_name}",
                ["measurement.sensor_type"],
            )
        index = next_slot_index([s.index for s in inquiry.slots])
        if index is None:
            raise SlotLimitError("an inquiry holds at most 3 data points")
        if photo_ref is not None:
            self.get_photo(photo_ref)  # must exist
        try:
            slot = CaptureSlot(index, measurement, label, photo_ref)
        except ValueError as exc:
            raise ValidationError(str(exc), ["label"]) from exc
        with self._write():
            self._conn.execute(
                "INSERT INTO slots (inquiry_id, idx, label, photo_id, timestamp_ms,"
                " values_json) VALUES (?, ?, ?, ?, ?, ?)",
                (inquiry_id, index, label, photo_ref,
                 measurement.timestamp_ms, json.dumps(list(measurement.values))),
            )
            self._append_event(
                EventKind.DATA_CAPTURED, caller_id, inquiry_id, inquiry.sensor_type
            )
        return slot

    def publish_inquiry(self, caller_id: str, inquiry_id: str) -> Inquiry:
        inquiry = self._load_inquiry(inquiry_id)
        if inquiry.author_id != caller_id:
            raise AuthorizationError("only the author can publish an inquiry")
        if inquiry.status is InquiryStatus.PUBLISHED:
            # Not idempotent on purpose: a second publish signals a client bug.
            raise StateError("inquiry is already published")
        require_publishable(inquiry)
        with self._write():
            now = self.clock()
            self._conn.execute(
                "UPDATE inquiries SET status = 'published', published_at = ?"
                " WHERE id = ?",
                (now.isoformat(), inquiry_id),
            )
            self._append_event(
                EventKind.PUBLISHED, caller_id, inquiry_id, inquiry.sensor_type
            )
        return self._load_inquiry(inquiry_id)

    def add_comment(self, caller_id: str, inquiry_id: str, body: str) -> Comment:
        inquiry = self._load_inquiry(inquiry_id)
        if inquiry.status is not InquiryStatus.PUBLISHED:
            if inquiry.author_id == caller_id:
                raise StateError("comments attach only to published inquiries")
            raise NotFoundError(f"no inquiry {inquiry_id}")
        with self._write():
            comment_id = self._new_id()
            now = self.clock()
            try:
                comment = Comment(comment_id, inquiry_id, caller_id, body, now)
            except ValueError as exc:
                raise ValidationError(str(exc), ["body"]) from exc
            self._conn.execute(
                "INSERT INTO comments (id, inquiry_id, author_id, body, created_at)"
                " VALUES (?, ?, ?, ?, ?)",
                (comment_id, inquiry_id, caller_id, body, now.isoformat()),
            )
            self._append_event(
                EventKind.COMMENT, caller_id, inquiry_id, inquiry.sensor_type
            )
        return comment

    def comments_for(self, inquiry_id: str) -> list[Comment]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT * FROM comments WHERE inquiry_id = ? ORDER BY created_at, id",
                (inquiry_id,),
            ).fetchall()
        return [
            Comment(r["id"], r["inquiry_id"], r["author_id"], r["body"],
                    datetime.fromisoformat(r["created_at"]))
            for r in rows
        ]

    # -- lineage: replication and remix ---------------------------------------------

    def _derive_inquiry(self, caller_id: str, source_id: str,
                        kind: LineageKind) -> Inquiry:
        caller = self.get_user(caller_id)
        source = self._load_inquiry(source_id)
        if source.status is not InquiryStatus.PUBLISHED:
            # Drafts are invisible to everyone but their author; even the
            # author cannot derive from an unpublished inquiry.
            raise NotFoundError(f"no published inquiry {source_id}")
        source_class = classify_source(
            source.author_id, caller_id, source.is_exemplar
        )
        # The new inquiry has no descendants yet, so the lineage graph stays
        # acyclic by construction; walking to the root guards corrupt data.
        seen = set()
        cursor: Inquiry | None = source
        while cursor is not None and cursor.lineage is not None:
            if cursor.id in seen:
                raise StateError(f"lineage cycle detected at {cursor.id}")
            seen.add(cursor.id)
            try:
                cursor = self._load_inquiry(cursor.lineage.source_inquiry_id)
            except NotFoundError:
                break
        if kind is LineageKind.REMIX:
            title = remix_title(source.title)
        else:
            title = source.title
        class_id = next(iter(caller.class_ids), None) or source.class_id
        event_kind = (
            EventKind.REPLICATION if kind is LineageKind.REPLICATION
            else EventKind.REMIX
        )
        with self._write():
            inquiry_id = self._new_id()
            now = self.clock()
            self._conn.execute(
                "INSERT INTO inquiries (id, author_id, class_id, sensor_type, title,"
                " description, notes, status, created_at, lineage_kind,"
                " lineage_source_id, lineage_source_class)"
                " VALUES (?, ?, ?, ?, ?, ?, '', 'draft', ?, ?, ?, ?)",
                (inquiry_id, caller_id, class_id, source.sensor_type.wire_name,
                 title, source.description, now.isoformat(), kind.value,
                 source_id, source_class.value),
            )
            self._append_event(event_kind, caller_id, inquiry_id, source.sensor_type)
        return self._load_inquiry(inquiry_id)

    def replicate_inquiry(self, caller_id: str, source_id: str) -> Inquiry:
        """Same inquiry, fresh data: text copied, slots empty."""
        return self._derive_inquiry(caller_id, source_id, LineageKind.REPLICATION)

    def remix_inquiry(self, caller_id: str, source_id: str) -> Inquiry:
        """Starting point for something new: title gains a remix marker."""
        return self._derive_inquiry(caller_id, source_id, LineageKind.REMIX)

    # -- scoring override --------------------------------------------------------------

    def override_score(self, caller_id: str, inquiry_id: str,
                       category: ScoreCategory | str, reason: str) -> Inquiry:
        caller = self.get_user(caller_id)
        if not caller.role.can_manage_classes:
            raise AuthorizationError("only teachers or researchers re-code scores")
        if not reason.strip():
            raise ValidationError("an override needs an audit reason", ["reason"])
        category = (
            category if isinstance(category, ScoreCategory)
            else ScoreCategory.from_wire_name(category)
        )
        self._load_inquiry(inquiry_id)
        with self._write():
            self._conn.execute(
                "UPDATE inquiries SET override_category = ?, override_reason = ?,"
                " override_by = ? WHERE id = ?",
                (category.wire_name, reason, caller_id, inquiry_id),
            )
        return self._load_inquiry(inquiry_id)

    # -- discover and listings ----------------------------------------------------------

    def discover(
        self,
        sensor_type: SensorType | str | None = None,
        class_id: str | None = None,
        cursor: str | None = None,
        limit: int = DISCOVER_PAGE_SIZE,
    ) -> DiscoverPage:
        """Published, non-exemplar inquiries, newest first, keyset-paged."""
        where = ["status = 'published'", "is_exemplar = 0"]
        params: list = []
        if sensor_type is not None:
            sensor = (
                sensor_type if isinstance(sensor_type, SensorType)
                else SensorType.from_wire_name(sensor_type)
            )
            where.append("sensor_type = ?")
            params.append(sensor.wire_name)
        if class_id is not None:
            where.append("class_id = ?")
            params.append(class_id)
        count_sql = f"SELECT COUNT(*) AS n FROM inquiries WHERE {' AND '.join(where)}"
        with self._lock:
            total = self._conn.execute(count_sql, params).fetchone()["n"]
        if cursor:
            try:
                cursor_ts, cursor_id = cursor.split("|", 1)
            except ValueError:
                raise ValidationError("malformed cursor", ["cursor"]) from None
            where.append("(published_at < ? OR (published_at = ? AND id < ?))")
            params += [cursor_ts, cursor_ts, cursor_id]
        sql = (
            f"SELECT * FROM inquiries WHERE {' AND '.join(where)}"
            " ORDER BY published_at DESC, id DESC LIMIT ?"
        )
        with self._lock:
            rows = self._conn.execute(sql, params + [limit]).fetchall()
            items = [self._row_to_inquiry(r) for r in rows]
        next_cursor = None
        if len(items) == limit and items:
            last = items[-1]
            next_cursor = f"{last.published_at.isoformat()}|{last.id}"
        return DiscoverPage(items, next_cursor, total)

    def create_exemplar(
        self,
        author_id: str,
        sensor_type: SensorType,
        title: str,
        description: str = "",
        notes: str = "",
        exemplar_id: str | None = None,
    ) -> Inquiry:
        """Researcher-authored model inquiry: published, outside any class.

        Library content rather than student output, so no event is logged
        and analytics do not count it.
        """
        author = self.get_user(author_id)
        if not author.role.can_manage_classes:
            raise AuthorizationError("only teachers or researchers add exemplars")
        with self._write():
            exemplar_id = exemplar_id or self._new_id()
            now = self.clock()
            self._conn.execute(
                "INSERT INTO inquiries (id, author_id, class_id, sensor_type, title,"
                " description, notes, status, is_exemplar, created_at, published_at)"
                " VALUES (?, ?, NULL, ?, ?, ?, ?, 'published', 1, ?, ?)",
                (exemplar_id, author_id, sensor_type.wire_name, title, description,
                 notes, now.isoformat(), now.isoformat()),
            )
        return self._load_inquiry(exemplar_id)

    def list_exemplars(self, sensor_type: SensorType | None = None) -> list[Inquiry]:
        sql = "SELECT * FROM inquiries WHERE is_exemplar = 1"
        params: list = []
        if sensor_type is not None:
            sql += " AND sensor_type = ?"
            params.append(sensor_type.wire_name)
        with self._lock:
            rows = self._conn.execute(sql + " ORDER BY id", params).fetchall()
            return [self._row_to_inquiry(r) for r in rows]

    def all_inquiries(self, include_exemplars: bool = True) -> list[Inquiry]:
        sql = "SELECT * FROM inquiries"
        if not include_exemplars:
            sql += " WHERE is_exemplar = 0"
        with self._lock:
            rows = self._conn.execute(sql + " ORDER BY created_at, id").fetchall()
            return [self._row_to_inquiry(r) for r in rows]

    def events(self) -> list[EventRecord]:
        with self._lock:
            rows = self._conn.execute("SELECT * FROM events ORDER BY seq").fetchall()
        return [
            EventRecord(
                timestamp=datetime.fromisoformat(r["timestamp"]),
                actor_id=r["actor_id"],
                kind=EventKind(r["kind"]),
                subject_id=r["subject_id"],
                sensor_type=(
                    SensorType.from_wire_name(r["sensor_type"])
                    if r["sensor_type"] else None
                ),
            )
            for r in rows
        ]

    def import_events(self, events: Iterable[EventRecord]) -> int:
        """Replay an exported log verbatim (fixture load, log replay)."""
        count = 0
        with self._write():
            for event in events:
                self._append_event(
                    event.kind, event.actor_id, event.subject_id,
                    event.sensor_type, timestamp=event.timestamp,
                )
                count += 1
        return count

    def import_inquiry(self, inquiry: Inquiry) -> None:
        """Insert a fully-formed inquiry row (corpus load path, no events)."""
        with self._write():
            self._conn.execute(
                "INSERT INTO inquiries (id, author_id, class_id, sensor_type, title,"
                " description, notes, status, is_exemplar, created_at, published_at,"
                " lineage_kind, lineage_source_id, lineage_source_class,"
                " override_category, override_reason, override_by)"
                " VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)",
                (
                    inquiry.id, inquiry.author_id, inquiry.class_id,
                    inquiry.sensor_type.wire_name, inquiry.title,
                    inquiry.description, inquiry.notes, inquiry.status.value,
                    int(inquiry.is_exemplar),
                    inquiry.created_at.isoformat() if inquiry.created_at else
                    self.clock().isoformat(),
                    inquiry.published_at.isoformat() if inquiry.published_at else None,
                    inquiry.lineage.kind.value if inquiry.lineage else None,
                    inquiry.lineage.source_inquiry_id if inquiry.lineage else None,
                    inquiry.lineage.source_class.value if inquiry.lineage else None,
                    inquiry.override.category if inquiry.override else None,
                    inquiry.override.reason if inquiry.override else None,
                    inquiry.override.set_by if inquiry.override else None,
                ),
            )
            for slot in inquiry.slots:
                self._conn.execute(
                    "INSERT INTO slots (inquiry_id, idx, label, photo_id,"
                    " timestamp_ms, values_json) VALUES (?, ?, ?, ?, ?, ?)",
                    (inquiry.id, slot.index, slot.label, slot.photo_ref,
                     slot.measurement.timestamp_ms,
                     json.dumps(list(slot.measurement.values))),
                )

    # -- photos -----------------------------------------------------------------------

    def put_photo(self, data: bytes, media_type: str = "image/jpeg") -> PhotoBlob:
        """Content-addressed store: identical bytes share one id."""
        if len(data) > MAX_PHOTO_BYTES:
            raise ValidationError(
                f"photo is {len(data)} bytes, limit {MAX_PHOTO_BYTES}", ["data"]
            )
        if not data:
            raise ValidationError("photo is empty", ["data"])
        photo_id = hashlib.sha256(data).hexdigest()
        stored = data
        if self.photo_dir is not None:
            (self.photo_dir / photo_id).write_bytes(data)
            stored = b""  # bytes live on disk; row keeps the metadata
        with self._write():
            self._conn.execute(
                "INSERT OR IGNORE INTO photos (id, media_type, size, data)"
                " VALUES (?, ?, ?, ?)",
                (photo_id, media_type, len(data), stored),
            )
        return PhotoBlob(photo_id, media_type, len(data))

    def get_photo(self, photo_id: str) -> tuple[bytes, str]:
        with self._lock:
            row = self._conn.execute(
                "SELECT data, media_type FROM photos WHERE id = ?", (photo_id,)
            ).fetchone()
        if row is None:
            raise NotFoundError(f"no photo {photo_id}")
        data = row["data"]
        if not data and self.photo_dir is not None:
            try:
                data = (self.photo_dir / photo_id).read_bytes()
            except FileNotFoundError:
                raise NotFoundError(f"photo {photo_id} bytes missing") from None
        return data, row["media_type"]

    # -- maintenance --------------------------------------------------------------------

    def counts(self) -> dict[str, int]:
        out = {}
        with self._lock:
            for table in ("users", "classes", "inquiries", "slots", "comments",
                          "events", "photos"):
                out[table] = self._conn.execute(
                    f"SELECT COUNT(*) AS n FROM {table}"
                ).fetchone()["n"]
        return out


class _WriteTransaction:
    def __init__(self, db: PlatformDB):
        self._db = db

    def __enter__(self):
        self._db._lock.acquire()
        self._db._conn.execute("BEGIN IMMEDIATE")
        return self

    def __exit__(self, exc_type, exc, tb):
        try:
            if exc_type is None:
                self._db._conn.execute("COMMIT")
            else:
                self._db._conn.execute("ROLLBACK")
        finally:
            self._db._lock.release()
        return False
