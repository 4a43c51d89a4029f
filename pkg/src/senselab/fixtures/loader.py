"""Read and write the corpus directory, and load it into a fresh store."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable

from senselab.analytics import EventRecord, read_event_log, write_event_log
from senselab.core import Inquiry, Role, UserAccount, inquiry_from_dict, inquiry_to_dict

DATA_PACKAGE = "senselab.fixtures"
DEMO_PASSWORD = "senselab"


@dataclass
class CorpusFiles:
    events: list[EventRecord]
    inquiries: list[Inquiry]  # exemplars included, flagged
    authored_scores: dict[str, str]
    users: list[dict]
    classes: list[dict]
    manifest: dict


def write_corpus(corpus, out_dir: str | Path) -> None:
    """Serialize a generated corpus into its four NDJSON files + manifest."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "events.ndjson", "w", encoding="utf-8") as fh:
        write_event_log(fh, corpus.events)
    with open(out / "inquiries.ndjson", "w", encoding="utf-8") as fh:
        for inquiry in corpus.inquiries + corpus.exemplars:
            row = inquiry_to_dict(inquiry)
            authored = corpus.authored_scores.get(inquiry.id)
            if authored is not None:
                row["authored_score"] = authored
            fh.write(json.dumps(row, separators=(",", ":")) + "\n")
    with open(out / "users.ndjson", "w", encoding="utf-8") as fh:
        for user in corpus.users:
            fh.write(json.dumps({
                "id": user.id,
                "username": user.username,
                "role": user.role.value,
                "class_ids": sorted(user.class_ids),
            }, separators=(",", ":")) + "\n")
    with open(out / "classes.ndjson", "w", encoding="utf-8") as fh:
        for group in corpus.classes:
            fh.write(json.dumps({
                "id": group.id,
                "name": group.name,
                "join_code": group.join_code,
                "teacher_id": group.teacher_id,
                "created_at": group.created_at.isoformat(),
            }, separators=(",", ":")) + "\n")
    with open(out / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(corpus.manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def bundled_corpus_dir() -> Path:
    """Location of the corpus shipped inside the package."""
    return Path(resources.files(DATA_PACKAGE).joinpath("data"))


def read_corpus(corpus_dir: str | Path | None = None) -> CorpusFiles:
    root = Path(corpus_dir) if corpus_dir is not None else bundled_corpus_dir()
    with open(root / "events.ndjson", encoding="utf-8") as fh:
        events = list(read_event_log(fh))
    inquiries = []
    authored = {}
    with open(root / "inquiries.ndjson", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            row = json.loads(line)
            if "authored_score" in row:
                authored[row["id"]] = row.pop("authored_score")
            inquiries.append(inquiry_from_dict(row))
    users = []
    users_path = root / "users.ndjson"
    if users_path.exists():
        with open(users_path, encoding="utf-8") as fh:
            users = [json.loads(line) for line in fh if line.strip()]
    classes = []
    classes_path = root / "classes.ndjson"
    if classes_path.exists():
        with open(classes_path, encoding="utf-8") as fh:
            classes = [json.loads(line) for line in fh if line.strip()]
    manifest = {}
    manifest_path = root / "manifest.json"
    if manifest_path.exists():
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    return CorpusFiles(events, inquiries, authored, users, classes, manifest)


def load_corpus_into_db(db, corpus: CorpusFiles) -> None:
    """Replay a corpus into a fresh PlatformDB.

    Users, classes, and inquiry rows are inserted verbatim; the event log is
    imported as exported, so analytics over the fresh store reproduce the
    original report exactly.
    """
    from senselab.service.db import _hash_password

    # One shared demo credential for the whole corpus: hash it once.
    shared_hash = _hash_password(DEMO_PASSWORD)
    for row in corpus.users:
        db.import_user(row["id"], row["username"], Role(row["role"]), shared_hash)
    for row in corpus.classes:
        db.import_class(row["id"], row["name"], row["join_code"],
                        row["teacher_id"], row["created_at"])
    for row in corpus.users:
        for class_id in row.get("class_ids", []):
            db.add_membership(row["id"], class_id)
    # Lineage rows reference their sources; sources were always created
    # earlier, so creation order satisfies the foreign keys.
    for inquiry in sorted(corpus.inquiries, key=lambda i: (i.created_at, i.id)):
        db.import_inquiry(inquiry)
    db.import_events(corpus.events)
