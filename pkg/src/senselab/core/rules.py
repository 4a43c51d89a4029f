"""Pure workflow rules: join codes, publish validation, lineage classification."""

from __future__ import annotations

import random

from .errors import ValidationError
from .model import (
    JOIN_CODE_ALPHABET,
    JOIN_CODE_LEN,
    MAX_SLOTS,
    MAX_TITLE_LEN,
    Inquiry,
    SourceClass,
)


def generate_join_code(rng: random.Random) -> str:
    return "".join(rng.choice(JOIN_CODE_ALPHABET) for _ in range(JOIN_CODE_LEN))


def publish_problems(inquiry: Inquiry) -> list[str]:
    """Names of the parts still missing before the inquiry can be published."""
    problems = []
    if not inquiry.title.strip():
        problems.append("title")
    if not inquiry.slots:
        problems.append("slots")
    return problems


def require_publishable(inquiry: Inquiry) -> None:
    problems = publish_problems(inquiry)
    if problems:
        raise ValidationError(
            f"cannot publish: missing {', '.join(problems)}", fields=problems
        )


def classify_source(source_author_id: str, caller_id: str,
                    source_is_exemplar: bool) -> SourceClass:
    """Bucket a replication/remix by where its source came from."""
    if source_is_exemplar:
        return SourceClass.EXEMPLAR
    if source_author_id == caller_id:
        return SourceClass.OWN
    return SourceClass.OTHER_STUDENT


def remix_title(source_title: str) -> str:
    suffix = " (remix)"
    title = source_title.strip() or "Untitled"
    if len(title) + len(suffix) > MAX_TITLE_LEN:
        title = title[: MAX_TITLE_LEN - len(suffix)]
    return title + suffix


def next_slot_index(slot_indices: list[int]) -> int | None:
    """Next free capture index, or None when all MAX_SLOTS are taken."""
    taken = set(slot_indices)
    for i in range(MAX_SLOTS):
        if i not in taken:
            return i
    return None
