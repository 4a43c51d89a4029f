"""Inquiry workflow domain model and rules."""

from .errors import (
    AuthorizationError,
    DomainError,
    ExpiredCodeError,
    NotFoundError,
    SlotLimitError,
    StateError,
    ValidationError,
)
from .model import (
    JOIN_CODE_ALPHABET,
    JOIN_CODE_LEN,
    MAX_COMMENT_LEN,
    MAX_LABEL_LEN,
    MAX_SLOTS,
    MAX_TITLE_LEN,
    CaptureSlot,
    ClassGroup,
    Comment,
    Inquiry,
    InquiryStatus,
    LineageKind,
    LineageLink,
    Role,
    ScoreOverride,
    SourceClass,
    UserAccount,
    inquiry_from_dict,
    inquiry_to_dict,
    slot_from_dict,
    slot_to_dict,
)
from .rules import (
    classify_source,
    generate_join_code,
    next_slot_index,
    publish_problems,
    remix_title,
    require_publishable,
)

__all__ = [
    "JOIN_CODE_ALPHABET",
    "JOIN_CODE_LEN",
    "MAX_COMMENT_LEN",
    "MAX_LABEL_LEN",
    "MAX_SLOTS",
    "MAX_TITLE_LEN",
    "AuthorizationError",
    "CaptureSlot",
    "ClassGroup",
    "Comment",
    "DomainError",
    "ExpiredCodeError",
    "Inquiry",
    "InquiryStatus",
    "LineageKind",
    "LineageLink",
    "NotFoundError",
    "Role",
    "ScoreOverride",
    "SlotLimitError",
    "SourceClass",
    "StateError",
    "UserAccount",
    "ValidationError",
    "classify_source",
    "generate_join_code",
    "inquiry_from_dict",
    "inquiry_to_dict",
    "next_slot_index",
    "publish_problems",
    "remix_title",
    "require_publishable",
    "slot_from_dict",
    "slot_to_dict",
]
