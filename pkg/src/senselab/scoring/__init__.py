"""Rubric scoring of inquiries: Null < Naive < Emerging < Informed."""

from .rubric import (
    DEFAULT_CUES,
    FEATURE_HYPOTHESIS,
    FEATURE_INTERPRETATION,
    FEATURE_LABELED,
    FEATURE_STEPS,
    OVERRIDE_EVIDENCE,
    CueConfig,
    InquiryScore,
    ScoreCategory,
    categorize,
    extract_features,
    load_cue_config,
    parse_cue_config,
    score_inquiry,
)

__all__ = [
    "DEFAULT_CUES",
    "FEATURE_HYPOTHESIS",
    "FEATURE_INTERPRETATION",
    "FEATURE_LABELED",
    "FEATURE_STEPS",
    "OVERRIDE_EVIDENCE",
    "CueConfig",
    "InquiryScore",
    "ScoreCategory",
    "categorize",
    "extract_features",
    "load_cue_config",
    "parse_cue_config",
    "score_inquiry",
]
