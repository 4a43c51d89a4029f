"""Deterministic first-pass rubric engine for inquiry quality.

Assigns one of four ordered categories from the inquiry's text and capture
labels.  The detectors are transparent keyword/structure heuristics driven by
a plain-text cue configuration, and a manual override path exists precisely
because text-only coding under-measures what a student actually understood.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import IntEnum
from importlib import resources

from senselab.core import Inquiry

FEATURE_LABELED = "has_labeled_measurements"
FEATURE_HYPOTHESIS = "has_hypothesis_marker"
FEATURE_STEPS = "has_method_steps"
FEATURE_INTERPRETATION = "has_interpretation"

OVERRIDE_EVIDENCE = "manual_override"

MIN_DISTINCT_LABELS = 2
MIN_STEP_LINES = 2


class ScoreCategory(IntEnum):
    """Ordered rubric categories; comparisons use this total order."""

    NULL = 0
    NAIVE = 1
    EMERGING = 2
    INFORMED = 3

    @property
    def wire_name(self) -> str:
        return self.name.lower()

    @property
    def display(self) -> str:
        return self.name.capitalize()

    @classmethod
    def from_wire_name(cls, name: str) -> "ScoreCategory":
        try:
            return cls[name.upper()]
        except KeyError:
            raise ValueError(f"unknown score category: {name!r}") from None


@dataclass(frozen=True)
class InquiryScore:
    category: ScoreCategory
    evidence: tuple[str, ...]
    overridden: bool = False


def _compile_cues(cues: list[str]) -> re.Pattern:
    """One alternation over all cues; * suffix allows word continuations."""
    parts = []
    for cue in cues:
        if cue.endswith("*"):
            stem = re.escape(cue[:-1].strip())
            parts.append(rf"\b{stem}\w*")
        else:
            words = [re.escape(w) for w in cue.split()]
            parts.append(r"\b" + r"\s+".join(words) + r"\b")
    return re.compile("|".join(parts), re.IGNORECASE)


# Numbered ("1.", "2)", "step 3") or dash-bulleted line starts.
_ENUMERATED_LINE = re.compile(r"^\s*(?:\d+\s*[.):\-]|step\s+\d+\b)", re.IGNORECASE)


@dataclass(frozen=True)
class CueConfig:
    hypothesis: tuple[str, ...]
    interpretation: tuple[str, ...]
    step_verbs: tuple[str, ...]

    def hypothesis_pattern(self) -> re.Pattern:
        return _compile_cues(list(self.hypothesis))

    def interpretation_pattern(self) -> re.Pattern:
        return _compile_cues(list(self.interpretation))


def parse_cue_config(text: str) -> CueConfig:
    """Parse the cue file: one cue per line, section headers in brackets."""
    sections: dict[str, list[str]] = {}
    current: list[str] | None = None
    for raw_line in text.splitlines():
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            current = sections.setdefault(line[1:-1].strip().lower(), [])
            continue
        if current is None:
            raise ValueError(f"cue line before any [section] header: {line!r}")
        current.append(line.lower())
    missing = {"hypothesis", "interpretation", "step_verbs"} - set(sections)
    if missing:
        raise ValueError(f"cue config missing sections: {sorted(missing)}")
    return CueConfig(
        hypothesis=tuple(sections["hypothesis"]),
        interpretation=tuple(sections["interpretation"]),
        step_verbs=tuple(sections["step_verbs"]),
    )


def load_cue_config(path: str | None = None) -> CueConfig:
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            return parse_cue_config(fh.read())
    data = resources.files("senselab.scoring").joinpath("data/cues.txt")
    return parse_cue_config(data.read_text(encoding="utf-8"))


DEFAULT_CUES = load_cue_config()


def _is_step_line(line: str, step_verbs: tuple[str, ...]) -> bool:
    if _ENUMERATED_LINE.match(line):
        return True
    stripped = line.strip().lstrip("-*•").strip()
    first = stripped.split(maxsplit=1)[0].lower() if stripped else ""
    return first in step_verbs


def extract_features(inquiry: Inquiry, cues: CueConfig = DEFAULT_CUES) -> frozenset[str]:
    """Pure, case-insensitive feature detectors over the inquiry's text."""
    features = set()

    labels = {s.label.strip().casefold() for s in inquiry.slots if s.label.strip()}
    if len(labels) >= MIN_DISTINCT_LABELS:
        features.add(FEATURE_LABELED)

    label_text = "\n".join(s.label for s in inquiry.slots)
    all_text = "\n".join((inquiry.title, inquiry.description, inquiry.notes, label_text))
    if cues.hypothesis_pattern().search(all_text):
        features.add(FEATURE_HYPOTHESIS)

    body_text = "\n".join((inquiry.description, inquiry.notes))
    if cues.interpretation_pattern().search(body_text):
        features.add(FEATURE_INTERPRETATION)

    step_lines = sum(
        1 for line in body_text.splitlines() if _is_step_line(line, cues.step_verbs)
    )
    if step_lines >= MIN_STEP_LINES:
        features.add(FEATURE_STEPS)

    return frozenset(features)


def categorize(features: frozenset[str]) -> ScoreCategory:
    """Category from features alone.

    Informed demands the full arc (hypothesis, method, interpretation);
    Emerging any reasoning cue; Naive anything observable but unreasoned;
    Null nothing at all.
    """
    if not features:
        return ScoreCategory.NULL
    if {FEATURE_HYPOTHESIS, FEATURE_STEPS, FEATURE_INTERPRETATION} <= features:
        return ScoreCategory.INFORMED
    if FEATURE_HYPOTHESIS in features or FEATURE_INTERPRETATION in features:
        return ScoreCategory.EMERGING
    return ScoreCategory.NAIVE


def score_inquiry(inquiry: Inquiry, cues: CueConfig = DEFAULT_CUES) -> InquiryScore:
    """Engine category with rule trace; a stored override wins and is flagged."""
    features = extract_features(inquiry, cues)
    if inquiry.override is not None:
        return InquiryScore(
            category=ScoreCategory.from_wire_name(inquiry.override.category),
            evidence=(OVERRIDE_EVIDENCE, *sorted(features)),
            overridden=True,
        )
    return InquiryScore(category=categorize(features), evidence=tuple(sorted(features)))
