"""Bundled evaluation corpus: generator, serialization, store loading."""

from .generator import (
    DEFAULT_SEED,
    LOCKDOWN_END,
    LOCKDOWN_START,
    SCORE_TARGETS,
    SENSOR_TARGETS,
    TOTAL_INQUIRIES,
    Corpus,
    generate_corpus,
)
from .loader import (
    DEMO_PASSWORD,
    CorpusFiles,
    bundled_corpus_dir,
    load_corpus_into_db,
    read_corpus,
    write_corpus,
)

__all__ = [
    "DEFAULT_SEED",
    "DEMO_PASSWORD",
    "LOCKDOWN_END",
    "LOCKDOWN_START",
    "SCORE_TARGETS",
    "SENSOR_TARGETS",
    "TOTAL_INQUIRIES",
    "Corpus",
    "CorpusFiles",
    "bundled_corpus_dir",
    "generate_corpus",
    "load_corpus_into_db",
    "read_corpus",
    "write_corpus",
]
