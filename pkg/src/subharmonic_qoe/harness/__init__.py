"""Corpus I/O, per-frame evaluation, reports and the command line."""
from .config import CONFIG_KEYS, HarnessConfig, apply_overrides, load_config
from .corpus import MixedCorpusSpec, am_corpus, clean_corpus, mixed_corpus
from .csvio import (
    ingest_annotations,
    ingest_track,
    read_records,
    write_annotations,
    write_records,
    write_track,
)
from .evaluate import EvaluationError, FrameRecord, evaluate, run_builtin
from .reports import (
    build_report,
    contingency_table,
    mhat_histogram,
    rates_report,
    render_report,
    shr_histogram,
    write_report,
)
from .wavio import ingest_wav, write_wav
