"""
Benchmarking an external estimator
==================================

External estimators enter the harness as ``time_s,fo_hz`` tracks. Here a
made-up estimator samples every 10 ms and halves its answer whenever the
frame is strongly modulated. It is evaluated next to the built-in ACF and
Viterbi modes on a small mixed corpus, and the reports are written to a
temporary directory.
"""

import tempfile
from pathlib import Path

import numpy as np

from subharmonic_qoe.harness import (
    MixedCorpusSpec,
    build_report,
    evaluate,
    ingest_track,
    mixed_corpus,
    run_builtin,
    write_report,
    write_track,
)
from subharmonic_qoe.tracks import EstimateTrack

waves, truths, specs = mixed_corpus(MixedCorpusSpec(n_recordings=12, seed=3))

###############################################################################
# Write the external tracks to disk the way a real tool would, then read them
# back. Frame centers fall halfway between two 10-ms samples; the earlier one
# is taken.

out = Path(tempfile.mkdtemp())
for rec, truth in truths.items():
    t = np.arange(0, 1.0, 0.01)
    sched = np.asarray(specs[rec].am_schedule)
    block = np.minimum((t / 0.05).astype(int), sched.size - 1)
    fo = np.where(sched[block] >= 0.5, truth.fo_star[0] / 2, truth.fo_star[0])
    (out / "tracks" / "halver").mkdir(parents=True, exist_ok=True)
    write_track(out / "tracks" / "halver" / f"{rec}.csv", EstimateTrack("halver", t, fo))

tracks = run_builtin(waves)
tracks["halver"] = {rec: ingest_track(out / "tracks" / "halver" / f"{rec}.csv") for rec in truths}

###############################################################################
# Evaluate, then print the text summary.

records = evaluate(waves, truths, tracks)
write_report(build_report(records), out / "report")
print((out / "report" / "report.txt").read_text())
print(f"all report files in {out / 'report'}")
