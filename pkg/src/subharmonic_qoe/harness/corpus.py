"""Seeded synthetic corpora standing in for a recorded voice database.

The mixed corpus has two kinds of recordings:

* strongly subharmonic ones, period-2 AM at ``strong_extent`` on every
  frame, making up ``strong_fraction`` of all frames;
* otherwise harmonic ones that carry a few isolated frames of weak period-2
  AM (``weak_extent``), on which a bare ACF pick tends to slip to fo/2.

Temporal smoothing can repair the isolated weak frames but not a recording
that is subharmonic throughout, so the corpus separates the two estimator
modes in the expected direction.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from ..signal import FrameSpec, Waveform
from ..synth import SynthSpec, TruthTrack, synthesize

__all__ = ["MixedCorpusSpec", "mixed_corpus", "am_corpus", "clean_corpus"]


@dataclass(frozen=True)
class MixedCorpusSpec:
    n_recordings: int = 100
    n_frames: int = 20
    strong_fraction: float = 0.25
    strong_extent: float = 0.6
    weak_extent: float = 0.25
    weak_per_recording: int = 2
    fo_range: Tuple[float, float] = (100.0, 320.0)
    # fo/2 must stay above the 60 Hz search floor for a subharmonic pick to exist
    strong_fo_range: Tuple[float, float] = (130.0, 320.0)
    jitter: float = 0.005
    noise_snr_db: float = 30.0
    rate: int = 8000
    seed: int = 2025


def _ids(n):
    width = max(3, len(str(n - 1)))
    return [f"rec{i:0{width}d}" for i in range(n)]


def mixed_corpus(spec: MixedCorpusSpec = MixedCorpusSpec(), frames: FrameSpec = FrameSpec()):
    """Build the mixed corpus.

    Returns:
        ``(waves, truths, specs)`` dicts keyed by recording id
    """
    rng = np.random.default_rng(spec.seed)
    n_strong = int(round(spec.strong_fraction * spec.n_recordings))
    kinds = np.array([True] * n_strong + [False] * (spec.n_recordings - n_strong))
    rng.shuffle(kinds)
    duration = frames.length_s + (spec.n_frames - 1) * frames.hop_s
    waves: Dict[str, Waveform] = {}
    truths: Dict[str, TruthTrack] = {}
    specs: Dict[str, SynthSpec] = {}
    slots = np.arange(1, spec.n_frames - 1, 3)
    for i, (rec_id, strong) in enumerate(zip(_ids(spec.n_recordings), kinds)):
        lo, hi = spec.strong_fo_range if strong else spec.fo_range
        fo = float(np.round(rng.uniform(lo, hi), 1))
        sched = np.zeros(spec.n_frames)
        if strong:
            sched[:] = spec.strong_extent
        else:
            picks = rng.choice(slots, size=min(spec.weak_per_recording, slots.size), replace=False)
            sched[picks] = spec.weak_extent
        s = SynthSpec(
            fo_hz=fo, duration_s=duration, rate=spec.rate, subh_period=2,
            am_schedule=tuple(float(a) for a in sched), schedule_hop_s=frames.hop_s,
            jitter=spec.jitter, noise_snr_db=spec.noise_snr_db, seed=int(spec.seed) * 1000 + i,
        )
        waves[rec_id], truths[rec_id] = synthesize(s, frames, rec_id)
        specs[rec_id] = s
    return waves, truths, specs


def am_corpus(extent: float, n_recordings: int = 10, n_frames: int = 20, fo_range=(130.0, 320.0),
              seed: int = 7, frames: FrameSpec = FrameSpec(), **synth_kw):
    """Recordings with constant period-2 AM of the given extent on every frame."""
    rng = np.random.default_rng(seed)
    duration = frames.length_s + (n_frames - 1) * frames.hop_s
    waves, truths = {}, {}
    for i, rec_id in enumerate(_ids(n_recordings)):
        fo = float(np.round(rng.uniform(*fo_range), 1))
        s = SynthSpec(fo_hz=fo, duration_s=duration, subh_period=2, am_extent=extent,
                      seed=seed * 1000 + i, **synth_kw)
        waves[rec_id], truths[rec_id] = synthesize(s, frames, rec_id)
    return waves, truths


def clean_corpus(fos, n_frames: int = 20, seed: int = 11, frames: FrameSpec = FrameSpec(), **synth_kw):
    """One harmonic recording per f0 in ``fos``."""
    duration = frames.length_s + (n_frames - 1) * frames.hop_s
    waves, truths = {}, {}
    for i, (rec_id, fo) in enumerate(zip(_ids(len(fos)), fos)):
        s = SynthSpec(fo_hz=float(fo), duration_s=duration, seed=seed * 1000 + i, **synth_kw)
        waves[rec_id], truths[rec_id] = synthesize(s, frames, rec_id)
    return waves, truths
