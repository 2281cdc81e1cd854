"""Per-frame evaluation of estimator tracks against annotated truth."""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional

import numpy as np

from .. import acf
from ..errors import FrameRangeError, InvalidInputError
from ..profile import QoELabel, classify, fo_intervals, harmonic_power_profile
from ..shr import elongation_factor, measure_shr
from ..signal import Waveform, frame_slice, periodogram, resample
from ..synth import TruthTrack
from ..tracks import EstimateTrack
from .config import HarnessConfig

log = logging.getLogger(__name__)

__all__ = ["FrameRecord", "evaluate", "run_builtin", "EvaluationError"]


class EvaluationError(RuntimeError):
    """A recording could not be evaluated (missing or short track, bad frame)."""


@dataclass
class FrameRecord:
    """Outcome of every estimator on one voiced truth frame."""

    recording: str
    frame_index: int
    time_s: float
    fo_star: float
    estimates: Dict[str, float] = field(default_factory=dict)
    labels: Dict[str, QoELabel] = field(default_factory=dict)
    m_hat: Dict[str, Optional[float]] = field(default_factory=dict)
    shr_db: Optional[float] = None
    shr_m: Optional[int] = None


def _covers(track: EstimateTrack, first: float, last: float, slack: float) -> bool:
    return len(track) > 0 and track.times[0] <= first + slack and track.times[-1] >= last - slack


def _evaluate_recording(rec_id, wave, truth, tracks, cfg: HarnessConfig) -> List[FrameRecord]:
    if wave.rate != cfg.analysis_rate:
        wave = resample(wave, cfg.analysis_rate)
    voiced = np.flatnonzero(truth.voiced)
    if voiced.size == 0:
        return []
    first, last = truth.times[voiced[0]], truth.times[voiced[-1]]
    slack = cfg.frames.hop_s / 2
    for name, per_rec in tracks.items():
        tr = per_rec.get(rec_id)
        if tr is None:
            raise EvaluationError(f"estimator {name!r} has no track for recording {rec_id!r}")
        if not _covers(tr, first, last, slack):
            raise EvaluationError(
                f"track of {name!r} for {rec_id!r} spans [{tr.times[0] if len(tr) else None}, "
                f"{tr.times[-1] if len(tr) else None}] s, not the voiced frames [{first}, {last}] s"
            )

    out = []
    for j in voiced:
        idx, t, fo_star = int(truth.frame_index[j]), float(truth.times[j]), float(truth.fo_star[j])
        try:
            x = frame_slice(wave, cfg.frames, idx)
        except FrameRangeError as e:
            raise EvaluationError(f"{rec_id}: {e}") from None
        sd = periodogram(x, wave.rate, cfg.resolution_hz)
        profile = harmonic_power_profile(sd, cfg.profile_fo_min, cfg.profile_fo_max)
        try:
            intervals = fo_intervals(profile, fo_star)
        except InvalidInputError as e:
            raise EvaluationError(f"{rec_id} frame {idx}: {e}") from None
        rec = FrameRecord(rec_id, idx, t, fo_star)
        for name in sorted(tracks):
            fo_hat = tracks[name][rec_id].pick(t)
            rec.estimates[name] = fo_hat
            rec.labels[name] = classify(fo_hat, intervals)
            rec.m_hat[name] = fo_star / fo_hat if fo_hat > 0 else None
        base = rec.labels.get(cfg.baseline)
        if base is not None and base.category == "subharmonic":
            fo_hat = rec.estimates[cfg.baseline]
            _, m = elongation_factor(fo_star, fo_hat, cfg.m_round_tol)
            if m is not None and m >= 2:
                shr = measure_shr(sd, fo_hat, m)
                rec.shr_db, rec.shr_m = shr.db, shr.m
        out.append(rec)
    return out


def _job(args):
    rec_id, wave, truth, tracks, cfg = args
    try:
        return rec_id, _evaluate_recording(rec_id, wave, truth, tracks, cfg), None
    except EvaluationError as e:
        return rec_id, [], str(e)


def evaluate(
    corpus: Mapping[str, Waveform],
    truth: Mapping[str, TruthTrack],
    tracks: Mapping[str, Mapping[str, EstimateTrack]],
    config: HarnessConfig = HarnessConfig(),
    workers: int = 1,
    errors: Optional[list] = None,
) -> List[FrameRecord]:
    """Label every estimator on every voiced truth frame.

    Args:
        corpus: waveforms keyed by recording id
        truth: truth tracks keyed by recording id
        tracks: ``{estimator: {recording: track}}``
        config: frame layout, profile bounds and baseline name
        workers: process count; output does not depend on it
        errors: if given, ``(recording, message)`` pairs for recordings
            that failed are appended here; evaluation goes on without them

    Returns:
        frame records ordered by recording id and frame index
    """
    jobs = []
    for rec_id in sorted(corpus):
        if rec_id not in truth:
            msg = f"no truth annotation for recording {rec_id!r}"
            log.warning(msg)
            if errors is not None:
                errors.append((rec_id, msg))
            continue
        per_rec = {name: {rec_id: t[rec_id]} for name, t in tracks.items() if rec_id in t}
        missing = [name for name in tracks if rec_id not in tracks[name]]
        if missing:
            msg = f"estimator(s) {', '.join(sorted(missing))} have no track for recording {rec_id!r}"
            log.warning(msg)
            if errors is not None:
                errors.append((rec_id, msg))
            continue
        jobs.append((rec_id, corpus[rec_id], truth[rec_id], per_rec, config))

    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_job, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        results = [_job(j) for j in jobs]

    records = []
    for rec_id, recs, err in sorted(results, key=lambda r: r[0]):
        if err is not None:
            log.warning(err)
            if errors is not None:
                errors.append((rec_id, err))
            continue
        records.extend(recs)
    return records


def _builtin_job(args):
    rec_id, wave, cfg = args
    if wave.rate != cfg.analysis_rate:
        wave = resample(wave, cfg.analysis_rate)
    return rec_id, (
        acf.estimate(wave, cfg.frames, cfg.tracker, postprocess=False, name="acf"),
        acf.estimate(wave, cfg.frames, cfg.tracker, postprocess=True, name="viterbi"),
    )


def run_builtin(corpus: Mapping[str, Waveform], config: HarnessConfig = HarnessConfig(), workers: int = 1):
    """Tracks of the built-in estimator in ACF mode (``acf``) and with Viterbi smoothing (``viterbi``)."""
    jobs = [(rec_id, corpus[rec_id], config) for rec_id in sorted(corpus)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_builtin_job, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        results = [_builtin_job(j) for j in jobs]
    out = {"acf": {}, "viterbi": {}}
    for rec_id, (a, v) in results:
        out["acf"][rec_id] = a
        out["viterbi"][rec_id] = v
    return out
