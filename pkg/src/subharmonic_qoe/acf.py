"""Autocorrelation f0 estimator with optional Viterbi post-processing.

Per frame, peaks of the window-corrected normalized autocorrelation become
f0 candidates next to one unvoiced candidate. A Viterbi pass then picks one
candidate per frame. With the octave-jump and voiced/unvoiced costs set to
zero the pass degenerates to a per-frame argmax, which is the plain "ACF"
estimator; with the default costs it behaves like a Praat-style tracker.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import List, Sequence

import numpy as np

from .errors import InvalidInputError
from .signal import FrameSpec, Waveform, frame_center, frame_count, frame_slice
from .tracks import EstimateTrack

__all__ = [
    "Candidate",
    "TrackerConfig",
    "autocorr_candidates",
    "path_cost",
    "viterbi_track",
    "estimate",
]

# lag-domain oversampling of the autocorrelation before peak picking
_UPSAMPLE = 8


@dataclass(frozen=True)
class Candidate:
    fo_hz: float
    strength: float

    @property
    def voiced(self) -> bool:
        return self.fo_hz > 0


@dataclass(frozen=True)
class TrackerConfig:
    """Search range, candidate limits and path costs (Praat defaults)."""

    fo_min: float = 60.0
    fo_max: float = 700.0
    max_candidates: int = 15
    voicing_threshold: float = 0.45
    silence_threshold: float = 0.03
    octave_cost: float = 0.01
    octave_jump_cost: float = 0.35
    voiced_unvoiced_cost: float = 0.14

    def __post_init__(self):
        if not 0 < self.fo_min < self.fo_max:
            raise InvalidInputError("need 0 < fo_min < fo_max")
        if self.max_candidates < 2:
            raise InvalidInputError("max_candidates must leave room for a voiced and the unvoiced candidate")
        for name in ("octave_cost", "octave_jump_cost", "voiced_unvoiced_cost", "silence_threshold"):
            if getattr(self, name) < 0:
                raise InvalidInputError(f"{name} must be >= 0")

    def acf_mode(self) -> "TrackerConfig":
        """Copy with both transition costs zeroed."""
        return replace(self, octave_jump_cost=0.0, voiced_unvoiced_cost=0.0)

    def check_rate(self, rate: float) -> None:
        if not self.fo_max < rate / 2:
            raise InvalidInputError(f"fo_max={self.fo_max} must be below Nyquist ({rate / 2})")


def _hann(n: int) -> np.ndarray:
    if n == 1:
        return np.ones(1)
    return 0.5 - 0.5 * np.cos(2 * np.pi * np.arange(n) / (n - 1))


def _upsampled_acf(x: np.ndarray, n_fft: int) -> np.ndarray:
    """Band-limited interpolation of the linear autocorrelation at lag step 1/_UPSAMPLE."""
    spec = np.fft.rfft(x, n_fft)
    power = spec.real ** 2 + spec.imag ** 2
    power[-1] *= 0.5
    return np.fft.irfft(power, n_fft * _UPSAMPLE)


def autocorr_candidates(frame, rate: float, cfg: TrackerConfig = TrackerConfig(), global_peak=None) -> List[Candidate]:
    """Candidates for one frame, strongest first; the unvoiced candidate is always present.

    Args:
        frame: samples of the analysis interval
        rate: sampling rate (S/s)
        cfg: search range, thresholds and octave cost
        global_peak: absolute peak of the whole recording, used for the
            silence test; defaults to the frame's own peak

    Returns:
        at most ``cfg.max_candidates`` candidates sorted by decreasing strength
    """
    x = np.asarray(frame, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise InvalidInputError("frame must hold at least 2 samples")
    cfg.check_rate(rate)
    n = x.size
    x = x - x.mean()
    local_peak = float(np.max(np.abs(x)))
    if global_peak is None:
        global_peak = local_peak
    vt = cfg.voicing_threshold
    if global_peak > 0 and cfg.silence_threshold > 0:
        loudness = (local_peak / global_peak) / (cfg.silence_threshold / (1 + vt))
    else:
        loudness = 0.0 if global_peak <= 0 else math.inf
    unvoiced = Candidate(0.0, vt + max(0.0, 2.0 - loudness))
    if local_peak == 0:
        return [unvoiced]

    win = _hann(n)
    n_fft = 1 << int(math.ceil(math.log2(2 * n)))
    r = _upsampled_acf(x * win, n_fft)
    rw = _upsampled_acf(win, n_fft)
    lag_lo = rate / cfg.fo_max
    lag_hi = min(rate / cfg.fo_min, n - 1)
    i_lo = max(1, int(math.ceil(lag_lo * _UPSAMPLE)))
    i_hi = int(math.floor(lag_hi * _UPSAMPLE))
    if i_hi <= i_lo:
        return [unvoiced]
    idx = np.arange(i_lo - 1, i_hi + 2)
    rn = (r[idx] / r[0]) / (rw[idx] / rw[0])

    mid = rn[1:-1]
    peak = np.flatnonzero((mid > rn[:-2]) & (mid >= rn[2:])) + 1
    voiced = []
    for p in peak:
        y0, y1, y2 = rn[p - 1], rn[p], rn[p + 1]
        denom = y0 - 2 * y1 + y2
        delta = 0.5 * (y0 - y2) / denom if denom < 0 else 0.0
        value = y1 - 0.25 * (y0 - y2) * delta
        if value > 1:
            value = 1 / value
        if value <= 0.5 * vt:
            continue
        lag = (idx[p] + delta) / _UPSAMPLE
        fo = rate / lag
        if not cfg.fo_min <= fo <= cfg.fo_max:
            continue
        voiced.append(Candidate(float(fo), float(value - cfg.octave_cost * math.log2(cfg.fo_min / fo))))

    voiced.sort(key=lambda c: (-c.strength, -c.fo_hz))
    out = voiced[: cfg.max_candidates - 1] + [unvoiced]
    out.sort(key=lambda c: (-c.strength, -c.fo_hz))
    return out


def _transition(f1: np.ndarray, f2: np.ndarray, cfg: TrackerConfig) -> np.ndarray:
    a, b = np.meshgrid(f1, f2, indexing="ij")
    both = (a > 0) & (b > 0)
    cost = np.where((a > 0) ^ (b > 0), cfg.voiced_unvoiced_cost, 0.0)
    jump = cfg.octave_jump_cost * np.abs(np.log2(np.where(both, a, 1.0) / np.where(both, b, 1.0)))
    return cost + jump


def path_cost(path: Sequence[Candidate], cfg: TrackerConfig) -> float:
    """Total cost of a candidate sequence: sum of -strength plus transition costs."""
    total = -sum(c.strength for c in path)
    for c1, c2 in zip(path[:-1], path[1:]):
        total += float(_transition(np.array([c1.fo_hz]), np.array([c2.fo_hz]), cfg)[0, 0])
    return total


def viterbi_track(per_frame: Sequence[Sequence[Candidate]], cfg: TrackerConfig = TrackerConfig(), return_path=False):
    """Minimum-cost candidate sequence.

    Node cost is ``-strength``; moving between two voiced candidates costs
    ``octave_jump_cost * |log2(f1 / f2)|`` and a voicing change costs
    ``voiced_unvoiced_cost``. Equal-cost alternatives resolve toward the
    higher-frequency candidate.

    Returns:
        list of f0 values (0 for unvoiced), or the chosen candidates when
        ``return_path`` is set
    """
    if len(per_frame) == 0:
        raise InvalidInputError("no frames to decode")
    frames = []
    for cands in per_frame:
        if len(cands) == 0:
            raise InvalidInputError("every frame needs at least one candidate")
        frames.append(sorted(cands, key=lambda c: -c.fo_hz))
    freqs = [np.array([c.fo_hz for c in fr]) for fr in frames]
    node = [np.array([-c.strength for c in fr]) for fr in frames]

    acc = node[0]
    back = []
    for t in range(1, len(frames)):
        total = acc[:, None] + _transition(freqs[t - 1], freqs[t], cfg)
        arg = np.argmin(total, axis=0)
        back.append(arg)
        acc = total[arg, np.arange(total.shape[1])] + node[t]
    j = int(np.argmin(acc))
    picks = [j]
    for arg in reversed(back):
        j = int(arg[j])
        picks.append(j)
    picks.reverse()
    chosen = [fr[j] for fr, j in zip(frames, picks)]
    if return_path:
        return chosen
    return [c.fo_hz for c in chosen]


def estimate(
    wave: Waveform,
    spec: FrameSpec = FrameSpec(),
    cfg: TrackerConfig = TrackerConfig(),
    postprocess: bool = True,
    name=None,
) -> EstimateTrack:
    """Run the tracker over every complete frame of ``wave``.

    ``postprocess=False`` zeroes both transition costs (ACF mode). Output
    times are frame centers.
    """
    cfg.check_rate(wave.rate)
    if not postprocess:
        cfg = cfg.acf_mode()
    if name is None:
        name = "viterbi" if postprocess else "acf"
    n_frames = frame_count(wave, spec)
    times = np.array([frame_center(spec, i) for i in range(n_frames)])
    if n_frames == 0:
        return EstimateTrack(name, times, np.zeros(0))
    x = wave.samples
    global_peak = float(np.max(np.abs(x - x.mean())))
    cands = [autocorr_candidates(frame_slice(wave, spec, i), wave.rate, cfg, global_peak) for i in range(n_frames)]
    return EstimateTrack(name, times, np.asarray(viterbi_track(cands, cfg)))
