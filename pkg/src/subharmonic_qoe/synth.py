"""Synthetic sustained-vowel signals with controlled period-M subharmonics.

The harmonic source is a sum of cosines at multiples of ``fo_hz`` with a
spectral tilt. Subharmonics of period M come from amplitude and/or frequency
modulation at ``fo_hz / M``::

    x(t) = [1 + a cos(g(t) / M + phi_m)] * sum_k A_k cos(k * theta(t) + phi_k) + noise
    theta(t) = g(t) + fm * M * sin(g(t) / M + phi_m)

where the glottal phase g(t) advances 2 pi per cycle, i.e. ``2 pi fo t``
unless cycle-to-cycle ``jitter`` is requested.

Harmonic phases are seeded pseudo-random sign flips on top of a phase ramp
chosen so that, for M = 2, the two AM sidebands landing on each half-integer
multiple of ``fo`` are in quadrature. Their powers then add without cross
terms and the subharmonic-to-harmonic power ratio equals ``a**2 / 2`` for
every seed (see :func:`expected_shr_am`).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidSpecError
from .signal import FrameSpec, Waveform, frame_center

__all__ = ["SynthSpec", "TruthTrack", "synthesize", "expected_shr_am", "harmonic_amplitudes"]


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of one synthetic recording.

    ``am_schedule`` optionally overrides ``am_extent`` with one extent per
    ``schedule_hop_s`` block, which lets a single recording mix harmonic and
    subharmonic frames. ``n_harmonics=None`` means as many as fit below
    Nyquist including the modulation sidebands. Noise level is given either
    as ``noise_snr_db`` (against total harmonic power) or as an absolute
    ``noise_rms``; the latter wins when both are set.
    """

    fo_hz: float = 200.0
    duration_s: float = 1.0
    rate: int = 8000
    n_harmonics: Optional[int] = None
    tilt_db_per_octave: float = -6.0
    subh_period: int = 1
    am_extent: float = 0.0
    fm_extent: float = 0.0
    jitter: float = 0.0
    noise_snr_db: Optional[float] = None
    noise_rms: Optional[float] = None
    level_rms: float = 0.1
    seed: int = 0
    am_schedule: Optional[Sequence[float]] = None
    schedule_hop_s: float = 0.050

    def __post_init__(self):
        if self.rate <= 0 or int(self.rate) != self.rate:
            raise InvalidSpecError("rate must be a positive integer")
        if not 0 < self.fo_hz < self.rate / 2:
            raise InvalidSpecError(
                f"fo_hz={self.fo_hz} must lie strictly between 0 and Nyquist ({self.rate / 2})"
            )
        if self.duration_s <= 0:
            raise InvalidSpecError("duration must be positive")
        if int(self.subh_period) != self.subh_period or self.subh_period < 1:
            raise InvalidSpecError("subharmonic period M must be a positive integer")
        extents = [self.am_extent] + list(self.am_schedule or [])
        if any(not 0 <= a < 1 for a in extents):
            raise InvalidSpecError("AM extent must lie in [0, 1)")
        if not 0 <= self.fm_extent <= 0.05:
            raise InvalidSpecError("FM extent must lie in [0, 0.05]")
        if not 0 <= self.jitter <= 0.1:
            raise InvalidSpecError("jitter must lie in [0, 0.1]")
        if self.n_harmonics is not None and self.n_harmonics < 0:
            raise InvalidSpecError("n_harmonics must be nonnegative")
        if self.level_rms < 0 or not np.isfinite(self.level_rms):
            raise InvalidSpecError("level_rms must be finite and nonnegative")
        if self.noise_rms is not None and self.noise_rms < 0:
            raise InvalidSpecError("noise_rms must be nonnegative")
        if self.schedule_hop_s <= 0:
            raise InvalidSpecError("schedule_hop_s must be positive")


@dataclass(frozen=True)
class TruthTrack:
    """Per-frame annotated truth on a frame grid.

    ``fo_star`` holds the speaking f0 (never fo/M); entries of unvoiced frames
    are 0. ``times`` are frame centers in seconds.
    """

    recording: str
    frame_index: np.ndarray
    times: np.ndarray
    fo_star: np.ndarray
    voiced: np.ndarray

    def __post_init__(self):
        for name in ("frame_index", "times", "fo_star", "voiced"):
            object.__setattr__(self, name, np.asarray(getattr(self, name)))
        n = self.times.size
        if any(getattr(self, a).shape != (n,) for a in ("frame_index", "fo_star", "voiced")):
            raise ValueError("truth track columns must have equal length")

    def __len__(self):
        return self.times.size


def expected_shr_am(a: float) -> float:
    """Subharmonic-to-harmonic power ratio of period-2 AM with extent ``a``: ``a**2 / 2``."""
    if not 0 <= a < 1:
        raise InvalidSpecError("AM extent must lie in [0, 1)")
    return a * a / 2


def _max_harmonics(spec: SynthSpec) -> int:
    # highest component (harmonic plus its upper modulation sideband) stays below Nyquist
    top = spec.rate / 2
    modulated = spec.subh_period > 1 and (spec.am_extent > 0 or spec.fm_extent > 0 or spec.am_schedule)
    side = spec.fo_hz / spec.subh_period if modulated else 0.0
    spread = (1 + spec.fm_extent) * (1 + 3 * spec.jitter)
    k = int(np.floor((top - side) / (spec.fo_hz * spread)))
    while k > 0 and k * spec.fo_hz * spread + side >= top:
        k -= 1
    return max(k, 0)


def harmonic_amplitudes(spec: SynthSpec) -> np.ndarray:
    """Amplitudes ``A_k`` (k = 1..K) following the tilt, scaled to ``level_rms``."""
    k_max = _max_harmonics(spec) if spec.n_harmonics is None else min(spec.n_harmonics, _max_harmonics(spec))
    k = np.arange(1, k_max + 1)
    g = 10.0 ** (spec.tilt_db_per_octave * np.log2(k) / 20.0)
    if g.size == 0 or spec.level_rms == 0:
        return np.zeros(k_max)
    return g * spec.level_rms * np.sqrt(2.0 / np.sum(g * g))


def _phases(n: int, mod_phase: float, rng: np.random.Generator) -> np.ndarray:
    flips = rng.integers(0, 2, size=max(n - 1, 0))
    steps = 2 * mod_phase + np.pi / 2 + np.pi * flips
    return np.mod(rng.uniform(0, 2 * np.pi) + np.concatenate([[0.0], np.cumsum(steps)]), 2 * np.pi)


def _cycle_phase(t: np.ndarray, spec: SynthSpec, rng: np.random.Generator) -> np.ndarray:
    """Glottal phase in radians, advancing 2 pi per cycle; cycle periods jitter i.i.d."""
    if spec.jitter == 0:
        return 2 * np.pi * spec.fo_hz * t
    n_cycles = int(np.ceil(t[-1] * spec.fo_hz * 1.5)) + 2
    eps = np.clip(rng.standard_normal(n_cycles), -3, 3)
    bounds = np.concatenate([[0.0], np.cumsum((1 + spec.jitter * eps) / spec.fo_hz)])
    return np.interp(t, bounds, 2 * np.pi * np.arange(bounds.size))


def synthesize(spec: SynthSpec, frames: FrameSpec = FrameSpec(), recording: str = "synth"):
    """Render ``spec`` to a waveform plus its truth track on ``frames``.

    Returns:
        ``(Waveform, TruthTrack)``; identical specs give bit-identical samples.
    """
    rng = np.random.default_rng(spec.seed)
    n = int(round(spec.duration_s * spec.rate))
    if n < 1:
        raise InvalidSpecError("duration shorter than one sample")
    t = np.arange(n) / spec.rate
    amps = harmonic_amplitudes(spec)
    mod_phase = rng.uniform(0, 2 * np.pi)
    phases = _phases(amps.size, mod_phase, rng)
    noise_draw = rng.standard_normal(n)

    m = spec.subh_period
    theta = _cycle_phase(t, spec, rng)
    mod_arg = theta / m + mod_phase
    if m > 1 and spec.fm_extent > 0:
        theta = theta + spec.fm_extent * m * np.sin(mod_arg)

    x = np.zeros(n)
    for k, (a_k, p_k) in enumerate(zip(amps, phases), start=1):
        x += a_k * np.cos(k * theta + p_k)

    if m > 1:
        if spec.am_schedule is not None:
            hop = int(round(spec.schedule_hop_s * spec.rate))
            sched = np.asarray(spec.am_schedule, dtype=float)
            block = np.minimum(np.arange(n) // hop, sched.size - 1)
            extent = sched[block]
        else:
            extent = spec.am_extent
        x = x * (1.0 + extent * np.cos(mod_arg))

    harmonic_power = float(np.sum(amps ** 2) / 2)
    if spec.noise_rms is not None:
        x = x + spec.noise_rms * noise_draw
    elif spec.noise_snr_db is not None and harmonic_power > 0:
        x = x + np.sqrt(harmonic_power * 10 ** (-spec.noise_snr_db / 10)) * noise_draw

    wave = Waveform(x, spec.rate)
    voiced_flag = bool(np.any(amps > 0))
    n_frames = max(0, (n - frames.length_samples(spec.rate)) // frames.hop_samples(spec.rate) + 1)
    times = np.array([frame_center(frames, i) for i in range(n_frames)])
    voiced = np.full(n_frames, voiced_flag)
    fo_star = np.where(voiced, spec.fo_hz, 0.0)
    return wave, TruthTrack(recording, np.arange(n_frames), times, fo_star, voiced)
