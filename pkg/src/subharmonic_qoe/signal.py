"""Sampled-signal containers, framing, windowing, resampling and the dense periodogram.

Everything here is a pure function of its inputs. Arrays held by the
containers are marked read-only so instances can be shared freely between
threads and worker processes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import signal as sps

from .errors import ConfigurationError, FrameRangeError, InvalidInputError

__all__ = [
    "Waveform",
    "FrameSpec",
    "SpectralDensity",
    "resample",
    "frame_slice",
    "frame_count",
    "frame_center",
    "hamming_window",
    "periodogram",
    "nearest_bin",
]


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Waveform:
    """Uniformly sampled mono audio.

    Attributes:
        samples: real amplitudes, nominally within [-1, 1]
        rate: sampling rate in samples per second
    """

    samples: np.ndarray
    rate: int

    def __post_init__(self):
        x = np.asarray(self.samples, dtype=float)
        if x.ndim != 1:
            raise InvalidInputError("waveform samples must be one-dimensional")
        if x.size < 1:
            raise InvalidInputError("waveform must contain at least one sample")
        if not np.all(np.isfinite(x)):
            raise InvalidInputError("waveform samples must be finite")
        if int(self.rate) != self.rate or self.rate <= 0:
            raise InvalidInputError(f"rate must be a positive integer, got {self.rate!r}")
        object.__setattr__(self, "samples", _frozen(x))
        object.__setattr__(self, "rate", int(self.rate))

    def __len__(self) -> int:
        return self.samples.size

    @property
    def duration(self) -> float:
        return self.samples.size / self.rate

    def scaled(self, c: float) -> "Waveform":
        return Waveform(self.samples * c, self.rate)


@dataclass(frozen=True)
class FrameSpec:
    """Analysis interval layout; frame centers sit at ``index * hop + length / 2``."""

    length_s: float = 0.050
    hop_s: float = 0.050

    def __post_init__(self):
        if not self.length_s > 0:
            raise InvalidInputError("frame length must be positive")
        if not 0 < self.hop_s <= self.length_s:
            raise InvalidInputError("hop must satisfy 0 < hop <= length")

    def length_samples(self, rate: int) -> int:
        return int(round(self.length_s * rate))

    def hop_samples(self, rate: int) -> int:
        return int(round(self.hop_s * rate))


@dataclass(frozen=True)
class SpectralDensity:
    """One-sided power spectrum on the uniform grid ``k * resolution_hz``."""

    values: np.ndarray
    resolution_hz: float
    rate: int
    _freqs: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if self.resolution_hz <= 0:
            raise InvalidInputError("resolution must be positive")
        if np.any(v < 0):
            raise InvalidInputError("spectral density values must be nonnegative")
        object.__setattr__(self, "values", _frozen(v))
        object.__setattr__(self, "_freqs", _frozen(np.arange(v.size) * self.resolution_hz))

    @property
    def freqs(self) -> np.ndarray:
        return self._freqs

    def at(self, freqs) -> np.ndarray:
        """Values at the bins nearest to ``freqs`` (no interpolation)."""
        return self.values[nearest_bin(freqs, self.resolution_hz, self.values.size)]

    def scaled(self, c: float) -> "SpectralDensity":
        return SpectralDensity(self.values * c, self.resolution_hz, self.rate)


def nearest_bin(freqs, resolution_hz: float, n_bins: int) -> np.ndarray:
    """Index of the grid bin closest to each frequency; exact halves round up."""
    idx = np.floor(np.asarray(freqs, dtype=float) / resolution_hz + 0.5).astype(np.int64)
    return np.clip(idx, 0, n_bins - 1)


def _kaiser_lowpass(rate: int, target_rate: int, up: int):
    # passband edge 0.45*f_low, stopband edge 0.5*f_low, on the upsampled grid
    f_low = min(rate, target_rate)
    fs_hi = rate * up
    pass_edge = 0.45 * f_low
    stop_edge = 0.5 * f_low
    atten_db = 70.0
    width = (stop_edge - pass_edge) / (fs_hi / 2)
    numtaps, beta = sps.kaiserord(atten_db, width)
    numtaps |= 1
    cutoff = (pass_edge + stop_edge) / 2
    return sps.firwin(numtaps, cutoff, window=("kaiser", beta), fs=fs_hi)


def resample(wave: Waveform, target_rate: int) -> Waveform:
    """Polyphase FIR rate conversion.

    The anti-aliasing filter is a Kaiser-windowed sinc with the transition
    band between 0.45 and 0.5 times the lower of the two rates, 70 dB
    design attenuation.

    Args:
        wave: input signal
        target_rate: output sampling rate (S/s)

    Returns:
        the resampled waveform
    """
    if not isinstance(wave, Waveform) or len(wave) == 0:
        raise InvalidInputError("resample needs a non-empty Waveform")
    if int(target_rate) != target_rate or target_rate <= 0:
        raise InvalidInputError(f"target rate must be a positive integer, got {target_rate!r}")
    target_rate = int(target_rate)
    if target_rate == wave.rate:
        return wave
    ratio = Fraction(target_rate, wave.rate)
    up, down = ratio.numerator, ratio.denominator
    h = _kaiser_lowpass(wave.rate, target_rate, up)
    y = sps.resample_poly(wave.samples, up, down, window=h)
    return Waveform(y, target_rate)


def frame_count(wave: Waveform, spec: FrameSpec) -> int:
    """Number of complete frames that fit in the waveform."""
    n = spec.length_samples(wave.rate)
    hop = spec.hop_samples(wave.rate)
    if len(wave) < n:
        return 0
    return (len(wave) - n) // hop + 1


def frame_center(spec: FrameSpec, index: int) -> float:
    """Center time (s) of frame ``index``; used to align external tracks."""
    return index * spec.hop_s + spec.length_s / 2


def frame_slice(wave: Waveform, spec: FrameSpec, index: int) -> np.ndarray:
    """Samples of frame ``index``: ``length`` samples from ``index * hop``."""
    n = spec.length_samples(wave.rate)
    start = index * spec.hop_samples(wave.rate)
    if index < 0 or start + n > len(wave):
        raise FrameRangeError(
            f"frame {index} ([{start}, {start + n})) exceeds waveform of {len(wave)} samples"
        )
    return wave.samples[start:start + n]


def hamming_window(n: int) -> np.ndarray:
    """Symmetric Hamming window ``0.54 - 0.46 cos(2 pi k / (n - 1))``; ``[1.0]`` for n = 1."""
    if int(n) != n or n < 1:
        raise InvalidInputError(f"window length must be a positive integer, got {n!r}")
    n = int(n)
    if n == 1:
        return np.ones(1)
    k = np.arange(n)
    w = 0.54 - 0.46 * np.cos(2 * np.pi * k / (n - 1))
    # exact mirror symmetry regardless of cos rounding
    return 0.5 * (w + w[::-1])


def periodogram(frame, rate: int, resolution_hz: float = 0.5) -> SpectralDensity:
    """Raw ``|DFT|**2`` of the Hamming-windowed frame, zero-padded to ``rate / resolution_hz`` points.

    No 1/N scaling is applied; every consumer uses ratios or argmax.
    """
    x = np.asarray(frame, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise InvalidInputError("periodogram needs a non-empty 1-D frame")
    if resolution_hz <= 0:
        raise ConfigurationError("resolution must be positive")
    n_fft_f = rate / resolution_hz
    n_fft = int(round(n_fft_f))
    if not math.isclose(n_fft, n_fft_f, rel_tol=0, abs_tol=1e-9) or n_fft < 2:
        raise ConfigurationError(
            f"resolution {resolution_hz} Hz does not divide rate {rate} into an integer DFT length"
        )
    if n_fft < x.size:
        raise ConfigurationError(
            f"DFT length {n_fft} is shorter than the {x.size}-sample frame"
        )
    spec = np.fft.rfft(x * hamming_window(x.size), n_fft)
    return SpectralDensity(spec.real ** 2 + spec.imag ** 2, resolution_hz, rate)
