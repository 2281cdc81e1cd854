"""Subharmonic-aware evaluation of fundamental-frequency estimators.

Modules:
    signal: waveforms, framing, resampling and the dense periodogram
    synth: synthetic voices with period-M subharmonics and truth tracks
    acf: autocorrelation candidates with optional Viterbi tracking
    profile: harmonic power profile, f0-intervals and estimate labels
    shr: elongation factor and subharmonic-to-harmonic ratio
    harness: file I/O, per-frame evaluation, reports and the CLI
"""
from .acf import Candidate, TrackerConfig, autocorr_candidates, estimate, path_cost, viterbi_track
from .errors import (
    ConfigurationError,
    FrameRangeError,
    InvalidInputError,
    InvalidSpecError,
    ValidationError,
    WavFormatError,
)
from .profile import (
    FoInterval,
    HarmonicProfile,
    QoELabel,
    classify,
    fo_intervals,
    harmonic_power_profile,
    local_minima,
    max_harmonics,
    refine_fo,
)
from .shr import ShrMeasurement, elongation_factor, measure_shr, multiplier_sets
from .signal import FrameSpec, SpectralDensity, Waveform, frame_center, frame_slice, periodogram, resample
from .synth import SynthSpec, TruthTrack, expected_shr_am, synthesize
from .tracks import EstimateTrack

__version__ = "0.1.0"
