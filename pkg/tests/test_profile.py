import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_force_label, plateau_minima, profile_by_summation
from subharmonic_qoe.errors import InvalidInputError
from subharmonic_qoe.profile import (
    FoInterval,
    QoELabel,
    classify,
    default_m_max,
    fo_intervals,
    harmonic_power_profile,
    local_minima,
    max_harmonics,
    refine_fo,
)
from subharmonic_qoe.signal import SpectralDensity, periodogram
from subharmonic_qoe.synth import SynthSpec, synthesize


def frame_sd(fo=200.0, m=1, a=0.0, seed=0, **kw):
    wave, _ = synthesize(SynthSpec(fo_hz=fo, subh_period=m, am_extent=a, seed=seed, duration_s=0.05, **kw))
    return periodogram(wave.samples, 8000)


# --- max_harmonics -----------------------------------------------------------------

def test_max_harmonics_examples():
    assert max_harmonics(8000, 100) == 40
    assert max_harmonics(8000, 700) == 5
    assert max_harmonics(8000, 2000) == 2
    with pytest.raises(InvalidInputError):
        max_harmonics(8000, 2000.01)
    with pytest.raises(InvalidInputError):
        max_harmonics(8000, 0)


@pytest.mark.parametrize("rate", [8000, 16000])
def test_max_harmonics_identity(rate):
    for fo in np.arange(30.0, 1000.5, 0.5):
        k = max_harmonics(rate, fo)
        assert k * fo <= rate / 2 < (k + 1) * fo


# --- profile -----------------------------------------------------------------------

def test_zero_density_gives_zero_profile():
    sd = SpectralDensity(np.zeros(8001), 0.5, 8000)
    prof = harmonic_power_profile(sd, 30, 1000)
    assert not prof.p_values.any()
    assert prof.local_minima.size == 0
    assert prof.fo_grid[0] == 30 and prof.fo_grid[-1] == 1000 and prof.fo_grid.size == 1941


def test_profile_matches_direct_summation():
    sd = frame_sd(fo=173.0, m=2, a=0.3)
    prof = harmonic_power_profile(sd, 30, 1000)
    sel = np.arange(0, prof.fo_grid.size, 7)
    ref = profile_by_summation(sd.values, 8000, 0.5, prof.fo_grid[sel])
    assert np.allclose(prof.p_values[sel], ref, rtol=1e-12, atol=0)


def test_two_tone_profile():
    t = np.arange(400) / 8000
    x = np.sin(2 * np.pi * 200 * t) + np.sin(2 * np.pi * 400 * t)
    sd = periodogram(x, 8000)
    prof = harmonic_power_profile(sd, 30, 1000)
    p = dict(zip(prof.fo_grid, prof.p_values))
    assert p[200.0] > p[400.0]


def test_clean_profile_has_minima_between_subharmonic_targets():
    prof = harmonic_power_profile(frame_sd(), 30, 1000)
    mins = prof.fo_grid[prof.local_minima]
    for m in (1, 2, 3):
        lo, hi = 200 / (m + 1), 200 / m
        assert np.any((mins > lo) & (mins < hi))


def test_local_minima_plateau_rule():
    assert local_minima(np.array([3, 1, 1, 1, 3.0])).tolist() == [2]
    assert local_minima(np.array([3, 1, 1, 3.0])).tolist() == [1]
    assert local_minima(np.array([1, 2, 3.0])).tolist() == []
    assert local_minima(np.array([2, 1, 2, 0, 0])).tolist() == [1]
    assert local_minima(np.array([5.0])).tolist() == []


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=1, max_size=30))
def test_local_minima_matches_oracle(values):
    p = np.array(values, dtype=float)
    assert local_minima(p).tolist() == plateau_minima(p)


def test_profile_scale_invariance():
    sd = frame_sd(fo=150, m=2, a=0.4, seed=4)
    a = harmonic_power_profile(sd, 30, 1000)
    b = harmonic_power_profile(sd.scaled(7.0), 30, 1000)
    assert np.allclose(b.p_values, 49.0 * a.p_values, rtol=1e-12)
    assert np.array_equal(a.local_minima, b.local_minima)
    ia, ib = fo_intervals(a, 150), fo_intervals(b, 150)
    assert ia == ib


# --- intervals ---------------------------------------------------------------------

def test_intervals_clean_200():
    prof = harmonic_power_profile(frame_sd(), 30, 1000)
    ivs = fo_intervals(prof, 200, m_max=3)
    assert [iv.m for iv in ivs] == [1, 2, 3]
    for iv, target in zip(ivs, (200, 100, 200 / 3)):
        assert iv.contains(target)
    for a, b in zip(ivs, ivs[1:]):
        assert b.hi_hz <= a.lo_hz


def test_low_fo_star_has_only_m1():
    prof = harmonic_power_profile(frame_sd(fo=55), 30, 1000)
    ivs = fo_intervals(prof, 55)
    assert [iv.m for iv in ivs] == [1]


def test_default_m_max():
    assert default_m_max(200) == 6
    assert default_m_max(1000) == 12
    assert default_m_max(40) == 1


def test_intervals_reject_off_grid_truth():
    prof = harmonic_power_profile(frame_sd(), 30, 1000)
    with pytest.raises(InvalidInputError):
        fo_intervals(prof, 1200)
    with pytest.raises(InvalidInputError):
        fo_intervals(prof, 200, m_max=0)


@pytest.mark.parametrize("fo,m,a", [(200, 1, 0), (200, 2, 0.5), (137.5, 3, 0.5), (260, 4, 0.4), (95, 2, 0.2)])
def test_intervals_disjoint_and_ordered(fo, m, a):
    prof = harmonic_power_profile(frame_sd(fo, m, a, seed=7), 30, 1000)
    ivs = fo_intervals(prof, fo)
    for iv in ivs:
        assert iv.lo_hz < iv.target_hz < iv.hi_hz
    for a_, b_ in zip(ivs, ivs[1:]):
        assert b_.target_hz < a_.target_hz
        assert b_.hi_hz <= a_.lo_hz


def test_shared_span_split_at_geometric_mean():
    grid = np.arange(30, 1000.5, 0.5)
    # strictly increasing profile: no interior minima, only the grid edges bound
    from subharmonic_qoe.profile import HarmonicProfile
    prof = HarmonicProfile(grid, grid.copy(), np.array([], dtype=int), 8000)
    ivs = fo_intervals(prof, 200, m_max=3)
    assert ivs[0].hi_hz == 1000 and ivs[-1].lo_hz == 30
    assert ivs[0].lo_hz == pytest.approx(math.sqrt(200 * 100))
    assert ivs[1].lo_hz == pytest.approx(math.sqrt(100 * 200 / 3))


# --- classify ----------------------------------------------------------------------

def test_label_roundtrip_and_validation():
    for lab in (QoELabel.correct(), QoELabel.subharmonic(3), QoELabel.other("unvoiced"),
                QoELabel.other("off-interval")):
        assert QoELabel.parse(str(lab)) == lab
    with pytest.raises(InvalidInputError):
        QoELabel.subharmonic(1)
    with pytest.raises(InvalidInputError):
        QoELabel.other("loud")
    with pytest.raises(InvalidInputError):
        QoELabel.parse("maybe")


def test_classify_boundaries_are_exclusive():
    ivs = [FoInterval(1, 180.0, 220.0, 200.0), FoInterval(2, 90.0, 110.0, 100.0)]
    assert classify(200.0, ivs) == QoELabel.correct()
    assert classify(180.0, ivs) == QoELabel.other("off-interval")
    assert classify(220.0, ivs) == QoELabel.other("off-interval")
    assert classify(100.0, ivs) == QoELabel.subharmonic(2)
    for u in (0, 0.0, -5, None, float("nan")):
        assert classify(u, ivs) == QoELabel.other("unvoiced")


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_classifier_fixtures_against_oracle(m):
    sd = frame_sd(200.0, m, 0.0 if m == 1 else 0.6, seed=m)
    prof = harmonic_power_profile(sd, 30, 1000)
    ivs = fo_intervals(prof, 200.0)
    expected = {200.0: "correct", 100.0: "subharmonic:2", 200 / 3: "subharmonic:3", 50.0: "subharmonic:4",
                1.37 * 200: "other:off-interval", 0.0: "other:unvoiced"}
    for f, want in expected.items():
        assert str(classify(f, ivs)) == want
    m_max = default_m_max(200.0)
    for f in prof.fo_grid:
        assert str(classify(f, ivs)) == brute_force_label(f, 200.0, prof.fo_grid, prof.p_values, m_max)


@settings(max_examples=20, deadline=None)
@given(st.floats(70, 400), st.integers(1, 4), st.floats(0, 0.7), st.integers(0, 1000))
def test_classify_agrees_with_oracle_randomized(fo, m, a, seed):
    fo = round(fo * 2) / 2
    sd = frame_sd(fo, m, a if m > 1 else 0.0, seed=seed, noise_snr_db=25)
    prof = harmonic_power_profile(sd, 30, 1000)
    ivs = fo_intervals(prof, fo)
    m_max = default_m_max(fo)
    probes = np.concatenate([prof.fo_grid[::3], [fo / k for k in range(1, 8)], [0.0]])
    for f in probes:
        assert str(classify(f, ivs)) == brute_force_label(f, fo, prof.fo_grid, prof.p_values, m_max)


# --- refine_fo ---------------------------------------------------------------------

def test_refine_fo_examples():
    prof = harmonic_power_profile(frame_sd(), 30, 1000)
    assert abs(refine_fo(prof, 200.0) - 200.0) <= 0.5
    assert abs(refine_fo(prof, 202.0) - 200.0) <= 0.5
    flat = harmonic_power_profile(SpectralDensity(np.zeros(8001), 0.5, 8000), 30, 1000)
    assert refine_fo(flat, 123.25) == 123.25
