import numpy as np
import pytest

from subharmonic_qoe.harness.corpus import MixedCorpusSpec, am_corpus, clean_corpus, mixed_corpus
from subharmonic_qoe.harness.csvio import read_records, write_records
from subharmonic_qoe.harness.evaluate import evaluate, run_builtin
from subharmonic_qoe.profile import QoELabel
from subharmonic_qoe.synth import TruthTrack
from subharmonic_qoe.tracks import EstimateTrack


def const_tracks(truths, name, fn):
    return {name: {r: EstimateTrack(name, t.times, fn(t.fo_star)) for r, t in truths.items()}}


def test_clean_200_builtin_acf_all_correct():
    waves, truths = clean_corpus([200.0])
    tracks = run_builtin(waves)
    recs = evaluate(waves, truths, {"acf": tracks["acf"]})
    assert len(recs) == 20
    assert all(r.labels["acf"] == QoELabel.correct() for r in recs)
    assert all(r.shr_db is None for r in recs)


def test_injected_half_track_on_period2_corpus():
    waves, truths = am_corpus(0.5, n_recordings=3, n_frames=6)
    recs = evaluate(waves, truths, const_tracks(truths, "acf", lambda f: f / 2))
    assert len(recs) == 18
    assert all(r.labels["acf"] == QoELabel.subharmonic(2) for r in recs)
    assert all(r.shr_m == 2 and r.m_hat["acf"] == pytest.approx(2.0) for r in recs)
    assert all(-10 < r.shr_db < -4 for r in recs)


def test_injected_zero_track_is_unvoiced():
    waves, truths = clean_corpus([150.0, 250.0], n_frames=5)
    recs = evaluate(waves, truths, const_tracks(truths, "ext", lambda f: 0 * f))
    assert all(r.labels["ext"] == QoELabel.other("unvoiced") and r.m_hat["ext"] is None for r in recs)


def test_unvoiced_truth_frames_dropped():
    waves, truths = clean_corpus([200.0], n_frames=4)
    t = truths["rec000"]
    voiced = np.array([True, False, True, False])
    truths = {"rec000": TruthTrack("rec000", t.frame_index, t.times, np.where(voiced, 200.0, 0.0), voiced)}
    recs = evaluate(waves, truths, const_tracks(truths, "e", lambda f: f + 0 * f))
    assert [r.frame_index for r in recs] == [0, 2]


def test_missing_coverage_is_per_recording():
    waves, truths = clean_corpus([120.0, 180.0], n_frames=6)
    tracks = const_tracks(truths, "e", lambda f: f)
    short = truths["rec001"]
    tracks["e"]["rec001"] = EstimateTrack("e", short.times[:2], short.fo_star[:2])
    errors = []
    recs = evaluate(waves, truths, tracks, errors=errors)
    assert {r.recording for r in recs} == {"rec000"}
    assert len(errors) == 1 and errors[0][0] == "rec001" and "spans" in errors[0][1]


def test_missing_track_and_truth_reported():
    waves, truths = clean_corpus([120.0, 180.0], n_frames=3)
    tracks = const_tracks({"rec000": truths["rec000"]}, "e", lambda f: f)
    errors = []
    recs = evaluate(waves, {"rec000": truths["rec000"]}, tracks, errors=errors)
    assert {r.recording for r in recs} == {"rec000"}
    assert errors[0][0] == "rec001" and "no truth" in errors[0][1]
    errors = []
    evaluate(waves, truths, tracks, errors=errors)
    assert errors[0][0] == "rec001" and "no track" in errors[0][1]


def test_evaluate_resamples_foreign_rate():
    waves, truths = clean_corpus([210.0], n_frames=4, rate=16000)
    assert waves["rec000"].rate == 16000
    recs = evaluate(waves, truths, const_tracks(truths, "e", lambda f: f))
    assert len(recs) == 4 and all(r.labels["e"].category == "correct" for r in recs)


def test_records_csv_roundtrip(tmp_path):
    waves, truths = am_corpus(0.6, n_recordings=2, n_frames=4)
    tracks = run_builtin(waves)
    recs = evaluate(waves, truths, tracks)
    p = tmp_path / "r.csv"
    write_records(p, recs)
    back = read_records(p)
    assert len(back) == len(recs)
    for a, b in zip(recs, back):
        assert a.labels == b.labels
        assert a.shr_m == b.shr_m
        assert (a.shr_db is None) == (b.shr_db is None)
    write_records(tmp_path / "r2.csv", back)
    assert (tmp_path / "r2.csv").read_bytes() == p.read_bytes()


def test_parallel_evaluation_is_identical(tmp_path):
    spec = MixedCorpusSpec(n_recordings=8, n_frames=6, seed=3)
    waves, truths, _ = mixed_corpus(spec)
    one = evaluate(waves, truths, run_builtin(waves, workers=1), workers=1)
    four = evaluate(waves, truths, run_builtin(waves, workers=4), workers=4)
    write_records(tmp_path / "a.csv", one)
    write_records(tmp_path / "b.csv", four)
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_mixed_corpus_layout():
    spec = MixedCorpusSpec(n_recordings=20, n_frames=20)
    waves, truths, specs = mixed_corpus(spec)
    strong = [r for r, s in specs.items() if min(s.am_schedule) > 0]
    assert len(strong) == 5
    for r, s in specs.items():
        sched = np.array(s.am_schedule)
        if r in strong:
            assert np.all(sched == spec.strong_extent)
        else:
            assert np.sum(sched > 0) == spec.weak_per_recording
            assert np.all(sched[sched > 0] == spec.weak_extent)
    assert all(len(t) == 20 for t in truths.values())
    again, _, _ = mixed_corpus(spec)
    assert all(np.array_equal(waves[r].samples, again[r].samples) for r in waves)
