"""Acceptance criteria, one test per criterion.

Each check returns ``(passed, detail)``; the test asserts on it and records a
``PASS``/``FAIL`` line that the conftest prints in the terminal summary. Run
the file directly (``python3 tests/test_acceptance.py``) for the same lines
without pytest.
"""
from __future__ import annotations

import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

import pipeline  # noqa: E402
from oracles import brute_force_label, direct_dtft_power, exhaustive_viterbi  # noqa: E402
from subharmonic_qoe.acf import Candidate, TrackerConfig, estimate, path_cost, viterbi_track  # noqa: E402
from subharmonic_qoe.profile import (  # noqa: E402
    classify,
    default_m_max,
    fo_intervals,
    harmonic_power_profile,
    max_harmonics,
)
from subharmonic_qoe.shr import measure_shr  # noqa: E402
from subharmonic_qoe.signal import FrameSpec, frame_slice, periodogram  # noqa: E402
from subharmonic_qoe.synth import SynthSpec, expected_shr_am, synthesize  # noqa: E402

RESULTS: list = []


def _record(name, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
    RESULTS.append(line)
    print(line)
    return ok


# --- checks ------------------------------------------------------------------------

def check_max_harmonics():
    t0 = time.perf_counter()
    bad = 0
    n = 0
    for rate in (8000, 16000):
        for fo in np.arange(30.0, 1000.0 + 0.25, 0.5):
            n += 1
            if max_harmonics(rate, float(fo)) != math.floor(rate / (2 * fo)):
                bad += 1
    secs = time.perf_counter() - t0
    return bad == 0 and secs < 1.0, f"{n - bad}/{n} exact, {secs:.3f} s (limit 1 s)"


def check_periodogram_oracle():
    t0 = time.perf_counter()
    worst = 0.0
    for seed in range(10):
        wave, _ = synthesize(SynthSpec(fo_hz=90 + 31 * seed, subh_period=2, am_extent=0.3, noise_snr_db=30,
                                       duration_s=0.05, seed=seed))
        x = wave.samples
        got = periodogram(x, 8000, 0.5).values
        ref = direct_dtft_power(x, 8000, 0.5)
        worst = max(worst, float(np.max(np.abs(got - ref) / ref)))
    secs = time.perf_counter() - t0
    return worst <= 1e-9 and secs < 10, f"max relative error {worst:.2e} (limit 1e-9), {secs:.2f} s (limit 10 s)"


def check_shr_analytic():
    t0 = time.perf_counter()
    worst = 0.0
    monotone = True
    for fo in (110.0, 200.0):
        dbs = []
        for a in (0.1, 0.2, 0.45, 0.6):
            wave, _ = synthesize(SynthSpec(fo_hz=fo, subh_period=2, am_extent=a, duration_s=0.05))
            db = measure_shr(periodogram(wave.samples, 8000), fo / 2, 2).db
            worst = max(worst, abs(db - 10 * math.log10(expected_shr_am(a))))
            dbs.append(db)
        monotone &= all(x < y for x, y in zip(dbs, dbs[1:]))
    secs = time.perf_counter() - t0
    return worst <= 1.0 and monotone and secs < 30, (
        f"max deviation {worst:.3f} dB (limit 1 dB), monotone={monotone}, {secs:.2f} s")


def check_classifier():
    injected = {1.0: "correct", 2.0: "subharmonic:2", 3.0: "subharmonic:3", 4.0: "subharmonic:4"}
    checked = agree = 0
    fixtures_ok = True
    for m in (1, 2, 3, 4):
        wave, _ = synthesize(SynthSpec(fo_hz=200.0, subh_period=m, am_extent=0.0 if m == 1 else 0.6,
                                       duration_s=0.05, seed=m))
        prof = harmonic_power_profile(periodogram(wave.samples, 8000), 30, 1000)
        ivs = fo_intervals(prof, 200.0)
        for div, want in injected.items():
            fixtures_ok &= str(classify(200.0 / div, ivs)) == want
        fixtures_ok &= str(classify(1.37 * 200.0, ivs)) == "other:off-interval"
        fixtures_ok &= str(classify(0.0, ivs)) == "other:unvoiced"
        m_max = default_m_max(200.0)
        probes = np.concatenate([prof.fo_grid, [200.0 / d for d in injected], [274.0, 0.0]])
        for f in probes:
            checked += 1
            agree += str(classify(f, ivs)) == brute_force_label(f, 200.0, prof.fo_grid, prof.p_values, m_max)
    return fixtures_ok and agree == checked, (
        f"injected fixtures {'all as expected' if fixtures_ok else 'MISMATCH'}, "
        f"oracle agreement {agree}/{checked}")


def check_acf_clean():
    frames = correct = 0
    worst = 0.0
    in_bounds = True
    for fo in (70.0, 100.0, 150.0, 220.0, 330.0, 400.0):
        for seed in range(3):
            wave, truth = synthesize(SynthSpec(fo_hz=fo, seed=seed))
            track = estimate(wave, FrameSpec(), TrackerConfig(), postprocess=False)
            for i, t in enumerate(truth.times):
                f = track.pick(t)
                prof = harmonic_power_profile(periodogram(frame_slice(wave, FrameSpec(), i), 8000), 30, 1000)
                lab = classify(f, fo_intervals(prof, fo))
                ok = lab.category == "correct" and abs(f - fo) <= 1.0
                frames += 1
                correct += ok
                worst = max(worst, abs(f - fo))
                in_bounds &= 60 <= f <= 700
    rate = correct / frames
    return rate >= 0.99 and in_bounds, (
        f"{correct}/{frames} frames correct within 1 Hz ({100 * rate:.1f}%, limit 99%), "
        f"max error {worst:.4f} Hz, all within [60, 700]={in_bounds}")


def check_viterbi_optimality():
    rng = np.random.default_rng(7)
    same = 0
    for _ in range(200):
        per = []
        for _ in range(int(rng.integers(1, 7))):
            k = int(rng.integers(1, 5))
            fs = rng.uniform(60, 700, k)
            if rng.random() < 0.4:
                fs[int(rng.integers(k))] = 0.0
            per.append([(float(f), float(s)) for f, s in zip(fs, rng.uniform(0, 1, k))])
        cfg = TrackerConfig(octave_jump_cost=float(rng.uniform(0, 1)), voiced_unvoiced_cost=float(rng.uniform(0, 0.5)))
        path = viterbi_track([[Candidate(f, s) for f, s in fr] for fr in per], cfg, return_path=True)
        cost, best = exhaustive_viterbi(per, cfg.octave_jump_cost, cfg.voiced_unvoiced_cost)
        same += [c.fo_hz for c in path] == [per[t][j][0] for t, j in enumerate(best)] and math.isclose(
            path_cost(path, cfg), cost, rel_tol=0, abs_tol=1e-12)
    return same == 200, f"{same}/200 decoded paths equal the exhaustive minimum"


def check_direction():
    records, files, _ = pipeline.run(1)
    n = len(records)
    acf = sum(r.labels["acf"].category == "subharmonic" for r in records)
    vit = sum(r.labels["viterbi"].category == "subharmonic" for r in records)
    ok = vit < acf and acf / n > 0.20
    return ok, (f"ACF subharmonic errors {acf}/{n} ({100 * acf / n:.1f}%, limit >20%), "
                f"Viterbi {vit}/{n} ({100 * vit / n:.1f}%), reduction {100 * (acf - vit) / max(acf, 1):.1f}%")


def check_report_regression():
    _, one, secs1 = pipeline.run(1)
    _, four, secs4 = pipeline.run(4)
    mismatched = [name for name in pipeline.GOLDEN_FILES
                  if not (pipeline.GOLDEN_DIR / name).exists()
                  or one[name] != (pipeline.GOLDEN_DIR / name).read_text()
                  or four[name] != one[name]]
    ok = not mismatched and secs1 < 60 and secs4 < 60
    return ok, (f"{len(pipeline.GOLDEN_FILES) - len(mismatched)}/{len(pipeline.GOLDEN_FILES)} golden files "
                f"byte-identical for 1 and 4 workers{' (mismatch: ' + ', '.join(mismatched) + ')' if mismatched else ''}; "
                f"100-recording pipeline {secs1:.1f} s with 1 worker, {secs4:.1f} s with 4 (limit 60 s)")


CRITERIA = [
    ("max-harmonics exhaustive grid", check_max_harmonics),
    ("periodogram vs direct DTFT", check_periodogram_oracle),
    ("SHR of AM synthetics vs a^2/2", check_shr_analytic),
    ("classifier vs brute-force oracle", check_classifier),
    ("ACF clean-signal accuracy", check_acf_clean),
    ("Viterbi vs exhaustive search", check_viterbi_optimality),
    ("Viterbi fewer subharmonic errors than ACF", check_direction),
    ("report golden files and runtime", check_report_regression),
]


@pytest.mark.parametrize("name,check", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(name, check):
    ok, detail = check()
    assert _record(name, ok, detail), detail


if __name__ == "__main__":
    results = [_record(name, *check()) for name, check in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria passed")
    sys.exit(0 if all(results) else 1)
