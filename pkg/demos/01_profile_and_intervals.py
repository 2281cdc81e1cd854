"""
Harmonic power profile and f0-intervals
========================================

A 50-ms frame of a 200 Hz voice with period-2 amplitude modulation is turned
into a dense periodogram, then into the harmonic power profile P(f0). The
local minima of P carve the f0 axis into intervals around 200/m Hz, and any
estimate is labelled by the interval it falls into.
"""

import numpy as np

from subharmonic_qoe.profile import classify, fo_intervals, harmonic_power_profile
from subharmonic_qoe.signal import periodogram
from subharmonic_qoe.synth import SynthSpec, synthesize

###############################################################################
# One frame of synthetic voice. The truth is 200 Hz even though the waveform
# only repeats every two glottal cycles.

wave, truth = synthesize(SynthSpec(fo_hz=200, subh_period=2, am_extent=0.5, duration_s=0.05, seed=1))
sd = periodogram(wave.samples, wave.rate, resolution_hz=0.5)
print(f"{sd.values.size} periodogram bins at {sd.resolution_hz} Hz spacing")

###############################################################################
# The profile collects the periodogram at every harmonic of a candidate f0.
# It peaks at 200 Hz and, because of the modulation, also at 100 Hz.

prof = harmonic_power_profile(sd, 30, 1000)
for f in (50, 66.5, 100, 150, 200, 274):
    i = int(np.argmin(np.abs(prof.fo_grid - f)))
    print(f"P({prof.fo_grid[i]:6.1f} Hz) = {prof.p_values[i]:.3e}")

###############################################################################
# Intervals around 200/m, bounded by the nearest local minima.

for iv in fo_intervals(prof, 200.0):
    print(f"m={iv.m:2d}  target {iv.target_hz:6.1f} Hz  interval ({iv.lo_hz:.1f}, {iv.hi_hz:.1f})")

###############################################################################
# Labelling a few hypothetical estimates.

intervals = fo_intervals(prof, 200.0)
for est in (199.2, 100.4, 66.0, 274.0, 0.0):
    print(f"estimate {est:6.1f} Hz -> {classify(est, intervals)}")
