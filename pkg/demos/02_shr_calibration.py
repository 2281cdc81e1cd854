"""
SHR of amplitude-modulated voices
==================================

For period-2 amplitude modulation of extent a the sidebands carry a**2/2 of
the harmonic power. The measured subharmonic-to-harmonic ratio follows this
closed form to a fraction of a dB, for any seed.
"""

import math

from subharmonic_qoe.shr import elongation_factor, measure_shr
from subharmonic_qoe.signal import periodogram
from subharmonic_qoe.synth import SynthSpec, expected_shr_am, synthesize

print(" fo (Hz)     a   expected (dB)   measured (dB)")
for fo in (110.0, 200.0):
    for a in (0.1, 0.2, 0.45, 0.6):
        wave, _ = synthesize(SynthSpec(fo_hz=fo, subh_period=2, am_extent=a, duration_s=0.05))
        shr = measure_shr(periodogram(wave.samples, wave.rate), fo / 2, 2)
        print(f"{fo:8.1f}  {a:4.2f}  {10 * math.log10(expected_shr_am(a)):14.2f}  {shr.db:14.2f}")

###############################################################################
# In the harness the subharmonic period comes from the elongation factor
# f0*/f0_hat of the baseline estimate, rounded when within 0.15 of an integer.

for est in (100.0, 66.7, 150.0):
    m_hat, m = elongation_factor(200.0, est)
    print(f"f0*=200, f0_hat={est}: M_hat={m_hat:.3f}, period={m}")
