"""Subharmonics-to-harmonics ratio and the period elongation factor."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import InvalidInputError
from .profile import max_harmonics
from .signal import SpectralDensity

__all__ = ["ShrMeasurement", "elongation_factor", "multiplier_sets", "measure_shr", "M_ROUND_TOL"]

M_ROUND_TOL = 0.15


@dataclass(frozen=True)
class ShrMeasurement:
    ratio: float
    db: float
    m: int
    fo_hat: float


def elongation_factor(fo_star: float, fo_hat: float, tol: float = M_ROUND_TOL) -> Tuple[float, Optional[int]]:
    """Return ``(fo_star / fo_hat, nearest integer or None)``.

    The integer is reported only when it is >= 1 and within ``tol`` of the ratio.
    """
    if not (fo_star > 0 and fo_hat > 0):
        raise InvalidInputError("elongation factor needs positive frequencies")
    m_hat = fo_star / fo_hat
    m = int(math.floor(m_hat + 0.5))
    if m >= 1 and abs(m_hat - m) <= tol:
        return m_hat, m
    return m_hat, None


def multiplier_sets(k_max: int, m: int) -> Tuple[np.ndarray, np.ndarray]:
    """Harmonic multipliers ``{p m}`` and their complement within ``1..k_max``."""
    k = np.arange(1, k_max + 1)
    harm = k % m == 0
    return k[harm], k[~harm]


def measure_shr(sd: SpectralDensity, fo_hat: float, m: int) -> ShrMeasurement:
    """Ratio of periodogram values at subharmonic vs. harmonic multiples of ``fo_hat``.

    Values are summed unsquared at the nearest bins. A zero denominator gives
    ``inf`` (or NaN when the numerator is zero too).
    """
    if int(m) != m or m < 2:
        raise InvalidInputError("subharmonic period m must be an integer >= 2")
    k_max = max_harmonics(sd.rate, fo_hat)
    k_h, k_s = multiplier_sets(k_max, int(m))
    num = float(np.sum(sd.at(k_s * fo_hat)))
    den = float(np.sum(sd.at(k_h * fo_hat))) if k_h.size else 0.0
    if den > 0:
        ratio = num / den
    else:
        ratio = math.inf if num > 0 else math.nan
    if ratio == 0:
        db = -math.inf
    elif math.isnan(ratio):
        db = math.nan
    else:
        db = 10 * math.log10(ratio)
    return ShrMeasurement(ratio, db, int(m), float(fo_hat))
