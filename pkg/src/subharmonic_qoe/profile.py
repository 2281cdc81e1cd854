"""Harmonic power profile, f0-intervals and quality-of-estimate labels.

The profile sums the squared periodogram at every observable harmonic of a
candidate f0::

    P(f0) = sum_{k=1}^{K(f0)} S(k f0)**2,    K(f0) = floor(fs / (2 f0))

Local minima of P delimit one interval per subharmonic period m around
``fo_star / m``. An estimate inside the m = 1 interval is correct, inside an
m >= 2 interval it is a subharmonic error, anywhere else it is some other
error.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .errors import InvalidInputError
from .signal import SpectralDensity, nearest_bin

__all__ = [
    "HarmonicProfile",
    "FoInterval",
    "QoELabel",
    "max_harmonics",
    "harmonic_power_profile",
    "local_minima",
    "fo_intervals",
    "default_m_max",
    "classify",
    "refine_fo",
    "FO_PROFILE_MIN",
    "FO_PROFILE_MAX",
]

FO_PROFILE_MIN = 30.0
FO_PROFILE_MAX = 1000.0
M_MAX_CAP = 12


def max_harmonics(rate: float, fo: float) -> int:
    """Number of harmonics of ``fo`` at or below Nyquist: ``floor(rate / (2 fo))``.

    At least two harmonics must fit, so ``fo`` is limited to ``(0, rate / 4]``.
    """
    if not 0 < fo <= rate / 4:
        raise InvalidInputError(f"fo={fo} must lie in (0, rate/4={rate / 4}] so that two harmonics fit")
    return math.floor(rate / (2 * fo))


@dataclass(frozen=True)
class HarmonicProfile:
    fo_grid: np.ndarray
    p_values: np.ndarray
    local_minima: np.ndarray
    rate: int

    @property
    def step(self) -> float:
        return float(self.fo_grid[1] - self.fo_grid[0]) if self.fo_grid.size > 1 else 0.0

    def bounds(self) -> np.ndarray:
        """Indices usable as interval bounds: interior minima plus both grid edges."""
        return np.unique(np.concatenate([[0, self.fo_grid.size - 1], self.local_minima])).astype(int)


def local_minima(values: np.ndarray) -> np.ndarray:
    """Interior local minima with the plateau rule.

    A maximal run of equal values that is strictly lower than both of its
    neighbours yields one minimum at the run's midpoint (lower middle for an
    even-length run). Runs touching either edge are not reported.
    """
    v = np.asarray(values, dtype=float)
    n = v.size
    if n < 3:
        return np.zeros(0, dtype=int)
    change = np.flatnonzero(np.diff(v) != 0) + 1
    starts = np.concatenate([[0], change])
    ends = np.concatenate([change, [n]]) - 1
    out = []
    for s, e in zip(starts, ends):
        if s == 0 or e == n - 1:
            continue
        if v[s - 1] > v[s] and v[e + 1] > v[e]:
            out.append((s + e) // 2)
    return np.asarray(out, dtype=int)


def harmonic_power_profile(
    sd: SpectralDensity,
    fo_min: float = FO_PROFILE_MIN,
    fo_max: float = FO_PROFILE_MAX,
    step: Optional[float] = None,
) -> HarmonicProfile:
    """Evaluate the harmonic power profile on a uniform f0 grid.

    Args:
        sd: periodogram of the analysed frame
        fo_min, fo_max: grid bounds (Hz), inside (0, rate/2)
        step: grid spacing; defaults to the periodogram resolution

    Returns:
        the profile with its interior local minima
    """
    step = sd.resolution_hz if step is None else step
    if not 0 < fo_min < fo_max < sd.rate / 2:
        raise InvalidInputError("profile grid must satisfy 0 < fo_min < fo_max < rate/2")
    n = int(math.floor((fo_max - fo_min) / step + 1e-9)) + 1
    grid = fo_min + step * np.arange(n)
    k_of = np.floor(sd.rate / (2 * grid)).astype(int)
    power = np.zeros(n)
    for k in range(1, int(k_of.max()) + 1):
        live = k_of >= k
        s = sd.values[nearest_bin(k * grid[live], sd.resolution_hz, sd.values.size)]
        power[live] += s * s
    return HarmonicProfile(grid, power, local_minima(power), sd.rate)


@dataclass(frozen=True)
class FoInterval:
    """Open interval ``(lo_hz, hi_hz)`` around ``target_hz = fo_star / m``."""

    m: int
    lo_hz: float
    hi_hz: float
    target_hz: float

    def contains(self, f: float) -> bool:
        return self.lo_hz < f < self.hi_hz


def default_m_max(fo_star: float, fo_min: float = FO_PROFILE_MIN) -> int:
    return max(1, min(M_MAX_CAP, int(math.floor(fo_star / fo_min))))


def fo_intervals(profile: HarmonicProfile, fo_star: float, m_max: Optional[int] = None) -> List[FoInterval]:
    """Intervals for m = 1..m_max whose target ``fo_star / m`` lies above the grid's lower edge.

    Each interval runs between the nearest bounds (local minima or grid
    edges) below and above its target. Consecutive targets that share one
    span are separated at their geometric means.
    """
    grid = profile.fo_grid
    if not grid[0] <= fo_star <= grid[-1]:
        raise InvalidInputError(f"fo_star={fo_star} outside the profile grid [{grid[0]}, {grid[-1]}]")
    if m_max is None:
        m_max = default_m_max(fo_star, grid[0])
    if m_max < 1:
        raise InvalidInputError("m_max must be at least 1")
    bound_f = grid[profile.bounds()]

    spans = []
    for m in range(1, m_max + 1):
        target = fo_star / m
        if not grid[0] < target < grid[-1]:
            if target <= grid[0]:
                break
            continue
        j = int(np.searchsorted(bound_f, target, side="left"))
        lo = bound_f[j - 1]
        hi = bound_f[j] if bound_f[j] > target else bound_f[j + 1]
        spans.append((m, target, lo, hi))

    out = []
    i = 0
    while i < len(spans):
        j = i
        while j + 1 < len(spans) and spans[j + 1][2:] == spans[i][2:]:
            j += 1
        group = spans[i:j + 1]
        lo, hi = group[0][2], group[0][3]
        for g, (m, target, _, _) in enumerate(group):
            upper = hi if g == 0 else math.sqrt(group[g - 1][1] * target)
            lower = lo if g == len(group) - 1 else math.sqrt(group[g + 1][1] * target)
            out.append(FoInterval(m, float(lower), float(upper), float(target)))
        i = j + 1
    return out


@dataclass(frozen=True)
class QoELabel:
    """Correct, SubharmonicError(m) or OtherError(kind)."""

    category: str
    m: Optional[int] = None
    kind: Optional[str] = None

    CATEGORIES = ("correct", "subharmonic", "other")

    def __post_init__(self):
        if self.category == "correct":
            ok = self.m is None and self.kind is None
        elif self.category == "subharmonic":
            ok = self.m is not None and self.m >= 2 and self.kind is None
        elif self.category == "other":
            ok = self.m is None and self.kind in ("unvoiced", "off-interval")
        else:
            ok = False
        if not ok:
            raise InvalidInputError(f"invalid label {self!r}")

    @classmethod
    def correct(cls) -> "QoELabel":
        return cls("correct")

    @classmethod
    def subharmonic(cls, m: int) -> "QoELabel":
        return cls("subharmonic", m=int(m))

    @classmethod
    def other(cls, kind: str) -> "QoELabel":
        return cls("other", kind=kind)

    def __str__(self):
        if self.category == "correct":
            return "correct"
        if self.category == "subharmonic":
            return f"subharmonic:{self.m}"
        return f"other:{self.kind}"

    @classmethod
    def parse(cls, text: str) -> "QoELabel":
        head, _, tail = text.partition(":")
        if head == "correct" and not tail:
            return cls.correct()
        if head == "subharmonic":
            return cls.subharmonic(int(tail))
        if head == "other":
            return cls.other(tail)
        raise InvalidInputError(f"cannot parse label {text!r}")


def classify(fo_hat, intervals: Sequence[FoInterval]) -> QoELabel:
    """Label one estimate; ``None``, NaN and values <= 0 count as unvoiced."""
    if fo_hat is None or not np.isfinite(fo_hat) or fo_hat <= 0:
        return QoELabel.other("unvoiced")
    for iv in intervals:
        if iv.contains(fo_hat):
            return QoELabel.correct() if iv.m == 1 else QoELabel.subharmonic(iv.m)
    return QoELabel.other("off-interval")


def refine_fo(profile: HarmonicProfile, initial: float) -> float:
    """Grid argmax of P within +-5 % of ``initial``; ties go to the point nearest ``initial``."""
    grid = profile.fo_grid
    if not grid[0] <= initial <= grid[-1]:
        raise InvalidInputError("initial f0 outside the profile grid")
    sel = np.flatnonzero(np.abs(grid - initial) <= 0.05 * initial)
    if sel.size == 0:
        return float(initial)
    p = profile.p_values[sel]
    best = sel[p == p.max()]
    if best.size == sel.size and best.size > 1 and np.all(p == 0):
        return float(initial)
    return float(grid[best[np.argmin(np.abs(grid[best] - initial))]])
