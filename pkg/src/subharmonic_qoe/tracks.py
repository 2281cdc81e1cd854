"""Estimator output tracks shared by the built-in estimator and the harness."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

__all__ = ["EstimateTrack"]

_TIE_TOL = 1e-9


@dataclass(frozen=True)
class EstimateTrack:
    """Ordered ``(time_s, fo_hz)`` pairs from one estimator; ``fo_hz == 0`` is unvoiced."""

    name: str
    times: np.ndarray
    fo_hz: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        f = np.asarray(self.fo_hz, dtype=float)
        if t.ndim != 1 or t.shape != f.shape:
            raise ValidationError("track times and values must be 1-D and of equal length")
        if t.size and np.any(np.diff(t) <= 0):
            raise ValidationError(f"track {self.name!r}: times must be strictly increasing")
        if np.any(~np.isfinite(f)) or np.any(f < 0):
            raise ValidationError(f"track {self.name!r}: fo values must be finite and >= 0")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "fo_hz", f)

    def __len__(self):
        return self.times.size

    def pick(self, center: float) -> float:
        """Value at the sample nearest ``center``; exact ties go to the earlier sample."""
        if self.times.size == 0:
            raise ValidationError(f"track {self.name!r} is empty")
        j = int(np.searchsorted(self.times, center))
        if j == 0:
            return float(self.fo_hz[0])
        if j == self.times.size:
            return float(self.fo_hz[-1])
        before, after = center - self.times[j - 1], self.times[j] - center
        # float grids (0.02, 0.03 around 0.025) must still tie
        return float(self.fo_hz[j - 1] if before <= after + _TIE_TOL else self.fo_hz[j])
