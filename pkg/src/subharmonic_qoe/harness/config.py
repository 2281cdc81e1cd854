"""Evaluation settings and their ``key = value`` text file form.

Example file::

    # frame layout
    frame_length_s = 0.05
    frame_hop_s = 0.05
    fo_min = 60
    fo_max = 700
    baseline = acf
"""
from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Tuple

from ..acf import TrackerConfig
from ..errors import ValidationError
from ..profile import FO_PROFILE_MAX, FO_PROFILE_MIN
from ..shr import M_ROUND_TOL
from ..signal import FrameSpec

__all__ = ["HarnessConfig", "load_config", "CONFIG_KEYS"]


@dataclass(frozen=True)
class HarnessConfig:
    frames: FrameSpec = field(default_factory=FrameSpec)
    tracker: TrackerConfig = field(default_factory=TrackerConfig)
    analysis_rate: int = 8000
    resolution_hz: float = 0.5
    profile_fo_min: float = FO_PROFILE_MIN
    profile_fo_max: float = FO_PROFILE_MAX
    m_round_tol: float = M_ROUND_TOL
    baseline: str = "acf"
    shr_bin_width_db: float = 2.5
    shr_range_db: Tuple[float, float] = (-40.0, 0.0)
    shr_db_floor: float = -80.0
    mhat_range: Tuple[float, float] = (0.5, 12.0)
    mhat_bins: int = 48

    def __post_init__(self):
        if self.shr_bin_width_db <= 0 or self.shr_range_db[0] >= self.shr_range_db[1]:
            raise ValidationError("invalid SHR histogram layout")
        if not 0 < self.mhat_range[0] < self.mhat_range[1] or self.mhat_bins < 1:
            raise ValidationError("invalid M-hat histogram layout")


_FRAME_KEYS = {"frame_length_s": "length_s", "frame_hop_s": "hop_s"}
_TRACKER_KEYS = {f.name: f.type for f in fields(TrackerConfig)}
_TOP_KEYS = {
    "analysis_rate": int, "resolution_hz": float, "profile_fo_min": float, "profile_fo_max": float,
    "m_round_tol": float, "baseline": str, "shr_bin_width_db": float, "shr_db_floor": float,
    "mhat_bins": int,
}
_PAIR_KEYS = {"shr_range_lo": ("shr_range_db", 0), "shr_range_hi": ("shr_range_db", 1),
              "mhat_lo": ("mhat_range", 0), "mhat_hi": ("mhat_range", 1)}
CONFIG_KEYS = sorted([*_FRAME_KEYS, *_TRACKER_KEYS, *_TOP_KEYS, *_PAIR_KEYS])


def _cast(key, text, kind):
    if kind in (str, "str"):
        return text
    try:
        return int(text) if kind in (int, "int") else float(text)
    except ValueError:
        raise ValidationError(f"config key {key!r}: {text!r} is not a valid {getattr(kind, '__name__', kind)}") from None


def apply_overrides(cfg: HarnessConfig, values: dict) -> HarnessConfig:
    """Return ``cfg`` with flat string/number overrides (config-file keys) applied."""
    frame_kw, tracker_kw, top_kw = {}, {}, {}
    pairs = {"shr_range_db": list(cfg.shr_range_db), "mhat_range": list(cfg.mhat_range)}
    for key, raw in values.items():
        text = str(raw)
        if key in _FRAME_KEYS:
            frame_kw[_FRAME_KEYS[key]] = _cast(key, text, float)
        elif key in _TRACKER_KEYS:
            tracker_kw[key] = _cast(key, text, _TRACKER_KEYS[key])
        elif key in _TOP_KEYS:
            top_kw[key] = _cast(key, text, _TOP_KEYS[key])
        elif key in _PAIR_KEYS:
            name, slot = _PAIR_KEYS[key]
            pairs[name][slot] = _cast(key, text, float)
        else:
            raise ValidationError(f"unknown config key {key!r}")
    try:
        return replace(
            cfg,
            frames=replace(cfg.frames, **frame_kw),
            tracker=replace(cfg.tracker, **tracker_kw),
            shr_range_db=tuple(pairs["shr_range_db"]),
            mhat_range=tuple(pairs["mhat_range"]),
            **top_kw,
        )
    except ValidationError:
        raise
    except ValueError as e:
        raise ValidationError(str(e)) from None


def load_config(path, base: HarnessConfig = HarnessConfig()) -> HarnessConfig:
    values = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValidationError(f"{path}:{lineno}: expected 'key = value'")
        values[key.strip()] = value.strip()
    return apply_overrides(base, values)
