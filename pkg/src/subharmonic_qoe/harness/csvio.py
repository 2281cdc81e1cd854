"""CSV schemas: truth annotations, estimate tracks and frame records.

Truth CSV (one file, many recordings)::

    recording,frame_index,time_s,fo_star_hz,voiced

``fo_star_hz`` is empty for unvoiced rows; ``voiced`` is 1/0 (true/false
accepted on input).

Track CSV (one file per estimator and recording)::

    time_s,fo_hz

with ``fo_hz = 0`` for unvoiced samples.

Frame-record CSV (long format, one row per frame and estimator)::

    recording,frame_index,time_s,fo_star_hz,estimator,fo_hat_hz,label,m_hat,shr_db,shr_m

``label`` is ``correct``, ``subharmonic:<m>``, ``other:unvoiced`` or
``other:off-interval``. ``m_hat`` is empty for unvoiced estimates. ``shr_db``
and ``shr_m`` describe the baseline-estimator SHR of the frame and are
repeated on every row of that frame (empty when not measured). Rows are
sorted by estimator, recording and frame index.
"""
from __future__ import annotations

import csv
import io
import math
from collections import defaultdict
from pathlib import Path
from typing import Dict, Iterable, List

import numpy as np

from ..errors import ValidationError
from ..profile import QoELabel
from ..synth import TruthTrack
from ..tracks import EstimateTrack

__all__ = [
    "TRUTH_COLUMNS",
    "TRACK_COLUMNS",
    "RECORD_COLUMNS",
    "ingest_annotations",
    "write_annotations",
    "ingest_track",
    "write_track",
    "write_records",
    "read_records",
    "fmt_float",
]

TRUTH_COLUMNS = ["recording", "frame_index", "time_s", "fo_star_hz", "voiced"]
TRACK_COLUMNS = ["time_s", "fo_hz"]
RECORD_COLUMNS = [
    "recording", "frame_index", "time_s", "fo_star_hz", "estimator",
    "fo_hat_hz", "label", "m_hat", "shr_db", "shr_m",
]


def fmt_float(x, digits: int = 6) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    s = f"{x:.{digits}f}"
    return "0." + "0" * digits if s == "-0." + "0" * digits else s


def _reader(path, columns):
    text = Path(path).read_text()
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r and any(c.strip() for c in r)]
    if not rows:
        raise ValidationError(f"{path}: empty file")
    header = [c.strip() for c in rows[0]]
    if header != columns:
        raise ValidationError(f"{path}: expected header {','.join(columns)}, got {','.join(header)}")
    for lineno, r in enumerate(rows[1:], start=2):
        if len(r) != len(columns):
            raise ValidationError(f"{path}:{lineno}: expected {len(columns)} fields, got {len(r)}")
        yield lineno, [c.strip() for c in r]


def _number(text, path, lineno, column):
    try:
        v = float(text)
    except ValueError:
        raise ValidationError(f"{path}:{lineno}: {column}={text!r} is not a number") from None
    if not math.isfinite(v):
        raise ValidationError(f"{path}:{lineno}: {column} must be finite")
    return v


def _flag(text, path, lineno):
    t = text.lower()
    if t in ("1", "true", "yes"):
        return True
    if t in ("0", "false", "no"):
        return False
    raise ValidationError(f"{path}:{lineno}: voiced={text!r} is not a boolean")


def ingest_annotations(path) -> Dict[str, TruthTrack]:
    """Parse a truth CSV into one :class:`TruthTrack` per recording."""
    rows = defaultdict(dict)
    for lineno, (rec, idx, t, fo, voiced) in _reader(path, TRUTH_COLUMNS):
        if not rec:
            raise ValidationError(f"{path}:{lineno}: empty recording id")
        try:
            i = int(idx)
        except ValueError:
            raise ValidationError(f"{path}:{lineno}: frame_index={idx!r} is not an integer") from None
        if i < 0:
            raise ValidationError(f"{path}:{lineno}: negative frame_index")
        if i in rows[rec]:
            raise ValidationError(f"{path}:{lineno}: duplicate frame ({rec}, {i})")
        v = _flag(voiced, path, lineno)
        t = _number(t, path, lineno, "time_s")
        if v:
            if not fo:
                raise ValidationError(f"{path}:{lineno}: voiced frame without fo_star_hz")
            fo = _number(fo, path, lineno, "fo_star_hz")
            if fo <= 0:
                raise ValidationError(f"{path}:{lineno}: fo_star_hz must be positive")
        else:
            fo = 0.0
        rows[rec][i] = (t, fo, v)

    out = {}
    for rec in sorted(rows):
        idx = np.array(sorted(rows[rec]))
        t = np.array([rows[rec][i][0] for i in idx])
        if np.any(np.diff(t) <= 0):
            raise ValidationError(f"{path}: times of recording {rec!r} are not increasing with frame_index")
        fo = np.array([rows[rec][i][1] for i in idx])
        v = np.array([rows[rec][i][2] for i in idx], dtype=bool)
        out[rec] = TruthTrack(rec, idx, t, fo, v)
    return out


def write_annotations(path, truths: Iterable[TruthTrack]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRUTH_COLUMNS)
        for tr in sorted(truths, key=lambda t: t.recording):
            for i, t, fo, v in zip(tr.frame_index, tr.times, tr.fo_star, tr.voiced):
                w.writerow([tr.recording, int(i), fmt_float(t), fmt_float(fo) if v else "", int(bool(v))])


def ingest_track(path, name=None) -> EstimateTrack:
    """Parse a ``time_s,fo_hz`` track; ``name`` defaults to the parent directory name."""
    path = Path(path)
    times, fos = [], []
    for lineno, (t, fo) in _reader(path, TRACK_COLUMNS):
        times.append(_number(t, path, lineno, "time_s"))
        fos.append(_number(fo, path, lineno, "fo_hz"))
    if not times:
        raise ValidationError(f"{path}: track has no rows")
    return EstimateTrack(name or path.parent.name, np.array(times), np.array(fos))


def write_track(path, track: EstimateTrack) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACK_COLUMNS)
        for t, fo in zip(track.times, track.fo_hz):
            w.writerow([fmt_float(t), fmt_float(fo)])


def write_records(path_or_fh, records) -> None:
    """Serialise frame records in the fixed long format."""
    rows = []
    for r in records:
        for est in r.estimates:
            fo_hat = r.estimates[est]
            rows.append((est, r.recording, r.frame_index, [
                r.recording, r.frame_index, fmt_float(r.time_s), fmt_float(r.fo_star), est,
                fmt_float(fo_hat), str(r.labels[est]), fmt_float(r.m_hat[est]),
                fmt_float(r.shr_db, 4), "" if r.shr_m is None else r.shr_m,
            ]))
    rows.sort(key=lambda x: x[:3])
    own = isinstance(path_or_fh, (str, Path))
    fh = open(path_or_fh, "w", newline="") if own else path_or_fh
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RECORD_COLUMNS)
        for row in rows:
            w.writerow(row[3])
    finally:
        if own:
            fh.close()


def read_records(path) -> List:
    """Inverse of :func:`write_records`."""
    from .evaluate import FrameRecord

    frames = {}
    for lineno, cols in _reader(path, RECORD_COLUMNS):
        rec, idx, t, fo_star, est, fo_hat, label, m_hat, shr_db, shr_m = cols
        key = (rec, int(idx))
        if key not in frames:
            frames[key] = FrameRecord(
                recording=rec, frame_index=int(idx), time_s=float(t), fo_star=float(fo_star),
                shr_db=float(shr_db) if shr_db else None, shr_m=int(shr_m) if shr_m else None,
            )
        fr = frames[key]
        if est in fr.estimates:
            raise ValidationError(f"{path}:{lineno}: duplicate estimator {est!r} for frame {key}")
        fr.estimates[est] = float(fo_hat)
        fr.labels[est] = QoELabel.parse(label)
        fr.m_hat[est] = float(m_hat) if m_hat else None
    return [frames[k] for k in sorted(frames)]
