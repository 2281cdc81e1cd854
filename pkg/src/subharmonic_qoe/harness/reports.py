"""Aggregate reports over frame records: outcome rates, contingency tables, histograms.

Report sections are plain dicts of ints, floats and lists so they serialise
directly to JSON. All orderings are fixed (estimator names sorted, categories
in ``correct, subharmonic, other`` order) and floats are written with fixed
precision, so files are byte-stable.
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Dict, List, Sequence

import numpy as np

from ..errors import ValidationError
from ..profile import QoELabel
from .csvio import fmt_float

__all__ = [
    "CATEGORIES",
    "rates_report",
    "contingency_table",
    "shr_histogram",
    "mhat_histogram",
    "build_report",
    "write_report",
    "render_report",
    "REPORT_FILES",
]

CATEGORIES = QoELabel.CATEGORIES
REPORT_FILES = (
    "rates.csv", "rates.txt", "contingency.csv", "contingency.txt",
    "shr_histogram.csv", "mhat_histogram.csv", "report.txt", "report.json",
)


def _estimators(records) -> List[str]:
    return sorted({name for r in records for name in r.labels})


def rates_report(records) -> Dict[str, dict]:
    """Counts and rates of correct / subharmonic / other outcomes per estimator."""
    out = {}
    for name in _estimators(records):
        labels = [r.labels[name] for r in records if name in r.labels]
        n = len(labels)
        counts = {c: sum(lab.category == c for lab in labels) for c in CATEGORIES}
        row = {"n": n, **counts}
        row["other_unvoiced"] = sum(lab.kind == "unvoiced" for lab in labels)
        row["other_off_interval"] = sum(lab.kind == "off-interval" for lab in labels)
        for c in CATEGORIES:
            row[f"{c}_rate"] = counts[c] / n if n else 0.0
        out[name] = row
    return out


def contingency_table(records, baseline: str = "acf") -> dict:
    """3x3 tables: rows are the baseline outcome, columns the comparison estimator's."""
    names = _estimators(records)
    if records and baseline not in names:
        raise ValidationError(f"baseline estimator {baseline!r} not found; have {', '.join(names)}")
    tables = {}
    for name in names:
        if name == baseline:
            continue
        t = np.zeros((3, 3), dtype=int)
        for r in records:
            if baseline in r.labels and name in r.labels:
                t[CATEGORIES.index(r.labels[baseline].category), CATEGORIES.index(r.labels[name].category)] += 1
        tables[name] = t.tolist()
    return {"baseline": baseline, "categories": list(CATEGORIES), "tables": tables}


def _shr_values(records, baseline, floor_db):
    for r in records:
        lab = r.labels.get(baseline)
        if lab is None or lab.category != "subharmonic" or r.shr_db is None or math.isnan(r.shr_db):
            continue
        yield r, max(r.shr_db, floor_db)


def shr_histogram(records, bin_width_db: float = 2.5, range_db=(-40.0, 0.0), baseline: str = "acf",
                  floor_db: float = -80.0) -> dict:
    """SHR histogram of frames the baseline labelled subharmonic, split by every other estimator's label.

    Bins are left-closed, ``[lo + i w, lo + (i + 1) w)``. Values below the
    range go to the first bin, values at or above its top to the last.
    """
    lo, hi = range_db
    n_bins = int(round((hi - lo) / bin_width_db))
    edges = lo + bin_width_db * np.arange(n_bins + 1)
    names = [n for n in _estimators(records) if n != baseline]
    total = np.zeros(n_bins, dtype=int)
    split = {n: {c: np.zeros(n_bins, dtype=int) for c in CATEGORIES} for n in names}
    for r, v in _shr_values(records, baseline, floor_db):
        b = int(np.clip(np.searchsorted(edges, v, side="right") - 1, 0, n_bins - 1))
        total[b] += 1
        for n in names:
            if n in r.labels:
                split[n][r.labels[n].category][b] += 1
    return {
        "baseline": baseline,
        "edges_db": [float(e) for e in edges],
        "n": int(total.sum()),
        "total": total.tolist(),
        "estimators": {n: {c: split[n][c].tolist() for c in CATEGORIES} for n in names},
    }


def mhat_histogram(records, n_bins: int = 48, range_=(0.5, 12.0)) -> dict:
    """Histogram of ``fo_star / fo_hat`` per estimator on log-spaced, left-closed bins.

    Unvoiced estimates are counted separately, as are values outside the range.
    """
    lo, hi = range_
    edges = lo * (hi / lo) ** (np.arange(n_bins + 1) / n_bins)
    edges[-1] = hi
    out = {}
    for name in _estimators(records):
        counts = np.zeros(n_bins, dtype=int)
        below = above = unvoiced = 0
        for r in records:
            if name not in r.labels:
                continue
            m = r.m_hat.get(name)
            if m is None:
                unvoiced += 1
            elif m < lo:
                below += 1
            elif m >= hi:
                above += 1
            else:
                counts[min(int(np.searchsorted(edges, m, side="right")) - 1, n_bins - 1)] += 1
        out[name] = {"counts": counts.tolist(), "below": below, "above": above, "unvoiced": unvoiced}
    return {"edges": [float(e) for e in edges], "estimators": out}


def build_report(records, config=None) -> dict:
    from .config import HarnessConfig

    cfg = config or HarnessConfig()
    names = _estimators(records)
    return {
        "n_frames": len(records),
        "n_recordings": len({r.recording for r in records}),
        "rates": rates_report(records),
        "contingency": contingency_table(records, cfg.baseline) if cfg.baseline in names else None,
        "shr_histogram": shr_histogram(records, cfg.shr_bin_width_db, cfg.shr_range_db, cfg.baseline,
                                       cfg.shr_db_floor),
        "mhat_histogram": mhat_histogram(records, cfg.mhat_bins, cfg.mhat_range),
    }


# --- serialisation -----------------------------------------------------------------

def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _table_text(header: Sequence[str], rows) -> str:
    cells = [list(map(str, header))] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) if i else c.ljust(w) for i, (c, w) in enumerate(zip(r, widths))).rstrip()
             for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


_RATE_COLS = ["n", "correct", "subharmonic", "other", "other_unvoiced", "other_off_interval",
              "correct_rate", "subharmonic_rate", "other_rate"]


def _rates_rows(rates):
    for name, row in rates.items():
        yield [name] + [fmt_float(row[c]) if c.endswith("_rate") else row[c] for c in _RATE_COLS]


def _rates_text(rates) -> str:
    rows = [[name, row["n"]] + [f"{row[c]} ({100 * row[c + '_rate']:.1f}%)" for c in CATEGORIES]
            for name, row in rates.items()]
    return _table_text(["estimator", "n", *CATEGORIES], rows)


def _contingency_rows(cont):
    if cont is None:
        return
    for name, table in cont["tables"].items():
        for c, row in zip(CATEGORIES, table):
            yield [name, c] + row


def _contingency_text(cont) -> str:
    if cont is None:
        return "(no baseline estimator in records)\n"
    parts = []
    for name, table in cont["tables"].items():
        parts.append(f"{cont['baseline']} (rows) vs {name} (columns)\n")
        parts.append(_table_text([cont["baseline"], *CATEGORIES],
                                 [[c, *row] for c, row in zip(CATEGORIES, table)]))
    return "\n".join(parts) if parts else "(no comparison estimators)\n"


def _shr_rows(h):
    edges = h["edges_db"]
    names = sorted(h["estimators"])
    header = ["bin_lo_db", "bin_hi_db", "total"] + [f"{n}_{c}" for n in names for c in CATEGORIES]
    rows = []
    for i, tot in enumerate(h["total"]):
        rows.append([fmt_float(edges[i], 2), fmt_float(edges[i + 1], 2), tot]
                    + [h["estimators"][n][c][i] for n in names for c in CATEGORIES])
    return header, rows


def _mhat_rows(h):
    edges = h["edges"]
    rows = []
    for name, e in h["estimators"].items():
        for i, c in enumerate(e["counts"]):
            rows.append([name, i, fmt_float(edges[i]), fmt_float(edges[i + 1]), c])
        rows.append([name, "below", "", fmt_float(edges[0]), e["below"]])
        rows.append([name, "above", fmt_float(edges[-1]), "", e["above"]])
        rows.append([name, "unvoiced", "", "", e["unvoiced"]])
    return ["estimator", "bin", "lo", "hi", "count"], rows


def _round_floats(obj, digits=6):
    if isinstance(obj, float):
        if math.isinf(obj) or math.isnan(obj):
            return str(obj)
        r = round(obj, digits)
        return 0.0 if r == 0 else r
    if isinstance(obj, dict):
        return {k: _round_floats(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v, digits) for v in obj]
    return obj


def render_report(report: dict) -> Dict[str, str]:
    """File name to text for every report file."""
    rates_csv = _csv_text(["estimator", *_RATE_COLS], _rates_rows(report["rates"]))
    rates_txt = _rates_text(report["rates"])
    cont_csv = _csv_text(["comparison", "baseline_label", *CATEGORIES], _contingency_rows(report["contingency"]))
    cont_txt = _contingency_text(report["contingency"])
    shr_header, shr_rows = _shr_rows(report["shr_histogram"])
    mhat_header, mhat_rows = _mhat_rows(report["mhat_histogram"])
    shr_txt = _table_text(shr_header, shr_rows)
    summary = [
        f"frames evaluated: {report['n_frames']} from {report['n_recordings']} recordings",
        "",
        "Outcome rates",
        rates_txt,
        "Contingency tables",
        cont_txt,
        f"SHR of {report['shr_histogram']['baseline']} subharmonic-error frames "
        f"(n = {report['shr_histogram']['n']})",
        shr_txt,
    ]
    return {
        "rates.csv": rates_csv,
        "rates.txt": rates_txt,
        "contingency.csv": cont_csv,
        "contingency.txt": cont_txt,
        "shr_histogram.csv": _csv_text(shr_header, shr_rows),
        "mhat_histogram.csv": _csv_text(mhat_header, mhat_rows),
        "report.txt": "\n".join(summary),
        "report.json": json.dumps(_round_floats(report), indent=2, sort_keys=True) + "\n",
    }


def write_report(report: dict, out_dir) -> List[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, text in render_report(report).items():
        p = out_dir / name
        p.write_text(text)
        paths.append(p)
    return paths
