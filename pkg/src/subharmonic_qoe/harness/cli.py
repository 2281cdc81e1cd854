"""Command line: ``subharmonic-qoe {synth,estimate,classify,report,run}``.

Directory conventions:

* a corpus is a directory of ``<recording>.wav`` files plus a truth CSV;
* tracks live in ``<tracks>/<estimator>/<recording>.csv``;
* ``run`` writes ``tracks/``, ``records.csv`` and ``report/`` under ``--out-dir``.

Exit codes: 0 success, 1 some recordings could not be evaluated (outputs
still written for the rest), 2 invalid input or usage.
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import fields, replace
from pathlib import Path

from ..errors import FrameRangeError, InvalidInputError, InvalidSpecError, ValidationError, WavFormatError
from ..signal import resample
from ..synth import SynthSpec, synthesize
from .config import HarnessConfig, apply_overrides, load_config
from .corpus import MixedCorpusSpec, mixed_corpus
from .csvio import ingest_annotations, ingest_track, read_records, write_annotations, write_records, write_track
from .evaluate import evaluate, run_builtin
from .reports import build_report, write_report
from .wavio import ingest_wav, write_wav

log = logging.getLogger("subharmonic_qoe")

EXIT_OK, EXIT_PARTIAL, EXIT_INVALID = 0, 1, 2


class CliError(Exception):
    pass


# --- shared helpers ----------------------------------------------------------------

def _config(args) -> HarnessConfig:
    cfg = load_config(args.config) if getattr(args, "config", None) else HarnessConfig()
    over = {}
    for key in ("fo_min", "fo_max", "baseline"):
        v = getattr(args, key, None)
        if v is not None:
            over[key] = v
    return apply_overrides(cfg, over) if over else cfg


def _parse_synth_file(path) -> dict:
    kinds = {f.name: f.type for f in fields(SynthSpec)}
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (s.strip() for s in line.partition("="))
        if not sep or key not in kinds:
            raise ValidationError(f"{path}:{lineno}: expected '<SynthSpec field> = value', got {line!r}")
        out[key] = _synth_value(key, value, path, lineno)
    return out


def _synth_value(key, value, path, lineno):
    try:
        if key == "am_schedule":
            return tuple(float(v) for v in value.split(","))
        if value.lower() == "none":
            return None
        if key in ("rate", "n_harmonics", "subh_period", "seed"):
            return int(value)
        return float(value)
    except ValueError:
        raise ValidationError(f"{path}:{lineno}: bad value {value!r} for {key}") from None


def _wav_paths(items):
    paths = []
    for item in items:
        p = Path(item)
        if p.is_dir():
            paths.extend(sorted(p.glob("*.wav")))
        elif p.exists():
            paths.append(p)
        else:
            raise CliError(f"no such file or directory: {p}")
    if not paths:
        raise CliError("no WAV files given")
    return paths


def _load_corpus(wav_dir, rec_ids, errors):
    corpus = {}
    for rec in rec_ids:
        p = Path(wav_dir) / f"{rec}.wav"
        if not p.exists():
            errors.append((rec, f"missing WAV file {p}"))
            continue
        try:
            corpus[rec] = ingest_wav(p)
        except WavFormatError as e:
            errors.append((rec, str(e)))
    return corpus


def _load_tracks(track_dir):
    track_dir = Path(track_dir)
    if not track_dir.is_dir():
        raise CliError(f"track directory {track_dir} does not exist")
    tracks = {}
    for sub in sorted(p for p in track_dir.iterdir() if p.is_dir()):
        files = sorted(sub.glob("*.csv"))
        if files:
            tracks[sub.name] = {f.stem: ingest_track(f, sub.name) for f in files}
    if not tracks:
        raise CliError(f"no <estimator>/<recording>.csv tracks under {track_dir}")
    return tracks


def _write_tracks(out_dir, tracks):
    for name, per_rec in tracks.items():
        d = Path(out_dir) / name
        d.mkdir(parents=True, exist_ok=True)
        for rec, tr in per_rec.items():
            write_track(d / f"{rec}.csv", tr)


def _report_errors(errors) -> int:
    for rec, msg in errors:
        print(f"error: {rec}: {msg}", file=sys.stderr)
    return EXIT_PARTIAL if errors else EXIT_OK


# --- subcommands -------------------------------------------------------------------

def cmd_synth(args) -> int:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cfg = _config(args)
    if args.mixed_corpus:
        spec = MixedCorpusSpec(n_recordings=args.mixed_corpus, seed=args.seed if args.seed is not None else 2025)
        waves, truths, _ = mixed_corpus(spec, cfg.frames)
    else:
        kw = _parse_synth_file(args.spec) if args.spec else {}
        for f in fields(SynthSpec):
            v = getattr(args, f.name, None)
            if v is not None:
                kw[f.name] = tuple(v) if f.name == "am_schedule" else v
        wave, truth = synthesize(SynthSpec(**kw), cfg.frames, args.recording)
        waves, truths = {args.recording: wave}, {args.recording: truth}
    for rec, w in waves.items():
        write_wav(out / f"{rec}.wav", w, encoding=args.encoding)
    write_annotations(out / "truth.csv", truths.values())
    print(f"wrote {len(waves)} recording(s) and truth.csv to {out}")
    return EXIT_OK


def cmd_estimate(args) -> int:
    from ..acf import estimate

    cfg = _config(args)
    name = args.name or ("acf" if args.no_viterbi else "viterbi")
    out = Path(args.out_dir) / name
    out.mkdir(parents=True, exist_ok=True)
    for p in _wav_paths(args.wav):
        wave = ingest_wav(p)
        if wave.rate != cfg.analysis_rate:
            wave = resample(wave, cfg.analysis_rate)
        track = estimate(wave, cfg.frames, cfg.tracker, postprocess=not args.no_viterbi, name=name)
        write_track(out / f"{p.stem}.csv", track)
        log.info("%s: %d frames", p.name, len(track))
    print(f"wrote {name} tracks to {out}")
    return EXIT_OK


def cmd_classify(args) -> int:
    cfg = _config(args)
    truth = ingest_annotations(args.truth)
    errors = []
    corpus = _load_corpus(args.wav_dir, sorted(truth), errors)
    tracks = _load_tracks(args.tracks) if args.tracks else {}
    if args.builtin:
        tracks.update(run_builtin(corpus, cfg, args.workers))
    if not tracks:
        raise CliError("no estimator tracks: pass --tracks and/or --builtin")
    records = evaluate(corpus, truth, tracks, cfg, workers=args.workers, errors=errors)
    write_records(args.out, records)
    print(f"wrote {len(records)} frame records to {args.out}")
    return _report_errors(errors)


def cmd_report(args) -> int:
    cfg = _config(args)
    records = read_records(args.records)
    paths = write_report(build_report(records, cfg), args.out_dir)
    print(f"wrote {len(paths)} report files to {args.out_dir}")
    if args.print:
        print((Path(args.out_dir) / "report.txt").read_text())
    return EXIT_OK


def cmd_run(args) -> int:
    cfg = _config(args)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    errors = []
    if args.synthetic:
        spec = MixedCorpusSpec(n_recordings=args.synthetic, seed=args.seed if args.seed is not None else 2025)
        corpus, truth, _ = mixed_corpus(spec, cfg.frames)
    else:
        if not (args.wav_dir and args.truth):
            raise CliError("run needs --wav-dir and --truth, or --synthetic N")
        truth = ingest_annotations(args.truth)
        corpus = _load_corpus(args.wav_dir, sorted(truth), errors)
    tracks = _load_tracks(args.tracks) if args.tracks else {}
    builtin = run_builtin(corpus, cfg, args.workers)
    for name in builtin:
        if name in tracks:
            raise CliError(f"external estimator name {name!r} clashes with a built-in track")
    _write_tracks(out / "tracks", builtin)
    tracks.update(builtin)
    records = evaluate(corpus, truth, tracks, cfg, workers=args.workers, errors=errors)
    write_records(out / "records.csv", records)
    report = build_report(records, cfg)
    write_report(report, out / "report")
    print((out / "report" / "report.txt").read_text())
    return _report_errors(errors)


# --- parser ------------------------------------------------------------------------

def _add_common(p, estimator=False):
    p.add_argument("--config", help="key = value settings file")
    p.add_argument("--workers", type=int, default=1, help="parallel processes (default 1)")
    if estimator:
        p.add_argument("--fo-min", dest="fo_min", type=float, help="search floor in Hz (default 60)")
        p.add_argument("--fo-max", dest="fo_max", type=float, help="search ceiling in Hz (default 700)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="subharmonic-qoe", description=__doc__.split("\n")[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write synthetic WAV(s) and a truth CSV")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--spec", help="SynthSpec file of 'field = value' lines; flags override it")
    p.add_argument("--recording", default="synth", help="recording id (single-spec mode)")
    p.add_argument("--mixed-corpus", type=int, metavar="N", help="write the seeded mixed corpus of N recordings")
    p.add_argument("--encoding", choices=["pcm16", "float32"], default="float32")
    p.add_argument("--fo", dest="fo_hz", type=float)
    p.add_argument("--duration", dest="duration_s", type=float)
    p.add_argument("--rate", type=int)
    p.add_argument("--n-harmonics", type=int)
    p.add_argument("--tilt", dest="tilt_db_per_octave", type=float)
    p.add_argument("--subh-period", type=int)
    p.add_argument("--am-extent", type=float)
    p.add_argument("--fm-extent", type=float)
    p.add_argument("--am-schedule", type=float, nargs="+", help="AM extent per 50-ms block")
    p.add_argument("--jitter", type=float)
    p.add_argument("--snr-db", dest="noise_snr_db", type=float)
    p.add_argument("--noise-rms", type=float)
    p.add_argument("--level", dest="level_rms", type=float)
    p.add_argument("--seed", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("estimate", help="run the built-in estimator on WAV files")
    p.add_argument("wav", nargs="+", help="WAV files or directories of them")
    p.add_argument("--out-dir", required=True, help="tracks go to <out-dir>/<name>/<recording>.csv")
    p.add_argument("--no-viterbi", action="store_true", help="ACF mode: per-frame best candidate")
    p.add_argument("--name", help="estimator name (default acf or viterbi)")
    _add_common(p, estimator=True)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("classify", help="label estimator tracks against truth")
    p.add_argument("--wav-dir", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--tracks", help="directory of <estimator>/<recording>.csv")
    p.add_argument("--builtin", action="store_true", help="also evaluate the built-in acf and viterbi tracks")
    p.add_argument("--baseline", help="estimator whose subharmonic frames get an SHR (default acf)")
    p.add_argument("--out", required=True, help="frame-record CSV")
    _add_common(p, estimator=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("report", help="aggregate frame records into report files")
    p.add_argument("--records", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--baseline")
    p.add_argument("--print", action="store_true", help="also print report.txt")
    _add_common(p)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("run", help="estimate, classify and report in one go")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--wav-dir")
    p.add_argument("--truth")
    p.add_argument("--synthetic", type=int, metavar="N", help="use the seeded mixed corpus of N recordings")
    p.add_argument("--seed", type=int)
    p.add_argument("--tracks", help="extra external tracks, <estimator>/<recording>.csv")
    p.add_argument("--baseline")
    _add_common(p, estimator=True)
    p.set_defaults(func=cmd_run)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (CliError, ValidationError, WavFormatError, InvalidSpecError, InvalidInputError,
            FrameRangeError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
