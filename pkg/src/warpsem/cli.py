"""Command-line front end: ``warpsem enhance | evaluate | selftest``.

Exit codes: 0 success, 1 I/O or other failure, 2 unsupported WAV format,
3 malformed config, 4 evaluation found no usable file pairs.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

from .config import ConfigError, load_config
from .engine import Engine, EngineConfig
from .metrics import log_spectral_distance, segmental_snr
from .wavio import WavFormatError, read_wav, write_wav

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_WAV = 2
EXIT_CONFIG = 3
EXIT_EMPTY = 4

TRACE_COLUMNS = ("block", "band", "snr_mean", "snr_var", "vad_p", "gain", "free_energy")
METRIC_KEYS = ("seg_snr_in", "seg_snr_out", "seg_snr_improvement", "log_spectral_distance")


def _config(path) -> EngineConfig:
    return EngineConfig() if path is None else load_config(path)


def trace_rows(trace):
    """Flatten per-block diagnostics into rows of :data:`TRACE_COLUMNS`."""
    for k, d in enumerate(trace):
        final_f = d.free_energy[-1]
        for b in range(d.gain.shape[0]):
            yield (k, b, float(d.snr_mean[b]), float(d.snr_var[b]), float(d.vad_p[b]),
                   float(d.gain[b]), float(final_f[b]))


def write_trace(path, trace):
    """CSV when ``path`` ends in ``.csv``, JSON lines (one record per block) otherwise."""
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        if path.suffix.lower() == ".csv":
            w = csv.writer(fh)
            w.writerow(TRACE_COLUMNS)
            w.writerows(trace_rows(trace))
            return
        rows = {}
        for row in trace_rows(trace):
            rows.setdefault(row[0], []).append(dict(zip(TRACE_COLUMNS[1:], row[1:])))
        for k in sorted(rows):
            fh.write(json.dumps({"block": k, "bands": rows[k]}) + "\n")


def enhance_file(input_path, output_path, config: EngineConfig, trace_path=None):
    x, spec = read_wav(input_path, int(config.sample_rate))
    engine = Engine(config, keep_trace=trace_path is not None)
    y = engine.process(x)
    write_wav(output_path, y, spec)
    if trace_path is not None:
        write_trace(trace_path, engine.trace)


def file_metrics(clean, noisy, enhanced) -> dict:
    seg_in = segmental_snr(clean, noisy)
    seg_out = segmental_snr(clean, enhanced)
    return {"seg_snr_in": seg_in, "seg_snr_out": seg_out,
            "seg_snr_improvement": seg_out - seg_in,
            "log_spectral_distance": log_spectral_distance(clean, enhanced)}


def cell_key(noise_type, snr_db) -> str:
    snr = "unknown" if snr_db is None else f"{float(snr_db):g}"
    return f"{noise_type}/{snr}"


def _cell_order(key: str):
    noise_type, _, snr = key.rpartition("/")
    try:
        return noise_type, 0, float(snr)
    except ValueError:
        return noise_type, 1, 0.0


def aggregate(files) -> dict:
    """Mean metrics per ``noise_type/snr_db`` cell; independent of file order."""
    cells = {}
    for f in files:
        cells.setdefault(f["cell"], []).append(f)
    out = {}
    for key in sorted(cells, key=_cell_order):
        members = cells[key]
        agg = {"n_files": len(members)}
        for m in METRIC_KEYS:
            vals = sorted(v[m] for v in members if not math.isnan(v[m]))
            agg[m] = math.fsum(vals) / len(vals) if vals else float("nan")
        out[key] = agg
    return out


def format_table(aggregates) -> str:
    head = f"{'cell':<24}{'files':>6}{'segSNR in':>11}{'segSNR out':>12}{'improv.':>9}{'LSD':>8}"
    lines = [head, "-" * len(head)]
    for key, a in aggregates.items():
        lines.append(f"{key:<24}{a['n_files']:>6}{a['seg_snr_in']:>11.2f}"
                     f"{a['seg_snr_out']:>12.2f}{a['seg_snr_improvement']:>9.2f}"
                     f"{a['log_spectral_distance']:>8.2f}")
    return "\n".join(lines)


def evaluate_dirs(noisy_dir, clean_dir, config: EngineConfig, manifest=None) -> dict:
    """Enhance every filename-paired WAV and collect metrics into a report dict."""
    noisy_dir, clean_dir = Path(noisy_dir), Path(clean_dir)
    for d in (noisy_dir, clean_dir):
        if not d.is_dir():
            raise FileNotFoundError(f"not a directory: {d}")
    noisy = {p.name for p in noisy_dir.glob("*.wav")}
    clean = {p.name for p in clean_dir.glob("*.wav")}
    warnings = [f"unpaired noisy file skipped: {n}" for n in sorted(noisy - clean)]
    warnings += [f"unpaired clean file skipped: {n}" for n in sorted(clean - noisy)]
    manifest = manifest or {}
    files = []
    for name in sorted(noisy & clean):
        try:
            x, _ = read_wav(noisy_dir / name, int(config.sample_rate))
            c, _ = read_wav(clean_dir / name, int(config.sample_rate))
        except ValueError as exc:
            # covers unsupported formats and files scipy cannot parse
            warnings.append(f"{name} skipped: {exc}")
            continue
        if x.shape != c.shape:
            warnings.append(f"{name} skipped: length mismatch {x.shape[0]} vs {c.shape[0]}")
            continue
        y = Engine(config).process(x)
        meta = manifest.get(name, {})
        if name not in manifest and manifest:
            warnings.append(f"{name} has no manifest entry")
        noise_type = meta.get("noise_type", "unknown")
        snr_db = meta.get("snr_db")
        entry = {"file": name, "noise_type": noise_type, "snr_db": snr_db,
                 "cell": cell_key(noise_type, snr_db)}
        entry.update(file_metrics(c, x, y))
        files.append(entry)
    return {"n_files": len(files), "files": files, "aggregates": aggregate(files),
            "warnings": warnings, "warning_count": len(warnings)}


def _json_safe(obj):
    # JSON has no NaN; report undefined metrics as null
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_json_safe(v) for v in obj]
    return obj


def cmd_enhance(args) -> int:
    enhance_file(args.input, args.output, _config(args.config), args.trace)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    config = _config(args.config)
    manifest = None
    if args.manifest is not None:
        with open(args.manifest, encoding="utf-8") as fh:
            manifest = json.load(fh)
    report = evaluate_dirs(args.noisy_dir, args.clean_dir, config, manifest)
    if args.report is not None:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(_json_safe(report), fh, indent=2)
    print(format_table(report["aggregates"]))
    print(f"{report['n_files']} files, {report['warning_count']} warnings")
    for w in report["warnings"]:
        print(f"warning: {w}", file=sys.stderr)
    return EXIT_OK if report["n_files"] else EXIT_EMPTY


def cmd_selftest(args) -> int:
    from .selftest import run_selftest
    return EXIT_OK if run_selftest() else EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="warpsem", description="Warped filter bank speech enhancer.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enhance", help="enhance one WAV file")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--config", help="JSON config (all keys required); defaults if omitted")
    p.add_argument("--trace", help="write per-block diagnostics (.csv or JSON lines)")
    p.set_defaults(func=cmd_enhance)

    p = sub.add_parser("evaluate", help="enhance and score a paired noisy/clean corpus")
    p.add_argument("noisy_dir")
    p.add_argument("clean_dir")
    p.add_argument("--config")
    p.add_argument("--report", help="write the JSON report here")
    p.add_argument("--manifest", help="JSON map: file name -> {noise_type, snr_db}")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("selftest", help="run quick built-in numerical checks")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except WavFormatError as exc:
        print(f"error: unsupported WAV: {exc}", file=sys.stderr)
        return EXIT_WAV
    except ConfigError as exc:
        print(f"error: malformed config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
