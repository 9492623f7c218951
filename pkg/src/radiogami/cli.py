"""Command-line entry point.

Subcommands: simulate, range, power, light, detect, analyze, sweep, repro.
Exit codes: 0 success, 1 tolerance failure, 2 input error.  All seeded
commands default to the documented constant seed and are idempotent: fixed
seed and inputs give byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import dsp, plots
from .analytics import (
    format_report,
    frequency_stats,
    match_events,
    read_ground_truth,
    read_lux_trace,
    regression_fit,
    report_to_dict,
)
from .channel import fit_path_loss, max_range, snr_at
from .errors import InputError, RadioGamiError
from .fixtures import paper_data_root, read_csv, write_csv
from .repro import LIGHT_NOISE_SD_HZ, REGISTRY, run_repro
from .scenario import DEFAULT_SEED, load_scenario, run, simulate_light_sweep, sweep
from .switching import LightResponseModel, average_power, frequency_under_light


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="RNG seed")
    p.add_argument("--format", choices=("csv", "json"), default="csv",
                   help="report format for analysis outputs")


def _events_json(events) -> list[dict]:
    return [
        {"tag_id": e.tag_id, "start_s": e.start, "end_s": e.end,
         "mean_freq_hz": e.mean_freq, "peak_snr_db": e.peak_snr}
        for e in events
    ]


def _write_events(out: Path, name: str, events, fmt: str) -> Path:
    out.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        path = out / f"{name}.json"
        path.write_text(json.dumps(_events_json(events), indent=1, sort_keys=True) + "\n")
    else:
        path = out / f"{name}.csv"
        dsp.write_event_csv(path, list(events))
    return path


def cmd_simulate(args) -> int:
    scenario = load_scenario(args.config)
    if args.seed != DEFAULT_SEED:
        from dataclasses import replace
        scenario = replace(scenario, seed=args.seed)
    result = run(scenario, mode=args.mode, compress=not args.no_compress)
    path = _write_events(args.out, f"{scenario.name}_events", result.events, args.format)
    report_path = args.out / f"{scenario.name}_report.json"
    report_path.write_text(json.dumps(report_to_dict(result.report), indent=1,
                                      sort_keys=True) + "\n")
    print(format_report(result.report))
    print(f"wrote {path} and {report_path}")
    return 0


def cmd_range(args) -> int:
    pub = read_csv(paper_data_root() / "fig7b.csv")
    by_config: dict[str, dict[float, float]] = {}
    for r in pub:
        by_config.setdefault(r["photodiodes"], {})[float(r["distance_m"])] = float(r["snr_db"])
    rows, series = [], []
    for config, anchors in sorted(by_config.items(), reverse=True):
        model = fit_path_loss((min(anchors), anchors[min(anchors)]),
                              (max(anchors), anchors[max(anchors)]))
        dists = np.arange(1.0, 50.5, 0.5)
        series.append((f"{config} photodiodes", dists, [snr_at(model, d) for d in dists]))
        for d in dists:
            rows.append([config, f"{d:.1f}", f"{snr_at(model, d):.4f}"])
        print(f"{config} photodiodes: snr0 = {model.snr0:.2f} dB, "
              f"n = {model.exponent:.4f}, max range = {max_range(model):.2f} m")
    args.out.mkdir(parents=True, exist_ok=True)
    path = args.out / "range.csv"
    write_csv(path, ["photodiodes", "distance_m", "snr_db"], rows)
    plots.multi_line_figure(args.out / "range.png", series, "distance (m)", "SNR (dB)",
                            "SNR over distance", hline=5.0)
    print(f"wrote {path} and {path.with_suffix('.png')}")
    return 0


def cmd_power(args) -> int:
    duties = [float(x) for x in args.duty.split(",")]
    rows = []
    for d in duties:
        if not 0.0 <= d <= 1.0:
            raise InputError(f"duty {d} outside [0, 1]")
        p = average_power(d, args.tdo_uw * 1e-6, has_switch=d < 1.0)
        rows.append([f"{d:.2f}", f"{p * 1e6:.2f}"])
        print(f"duty {d:5.0%}: {p * 1e6:6.2f} uW")
    args.out.mkdir(parents=True, exist_ok=True)
    path = args.out / "power.csv"
    write_csv(path, ["duty", "avg_power_uw"], rows)
    print(f"wrote {path}")
    return 0


def cmd_light(args) -> int:
    model = LightResponseModel()
    lux_grid = np.arange(args.min_lux, args.max_lux + 1.0, args.step_lux)
    rows = []
    for lux in lux_grid:
        f = frequency_under_light(model, float(lux))
        rows.append([f"{lux:.0f}", "" if f is None else f"{f / 1e6:.4f}"])
    lux, freq = simulate_light_sweep(model, lux_grid, args.noise_sd_hz, args.seed)
    if len(lux) >= 2:
        slope, _, r2 = regression_fit(lux, freq)
        print(f"noisy fit: slope = {slope * 100 / 1e6:.4f} MHz/100 lux, R^2 = {r2:.4f}")
    args.out.mkdir(parents=True, exist_ok=True)
    path = args.out / "light.csv"
    write_csv(path, ["lux", "freq_mhz"], rows)
    plots.line_figure(args.out / "light.png", lux, freq / 1e6, "illuminance (lux)",
                      "frequency (MHz)", "Simulated lux sweep")
    print(f"wrote {path}")
    return 0


def _load_bands(path: Path) -> list[tuple[str, tuple[float, float]]]:
    try:
        data = json.loads(path.read_text())
        return [(b["tag_id"], (float(b["band_hz"][0]), float(b["band_hz"][1])))
                for b in data]
    except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        raise InputError(f"bad bands config {path}: {exc}") from exc


def cmd_detect(args) -> int:
    stream = dsp.read_iq(args.iq)
    bands = _load_bands(args.bands)
    spec = dsp.stft(stream, fft_size=args.fft_size, hop=args.hop or None,
                    averages=args.averages)
    events = dsp.detect_events(spec, bands, threshold=args.threshold,
                               debounce=args.debounce)
    path = _write_events(args.out, Path(args.iq).stem + "_events", events, args.format)
    print(f"{len(events)} events -> {path}")
    return 0


def cmd_analyze(args) -> int:
    events_rows = read_csv(args.events)
    events = [
        dsp.TagEvent(tag_id=r["tag_id"], band=(-np.inf, np.inf),
                     start=float(r["start_s"]), end=float(r["end_s"]),
                     mean_freq=float(r["mean_freq_hz"]),
                     peak_snr=float(r["peak_snr_db"]))
        for r in events_rows
    ]
    truth = read_ground_truth(args.truth)
    if args.lux:
        lux = read_lux_trace(args.lux)
        truth = type(truth)(entries=truth.entries, lux_trace=lux)
    report = match_events(events, truth, window=args.window)
    args.out.mkdir(parents=True, exist_ok=True)
    report_path = args.out / "analysis_report.json"
    payload = report_to_dict(report)
    payload["frequency_stats"] = {}
    for tag in sorted({e.tag_id for e in events}):
        stats = frequency_stats([e.mean_freq for e in events if e.tag_id == tag])
        payload["frequency_stats"][tag] = {
            "mean_hz": stats.mean, "sd_hz": stats.sd, "min_hz": stats.min,
            "max_hz": stats.max, "bandwidth_hz": stats.bandwidth, "cv_pct": stats.cv,
        }
    report_path.write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n")
    print(format_report(report))
    print(f"wrote {report_path}")
    return 0


def cmd_sweep(args) -> int:
    try:
        template = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot load template {args.config}: {exc}") from exc
    values = [float(v) for v in args.values.split(",")]
    results = sweep(template, args.param, values, mode=args.mode, workers=args.workers)
    args.out.mkdir(parents=True, exist_ok=True)
    path = args.out / "sweep.csv"
    header = list(results[0].keys())
    write_csv(path, header, [[r[k] for k in header] for r in results])
    for r in results:
        print(r)
    print(f"wrote {path}")
    return 0


def cmd_repro(args) -> int:
    ids = sorted(REGISTRY) if args.id == "all" else [args.id]
    failed = False
    for rid in ids:
        result = run_repro(rid, args.out, seed=args.seed)
        print(result.summary())
        for c in result.checks:
            marker = {"pass": "ok  ", "FAIL": "FAIL", "info": "info", "flagged": "flag"}[c.verdict]
            note = f"  [{c.note}]" if c.note else ""
            print(f"  {marker} {c.row}/{c.column}: model={c.model} published={c.published}{note}")
        failed |= not result.passed
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="radiogami",
        description="Batteryless tunnel-diode paper-tag simulator and receiver toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a scenario file end to end")
    p.add_argument("--config", type=Path, required=True, help="scenario JSON (schema 1)")
    p.add_argument("--mode", choices=("spectral", "iq"), default="spectral")
    p.add_argument("--no-compress", action="store_true",
                   help="disable silent-span skipping in spectral mode")
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("range", help="path-loss curves from the published endpoints")
    _add_common(p)
    p.set_defaults(func=cmd_range)

    p = sub.add_parser("power", help="duty-cycled average power table")
    p.add_argument("--duty", default="1.0,0.6,0.1", help="comma-separated duty fractions")
    p.add_argument("--tdo-uw", type=float, default=49.0, help="continuous draw in uW")
    _add_common(p)
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("light", help="simulated lux sweep with regression fit")
    p.add_argument("--min-lux", type=float, default=500.0)
    p.add_argument("--max-lux", type=float, default=1000.0)
    p.add_argument("--step-lux", type=float, default=10.0)
    p.add_argument("--noise-sd-hz", type=float, default=LIGHT_NOISE_SD_HZ)
    _add_common(p)
    p.set_defaults(func=cmd_light)

    p = sub.add_parser("detect", help="detect tag events in an IQ capture")
    p.add_argument("--iq", type=Path, required=True, help=".cf32 or .cu8 file with sidecar")
    p.add_argument("--bands", type=Path, required=True, help="bands JSON config")
    p.add_argument("--fft-size", type=int, default=dsp.DEFAULT_FFT_SIZE)
    p.add_argument("--hop", type=int, default=0, help="hop size (default fft/2)")
    p.add_argument("--averages", type=int, default=16)
    p.add_argument("--threshold", type=float, default=5.0)
    p.add_argument("--debounce", type=int, default=3)
    _add_common(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("analyze", help="match an event log against ground truth")
    p.add_argument("--events", type=Path, required=True, help="event CSV")
    p.add_argument("--truth", type=Path, required=True, help="ground-truth CSV")
    p.add_argument("--lux", type=Path, default=None, help="optional lux trace CSV")
    p.add_argument("--window", type=float, default=5.0, help="match window (s)")
    _add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="run a scenario template across parameter values")
    p.add_argument("--config", type=Path, required=True, help="scenario template JSON")
    p.add_argument("--param", required=True, help="dotted path into the template")
    p.add_argument("--values", required=True, help="comma-separated values")
    p.add_argument("--mode", choices=("spectral", "iq"), default="spectral")
    p.add_argument("--workers", type=int, default=1)
    _add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("repro", help="reproduce a published table or figure")
    p.add_argument("id", help="registry id or 'all': " + ", ".join(sorted(REGISTRY)))
    _add_common(p)
    p.set_defaults(func=cmd_repro)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except RadioGamiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
