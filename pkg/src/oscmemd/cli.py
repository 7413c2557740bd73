"""Command-line interface.

    oscmemd analyze  --input rec.csv [--config a.cfg] [--out-dir DIR] [--emit-traces]
    oscmemd generate --config scenario.cfg --output rec.csv
    oscmemd compare  --input rec.csv [--config a.cfg] [--out-dir DIR] [--window hann]
    oscmemd spectrum --input rec.csv [--out-dir DIR] [--window hann]

Exit status: 0 success, 2 input error, 3 degenerate decomposition (no IMF
could be extracted), 4 write error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .config import AnalysisConfig, load_analysis_config, load_scenario
from .csvio import ingest_csv, write_csv, write_table
from .exceptions import DecompositionError, InputError, WriteError
from .modes import Window, spectral_crest
from .pipeline import analyze_record, channel_spectra, compare_record
from .report import analysis_report, comparison_report, r6, write_json, write_traces
from .synth import generate

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DEGENERATE = 3
EXIT_WRITE = 4

log = logging.getLogger("oscmemd")


def _analysis_config(args) -> AnalysisConfig:
    cfg = load_analysis_config(args.config)
    if getattr(args, "seed_override", None) is not None:
        cfg = replace(cfg, decomposition=replace(cfg.decomposition, rng_seed=args.seed_override))
    if getattr(args, "window", None) is not None:
        cfg = replace(cfg, spectrum_window=Window(args.window))
    return cfg


def _out_dir(args) -> Path:
    out = Path(args.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise WriteError(f"cannot create {out}: {exc}") from exc
    return out


def run_analyze(args) -> int:
    cfg = _analysis_config(args)
    record = ingest_csv(args.input)
    result = analyze_record(record, cfg)
    out = _out_dir(args)
    traces = write_traces(result, out) if args.emit_traces else None
    write_json(analysis_report(result, Path(args.input).stem, traces), out / "report.json")
    for k, c in enumerate(result.ranked[:5], start=1):
        log.info("rank %d: IMF %d %s %.4g Hz", k, c.imf_index, c.classification.value, c.median_joint_frequency)
    return EXIT_DEGENERATE if result.degenerate else EXIT_OK


def run_generate(args) -> int:
    scenario = load_scenario(args.config)
    if args.seed_override is not None:
        scenario = scenario.with_seed(args.seed_override)
    record, _ = generate(scenario)
    write_csv(record, args.output)
    return EXIT_OK


def run_compare(args) -> int:
    cfg = _analysis_config(args)
    record = ingest_csv(args.input)
    cmp = compare_record(record, cfg)
    out = _out_dir(args)
    write_json(comparison_report(cmp, Path(args.input).stem), out / "compare.json")
    log.info("MEMD %.4g Hz, pooled FFT crest %.4g Hz", cmp.memd_frequency, cmp.pooled_crest.frequency)
    return EXIT_DEGENERATE if cmp.analysis.degenerate else EXIT_OK


def run_spectrum(args) -> int:
    cfg = _analysis_config(args)
    record = ingest_csv(args.input)
    spectra = channel_spectra(record, cfg)
    out = _out_dir(args)
    write_table(
        out / "spectrum.csv",
        ["frequency", *record.channel_ids],
        [spectra[0].frequencies, *(s.amplitudes for s in spectra)],
    )
    crests = {}
    for cid, s in zip(record.channel_ids, spectra):
        cr = spectral_crest(s, cfg.crest_f_min, min_prominence=cfg.min_prominence)
        crests[cid] = {"frequency": r6(cr.frequency), "amplitude": r6(cr.amplitude), "prominence": r6(cr.prominence), "low_prominence": cr.low_prominence}
    summary = {"schema_version": "1", "window": cfg.spectrum_window.value, "resolution_hz": r6(spectra[0].resolution), "crests": crests}
    write_json(summary, out / "spectrum.json")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oscmemd", description="Inter-area oscillation mode identification with multivariate EMD.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--input", required=True, help="record CSV: time,<id1>,<id2>,...")
        p.add_argument("--config", help="key = value settings file")
        p.add_argument("--out-dir", default=".", help="directory for outputs (default: current)")
        p.add_argument("--seed-override", type=int, help="replace the configured seed")

    p = sub.add_parser("analyze", help="decompose a record and rank its modes")
    common(p)
    p.add_argument("--emit-traces", action="store_true", help="write one CSV of traces per IMF")
    p.set_defaults(func=run_analyze)

    p = sub.add_parser("generate", help="write a synthetic record from a scenario file")
    p.add_argument("--config", "--scenario", dest="config", required=True, help="scenario settings file")
    p.add_argument("--output", required=True, help="CSV file to write")
    p.add_argument("--seed-override", type=int, help="replace the scenario seed")
    p.set_defaults(func=run_generate)

    p = sub.add_parser("compare", help="dominant MEMD mode versus FFT spectral crests")
    common(p)
    p.add_argument("--window", choices=[w.value for w in Window], help="FFT window")
    p.set_defaults(func=run_compare)

    p = sub.add_parser("spectrum", help="single-sided FFT amplitude spectrum per channel")
    common(p)
    p.add_argument("--window", choices=[w.value for w in Window], help="FFT window")
    p.set_defaults(func=run_spectrum)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DecompositionError as exc:
        print(f"decomposition failed: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (WriteError, OSError) as exc:
        print(f"write error: {exc}", file=sys.stderr)
        return EXIT_WRITE


if __name__ == "__main__":
    sys.exit(main())
