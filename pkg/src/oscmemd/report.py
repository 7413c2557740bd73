"""JSON reports.

Reports are canonical: keys sorted, two-space indent, report numbers rounded
to 6 significant digits, NaN/inf written as ``null``. The same input and
configuration therefore always produce the same bytes.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from . import __version__
from .csvio import write_table
from .exceptions import WriteError
from .modes import ModeCandidate
from .pipeline import AnalysisResult, Comparison

SCHEMA_VERSION = "1"


def r6(x) -> float | None:
    """Round to 6 significant digits; non-finite values become ``None``."""
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(f"{x:.6g}")


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True, allow_nan=False) + "\n"


def _metadata(record, config, record_id) -> dict:
    return {
        "record_id": record_id,
        "n_channels": record.n_channels,
        "n_samples": record.n_samples,
        "sample_rate": r6(record.sample_rate),
        "t0": r6(record.t0),
        "channel_ids": list(record.channel_ids),
        "config": config.echo(),
        "tool_version": __version__,
    }


def _compass(c: ModeCandidate) -> list[dict]:
    return [
        {
            "channel_id": e.channel_id,
            "amplitude": r6(e.amplitude),
            "phase_rad": r6(e.phase),
            "phase_deg": r6(math.degrees(e.phase)) if math.isfinite(e.phase) else None,
        }
        for e in c.per_channel
    ]


def _summary(c: ModeCandidate, sift) -> dict:
    out = {
        "imf_index": c.imf_index,
        "is_residue": c.is_residue,
        "energy": r6(c.energy),
        "classification": c.classification.value,
        "median_joint_frequency": r6(c.median_joint_frequency),
        "mean_joint_amplitude": r6(c.mean_joint_amplitude),
        "phase_coherence": r6(c.coherence),
        "in_interarea_band": c.in_interarea_band,
    }
    if sift is not None:
        out["sift"] = {
            "iterations": sift.iterations,
            "exhausted": sift.exhausted,
            "last_sd": None if sift.last_sd is None else r6(sift.last_sd),
            "skipped_directions": sift.skipped_directions,
        }
    return out


def _warnings(ws) -> list[dict]:
    return [{"code": w.code, "message": w.message, "imf_index": w.imf_index} for w in ws]


def analysis_report(result: AnalysisResult, record_id: str = "record", trace_files=None) -> dict:
    """Report dictionary for :func:`~oscmemd.pipeline.analyze_record` output."""
    infos = result.imf_set.sift_info
    summary = [_summary(c, infos[c.imf_index] if c.imf_index < len(infos) else None) for c in result.candidates]
    ranked = [
        {
            "rank": k,
            "imf_index": c.imf_index,
            "classification": c.classification.value,
            "energy": r6(c.energy),
            "median_joint_frequency": r6(c.median_joint_frequency),
            "mean_joint_amplitude": r6(c.mean_joint_amplitude),
            "compass": _compass(c),
        }
        for k, c in enumerate(result.ranked, start=1)
    ]
    report = {
        "schema_version": SCHEMA_VERSION,
        "metadata": {**_metadata(result.record, result.config, record_id), "n_imfs": result.imf_set.n_imfs},
        "imf_summary": summary,
        "ranked_modes": ranked,
        "warnings": _warnings(result.warnings),
    }
    if trace_files is not None:
        report["traces"] = list(trace_files)
    return report


def comparison_report(cmp: Comparison, record_id: str = "record") -> dict:
    rec = cmp.analysis.record
    channels = [
        {
            "channel_id": cid,
            "fft_crest_frequency": r6(cr.frequency),
            "fft_crest_amplitude": r6(cr.amplitude),
            "fft_crest_prominence": r6(cr.prominence),
        }
        for cid, cr in zip(rec.channel_ids, cmp.channel_crests)
    ]
    return {
        "schema_version": SCHEMA_VERSION,
        "metadata": {**_metadata(rec, cmp.analysis.config, record_id), "n_imfs": cmp.analysis.imf_set.n_imfs},
        "memd": {
            "dominant_frequency": r6(cmp.memd_frequency),
            "imf_index": None if cmp.memd_candidate is None else cmp.memd_candidate.imf_index,
            "classification": None if cmp.memd_candidate is None else cmp.memd_candidate.classification.value,
            "method": "emd" if rec.n_channels == 1 else "memd",
        },
        "fft": {
            "resolution_hz": r6(cmp.spectra[0].resolution),
            "window": cmp.analysis.config.spectrum_window.value,
            "channels": channels,
            "pooled_crest_frequency": r6(cmp.pooled_crest.frequency),
            "pooled_crest_prominence": r6(cmp.pooled_crest.prominence),
        },
        "warnings": _warnings(cmp.warnings),
    }


def write_json(obj, path) -> None:
    try:
        Path(path).write_text(canonical_json(obj), encoding="utf-8")
    except OSError as exc:
        raise WriteError(f"cannot write {path}: {exc}") from exc


def write_traces(result: AnalysisResult, out_dir) -> list[str]:
    """One CSV per IMF: time, IMF value per channel, joint frequency, joint amplitude."""
    out_dir = Path(out_dir)
    names = []
    ids = result.record.channel_ids
    for m in range(result.imf_set.n_imfs):
        tr = result.traces[m]
        name = f"imf_{m:02d}.csv"
        header = ["time", *ids, "joint_frequency", "joint_amplitude"]
        cols = [result.record.time, *result.imf_set.imfs[m], tr.joint_frequency, tr.joint_amplitude]
        write_table(out_dir / name, header, [np.asarray(c, dtype=np.float64) for c in cols])
        names.append(name)
    return names
