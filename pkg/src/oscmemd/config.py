"""Flat ``key = value`` configuration files.

One setting per line; blank lines and lines starting with ``#`` are ignored.
Lists are comma separated. The same format describes analysis settings and
synthetic scenarios::

    # analysis
    sd_threshold = 0.2
    max_sift_iterations = 10
    direction_scheme = low_discrepancy_sphere
    f_trend = 0.05

    # scenario
    duration = 300
    sample_rate = 10
    seed = 4
    noise_snr_db = 15
    mode.1.frequency = 0.3
    mode.1.amplitudes = 1, 1, 0.3
    mode.1.phases = 0, 1.5, 3.0
    trend.1 = 0, -0.003, 1.7e-5
    step.time = 125
    step.magnitudes = -0.4, -0.5, -0.3
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, fields

from .exceptions import BadScenarioError, ParseError
from .modes import ClassifierThresholds, Window
from .records import DecompositionConfig
from .synth import ModeSpec, ScenarioSpec, StepEvent


def parse_config_text(text: str) -> dict[str, tuple[str, int]]:
    """Map each key to ``(raw value, 1-based line number)``."""
    out: dict[str, tuple[str, int]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ParseError("expected 'key = value'", row=lineno)
        key, value = (s.strip() for s in stripped.split("=", 1))
        if not key:
            raise ParseError("empty key", row=lineno)
        if key in out:
            raise ParseError(f"duplicate key {key!r}", row=lineno)
        out[key] = (value, lineno)
    return out


def load_config(path) -> dict[str, tuple[str, int]]:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config_text(fh.read())
    except OSError as exc:
        raise ParseError(f"cannot read config {path}: {exc}") from exc


def _number(value: str, key: str, row: int, kind=float):
    try:
        return kind(value)
    except ValueError:
        raise ParseError(f"{key}: {value!r} is not a valid {kind.__name__}", row=row) from None


def _numbers(value: str, key: str, row: int) -> tuple[float, ...]:
    if not value:
        return ()
    return tuple(_number(v.strip(), key, row) for v in value.split(","))


def _optional(value: str, key: str, row: int, kind=float):
    return None if value.lower() in ("", "none") else _number(value, key, row, kind)


_DECOMP_KEYS = {
    "sd_threshold": float,
    "direction_count": int,
    "max_sift_iterations": int,
    "max_imfs": int,
    "n_mirror": int,
    "rng_seed": int,
    "direction_scheme": str,
    "boundary_policy": str,
}
_THRESHOLD_KEYS = {f.name: float for f in fields(ClassifierThresholds)}
_SPECTRUM_KEYS = {"spectrum_window": str, "crest_f_min": float, "min_prominence": float}


@dataclass(frozen=True)
class AnalysisConfig:
    """Everything ``analyze`` / ``compare`` / ``spectrum`` need besides the data."""

    decomposition: DecompositionConfig = field(default_factory=DecompositionConfig)
    thresholds: ClassifierThresholds = field(default_factory=ClassifierThresholds)
    spectrum_window: Window = Window.RECT
    crest_f_min: float = 0.05
    min_prominence: float = 5.0

    def echo(self) -> dict[str, str]:
        """Settings as strings, enough to rebuild this config."""
        d = self.decomposition
        out = {
            "sd_threshold": repr(d.sd_threshold),
            "direction_count": "none" if d.direction_count is None else str(d.direction_count),
            "max_sift_iterations": str(d.max_sift_iterations),
            "max_imfs": str(d.max_imfs),
            "n_mirror": str(d.n_mirror),
            "rng_seed": str(d.rng_seed),
            "direction_scheme": d.direction_scheme.value,
            "boundary_policy": d.boundary_policy.value,
            "spectrum_window": self.spectrum_window.value,
            "crest_f_min": repr(self.crest_f_min),
            "min_prominence": repr(self.min_prominence),
        }
        for f in fields(ClassifierThresholds):
            out[f.name] = repr(getattr(self.thresholds, f.name))
        return out

    def to_text(self) -> str:
        return "".join(f"{k} = {v}\n" for k, v in sorted(self.echo().items()))


def analysis_config_from_mapping(mapping: dict[str, tuple[str, int]]) -> AnalysisConfig:
    """Build an :class:`AnalysisConfig`; unknown keys are rejected."""
    decomp, thresh, spec = {}, {}, {}
    for key, (value, row) in mapping.items():
        if key in _DECOMP_KEYS:
            kind = _DECOMP_KEYS[key]
            if key == "direction_count":
                decomp[key] = _optional(value, key, row, int)
            else:
                decomp[key] = value if kind is str else _number(value, key, row, kind)
        elif key in _THRESHOLD_KEYS:
            thresh[key] = _number(value, key, row)
        elif key in _SPECTRUM_KEYS:
            kind = _SPECTRUM_KEYS[key]
            spec[key] = value if kind is str else _number(value, key, row)
        else:
            raise ParseError(f"unknown analysis setting {key!r}", row=row)
    try:
        window = Window(spec.pop("spectrum_window", "rect"))
        return AnalysisConfig(DecompositionConfig(**decomp), ClassifierThresholds(**thresh), window, **spec)
    except ValueError as exc:
        raise ParseError(f"invalid analysis setting: {exc}") from exc


def load_analysis_config(path=None) -> AnalysisConfig:
    return AnalysisConfig() if path is None else analysis_config_from_mapping(load_config(path))


_MODE_KEY = re.compile(r"mode\.(\d+)\.(frequency|damping_ratio|onset_time|amplitudes|phases)$")
_TREND_KEY = re.compile(r"trend\.(\d+)$")


def scenario_from_mapping(mapping: dict[str, tuple[str, int]]) -> ScenarioSpec:
    """Build a :class:`ScenarioSpec`; channel and mode numbers are 1-based."""
    top: dict = {}
    modes: dict[int, dict] = {}
    trend: dict[int, tuple[float, ...]] = {}
    step: dict = {}
    for key, (value, row) in mapping.items():
        if m := _MODE_KEY.match(key):
            entry = modes.setdefault(int(m.group(1)), {})
            attr = m.group(2)
            entry[attr] = _numbers(value, key, row) if attr in ("amplitudes", "phases") else _number(value, key, row)
        elif m := _TREND_KEY.match(key):
            trend[int(m.group(1))] = _numbers(value, key, row)
        elif key == "step.time":
            step["time"] = _number(value, key, row)
        elif key == "step.magnitudes":
            step["magnitudes"] = _numbers(value, key, row)
        elif key in ("duration", "sample_rate"):
            top[key] = _number(value, key, row)
        elif key in ("noise_snr_db", "noise_lowpass_hz"):
            top[key] = _optional(value, key, row)
        elif key in ("seed", "n_channels"):
            top[key] = _number(value, key, row, int)
        elif key == "noise_weights":
            top[key] = _numbers(value, key, row)
        elif key == "channel_ids":
            top[key] = tuple(v.strip() for v in value.split(",")) if value else ()
        else:
            raise ParseError(f"unknown scenario setting {key!r}", row=row)
    mode_list = []
    for k in sorted(modes):
        entry = modes[k]
        if "frequency" not in entry or "amplitudes" not in entry:
            raise BadScenarioError(f"mode.{k} needs frequency and amplitudes")
        amps = entry["amplitudes"]
        phases = entry.get("phases", (0.0,) * len(amps))
        if len(phases) != len(amps):
            raise BadScenarioError(f"mode.{k}: {len(amps)} amplitudes but {len(phases)} phases")
        mode_list.append(
            ModeSpec(
                entry["frequency"],
                tuple(zip(amps, phases)),
                entry.get("damping_ratio", 0.0),
                entry.get("onset_time", 0.0),
            )
        )
    if trend:
        # channels without a trend line get none; pad to the scenario width
        widths = [len(m.per_channel) for m in mode_list]
        widths += [len(top.get(k, ())) for k in ("noise_weights", "channel_ids")]
        widths += [len(step.get("magnitudes", ())), top.get("n_channels", 0), max(trend)]
        n = max(widths)
        top["trend"] = tuple(trend.get(ch, ()) for ch in range(1, n + 1))
    if step:
        if set(step) != {"time", "magnitudes"}:
            raise BadScenarioError("step event needs both step.time and step.magnitudes")
        top["step_event"] = StepEvent(step["time"], step["magnitudes"])
    return ScenarioSpec(modes=tuple(mode_list), **top)


def load_scenario(path) -> ScenarioSpec:
    return scenario_from_mapping(load_config(path))


def _fmt(values) -> str:
    return ", ".join(repr(float(v)) for v in values)


def scenario_to_text(scenario: ScenarioSpec) -> str:
    """Serialise a scenario; :func:`scenario_from_mapping` reads it back exactly."""
    lines = [
        f"duration = {scenario.duration!r}",
        f"sample_rate = {scenario.sample_rate!r}",
        f"seed = {scenario.seed}",
        f"n_channels = {scenario.n_channels}",
        f"noise_snr_db = {'none' if scenario.noise_snr_db is None else repr(float(scenario.noise_snr_db))}",
        f"noise_lowpass_hz = {'none' if scenario.noise_lowpass_hz is None else repr(float(scenario.noise_lowpass_hz))}",
    ]
    if scenario.noise_weights:
        lines.append(f"noise_weights = {_fmt(scenario.noise_weights)}")
    if scenario.channel_ids:
        lines.append(f"channel_ids = {', '.join(scenario.channel_ids)}")
    for k, mode in enumerate(scenario.modes, start=1):
        lines += [
            f"mode.{k}.frequency = {mode.frequency!r}",
            f"mode.{k}.damping_ratio = {mode.damping_ratio!r}",
            f"mode.{k}.onset_time = {mode.onset_time!r}",
            f"mode.{k}.amplitudes = {_fmt(mode.amplitudes)}",
            f"mode.{k}.phases = {_fmt(mode.phases)}",
        ]
    for ch, coeffs in enumerate(scenario.trend, start=1):
        lines.append(f"trend.{ch} = {_fmt(coeffs)}")
    if scenario.step_event is not None:
        lines.append(f"step.time = {scenario.step_event.time!r}")
        lines.append(f"step.magnitudes = {_fmt(scenario.step_event.magnitudes)}")
    return "\n".join(lines) + "\n"
