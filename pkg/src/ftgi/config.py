"""Experiment configuration: INI-style ``key = value`` file with sections.

Example::

    [layout]
    A = 0.5
    quantize = 256

    [spectral]
    coverage = 0.25, 0.5, 1.0

Unknown sections or keys are rejected.
"""

from __future__ import annotations

import configparser
import hashlib
import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path


class ConfigError(ValueError):
    """Invalid experiment configuration."""


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.replace(";", ",").split(",") if v.strip()]


def _ints(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def _strs(text: str) -> list[str]:
    return [v.strip() for v in text.split(",") if v.strip()]


def _bands(text: str) -> list[tuple[float, float]]:
    # "1-49, 51-99"
    out = []
    for part in _strs(text):
        lo, hi = part.split("-")
        out.append((float(lo), float(hi)))
    return out


def _bool(text: str) -> bool:
    value = text.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _opt_int(text: str) -> int | None:
    return None if text.strip().lower() in ("", "none", "off", "0") else int(text)


def _opt_float(text: str) -> float | None:
    return None if text.strip().lower() in ("", "none", "off") else float(text)


def _opt_floats(text: str) -> list[float] | None:
    return None if text.strip().lower() in ("", "none", "default") else _floats(text)


def _setting(section, key, parse, default=None, factory=None):
    meta = {"section": section, "key": key, "parse": parse}
    if factory is not None:
        return field(default_factory=factory, metadata=meta)
    return field(default=default, metadata=meta)


@dataclass
class ExperimentConfig:
    """Every knob of the experiment runner, with the library defaults."""

    name: str = _setting("experiment", "name", str, "")
    seed: int = _setting("experiment", "seed", int, 0)
    out: str = _setting("experiment", "out", str, "out")
    plot: bool = _setting("experiment", "plot", _bool, True)

    shape: str = _setting("waveform", "shape", str, "square")
    freq: float = _setting("waveform", "freq", float, 5.0)
    freqs: list = _setting("waveform", "freqs", _floats, factory=lambda: [11.0, 33.0, 55.0, 88.0])
    duty: float = _setting("waveform", "duty", float, 0.1)
    duration: float = _setting("waveform", "duration", float, 1.0)
    rate: float = _setting("waveform", "rate", float, 800.0)
    offset: float = _setting("waveform", "offset", float, 1.0)
    amplitude: float = _setting("waveform", "amplitude", float, 1.0)

    bits: str = _setting("word", "bits", str, "1110010110")
    scheme: str = _setting("word", "scheme", str, "rz-gauss")
    bit_rate: float = _setting("word", "bit_rate", float, 10.0)
    gauss_fwhm: float = _setting("word", "gauss_fwhm", float, 0.5)

    A: float = _setting("layout", "A", float, 0.5)
    B: float = _setting("layout", "B", float, 0.5)
    n_freqs: int = _setting("layout", "n_freqs", int, 100)
    freq_step: float = _setting("layout", "freq_step", float, 1.0)
    quantize: int | None = _setting("layout", "quantize", _opt_int, None)

    gain: float = _setting("detector", "gain", float, 1.0)
    noise_sigma: float = _setting("detector", "noise_sigma", float, 0.0)
    shot_scale: float | None = _setting("detector", "shot_scale", _opt_float, None)
    adc_bits: int | None = _setting("detector", "adc_bits", _opt_int, None)

    coverage: list | None = _setting("spectral", "coverage", _opt_floats, None)
    window: str = _setting("spectral", "window", str, "rect")
    rolloff: float = _setting("spectral", "rolloff", float, 0.2)
    out_len: int | None = _setting("spectral", "out_len", _opt_int, None)

    shapes: list = _setting("sweep", "shapes", _strs, factory=lambda: ["square", "sawtooth", "pulse"])
    sweep_freqs: list = _setting("sweep", "freqs", _floats, factory=lambda: [2.0, 5.0, 7.0, 11.0])

    budgets: list = _setting("compare", "budgets", _floats, factory=lambda: [0.5, 0.75, 1.0])
    seeds: list = _setting("compare", "seeds", _ints, factory=lambda: list(range(20)))

    fdm_bit_rates: list = _setting("fdm", "bit_rates", _floats, factory=lambda: [5.0, 10.0])
    fdm_schemes: list = _setting("fdm", "schemes", _strs, factory=lambda: ["rz-square", "rz-gauss"])
    fdm_words: list = _setting("fdm", "words", _strs, factory=lambda: ["1110010110", "0110100111"])
    carriers: list = _setting("fdm", "carriers", _floats, factory=lambda: [25.0, 75.0])
    bands: list = _setting("fdm", "bands", _bands, factory=lambda: [(1.0, 49.0), (51.0, 99.0)])

    def to_dict(self) -> dict:
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in asdict(self).items()}

    def digest(self) -> str:
        """SHA-256 of the canonical JSON form; ``out`` is excluded."""
        data = self.to_dict()
        data.pop("out")
        blob = json.dumps(data, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def coverages(self, default):
        return list(self.coverage) if self.coverage else list(default)


_KEYS = {(f.metadata["section"], f.metadata["key"].lower()): f for f in fields(ExperimentConfig)}
_SECTIONS = {section for section, _ in _KEYS}


def parse_config(text: str, base: ExperimentConfig | None = None) -> ExperimentConfig:
    """Parse configuration text on top of ``base`` (defaults when omitted)."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str.lower
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    config = base or ExperimentConfig()
    for section in parser.sections():
        if section not in _SECTIONS:
            raise ConfigError(f"unknown section [{section}]")
        for key, raw in parser.items(section):
            f = _KEYS.get((section, key))
            if f is None:
                raise ConfigError(f"unknown key {key!r} in [{section}]")
            try:
                setattr(config, f.name, f.metadata["parse"](raw))
            except ValueError as exc:
                raise ConfigError(f"[{section}] {key} = {raw!r}: {exc}") from exc
    return config


def load_config(path) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)


def dump_config(config: ExperimentConfig) -> str:
    """Render ``config`` back to the file format (round-trips through parse_config)."""
    sections: dict[str, list[str]] = {}
    for f in fields(config):
        value = getattr(config, f.name)
        if value is None:
            text = "none"
        elif isinstance(value, bool):
            text = str(value).lower()
        elif f.name == "bands":
            text = ", ".join(f"{lo:g}-{hi:g}" for lo, hi in value)
        elif isinstance(value, list):
            text = ", ".join(f"{v:.12g}" if isinstance(v, float) else str(v) for v in value)
        elif isinstance(value, float):
            text = f"{value:.12g}"
        else:
            text = str(value)
        sections.setdefault(f.metadata["section"], []).append(f"{f.metadata['key']} = {text}")
    return "\n".join(f"[{s}]\n" + "\n".join(lines) + "\n" for s, lines in sections.items())
