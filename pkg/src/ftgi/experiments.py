"""Experiment runners behind the CLI.

Every runner writes CSV tables (and optionally SVG figures) into
``config.out`` and a ``manifest.json`` recording the config digest and seeds.
Nothing time- or host-dependent is written, so reruns are byte-identical.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .config import ExperimentConfig
from .detector import CSV_FMT, DetectorModel, expose, load_capture, save_capture
from .fdm import default_channels, fdm_decode, fdm_encode
from .metrics import minmax_normalize, normalized_psnr
from .probing import PatternLayout, render_frame
from .spectral import extract_spectrum, reconstruct, save_spectrum, save_waveform
from .tgi import make_random_probes, tgi_correlate, tgi_expose
from .waveforms import BinaryCode, TimeObject, encode_word, make_basic_wave, make_sinusoid

SWEEP_COVERAGES = [round(0.05 * i, 2) for i in range(1, 21)]


class AcceptanceError(RuntimeError):
    """A run finished but its built-in check failed (e.g. FDM bit mismatch)."""


@dataclass
class RunResult:
    out_dir: Path
    files: list[Path] = field(default_factory=list)
    table: list[dict] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)


def make_layout(config: ExperimentConfig) -> PatternLayout:
    return PatternLayout.square(
        config.n_freqs, freq_step=config.freq_step, A=config.A, B=config.B,
        frame_rate=config.rate, quantize_levels=config.quantize,
    )


def make_model(config: ExperimentConfig, seed: int | None = None) -> DetectorModel:
    return DetectorModel(
        gain=config.gain, gaussian_sigma=config.noise_sigma, shot_scale=config.shot_scale,
        adc_bits=config.adc_bits, seed=config.seed if seed is None else seed,
    )


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return CSV_FMT.format(float(value))
    return str(value)


def write_table(path, header, rows) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(row[h]) for h in header])
    return path


def read_table(path) -> list[dict]:
    with Path(path).open(newline="") as fh:
        return list(csv.DictReader(fh))


def safe_psnr(recon, truth) -> float:
    """Normalised PSNR, or NaN when either sequence is constant."""
    try:
        return normalized_psnr(recon, truth).psnr_db
    except ValueError:
        return math.nan


def _tag(value: float) -> str:
    return f"{value:g}".replace(".", "p")


def _out_dir(config: ExperimentConfig) -> Path:
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def write_manifest(result: RunResult, config: ExperimentConfig, experiment: str, seeds) -> Path:
    manifest = {
        "experiment": experiment,
        "version": __version__,
        "config_sha256": config.digest(),
        "seeds": [int(s) for s in seeds],
        "config": {k: v for k, v in config.to_dict().items() if k != "out"},
        "artifacts": sorted(p.name for p in result.files),
    }
    path = result.out_dir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def _finish(result, config, experiment, seeds):
    write_manifest(result, config, experiment, seeds)
    if result.failures:
        raise AcceptanceError("; ".join(result.failures))
    return result


def run_sine_demo(config: ExperimentConfig, freqs=None) -> RunResult:
    """Raised-cosine objects through the full pipeline; checks the peak bin."""
    freqs = list(config.freqs if freqs is None else freqs)
    layout = make_layout(config)
    for f in freqs:
        if f > layout.max_freq or f < 0:
            raise ValueError(f"{f} Hz is outside the probed band 0..{layout.max_freq} Hz")
    result = RunResult(_out_dir(config))
    coverage = config.coverages([1.0])[-1]
    for f in freqs:
        amplitude = config.amplitude if f > 0 else 0.0
        obj = make_sinusoid(f, config.duration, config.rate, config.offset, amplitude)
        capture = expose(obj, layout, make_model(config))
        spec = extract_spectrum(capture)
        recon = reconstruct(spec, coverage, config.window, config.out_len, config.rolloff)
        mag = spec.magnitude
        if f > 0:
            peak = 1 + int(np.argmax(mag[1:]))
            others = np.delete(mag[1:], peak - 1)
            floor = float(others.max() / mag[peak]) if others.size else 0.0
        else:
            peak = int(np.argmax(mag))
            floor = float(mag[1:].max() / mag[0]) if mag.size > 1 and mag[0] > 0 else 0.0
        peak_hz = float(spec.freqs[peak])
        tag = f"{_tag(f)}hz"
        result.files += [
            save_capture(result.out_dir / f"capture_{tag}.csv", capture),
            save_spectrum(result.out_dir / f"spectrum_{tag}.csv", spec),
            save_waveform(result.out_dir / f"recon_{tag}.csv", recon.samples, recon.sample_rate),
        ]
        if config.plot:
            from .plotting import plot_reconstruction, plot_spectrum

            result.files += [
                plot_spectrum(result.out_dir / f"spectrum_{tag}.svg", spec.freqs, spec.coeffs,
                              f"{f:g} Hz object"),
                plot_reconstruction(result.out_dir / f"recon_{tag}.svg", recon.samples,
                                    recon.sample_rate, obj.samples, obj.sample_rate,
                                    f"{f:g} Hz ghost image"),
            ]
        row = {"freq_hz": float(f), "peak_hz": peak_hz, "sidelobe_ratio": floor,
               "psnr_db": safe_psnr(recon.samples, obj.samples)
               if recon.samples.size == obj.samples.size else math.nan}
        result.table.append(row)
        if not math.isclose(peak_hz, f, abs_tol=1e-9):
            result.failures.append(f"spectral peak at {peak_hz:g} Hz for a {f:g} Hz object")
    result.files.append(write_table(result.out_dir / "sine_summary.csv",
                                    ["freq_hz", "peak_hz", "sidelobe_ratio", "psnr_db"],
                                    result.table))
    return _finish(result, config, "sine-demo", [config.seed])


def _run_object(config: ExperimentConfig, obj: TimeObject, experiment: str) -> RunResult:
    layout = make_layout(config)
    result = RunResult(_out_dir(config))
    capture = expose(obj, layout, make_model(config))
    spec = extract_spectrum(capture)
    result.files += [
        save_waveform(result.out_dir / "truth.csv", obj.samples, obj.sample_rate),
        save_capture(result.out_dir / "capture.csv", capture),
        save_spectrum(result.out_dir / "spectrum.csv", spec),
    ]
    for cov in config.coverages([0.25, 0.5, 0.75, 1.0]):
        recon = reconstruct(spec, cov, config.window, config.out_len, config.rolloff)
        tag = f"cov{_tag(cov)}"
        result.files.append(save_waveform(result.out_dir / f"recon_{tag}.csv",
                                          recon.samples, recon.sample_rate))
        if config.plot:
            from .plotting import plot_reconstruction

            result.files.append(plot_reconstruction(
                result.out_dir / f"recon_{tag}.svg", minmax_or_raw(recon.samples),
                recon.sample_rate, obj.samples, obj.sample_rate,
                f"{experiment}, coverage {cov:.0%}"))
        same_grid = recon.samples.size == obj.samples.size
        psnr_db = safe_psnr(recon.samples, obj.samples) if same_grid else math.nan
        result.table.append({"experiment": experiment, "param": float(cov), "psnr_db": psnr_db})
    result.files.append(write_table(result.out_dir / "psnr.csv",
                                    ["experiment", "param", "psnr_db"], result.table))
    return _finish(result, config, experiment, [config.seed])


def minmax_or_raw(x):
    try:
        return minmax_normalize(x)
    except ValueError:
        return np.asarray(x)


def run_wave(config: ExperimentConfig) -> RunResult:
    obj = make_basic_wave(config.shape, config.freq, config.duty, config.duration, config.rate)
    return _run_object(config, obj, f"{config.shape}-{config.freq:g}hz")


def run_word(config: ExperimentConfig) -> RunResult:
    code = BinaryCode(config.bits, config.scheme, config.bit_rate, config.gauss_fwhm)
    obj = encode_word(code, config.duration, config.rate)
    return _run_object(config, obj, f"{config.scheme}-{config.bits}")


def run_coverage_sweep(config: ExperimentConfig, shapes=None, freqs=None, coverages=None) -> RunResult:
    """PSNR of basic waveforms against spectrum coverage."""
    shapes = list(config.shapes if shapes is None else shapes)
    freqs = list(config.sweep_freqs if freqs is None else freqs)
    coverages = list(config.coverages(SWEEP_COVERAGES) if coverages is None else coverages)
    if not shapes or not freqs or not coverages:
        raise ValueError("coverage sweep needs non-empty shape, frequency and coverage lists")
    layout = make_layout(config)
    result = RunResult(_out_dir(config))
    recons = {}
    for shape in sorted(shapes):
        for f in sorted(freqs):
            obj = make_basic_wave(shape, f, config.duty, config.duration, config.rate)
            spec = extract_spectrum(expose(obj, layout, make_model(config)))
            for cov in sorted(coverages):
                recon = reconstruct(spec, cov, config.window, None, config.rolloff)
                recons[shape, f, cov] = recon.samples
                result.table.append({"shape": shape, "freq_hz": float(f), "coverage": float(cov),
                                     "psnr_db": safe_psnr(recon.samples, obj.samples)})
    result.files.append(write_table(result.out_dir / "psnr_sweep.csv",
                                    ["shape", "freq_hz", "coverage", "psnr_db"], result.table))
    if config.plot:
        from .plotting import plot_traces

        for shape in sorted(shapes):
            for cov in sorted(coverages):
                traces = {f"{f:g} Hz": minmax_or_raw(recons[shape, f, cov]) for f in sorted(freqs)}
                result.files.append(plot_traces(
                    result.out_dir / f"sweep_{shape}_cov{_tag(cov)}.svg", config.rate, traces,
                    f"{shape}, coverage {cov:.0%}"))
    return _finish(result, config, "sweep-coverage", [config.seed])


def run_compare(config: ExperimentConfig, budgets=None, seeds=None) -> RunResult:
    """FTGI against random-probing TGI at equal measurement budgets."""
    budgets = sorted(config.budgets if budgets is None else budgets)
    seeds = sorted(config.seeds if seeds is None else seeds)
    for b in budgets:
        if not 0 < b <= 1:
            raise ValueError(f"budget {b} outside (0, 1]")
    if not seeds:
        raise ValueError("compare needs at least one seed")
    layout = make_layout(config)
    code = BinaryCode(config.bits, config.scheme, config.bit_rate, config.gauss_fwhm)
    obj = encode_word(code, config.duration, config.rate)
    n_meas = layout.n_measurements
    result = RunResult(_out_dir(config))
    rows = []
    for seed in seeds:
        model = make_model(config, seed)
        spec = extract_spectrum(expose(obj, layout, model))
        probes = make_random_probes(n_meas, len(obj), seed)
        buckets = tgi_expose(obj, probes, model)
        for b in budgets:
            ftgi = reconstruct(spec, b, config.window, None, config.rolloff)
            subset = probes.head(b)
            tgi = tgi_correlate(buckets[: subset.n_patterns], subset, obj.sample_rate)
            rows.append({"method": "ftgi", "budget": float(b), "seed": seed,
                         "psnr_db": safe_psnr(ftgi.samples, obj.samples)})
            rows.append({"method": "tgi", "budget": float(b), "seed": seed,
                         "psnr_db": safe_psnr(tgi.samples, obj.samples)})
    summary = {}
    for b in budgets:
        f_mean = float(np.mean([r["psnr_db"] for r in rows if r["method"] == "ftgi" and r["budget"] == b]))
        t_mean = float(np.mean([r["psnr_db"] for r in rows if r["method"] == "tgi" and r["budget"] == b]))
        summary[b] = {"ftgi": f_mean, "tgi": t_mean, "gap": f_mean - t_mean}
        rows += [
            {"method": "ftgi-mean", "budget": float(b), "seed": "all", "psnr_db": f_mean},
            {"method": "tgi-mean", "budget": float(b), "seed": "all", "psnr_db": t_mean},
            {"method": "gap", "budget": float(b), "seed": "all", "psnr_db": f_mean - t_mean},
        ]
    result.table = rows
    result.summary = summary
    result.files.append(write_table(result.out_dir / "compare.csv",
                                    ["method", "budget", "seed", "psnr_db"], rows))
    return _finish(result, config, "compare-tgi", seeds)


def run_fdm(config: ExperimentConfig, bit_rates=None, schemes=None) -> RunResult:
    """Two-channel FDM encode, single-shot acquisition and per-channel decode."""
    bit_rates = sorted(config.fdm_bit_rates if bit_rates is None else bit_rates)
    schemes = sorted(config.fdm_schemes if schemes is None else schemes)
    layout = make_layout(config)
    result = RunResult(_out_dir(config))
    psnr_rows, bit_rows = [], []
    for rate in bit_rates:
        for scheme in schemes:
            channels = default_channels(rate, scheme, config.fdm_words, config.carriers,
                                        config.bands, config.duration, config.gauss_fwhm)
            obj = fdm_encode(channels, config.duration, config.rate)
            spec = extract_spectrum(expose(obj, layout, make_model(config)))
            tag = f"{_tag(rate)}bps_{scheme}"
            result.files.append(save_spectrum(result.out_dir / f"spectrum_{tag}.csv", spec))
            traces = {}
            for i, ch in enumerate(channels, start=1):
                truth = encode_word(ch.word, config.duration, config.rate).samples
                decoded = fdm_decode(spec, ch, config.out_len)
                result.files.append(save_waveform(result.out_dir / f"envelope_{tag}_ch{i}.csv",
                                                  decoded.envelope, decoded.envelope.size / config.duration))
                same_grid = decoded.envelope.size == truth.size
                psnr_db = safe_psnr(decoded.envelope, truth) if same_grid else math.nan
                ok = decoded.bits == ch.word.bits
                psnr_rows.append({"experiment": f"fdm-{scheme}-ch{i}", "param": float(rate),
                                  "psnr_db": psnr_db})
                bit_rows.append({"bit_rate": float(rate), "scheme": scheme, "channel": i,
                                 "sent": ch.word.bits, "decoded": decoded.bits, "match": int(ok)})
                traces[f"ch{i} decoded"] = decoded.envelope
                traces[f"ch{i} sent"] = truth / (truth.max() or 1.0) * (decoded.envelope.max() or 1.0)
                if not ok:
                    result.failures.append(
                        f"{scheme} ch{i} at {rate:g} bit/s: sent {ch.word.bits}, decoded {decoded.bits}")
            if config.plot:
                from .plotting import plot_spectrum, plot_traces

                result.files += [
                    plot_spectrum(result.out_dir / f"spectrum_{tag}.svg", spec.freqs, spec.coeffs,
                                  f"FDM spectrum, {scheme}, {rate:g} bit/s"),
                    plot_traces(result.out_dir / f"envelope_{tag}.svg",
                                decoded.envelope.size / config.duration, traces,
                                f"decoded envelopes, {scheme}, {rate:g} bit/s"),
                ]
    result.files += [
        write_table(result.out_dir / "psnr.csv", ["experiment", "param", "psnr_db"], psnr_rows),
        write_table(result.out_dir / "bits.csv",
                    ["bit_rate", "scheme", "channel", "sent", "decoded", "match"], bit_rows),
    ]
    result.table = psnr_rows
    result.summary = {"bits": bit_rows}
    return _finish(result, config, "fdm", [config.seed])


def run_reconstruct(config: ExperimentConfig, capture_path) -> RunResult:
    """Offline reconstruction of a saved capture CSV."""
    layout = make_layout(config)
    capture = load_capture(capture_path, layout, make_model(config), config.duration)
    spec = extract_spectrum(capture)
    result = RunResult(_out_dir(config))
    result.files.append(save_spectrum(result.out_dir / "spectrum.csv", spec))
    for cov in config.coverages([1.0]):
        recon = reconstruct(spec, cov, config.window, config.out_len, config.rolloff)
        tag = f"cov{_tag(cov)}"
        result.files.append(save_waveform(result.out_dir / f"recon_{tag}.csv",
                                          recon.samples, recon.sample_rate))
        if config.plot:
            from .plotting import plot_reconstruction

            result.files.append(plot_reconstruction(result.out_dir / f"recon_{tag}.svg",
                                                    recon.samples, recon.sample_rate,
                                                    title=f"coverage {cov:.0%}"))
    return _finish(result, config, "reconstruct", [config.seed])


def run_frames(config: ExperimentConfig, frames, fmt: str = "csv") -> RunResult:
    """Dump probe frames as CSV grids or ASCII PGM images."""
    if fmt not in ("csv", "pgm"):
        raise ValueError(f"unknown frame format {fmt!r}")
    layout = make_layout(config)
    result = RunResult(_out_dir(config))
    for i in frames:
        grid = render_frame(layout, int(i), config.duration)
        path = result.out_dir / f"frame_{int(i):04d}.{fmt}"
        if fmt == "csv":
            with path.open("w", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerows([[_fmt(float(v)) for v in row] for row in grid])
        else:
            gray = np.rint(np.clip(grid, 0, 1) * 255).astype(int)
            lines = ["P2", f"{gray.shape[1]} {gray.shape[0]}", "255"]
            lines += [" ".join(str(v) for v in row) for row in gray]
            path.write_text("\n".join(lines) + "\n")
        result.files.append(path)
    return _finish(result, config, "frames", [config.seed])
