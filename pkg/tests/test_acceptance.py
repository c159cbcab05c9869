"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines inline;
they are also collected into the terminal summary.
"""

import filecmp
import itertools
import math
import time

import numpy as np

from conftest import random_bandlimited
from ftgi import (
    PatternLayout,
    TimeObject,
    assemble_hermitian,
    expose,
    extract_spectrum,
    make_basic_wave,
    make_sinusoid,
    reconstruct,
    tgi_correlate,
)
from ftgi.cli import main
from ftgi.config import ExperimentConfig
from ftgi.experiments import SWEEP_COVERAGES, run_compare, run_fdm, safe_psnr
from ftgi.metrics import normalized_psnr
from ftgi.tgi import RandomProbeSet
from ftgi.waveforms import BinaryCode, encode_word

WORD = "1110010110"


def vector_dft(x, n_bins):
    """Direct DFT as an explicit cos/sin sum, exponent reduced mod N in integers."""
    x = np.asarray(x, float)
    N = x.size
    km = np.outer(np.arange(n_bins), np.arange(N)) % N
    angle = 2 * np.pi * km / N
    return (x * np.cos(angle)).sum(axis=1) / N - 1j * (x * np.sin(angle)).sum(axis=1) / N


def test_criterion_01_sinusoid_localization(report, layout):
    start = time.perf_counter()
    worst, peaks_ok = 0.0, True
    for f in (11, 33, 55, 88):
        mag = extract_spectrum(expose(make_sinusoid(f), layout)).magnitude
        peak = 1 + int(np.argmax(mag[1:]))
        peaks_ok &= peak == f
        worst = max(worst, np.delete(mag[1:], f - 1).max() / mag[f])
    elapsed = time.perf_counter() - start
    ok = report(1, peaks_ok and worst < 1e-9 and elapsed < 1.0,
                f"peaks exact={peaks_ok}, worst sidelobe/peak={worst:.2e} (<1e-9), {elapsed:.3f}s (<1s)")
    assert ok


def test_criterion_02_dft_oracle_equivalence(report, layout):
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(100):
        obj = random_bandlimited(rng)
        got = extract_spectrum(expose(obj, layout)).coeffs
        ref = vector_dft(obj.samples, 100)
        worst = max(worst, np.max(np.abs(got - ref) / np.abs(ref)))
    ok = report(2, worst < 1e-9, f"100 objects, worst per-coefficient relative error {worst:.2e} (<1e-9)")
    assert ok


def test_criterion_03_round_trip(report, layout):
    rng = np.random.default_rng(3)
    worst_err, worst_imag = 0.0, 0.0
    for _ in range(20):
        obj = random_bandlimited(rng, n_bins=int(rng.integers(2, 101)))
        spec = extract_spectrum(expose(obj, layout))
        recon = reconstruct(spec, 1.0, "rect", 800).samples
        worst_err = max(worst_err, np.linalg.norm(recon - obj.samples) / np.linalg.norm(obj.samples))
        for cov in SWEEP_COVERAGES:
            for window in ("rect", "raised-cosine"):
                values = 800 * np.fft.ifft(assemble_hermitian(spec, cov, window, 800))
                peak = np.max(np.abs(values.real))
                worst_imag = max(worst_imag, np.max(np.abs(values.imag)) / peak)
    ok = report(3, worst_err < 1e-9 and worst_imag < 1e-12,
                f"relative L2 error {worst_err:.2e} (<1e-9), imaginary residue/peak {worst_imag:.2e} (<1e-12)")
    assert ok


def test_criterion_04_dc_cancellation(report):
    # A + B must stay within [0, 1], so the +0.1 step runs from A = 0.4 with B = 0.4
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(10):
        obj = TimeObject(rng.uniform(0, 1, 800))
        base = extract_spectrum(expose(obj, PatternLayout(A=0.4, B=0.4))).coeffs
        moved = extract_spectrum(expose(obj, PatternLayout(A=0.5, B=0.4))).coeffs
        worst = max(worst, np.max(np.abs(moved - base)))
    ok = report(4, worst < 1e-12, f"max coefficient change for A 0.4 -> 0.5: {worst:.2e} (<1e-12)")
    assert ok


def _square_psnr(freq, coverage, layout):
    obj = make_basic_wave("square", freq)
    spec = extract_spectrum(expose(obj, layout))
    return safe_psnr(reconstruct(spec, coverage).samples, obj.samples)


def test_criterion_05a_square_wave_ladder(report, layout):
    obj = make_basic_wave("square", 5)
    spec = extract_spectrum(expose(obj, layout))
    # one coverage per kept count 1..100; odd harmonics of 5 Hz are 5, 15, 25, ...
    groups = {}
    for n in range(1, 101):
        cov = (n - 1) / 99
        if cov == 0:
            continue
        harmonics = tuple(h for h in range(5, n, 10))
        if not harmonics:
            continue
        groups.setdefault(harmonics, []).append(
            normalized_psnr(reconstruct(spec, cov).samples, obj.samples).psnr_db)
    spread = max(max(v) - min(v) for v in groups.values())
    levels = [v[0] for _, v in sorted(groups.items(), key=lambda kv: len(kv[0]))]
    rises = np.diff(levels)
    ok = report("5a", spread <= 0.01 and np.all(rises > 0),
                f"{len(groups)} plateaus, max spread {spread:.2e} dB (<=0.01), "
                f"smallest rise {rises.min():.4f} dB (>0)")
    assert ok


def test_criterion_05b_lower_frequency_higher_psnr(report, layout):
    freqs = (2, 5, 7, 11)
    violations, checked = [], 0
    for cov in SWEEP_COVERAGES:
        ps = [_square_psnr(f, cov, layout) for f in freqs]
        if any(math.isnan(p) for p in ps):
            continue
        checked += 1
        for (fa, a), (fb, b) in zip(zip(freqs, ps), zip(freqs[1:], ps[1:])):
            if a < b:
                violations.append(f"{cov:.2f}: {fa} Hz {a:.4f} < {fb} Hz {b:.4f}")
    ok = report("5b", not violations,
                f"{checked} coverages checked, violations: {violations or 'none'}")
    assert ok


def test_criterion_06_quality_floor(report, layout):
    ps = {}
    for scheme in ("rz-gauss", "rz-square", "nrz-square"):
        obj = encode_word(BinaryCode(WORD, scheme, 10))
        recon = reconstruct(extract_spectrum(expose(obj, layout)), 1.0)
        ps[scheme] = normalized_psnr(recon.samples, obj.samples).psnr_db
    gauss = ps["rz-gauss"]
    ok = report(6, gauss >= 28 and gauss > ps["rz-square"] and gauss > ps["nrz-square"],
                "PSNR " + ", ".join(f"{k} {v:.2f} dB" for k, v in ps.items()) + " (gauss >= 28, above both)")
    assert ok


def test_criterion_07_ftgi_vs_tgi(report, tmp_path):
    config = ExperimentConfig(out=str(tmp_path), plot=False)
    start = time.perf_counter()
    summary = run_compare(config, budgets=[0.5, 0.75, 1.0], seeds=range(20)).summary
    elapsed = time.perf_counter() - start
    full = summary[1.0]
    detail = ", ".join(f"{b:g}: {s['ftgi']:.2f}/{s['tgi']:.2f}" for b, s in summary.items())
    ok = report(7, full["gap"] >= 10 and elapsed < 30,
                f"400 measurements gap {full['gap']:.2f} dB (>=10), FTGI/TGI by budget {detail}, "
                f"{elapsed:.1f}s (<30s)")
    assert ok


def test_criterion_08_tgi_exhaustive_oracle(report):
    I = np.array([0.3, 1.0, 0.0, 0.7])
    S = np.array(list(itertools.product((0, 1), repeat=4)), dtype=float)
    G = tgi_correlate(S @ I, RandomProbeSet(S), sample_rate=4.0).samples
    expected = I * S.var(axis=0)
    err = np.max(np.abs(G - expected))
    ok = report(8, err < 1e-12, f"max |G - I Var(S)| = {err:.2e} (<1e-12)")
    assert ok


def test_criterion_09_fdm(report, tmp_path):
    config = ExperimentConfig(out=str(tmp_path), plot=False)
    result = run_fdm(config)
    bits_ok = all(row["match"] for row in result.summary["bits"])
    psnr = {(row["experiment"], row["param"]): row["psnr_db"] for row in result.table}
    square_drops = [psnr[f"fdm-rz-square-ch{i}", 5.0] - psnr[f"fdm-rz-square-ch{i}", 10.0] for i in (1, 2)]
    gauss_moves = [abs(psnr[f"fdm-rz-gauss-ch{i}", 5.0] - psnr[f"fdm-rz-gauss-ch{i}", 10.0]) for i in (1, 2)]
    ok = report(9, bits_ok and all(1 <= d <= 6 for d in square_drops) and max(gauss_moves) <= 1,
                f"bits exact={bits_ok}, square drop {square_drops[0]:.2f}/{square_drops[1]:.2f} dB "
                f"(in [1, 6]), gauss change {gauss_moves[0]:.2f}/{gauss_moves[1]:.2f} dB (<=1)")
    assert ok


COMMANDS = [
    ["sine-demo", "--plot"],
    ["wave", "--shape", "sawtooth"],
    ["word", "--scheme", "nrz-square"],
    ["sweep-coverage"],
    ["compare-tgi", "--seeds", "0-19"],
    ["fdm"],
    ["frames", "--frames", "0-3", "--format", "pgm"],
]


def _run_all(root):
    for argv in COMMANDS:
        assert main(argv + ["--out", str(root / argv[0]), "--seed", "5", "--noise-sigma", "1e-3"]) == 0
    capture = root / "sine-demo" / "capture_11hz.csv"
    assert main(["reconstruct", str(capture), "--out", str(root / "reconstruct"), "--no-plot"]) == 0


def test_criterion_10_determinism(report, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    _run_all(a)
    _run_all(b)
    names = sorted(p.relative_to(a) for p in a.rglob("*") if p.is_file())
    same = [filecmp.cmp(a / n, b / n, shallow=False) for n in names]
    n_csv = sum(n.suffix == ".csv" for n in names)
    ok = report(10, all(same) and n_csv > 0,
                f"{len(names)} artifacts ({n_csv} CSV) across {len(COMMANDS) + 1} subcommands, "
                f"{sum(same)} byte-identical")
    assert ok
