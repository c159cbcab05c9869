"""Random-binary-probing temporal ghost imaging baseline."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .detector import CSV_FMT, DetectorModel, apply_noise, integrate
from .spectral import Reconstruction
from .waveforms import TimeObject


@dataclass(frozen=True, eq=False)
class RandomProbeSet:
    """M binary probe sequences of length N, one per measurement."""

    patterns: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        patterns = np.asarray(self.patterns)
        if patterns.ndim != 2 or min(patterns.shape) < 1:
            raise ValueError("patterns must be an (M, N) array with M, N >= 1")
        if not np.isin(patterns, (0, 1)).all():
            raise ValueError("probe entries must be 0 or 1")
        object.__setattr__(self, "patterns", patterns.astype(np.uint8))

    @property
    def n_patterns(self) -> int:
        return self.patterns.shape[0]

    @property
    def n_samples(self) -> int:
        return self.patterns.shape[1]

    def head(self, fraction: float) -> "RandomProbeSet":
        """The first ``ceil(fraction * M)`` patterns (nested budgets)."""
        if not 0 < fraction <= 1:
            raise ValueError(f"budget fraction must lie in (0, 1], got {fraction}")
        m = math.ceil(fraction * self.n_patterns - 1e-9)
        return RandomProbeSet(self.patterns[:m], self.seed)


def make_random_probes(M: int, N: int, seed: int | None = 0) -> RandomProbeSet:
    """``M x N`` iid Bernoulli(1/2) binary patterns, reproducible from ``seed``."""
    if M < 1 or N < 1:
        raise ValueError("M and N must be >= 1")
    rng = np.random.default_rng(seed)
    return RandomProbeSet(rng.integers(0, 2, size=(M, N), dtype=np.uint8), seed)


def tgi_expose(obj: TimeObject, probes: RandomProbeSet, model: DetectorModel | None = None) -> np.ndarray:
    """Bucket value of every probe: ``gain / rate * sum_t I[t] S_m[t]`` plus noise."""
    model = model or DetectorModel()
    if probes.n_samples != len(obj):
        raise ValueError(f"probes have {probes.n_samples} samples, object has {len(obj)}")
    clean = integrate(obj.samples, probes.patterns.astype(float), model, obj.sample_rate)
    return apply_noise(clean, model, obj.duration)


def tgi_correlate(buckets, probes: RandomProbeSet, sample_rate: float = 800.0) -> Reconstruction:
    """Centred intensity-correlation ghost image.

    ``G[t] = (1/M) sum_m (D_m - <D>) (S_m[t] - <S[t]>)``; the scale is left
    unnormalised.
    """
    buckets = np.asarray(buckets, dtype=float)
    if buckets.shape != (probes.n_patterns,):
        raise ValueError(f"expected {probes.n_patterns} bucket values, got shape {buckets.shape}")
    if probes.n_patterns < 2:
        raise ValueError("correlation needs at least 2 measurements")
    S = probes.patterns.astype(float)
    dD = buckets - buckets.mean()
    G = dD @ (S - S.mean(axis=0)) / probes.n_patterns
    return Reconstruction(G, sample_rate, window="tgi")


def save_probes(path, probes: RandomProbeSet) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerows(probes.patterns.tolist())
    return path


def load_probes(path, seed: int | None = None) -> RandomProbeSet:
    with Path(path).open(newline="") as fh:
        rows = [[int(v) for v in row] for row in csv.reader(fh) if row]
    return RandomProbeSet(np.array(rows), seed)


def save_buckets(path, buckets) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["index", "bucket"])
        for i, b in enumerate(np.asarray(buckets, dtype=float)):
            writer.writerow([i, CSV_FMT.format(b)])
    return path


def load_buckets(path) -> np.ndarray:
    with Path(path).open(newline="") as fh:
        return np.array([float(r["bucket"]) for r in csv.DictReader(fh)])
