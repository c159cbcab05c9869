"""scikit-learn style wrappers around the acquisition and reconstruction chain.

Rows of ``X`` are independent signals, so the transformers compose with
``sklearn.pipeline.Pipeline``::

    pipe = make_pipeline(FTGIAcquisition(), FTGIReconstructor(coverage=0.5))
    ghost = pipe.fit_transform(objects)          # (n_objects, 800)

Captures travel between stages flattened row-major from the sub-patch grid,
i.e. ``X[i] == capture.values.ravel()``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .detector import DetectorModel, RawCapture, expose
from .probing import PatternLayout
from .spectral import DEFAULT_ROLLOFF, extract_spectrum, reconstruct
from .tgi import make_random_probes, tgi_correlate, tgi_expose
from .waveforms import TimeObject


class _LayoutParams:
    def _make_layout(self):
        grid = self.patch_grid
        if grid is None:
            return PatternLayout.square(
                self.n_freqs, freq_step=self.freq_step, A=self.A, B=self.B,
                frame_rate=self.frame_rate, quantize_levels=self.quantize_levels,
            )
        return PatternLayout(
            self.n_freqs, self.freq_step, self.A, self.B, tuple(grid),
            self.frame_rate, self.quantize_levels,
        )


class FTGIAcquisition(_LayoutParams, TransformerMixin, BaseEstimator):
    """Single-shot FTGI exposure: objects -> flattened raw captures.

    Parameters
    ----------
    n_freqs, freq_step, A, B, patch_grid, frame_rate, quantize_levels
        Probe layout, see :class:`ftgi.probing.PatternLayout`. ``patch_grid``
        of None picks the most nearly square grid.
    gain, gaussian_sigma, shot_scale, adc_bits, seed
        Detector model. Row ``i`` of a batch uses seed ``seed + i``.

    Attributes
    ----------
    layout_ : PatternLayout
    n_features_in_ : int
        Samples per object.
    """

    def __init__(self, n_freqs=100, freq_step=1.0, A=0.5, B=0.5, patch_grid=None,
                 frame_rate=800.0, quantize_levels=None, gain=1.0, gaussian_sigma=0.0,
                 shot_scale=None, adc_bits=None, seed=0):
        self.n_freqs = n_freqs
        self.freq_step = freq_step
        self.A = A
        self.B = B
        self.patch_grid = patch_grid
        self.frame_rate = frame_rate
        self.quantize_levels = quantize_levels
        self.gain = gain
        self.gaussian_sigma = gaussian_sigma
        self.shot_scale = shot_scale
        self.adc_bits = adc_bits
        self.seed = seed

    def _model(self, offset=0):
        return DetectorModel(self.gain, self.gaussian_sigma, self.shot_scale,
                             self.adc_bits, seed=self.seed + offset)

    def fit(self, X, y=None):
        X = check_array(X, ensure_min_features=2)
        self.layout_ = self._make_layout()
        self._model()
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "layout_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} samples per row, expected {self.n_features_in_}")
        out = [
            expose(TimeObject(row, self.frame_rate), self.layout_, self._model(i)).values.ravel()
            for i, row in enumerate(X)
        ]
        return np.asarray(out)


class FTGIReconstructor(_LayoutParams, TransformerMixin, BaseEstimator):
    """Phase-shift extraction plus inverse transform: captures -> ghost images.

    Parameters
    ----------
    coverage : float
        Fraction of the frequency grid kept, in (0, 1].
    window : {"rect", "raised-cosine"}
    rolloff : float
        Tapered fraction of the kept band for the raised-cosine window.
    out_len : int or None
        Output length; None means the native acquisition grid.
    duration : float
        Exposure time in seconds.
    n_freqs, freq_step, A, B, patch_grid, frame_rate, quantize_levels, gain
        Must match the acquisition.
    """

    def __init__(self, coverage=1.0, window="rect", rolloff=DEFAULT_ROLLOFF, out_len=None,
                 duration=1.0, n_freqs=100, freq_step=1.0, A=0.5, B=0.5, patch_grid=None,
                 frame_rate=800.0, quantize_levels=None, gain=1.0):
        self.coverage = coverage
        self.window = window
        self.rolloff = rolloff
        self.out_len = out_len
        self.duration = duration
        self.n_freqs = n_freqs
        self.freq_step = freq_step
        self.A = A
        self.B = B
        self.patch_grid = patch_grid
        self.frame_rate = frame_rate
        self.quantize_levels = quantize_levels
        self.gain = gain

    def fit(self, X, y=None):
        self.layout_ = self._make_layout()
        X = check_array(X)
        n_cells = self.layout_.n_measurements
        if X.shape[1] != n_cells:
            raise ValueError(f"captures need {n_cells} values per row, got {X.shape[1]}")
        self.n_features_in_ = n_cells
        return self

    def _captures(self, X):
        check_is_fitted(self, "layout_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"captures need {self.n_features_in_} values per row, got {X.shape[1]}")
        model = DetectorModel(self.gain)
        shape = self.layout_.grid_shape
        return [RawCapture(row.reshape(shape), self.layout_, self.duration, model) for row in X]

    def spectrum(self, X):
        """Complex coefficients ``F_0 .. F_{n-1}`` of every capture row."""
        return np.asarray([extract_spectrum(c).coeffs for c in self._captures(X)])

    def transform(self, X):
        out = []
        for capture in self._captures(X):
            spec = extract_spectrum(capture)
            out.append(reconstruct(spec, self.coverage, self.window, self.out_len, self.rolloff).samples)
        return np.asarray(out)


class TGIAcquisition(TransformerMixin, BaseEstimator):
    """Random binary probing: objects -> bucket vectors of length ``n_patterns``."""

    def __init__(self, n_patterns=400, seed=0, gain=1.0, gaussian_sigma=0.0, frame_rate=800.0):
        self.n_patterns = n_patterns
        self.seed = seed
        self.gain = gain
        self.gaussian_sigma = gaussian_sigma
        self.frame_rate = frame_rate

    def fit(self, X, y=None):
        X = check_array(X, ensure_min_features=2)
        self.probes_ = make_random_probes(self.n_patterns, X.shape[1], self.seed)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "probes_")
        X = check_array(X)
        return np.asarray([
            tgi_expose(TimeObject(row, self.frame_rate), self.probes_,
                       DetectorModel(self.gain, self.gaussian_sigma, seed=self.seed + i))
            for i, row in enumerate(X)
        ])


class TGIReconstructor(TransformerMixin, BaseEstimator):
    """Correlation ghost imaging: bucket vectors -> ghost images.

    The probe set is regenerated from ``seed``, so acquisition and
    reconstruction only need to agree on ``(n_patterns, n_samples, seed)``.
    ``budget`` keeps the first ``ceil(budget * n_patterns)`` measurements.
    """

    def __init__(self, n_samples=800, seed=0, budget=1.0, frame_rate=800.0):
        self.n_samples = n_samples
        self.seed = seed
        self.budget = budget
        self.frame_rate = frame_rate

    def fit(self, X, y=None):
        X = check_array(X, ensure_min_features=2)
        self.probes_ = make_random_probes(X.shape[1], self.n_samples, self.seed)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "probes_")
        X = check_array(X)
        probes = self.probes_.head(self.budget)
        m = probes.n_patterns
        return np.asarray([tgi_correlate(row[:m], probes, self.frame_rate).samples for row in X])
