import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ftgi.probing import (
    PHASES,
    PatternLayout,
    probe_matrix,
    probe_value,
    render_frame,
    subpatch_index,
)


def test_dc_patch_is_constant(layout):
    for t in (0.0, 0.123, 0.5, 0.999):
        assert probe_value(layout, 0, 0.0, t) == pytest.approx(layout.A + layout.B)
        assert probe_value(layout, 0, np.pi, t) == pytest.approx(layout.A - layout.B)


def test_probe_at_quarter_period():
    layout = PatternLayout(A=0.5, B=0.5)
    assert probe_value(layout, 1, 0.0, 0.25) == pytest.approx(0.5, abs=1e-15)


def test_probe_value_rejects_bad_index_and_phase(layout):
    with pytest.raises(ValueError):
        probe_value(layout, 100, 0.0, 0.0)
    with pytest.raises(ValueError):
        probe_value(layout, 3, 0.3, 0.0)


@pytest.mark.parametrize("kwargs", [
    dict(A=0.4, B=0.5),
    dict(A=0.7, B=0.5),
    dict(n_freqs=99),
    dict(n_freqs=400, patch_grid=(20, 20), frame_rate=700.0),
    dict(quantize_levels=1),
])
def test_layout_invariants(kwargs):
    with pytest.raises(ValueError):
        PatternLayout(**kwargs)


def test_subpatch_examples(layout):
    assert subpatch_index(layout, 0, 0.0) == (0, 0)
    assert subpatch_index(layout, 99, 1.5 * np.pi) == (19, 19)
    assert subpatch_index(layout, 11, np.pi) == (3, 2)


def test_subpatch_index_is_a_bijection(layout):
    cells = {subpatch_index(layout, k, p) for k in range(100) for p in PHASES}
    assert cells == set(itertools.product(range(20), range(20)))


def test_first_frame_shows_the_phase_offsets(layout):
    grid = render_frame(layout, 0)
    expected = np.array([[1.0, 0.5], [0.0, 0.5]])
    np.testing.assert_allclose(grid, np.tile(expected, (10, 10)), atol=1e-15)


def test_frame_matches_probe_value(layout):
    grid = render_frame(layout, 200)
    r, c = subpatch_index(layout, 1, 0.0)
    assert grid[r, c] == pytest.approx(layout.A, abs=1e-15)
    for k, p in [(7, np.pi / 2), (42, np.pi), (99, 1.5 * np.pi)]:
        r, c = subpatch_index(layout, k, p)
        assert grid[r, c] == pytest.approx(probe_value(layout, k, p, 200 / 800), abs=1e-12)


def test_dc_patch_frames_are_time_constant(layout):
    P = probe_matrix(layout, 800)
    assert np.all(P[0] == P[0, :, :1])


def test_render_frame_rejects_out_of_range(layout):
    with pytest.raises(ValueError):
        render_frame(layout, 800)


def test_quantized_probes_sit_on_the_grayscale_grid():
    layout = PatternLayout(quantize_levels=256)
    P = probe_matrix(layout, 800)
    np.testing.assert_allclose(P * 255, np.round(P * 255), atol=1e-9)
    assert np.max(np.abs(P - probe_matrix(PatternLayout(), 800))) <= 0.5 / 255 + 1e-12


@settings(max_examples=100, deadline=None)
@given(B=st.floats(0.0, 0.5), frac=st.floats(0.0, 1.0), k=st.integers(0, 99), t=st.floats(0.0, 1.0))
def test_probe_range_and_phase_balance(B, frac, k, t):
    layout = PatternLayout(A=B + frac * (1 - 2 * B), B=B)
    values = [probe_value(layout, k, p, t) for p in PHASES]
    assert all(layout.A - layout.B - 1e-12 <= v <= layout.A + layout.B + 1e-12 for v in values)
    assert -1e-12 <= min(values) and max(values) <= 1 + 1e-12
    assert sum(values) == pytest.approx(4 * layout.A, abs=1e-12)
