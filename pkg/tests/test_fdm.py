import numpy as np
import pytest

from conftest import dft_oracle
from ftgi.detector import expose
from ftgi.fdm import (
    FdmChannel,
    default_channels,
    fdm_decode,
    fdm_encode,
    modulate,
    slice_band,
)
from ftgi.probing import PatternLayout
from ftgi.spectral import Spectrum, extract_spectrum
from ftgi.waveforms import BinaryCode, encode_word

N = 800
t = np.arange(N) / N


def smooth_envelope(freq, phase=0.0):
    """Band-limited envelope in [0, 1] with content only at 0 and ``freq`` Hz."""
    return 0.5 - 0.5 * np.cos(2 * np.pi * freq * t + phase)


def pipeline(obj):
    return extract_spectrum(expose(obj, PatternLayout()))


def test_single_bit_channel_sits_around_its_carrier():
    ch = FdmChannel(25, (1, 49), BinaryCode("1", "rz-gauss", 1))
    obj = fdm_encode([ch])
    mag = np.abs(dft_oracle(obj.samples, 100))
    energy = mag[1:] ** 2
    assert 1 + np.argmax(energy) == 25
    assert energy[14:35].sum() > 0.9999 * energy.sum()


def test_all_zero_words_give_pure_dc():
    channels = default_channels(5, "rz-square", words=("00000", "00000"))
    obj = fdm_encode(channels)
    np.testing.assert_allclose(obj.samples, 1.0)


def test_two_channel_spectrum_has_two_clusters():
    obj = fdm_encode(default_channels(5, "rz-gauss"))
    mag = np.abs(dft_oracle(obj.samples, 100))
    low, high = mag[1:50], mag[51:100]
    assert 1 + np.argmax(low) in range(20, 31)
    assert 51 + np.argmax(high) in range(70, 81)
    assert mag[45:56].max() < 0.05 * mag[1:].max()


def test_encoder_rejects_overlapping_bands():
    word = BinaryCode("10101", "rz-gauss", 5)
    with pytest.raises(ValueError):
        fdm_encode([FdmChannel(25, (1, 60), word), FdmChannel(75, (51, 99), word)])
    with pytest.raises(ValueError):
        FdmChannel(25, (30, 40), word)


def test_slice_band_partition():
    rng = np.random.default_rng(1)
    spec = Spectrum(rng.normal(size=100) + 1j * rng.normal(size=100))
    np.testing.assert_array_equal(slice_band(spec, 0, 99).coeffs, spec.coeffs)
    low, high = slice_band(spec, 1, 49).coeffs, slice_band(spec, 51, 99).coeffs
    dc = slice_band(spec, 0, 0).coeffs
    mid = slice_band(spec, 50, 50).coeffs
    np.testing.assert_array_equal(low + high + dc + mid, spec.coeffs)
    assert np.count_nonzero(low * high) == 0
    assert low[0] == 0
    with pytest.raises(ValueError):
        slice_band(spec, 40, 30)
    with pytest.raises(ValueError):
        slice_band(spec, 0, 120)


def test_slice_keeps_only_channel_two():
    e1, e2 = smooth_envelope(3), smooth_envelope(4, 1.0)
    both, s_both = modulate([e1, e2], [25, 75], return_scale=True)
    alone, s_alone = modulate([np.zeros(N), e2], [25, 75], return_scale=True)
    high = slice_band(pipeline(both), 51, 99).coeffs / s_both
    np.testing.assert_allclose(high, slice_band(pipeline(alone), 51, 99).coeffs / s_alone, atol=1e-9)
    assert np.abs(high[:51]).max() == 0


def test_zero_band_decodes_to_zero_bits():
    ch = FdmChannel(25, (1, 49), BinaryCode("10110", "rz-gauss", 5))
    decoded = fdm_decode(Spectrum(np.zeros(100)), ch)
    assert decoded.bits == "00000"
    assert np.all(decoded.envelope == 0)


@pytest.mark.parametrize("scheme", ["rz-square", "rz-gauss"])
def test_single_channel_round_trip(scheme):
    ch = FdmChannel(25, (1, 49), BinaryCode("10110", scheme, 5))
    decoded = fdm_decode(pipeline(fdm_encode([ch])), ch)
    assert decoded.bits == "10110"


@pytest.mark.parametrize("rate", [5, 10])
@pytest.mark.parametrize("scheme", ["rz-square", "rz-gauss"])
def test_two_channel_bit_round_trip(rate, scheme):
    channels = default_channels(rate, scheme)
    spec = pipeline(fdm_encode(channels))
    for ch in channels:
        assert fdm_decode(spec, ch).bits == ch.word.bits


def test_channel_isolation_with_band_limited_envelopes():
    e1, e2 = smooth_envelope(3), smooth_envelope(5, 0.4)
    ch1 = FdmChannel(25, (1, 49), BinaryCode("101", "rz-gauss", 3))
    both, s_both = modulate([e1, e2], [25, 75], return_scale=True)
    alone, s_alone = modulate([e1, np.zeros(N)], [25, 75], return_scale=True)
    env_both = fdm_decode(pipeline(both), ch1).envelope / s_both
    env_alone = fdm_decode(pipeline(alone), ch1).envelope / s_alone
    np.testing.assert_allclose(env_both, e1, atol=1e-9)
    np.testing.assert_allclose(env_alone, e1, atol=1e-9)


@pytest.mark.parametrize("rate", [5, 10])
def test_decoded_envelope_peak_scale(rate):
    channels = default_channels(rate, "rz-gauss")
    obj, scale = fdm_encode(channels, return_scale=True)
    spec = pipeline(obj)
    for ch in channels:
        truth = encode_word(ch.word).samples
        env = fdm_decode(spec, ch).envelope
        assert env.max() / scale == pytest.approx(truth.max(), rel=0.02)


def test_modulate_validation():
    with pytest.raises(ValueError):
        modulate([np.full(N, 1.5)], [25])
    with pytest.raises(ValueError):
        modulate([np.zeros(N)], [25, 75])
