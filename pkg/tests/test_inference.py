"""Chunked overlap-add separation over full tracks."""

import numpy as np
import pytest

from bsrnn.audio import AudioTrack, ComplexSpectrogram
from bsrnn.inference import (
    SUPPORTED_RATE,
    InferenceConfig,
    model_spectrogram_fn,
    separate_track,
)
from conftest import identity_mask_weights, make_track


def identity_fn(spec):
    return spec


def halving_fn(spec):
    return ComplexSpectrogram(
        bins=0.5 * spec.bins, n_fft=spec.n_fft, hop=spec.hop, sample_rate=spec.sample_rate
    )


def test_config_validation():
    with pytest.raises(ValueError, match="hop"):
        InferenceConfig(chunk_seconds=1.0, hop_seconds=2.0)
    with pytest.raises(ValueError, match="hop"):
        InferenceConfig(hop_seconds=0.0)
    with pytest.raises(ValueError, match="threads"):
        InferenceConfig(threads=0)
    assert InferenceConfig().chunk_seconds == 3.0


def test_rejects_wrong_sample_rate():
    track = AudioTrack(data=np.zeros((1, 1000)), sample_rate=22050)
    with pytest.raises(ValueError, match="unsupported sample rate"):
        separate_track(track, identity_fn)


def test_identity_fn_reconstructs_track():
    track = make_track(seconds=4.2, channels=2, seed=61)
    out = separate_track(track, identity_fn, InferenceConfig(chunk_seconds=1.0))
    assert out.data.shape == track.data.shape
    assert out.sample_rate == SUPPORTED_RATE
    np.testing.assert_allclose(out.data, track.data, atol=1e-9)


def test_identity_fn_short_track():
    # shorter than one chunk: a single grid chunk must still cover it
    track = make_track(seconds=0.4, channels=1, seed=62)
    out = separate_track(track, identity_fn, InferenceConfig(chunk_seconds=1.0))
    assert out.num_samples == track.num_samples
    np.testing.assert_allclose(out.data, track.data, atol=1e-9)


def test_identity_fn_awkward_lengths():
    cfg = InferenceConfig(chunk_seconds=1.0, hop_seconds=0.25)
    for samples in (44100, 44101, 44099, 100000, 12345):
        track = AudioTrack(
            data=0.3 * np.random.default_rng(samples).standard_normal((1, samples)),
            sample_rate=SUPPORTED_RATE,
        )
        out = separate_track(track, identity_fn, cfg)
        assert out.num_samples == samples
        np.testing.assert_allclose(out.data, track.data, atol=1e-9)


def test_linear_fn_commutes_with_overlap_add():
    # a linear spectrogram map must pass through the averaging untouched
    track = make_track(seconds=2.7, channels=1, seed=63)
    cfg = InferenceConfig(chunk_seconds=1.0, hop_seconds=0.5)
    out = separate_track(track, halving_fn, cfg)
    np.testing.assert_allclose(out.data, 0.5 * track.data, atol=1e-9)


def test_threads_match_single_thread_exactly():
    track = make_track(seconds=3.5, channels=2, seed=64)
    base = separate_track(track, halving_fn, InferenceConfig(chunk_seconds=1.0))
    for threads in (2, 4):
        multi = separate_track(
            track, halving_fn, InferenceConfig(chunk_seconds=1.0, threads=threads)
        )
        np.testing.assert_array_equal(multi.data, base.data)


def test_model_fn_identity_weights_end_to_end(tiny_config):
    weights = identity_mask_weights(tiny_config)
    fn = model_spectrogram_fn(weights, tiny_config)
    track = make_track(seconds=1.5, channels=1, seed=65)
    out = separate_track(track, fn, InferenceConfig(chunk_seconds=1.0))
    np.testing.assert_allclose(out.data, track.data, atol=1e-6)


def test_zero_fn_outputs_silence():
    def zero_fn(spec):
        return ComplexSpectrogram(
            bins=np.zeros_like(spec.bins),
            n_fft=spec.n_fft,
            hop=spec.hop,
            sample_rate=spec.sample_rate,
        )

    track = make_track(seconds=1.2, channels=2, seed=66)
    out = separate_track(track, zero_fn, InferenceConfig(chunk_seconds=1.0))
    np.testing.assert_array_equal(out.data, np.zeros_like(track.data))
