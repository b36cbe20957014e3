"""Shared fixtures: tiny model configurations and synthetic audio."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from bsrnn import audio, bands, model, wavio

TINY_LEDGER = "4000:1000,8000:2000 one-subband"


def make_track(
    seconds: float, channels: int = 1, seed: int = 0, sample_rate: int = 44100
) -> audio.AudioTrack:
    rng = np.random.default_rng(seed)
    samples = round(seconds * sample_rate)
    data = 0.5 * rng.standard_normal((channels, samples))
    return audio.AudioTrack(data=data, sample_rate=sample_rate)


def make_sine_track(
    seconds: float,
    freq: float = 440.0,
    amplitude: float = 1.0,
    channels: int = 1,
    sample_rate: int = 44100,
) -> audio.AudioTrack:
    t = np.arange(round(seconds * sample_rate)) / sample_rate
    wave = amplitude * np.sin(2.0 * np.pi * freq * t)
    return audio.AudioTrack(
        data=np.tile(wave, (channels, 1)), sample_rate=sample_rate
    )


def random_spectrogram(
    frames: int, seed: int = 0, n_fft: int = 2048, hop: int = 512
) -> audio.ComplexSpectrogram:
    rng = np.random.default_rng(seed)
    shape = (n_fft // 2 + 1, frames)
    return audio.ComplexSpectrogram(
        bins=rng.standard_normal(shape) + 1j * rng.standard_normal(shape),
        n_fft=n_fft,
        hop=hop,
        sample_rate=44100,
    )


@pytest.fixture(scope="session")
def tiny_config() -> model.ModelConfig:
    scheme = bands.compile_scheme(TINY_LEDGER, name="tiny")
    return model.ModelConfig(scheme=scheme, feature_dim=8, num_blocks=1, lstm_hidden=4)


@pytest.fixture(scope="session")
def tiny_weights(tiny_config) -> model.ModelWeights:
    return model.init_weights(tiny_config, seed=11)


def write_stem_tree(
    root: Path,
    sample_rate: int = 8000,
    seconds: float = 1.0,
    per_stem: int = 2,
    seed: int = 0,
    channels: int = 1,
) -> Path:
    """Lay out a stems directory (one subdir per stem type) with noise WAVs."""
    rng = np.random.default_rng(seed)
    root = Path(root)
    for stem in ("vocal", "bass", "drum", "other"):
        sub = root / stem
        sub.mkdir(parents=True, exist_ok=True)
        for k in range(per_stem):
            data = 0.3 * rng.standard_normal((channels, round(seconds * sample_rate)))
            wavio.write_wav(
                str(sub / f"{stem}{k}.wav"),
                audio.AudioTrack(data=data, sample_rate=sample_rate),
            )
    return root


def identity_mask_weights(config: model.ModelConfig) -> model.ModelWeights:
    """All-zero weights except mask output biases chosen so the mask is 1+0j.

    The gate half of the GLU output is pushed to +1000, where the sigmoid
    saturates to exactly 1.0, and the linear half encodes (1, 0) per bin.
    """
    weights = model.init_weights(config, seed=0)
    for name in weights.names():
        weights.tensors[name] = np.zeros_like(weights.tensors[name])
    for i, (_, width) in enumerate(config.scheme.bands):
        bias = np.concatenate(
            [np.ones(width), np.zeros(width), 1000.0 * np.ones(2 * width)]
        ).astype(np.float32)
        weights.tensors[f"mask.{i}.fc2.bias"] = bias
    return weights
