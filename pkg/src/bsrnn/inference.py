"""Full-song separation by fixed-length chunking and overlap-add.

The track is zero-padded by one chunk-minus-hop on both sides, cut into
chunks on the hop grid (extended with trailing zeros so the grid covers the
whole padded signal), and each chunk runs through the spectrogram pipeline
per channel. Chunk outputs are averaged sample-wise by how many chunks
cover each position, then the padding is trimmed, so the result always has
the input's exact length.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import audio
from .audio import AudioTrack, ComplexSpectrogram
from .model import ModelConfig, ModelWeights, separate_spectrogram

__all__ = [
    "SUPPORTED_RATE",
    "InferenceConfig",
    "SpectrogramFn",
    "model_spectrogram_fn",
    "separate_track",
]

SUPPORTED_RATE = 44100

SpectrogramFn = Callable[[ComplexSpectrogram], ComplexSpectrogram]


@dataclass(frozen=True)
class InferenceConfig:
    chunk_seconds: float = 3.0
    hop_seconds: float = 0.5
    n_fft: int = 2048
    stft_hop: int = 512
    threads: int = 1

    def __post_init__(self) -> None:
        if not 0 < self.hop_seconds <= self.chunk_seconds:
            raise ValueError(
                f"hop must be in (0, chunk], got hop={self.hop_seconds} "
                f"chunk={self.chunk_seconds}"
            )
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


def model_spectrogram_fn(weights: ModelWeights, config: ModelConfig) -> SpectrogramFn:
    """Wrap a weighted model as a spectrogram-to-spectrogram function."""
    return lambda spec: separate_spectrogram(spec, weights, config)


def _process_chunk(
    chunk: np.ndarray, fn: SpectrogramFn, cfg: InferenceConfig, rate: int
) -> np.ndarray:
    spec = audio.stft(chunk, n_fft=cfg.n_fft, hop=cfg.stft_hop, sample_rate=rate)
    return audio.istft(fn(spec), target_len=chunk.size)


def separate_track(
    track: AudioTrack,
    fn: SpectrogramFn,
    config: InferenceConfig = InferenceConfig(),
) -> AudioTrack:
    """Separate a full track; channels are processed independently.

    Only 44.1 kHz input is accepted: the band layouts are defined in Hz
    against that rate, so any other rate would silently shift every band.
    """
    if track.sample_rate != SUPPORTED_RATE:
        raise ValueError(
            f"unsupported sample rate {track.sample_rate}; expected {SUPPORTED_RATE}"
        )
    rate = track.sample_rate
    chunk_len = round(config.chunk_seconds * rate)
    hop_len = round(config.hop_seconds * rate)
    pad = chunk_len - hop_len

    padded_len = track.num_samples + 2 * pad
    num_chunks = max(1, -(-(padded_len - chunk_len) // hop_len) + 1)
    grid_len = (num_chunks - 1) * hop_len + chunk_len

    buf = np.zeros((track.channels, grid_len))
    buf[:, pad : pad + track.num_samples] = track.data

    coverage = np.zeros(grid_len)
    starts = [c * hop_len for c in range(num_chunks)]
    for s in starts:
        coverage[s : s + chunk_len] += 1.0

    out = np.zeros_like(buf)
    jobs = [(ch, s) for ch in range(track.channels) for s in starts]

    def run(job: tuple[int, int]) -> tuple[int, int, np.ndarray]:
        ch, s = job
        return ch, s, _process_chunk(buf[ch, s : s + chunk_len], fn, config, rate)

    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            results = list(pool.map(run, jobs))
    else:
        results = [run(job) for job in jobs]
    # single accumulation point, in deterministic job order
    for ch, s, separated in results:
        out[ch, s : s + chunk_len] += separated

    out /= coverage
    return AudioTrack(
        data=out[:, pad : pad + track.num_samples], sample_rate=rate
    )
