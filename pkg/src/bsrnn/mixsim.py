"""On-the-fly training-mixture simulation.

Each example draws one salient segment per stem type (from independent
songs), cuts a uniform chunk out of it, rescales the chunk by a random gain,
drops it outright with a small probability, and sums everything into a
mixture. Mixture and target are then jointly rescaled so the louder of the
two peaks at exactly 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .audio import AudioTrack

__all__ = [
    "STEM_TYPES",
    "GAIN_RANGE_DB",
    "DROP_PROBABILITY",
    "StemPool",
    "TrainingExample",
    "gain_from_db",
    "draw_chunk",
    "build_example",
    "sample_training_example",
]

STEM_TYPES = ("vocal", "bass", "drum", "other")
GAIN_RANGE_DB = (-10.0, 10.0)
DROP_PROBABILITY = 0.1


@dataclass
class StemPool:
    """Salient segments grouped by stem type, all alike in rate and layout."""

    stems: dict[str, list[AudioTrack]]

    def __post_init__(self) -> None:
        shapes = {
            (seg.sample_rate, seg.channels)
            for segments in self.stems.values()
            for seg in segments
        }
        if len(shapes) > 1:
            raise ValueError(f"pool mixes sample rates or channel counts: {shapes}")

    def require(self, stem: str) -> list[AudioTrack]:
        segments = self.stems.get(stem)
        if not segments:
            raise ValueError(f"stem pool has no segments for {stem!r}")
        return segments


@dataclass
class TrainingExample:
    mixture: AudioTrack
    target: AudioTrack
    residual: AudioTrack
    gain_db: dict[str, float]
    dropped: dict[str, bool]
    degenerate: bool


def gain_from_db(db: float) -> float:
    """Amplitude factor for a gain expressed in dB of energy."""
    return float(10.0 ** (db / 20.0))


def draw_chunk(
    segments: Sequence[AudioTrack], rng: np.random.Generator, chunk_len: int
) -> np.ndarray:
    """Pick a segment, then a uniform chunk position inside it."""
    segment = segments[int(rng.integers(len(segments)))]
    if segment.num_samples < chunk_len:
        raise ValueError(
            f"segment of {segment.num_samples} samples shorter than chunk {chunk_len}"
        )
    offset = int(rng.integers(segment.num_samples - chunk_len + 1))
    return segment.data[:, offset : offset + chunk_len]


def build_example(
    chunks: Sequence[tuple[str, np.ndarray]],
    target_name: str,
    rng: np.random.Generator,
    sample_rate: int,
    gain_range: tuple[float, float] = GAIN_RANGE_DB,
    drop_probability: float = DROP_PROBABILITY,
) -> TrainingExample:
    """Augment named chunks, sum them, and peak-normalize the pair.

    Gains and drops are drawn per chunk in the order given, so a seeded rng
    reproduces an example bit-for-bit. The target chunk itself may be
    dropped, mimicking segments where the target source is inactive.
    """
    names = [name for name, _ in chunks]
    if target_name not in names:
        raise ValueError(f"target {target_name!r} not among chunks {names}")

    gain_db: dict[str, float] = {}
    dropped: dict[str, bool] = {}
    augmented: dict[str, np.ndarray] = {}
    for name, chunk in chunks:
        db = float(rng.uniform(*gain_range))
        drop = bool(rng.random() < drop_probability)
        gain_db[name] = db
        dropped[name] = drop
        augmented[name] = np.zeros_like(chunk) if drop else chunk * gain_from_db(db)

    target = augmented[target_name]
    residual = np.zeros_like(target)
    for name in names:
        if name != target_name:
            residual = residual + augmented[name]
    mixture = residual + target

    norm = float(max(np.max(np.abs(mixture)), np.max(np.abs(target))))
    degenerate = norm == 0.0
    if not degenerate:
        mixture = mixture / norm
        target = target / norm
        residual = residual / norm

    def track(data: np.ndarray) -> AudioTrack:
        return AudioTrack(data=data, sample_rate=sample_rate)

    return TrainingExample(
        mixture=track(mixture),
        target=track(target),
        residual=track(residual),
        gain_db=gain_db,
        dropped=dropped,
        degenerate=degenerate,
    )


def sample_training_example(
    pool: StemPool,
    target_stem: str,
    rng: np.random.Generator,
    chunk_seconds: float = 3.0,
) -> TrainingExample:
    """One supervised example: a chunk per stem type, augmented and summed."""
    if target_stem not in STEM_TYPES:
        raise ValueError(f"unknown target stem {target_stem!r}, expected one of {STEM_TYPES}")
    first = pool.require(STEM_TYPES[0])[0]
    chunk_len = round(chunk_seconds * first.sample_rate)
    chunks = [
        (stem, draw_chunk(pool.require(stem), rng, chunk_len)) for stem in STEM_TYPES
    ]
    return build_example(chunks, target_stem, rng, sample_rate=first.sample_rate)
