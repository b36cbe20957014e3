"""Energy-based salient-segment detection for building training pools.

A track is scanned on a 50%-overlap grid of fixed-length segments. Each
segment is cut into 10 equal chunks and a chunk passes when its mean-square
energy exceeds a track-level threshold; a segment is salient when strictly
more than half of its chunks pass. The threshold is the 15% quantile of all
grid chunk energies, floored at a small absolute value so silence never
drags it to zero.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .audio import AudioTrack

__all__ = [
    "SalientSegment",
    "chunk_energy",
    "saliency_threshold",
    "detect_salient_segments",
    "SEGMENT_SECONDS",
    "CHUNKS_PER_SEGMENT",
    "ENERGY_QUANTILE",
    "THRESHOLD_FLOOR",
    "ZERO_CHUNK_ENERGY",
]

logger = logging.getLogger(__name__)

SEGMENT_SECONDS = 6.0
CHUNKS_PER_SEGMENT = 10
ENERGY_QUANTILE = 0.15
# silent chunks report this instead of 0 so ratios stay finite
ZERO_CHUNK_ENERGY = 1e-5
# absolute lower bound on the track threshold
THRESHOLD_FLOOR = 1e-3


@dataclass(frozen=True)
class SalientSegment:
    start: int
    length: int

    @property
    def end(self) -> int:
        return self.start + self.length


def chunk_energy(chunk: np.ndarray) -> float:
    """Mean squared amplitude over every sample (and channel) of the chunk."""
    data = np.asarray(chunk, dtype=np.float64)
    if data.size == 0:
        raise ValueError("cannot compute the energy of an empty chunk")
    if not data.any():
        return ZERO_CHUNK_ENERGY
    return float(np.mean(data * data))


def saliency_threshold(energies: np.ndarray) -> float:
    """Track-level threshold: a low quantile of all chunk energies, floored."""
    values = np.asarray(energies, dtype=np.float64)
    if values.size == 0:
        raise ValueError("cannot derive a threshold from zero chunks")
    return max(float(np.quantile(values, ENERGY_QUANTILE)), THRESHOLD_FLOOR)


def _segment_chunk_energies(block: np.ndarray) -> list[float]:
    length = block.shape[-1]
    bounds = [length * i // CHUNKS_PER_SEGMENT for i in range(CHUNKS_PER_SEGMENT + 1)]
    return [chunk_energy(block[..., bounds[i] : bounds[i + 1]]) for i in range(CHUNKS_PER_SEGMENT)]


def detect_salient_segments(
    track: AudioTrack, segment_seconds: float = SEGMENT_SECONDS
) -> list[SalientSegment]:
    """Find all salient segments on the 50%-overlap grid.

    A track shorter than one segment yields no segments (with a warning).
    Chunks in overlapped regions are deliberately counted once per covering
    segment when pooling energies for the threshold.
    """
    seg_len = round(segment_seconds * track.sample_rate)
    if track.num_samples < seg_len:
        logger.warning(
            "track too short for activity detection: %d samples < one %g s segment",
            track.num_samples,
            segment_seconds,
        )
        return []

    hop = seg_len // 2
    starts = list(range(0, track.num_samples - seg_len + 1, hop))
    per_segment = [
        _segment_chunk_energies(track.data[:, s : s + seg_len]) for s in starts
    ]
    threshold = saliency_threshold(np.concatenate(per_segment))

    salient = []
    for start, energies in zip(starts, per_segment):
        passing = sum(1 for e in energies if e > threshold)
        if passing * 2 > CHUNKS_PER_SEGMENT:
            salient.append(SalientSegment(start=start, length=seg_len))
    return salient
