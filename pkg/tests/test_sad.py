"""Salient-segment detection: energies, thresholds, grid behavior."""

import numpy as np
import pytest

from bsrnn.audio import AudioTrack
from bsrnn.sad import (
    CHUNKS_PER_SEGMENT,
    ENERGY_QUANTILE,
    THRESHOLD_FLOOR,
    ZERO_CHUNK_ENERGY,
    SalientSegment,
    chunk_energy,
    detect_salient_segments,
    saliency_threshold,
)

RATE = 44100


def loud_silent_track(loud_seconds, silent_seconds, amplitude=0.5, seed=0):
    rng = np.random.default_rng(seed)
    loud = amplitude * rng.standard_normal((1, round(loud_seconds * RATE)))
    quiet = np.zeros((1, round(silent_seconds * RATE)))
    return AudioTrack(data=np.concatenate([loud, quiet], axis=1), sample_rate=RATE)


def test_chunk_energy_mean_square():
    chunk = np.array([[3.0, -4.0], [0.0, 0.0]])
    assert chunk_energy(chunk) == pytest.approx((9.0 + 16.0) / 4.0)


def test_chunk_energy_zero_chunk_sentinel():
    assert chunk_energy(np.zeros((2, 50))) == ZERO_CHUNK_ENERGY


def test_chunk_energy_empty_rejected():
    with pytest.raises(ValueError, match="empty"):
        chunk_energy(np.zeros((1, 0)))


def test_threshold_is_quantile_with_floor():
    energies = np.linspace(10.0, 20.0, 101)
    want = float(np.quantile(energies, ENERGY_QUANTILE))
    assert saliency_threshold(energies) == pytest.approx(want)
    # all-tiny energies hit the absolute floor instead
    assert saliency_threshold(np.full(40, 1e-9)) == THRESHOLD_FLOOR
    with pytest.raises(ValueError, match="zero chunks"):
        saliency_threshold(np.array([]))


def test_short_track_yields_nothing():
    track = loud_silent_track(2.0, 0.0)
    assert detect_salient_segments(track) == []


def test_all_loud_track_all_segments():
    track = loud_silent_track(12.0, 0.0)
    got = detect_salient_segments(track)
    seg = round(6.0 * RATE)
    hop = seg // 2
    assert [s.start for s in got] == [0, hop, 2 * hop]
    assert all(s.length == seg for s in got)
    assert got[0].end == seg


def test_half_silent_track_grid():
    # 24 s track, first 12 s loud, last 12 s silent. Segments start every
    # 3 s; a segment passes only when strictly more than 5 of its 10 chunks
    # sit in the loud half. The 9 s segment covers exactly 5 loud chunks and
    # must be rejected; 12/15/18 s starts never overlap the loud half at all
    # but silence alone cannot pass either.
    track = loud_silent_track(12.0, 12.0)
    got = detect_salient_segments(track)
    starts = [s.start / RATE for s in got]
    assert starts == [0.0, 3.0, 6.0]


def test_boundary_segment_exactly_half_rejected():
    # strictly-greater rule: 5 of 10 passing chunks is not salient
    track = loud_silent_track(12.0, 12.0)
    seg = round(6.0 * RATE)
    nine = 3 * seg // 2
    assert nine not in [s.start for s in detect_salient_segments(track)]


def test_quiet_background_does_not_mask_loud_half():
    # quiet-but-nonzero noise in the second half keeps energies finite and
    # still fails the threshold
    rng = np.random.default_rng(1)
    loud = 0.5 * rng.standard_normal((2, 12 * RATE))
    quiet = 1e-4 * rng.standard_normal((2, 12 * RATE))
    track = AudioTrack(data=np.concatenate([loud, quiet], axis=1), sample_rate=RATE)
    starts = [s.start / RATE for s in detect_salient_segments(track)]
    assert starts == [0.0, 3.0, 6.0]


def test_segment_dataclass():
    seg = SalientSegment(start=100, length=50)
    assert seg.end == 150


def test_custom_segment_length():
    track = loud_silent_track(4.0, 0.0)
    got = detect_salient_segments(track, segment_seconds=2.0)
    seg = round(2.0 * RATE)
    assert [s.start for s in got] == [0, seg // 2, 2 * (seg // 2)]


def test_chunk_count_constant():
    assert CHUNKS_PER_SEGMENT == 10
