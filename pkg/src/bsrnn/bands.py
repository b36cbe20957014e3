"""Frequency band ledgers and compiled bin partitions.

A ledger describes a band layout in Hz as a list of (upper_edge, bandwidth)
spans; compiling it against a sample rate and FFT size yields a contiguous
partition of the one-sided spectrum into subbands. Anything above the last
span is the tail region: either its own subband or merged into the last one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .audio import ComplexSpectrogram

__all__ = [
    "BandLedger",
    "BandScheme",
    "DegenerateBandError",
    "BUILTIN_NAMES",
    "parse_ledger",
    "format_ledger",
    "compile_scheme",
    "builtin_scheme",
    "builtin_ledger",
    "split",
    "merge",
]

TAIL_ONE_SUBBAND = "one-subband"
TAIL_MERGE_INTO_LAST = "merge-into-last"
_TAIL_POLICIES = (TAIL_ONE_SUBBAND, TAIL_MERGE_INTO_LAST)

# Tolerance for deciding whether a span width is an exact multiple of its
# bandwidth, in Hz.
_EDGE_EPS = 1e-6


class DegenerateBandError(ValueError):
    """A band compiled to zero frequency bins."""


@dataclass(frozen=True)
class BandLedger:
    """Hz-denominated band layout: spans of (upper_edge, bandwidth)."""

    spans: tuple[tuple[float, float], ...]
    tail_policy: str = TAIL_ONE_SUBBAND

    def __post_init__(self) -> None:
        if not self.spans:
            raise ValueError("ledger needs at least one span")
        if self.tail_policy not in _TAIL_POLICIES:
            raise ValueError(
                f"tail policy must be one of {_TAIL_POLICIES}, got {self.tail_policy!r}"
            )
        lower = 0.0
        for upper, bandwidth in self.spans:
            if upper <= lower:
                raise ValueError(f"span upper edges must be strictly increasing at {upper} Hz")
            if bandwidth <= 0:
                raise ValueError(f"bandwidth must be positive, got {bandwidth}")
            if bandwidth > upper - lower + _EDGE_EPS:
                raise ValueError(
                    f"bandwidth {bandwidth} exceeds span width {upper - lower} at {upper} Hz"
                )
            lower = upper


@dataclass(frozen=True)
class BandScheme:
    """Compiled partition of the F one-sided bins into contiguous subbands."""

    name: str
    bands: tuple[tuple[int, int], ...]  # (start_bin, width_bins)
    n_fft: int
    sample_rate: int
    ledger: BandLedger

    def __post_init__(self) -> None:
        expected_f = self.n_fft // 2 + 1
        cursor = 0
        for start, width in self.bands:
            if start != cursor:
                raise ValueError(f"bands are not contiguous at bin {start}")
            if width < 1:
                raise ValueError(f"band at bin {start} has width {width}")
            cursor = start + width
        if cursor != expected_f:
            raise ValueError(f"bands cover {cursor} bins, expected {expected_f}")

    @property
    def num_bands(self) -> int:
        return len(self.bands)

    @property
    def total_bins(self) -> int:
        return self.n_fft // 2 + 1

    @property
    def widths(self) -> tuple[int, ...]:
        return tuple(width for _, width in self.bands)


def parse_ledger(text: str) -> BandLedger:
    """Parse the textual ledger format: ``upper:bw,upper:bw,... <tail-policy>``."""
    parts = text.split()
    if len(parts) != 2:
        raise ValueError(
            "ledger text must be a comma list of upper_hz:bandwidth_hz pairs "
            "followed by a tail policy"
        )
    spans_text, policy = parts
    spans = []
    for item in spans_text.split(","):
        fields = item.split(":")
        if len(fields) != 2:
            raise ValueError(f"bad span {item!r}, expected upper_hz:bandwidth_hz")
        spans.append((float(fields[0]), float(fields[1])))
    return BandLedger(spans=tuple(spans), tail_policy=policy)


def format_ledger(ledger: BandLedger) -> str:
    spans_text = ",".join(f"{upper:g}:{bw:g}" for upper, bw in ledger.spans)
    return f"{spans_text} {ledger.tail_policy}"


def _hz_to_bin(hz: float, sample_rate: int, n_fft: int) -> int:
    # Round half up: symmetric treatment of boundary bins.
    return int(math.floor(hz * n_fft / sample_rate + 0.5))


def compile_scheme(
    ledger: BandLedger | str,
    sample_rate: int = 44100,
    n_fft: int = 2048,
    name: str = "custom",
) -> BandScheme:
    """Compile a Hz ledger (or its textual form) into a bin partition."""
    if isinstance(ledger, str):
        ledger = parse_ledger(ledger)
    if n_fft % 2 != 0:
        raise ValueError(f"n_fft must be even, got {n_fft}")
    nyquist = sample_rate / 2.0
    total_bins = n_fft // 2 + 1

    edges_hz: list[float] = []
    lower = 0.0
    for index, (upper, bandwidth) in enumerate(ledger.spans):
        if upper > nyquist + _EDGE_EPS:
            raise ValueError(f"span edge {upper} Hz exceeds Nyquist {nyquist} Hz")
        full = int((upper - lower + _EDGE_EPS) // bandwidth)
        edges_hz.extend(lower + k * bandwidth for k in range(1, full + 1))
        reached = lower + full * bandwidth
        if reached < upper - _EDGE_EPS and index != len(ledger.spans) - 1:
            raise ValueError(
                f"span ending at {upper} Hz is not a multiple of its {bandwidth} Hz "
                "bandwidth; partial spans are only allowed in the final span"
            )
        lower = upper

    boundaries = [0] + [_hz_to_bin(edge, sample_rate, n_fft) for edge in edges_hz]
    # The remaining bins above the last edge (always at least the Nyquist
    # bin) form the tail region.
    if ledger.tail_policy == TAIL_ONE_SUBBAND:
        boundaries.append(total_bins)
    else:
        boundaries[-1] = total_bins
    bands = []
    for i in range(len(boundaries) - 1):
        start, end = boundaries[i], boundaries[i + 1]
        if end <= start:
            low_hz = edges_hz[i - 1] if i >= 1 else 0.0
            raise DegenerateBandError(
                f"band {i} starting at {low_hz:g} Hz compiles to zero bins "
                f"at {sample_rate} Hz / {n_fft}"
            )
        bands.append((start, end - start))
    return BandScheme(
        name=name, bands=tuple(bands), n_fft=n_fft, sample_rate=sample_rate, ledger=ledger
    )


def _spans(*pairs: tuple[float, float]) -> tuple[tuple[float, float], ...]:
    return tuple(pairs)


_BUILTIN_LEDGERS: dict[str, BandLedger] = {
    # Full spectrum in 1 kHz steps, remainder merged into the last subband.
    "v1": BandLedger(_spans((22050, 1000)), TAIL_MERGE_INTO_LAST),
    "v2": BandLedger(_spans((16000, 1000), (20000, 2000))),
    "v3": BandLedger(_spans((8000, 1000), (16000, 2000), (20000, 4000))),
    "v4": BandLedger(_spans((1000, 100), (8000, 1000), (16000, 2000), (20000, 4000))),
    "v5": BandLedger(_spans((1000, 100), (16000, 1000), (20000, 2000))),
    "v6": BandLedger(
        _spans((1000, 100), (4000, 500), (8000, 1000), (16000, 2000), (20000, 4000))
    ),
    "v7": BandLedger(
        _spans((1000, 100), (4000, 250), (8000, 500), (16000, 1000), (20000, 2000))
    ),
    "bass": BandLedger(
        _spans((500, 50), (1000, 100), (4000, 500), (8000, 1000), (16000, 2000))
    ),
    "drum": BandLedger(
        _spans((1000, 50), (2000, 100), (4000, 250), (8000, 500), (16000, 1000))
    ),
}
# The "other" stem reuses the vocal layout.
_BUILTIN_LEDGERS["other"] = _BUILTIN_LEDGERS["v7"]

BUILTIN_NAMES = tuple(_BUILTIN_LEDGERS)


def builtin_ledger(name: str) -> BandLedger:
    try:
        return _BUILTIN_LEDGERS[name]
    except KeyError:
        raise LookupError(
            f"unknown scheme {name!r}; valid names: {', '.join(BUILTIN_NAMES)}"
        ) from None


def builtin_scheme(name: str, sample_rate: int = 44100, n_fft: int = 2048) -> BandScheme:
    """Look up one of the builtin band layouts by name."""
    return compile_scheme(builtin_ledger(name), sample_rate, n_fft, name=name)


def split(spec: ComplexSpectrogram, scheme: BandScheme) -> list[np.ndarray]:
    """Cut a spectrogram into per-band row blocks, low to high frequency."""
    if spec.num_bins != scheme.total_bins:
        raise ValueError(
            f"spectrogram has {spec.num_bins} bins but scheme expects {scheme.total_bins}"
        )
    return [spec.bins[start : start + width] for start, width in scheme.bands]


def merge(
    subbands: list[np.ndarray], scheme: BandScheme, hop: int = 512
) -> ComplexSpectrogram:
    """Stack per-band blocks back into a full spectrogram (inverse of split)."""
    if len(subbands) != scheme.num_bands:
        raise ValueError(f"got {len(subbands)} subbands, scheme has {scheme.num_bands}")
    frames = {block.shape[1] for block in subbands}
    if len(frames) != 1:
        raise ValueError(f"subbands disagree on frame count: {sorted(frames)}")
    for block, (start, width) in zip(subbands, scheme.bands):
        if block.shape[0] != width:
            raise ValueError(
                f"subband at bin {start} has {block.shape[0]} rows, expected {width}"
            )
    return ComplexSpectrogram(
        bins=np.vstack(subbands),
        n_fft=scheme.n_fft,
        hop=hop,
        sample_rate=scheme.sample_rate,
    )
