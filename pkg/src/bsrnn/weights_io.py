"""Binary containers: model checkpoints (.bsrw) and spectrogram probes.

The .bsrw layout, version 1 (all integers little-endian):

    magic   4 bytes  b"BSRW"
    u32     format version (currently 1)
    str     band scheme name        (u32 byte length + UTF-8)
    str     band ledger description (u32 byte length + UTF-8)
    u32     feature dim N
    u32     block count
    u32     LSTM hidden size H
    u32     tensor count
    tensors, each:
        str  name
        u8   dtype code (0 = float32)
        u32  ndim, then ndim u32 dims
        raw  row-major payload
    u32     CRC-32 of every byte after the magic, up to here

Version 1 files always describe 44.1 kHz / 2048-point models, so those two
constants are not stored.

Probe files carry a single complex spectrogram (magic BSPX) or mask (BSPM)
so that a mask produced outside this package can be checked bit-for-bit:

    magic, u32 bins F, u32 frames T, u32 sample rate, u32 n_fft, u32 hop,
    then F*T interleaved (real, imag) float32 pairs, column-major by frame.
"""

from __future__ import annotations

import struct
import zlib
from pathlib import Path

import numpy as np

from .audio import ComplexSpectrogram
from .bands import compile_scheme, format_ledger
from .model import ModelConfig, ModelWeights, validate_weights

__all__ = [
    "WeightFormatError",
    "save_weights",
    "load_weights",
    "PROBE_SPECTROGRAM_MAGIC",
    "PROBE_MASK_MAGIC",
    "save_probe",
    "load_probe",
]

MAGIC = b"BSRW"
FORMAT_VERSION = 1
DTYPE_F32 = 0

PROBE_SPECTROGRAM_MAGIC = b"BSPX"
PROBE_MASK_MAGIC = b"BSPM"


class WeightFormatError(ValueError):
    """Raised when a checkpoint or probe file cannot be accepted."""


def _pack_str(text: str) -> bytes:
    raw = text.encode("utf-8")
    return struct.pack("<I", len(raw)) + raw


def save_weights(path: str | Path, weights: ModelWeights, config: ModelConfig) -> None:
    validate_weights(weights, config)
    body = bytearray()
    body += struct.pack("<I", FORMAT_VERSION)
    body += _pack_str(config.scheme.name)
    body += _pack_str(format_ledger(config.scheme.ledger))
    body += struct.pack(
        "<IIII",
        config.feature_dim,
        config.num_blocks,
        config.lstm_hidden,
        len(weights.tensors),
    )
    for name, tensor in weights.tensors.items():
        if tensor.dtype != np.float32:
            raise WeightFormatError(f"tensor {name} is {tensor.dtype}, expected float32")
        body += _pack_str(name)
        body += struct.pack("<BI", DTYPE_F32, tensor.ndim)
        body += struct.pack(f"<{tensor.ndim}I", *tensor.shape)
        body += np.ascontiguousarray(tensor, dtype="<f4").tobytes()
    body += struct.pack("<I", zlib.crc32(bytes(body)))
    Path(path).write_bytes(MAGIC + bytes(body))


class _Reader:
    def __init__(self, data: bytes, offset: int):
        self.data = data
        self.pos = offset

    def take(self, count: int) -> bytes:
        if self.pos + count > len(self.data):
            raise WeightFormatError(
                f"file truncated at byte {self.pos}: wanted {count} more bytes"
            )
        chunk = self.data[self.pos : self.pos + count]
        self.pos += count
        return chunk

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def u8(self) -> int:
        return self.take(1)[0]

    def string(self) -> str:
        return self.take(self.u32()).decode("utf-8")


def load_weights(path: str | Path) -> tuple[ModelWeights, ModelConfig]:
    """Read and fully validate a checkpoint.

    Errors are specific: bad magic, unsupported version, checksum failure,
    and missing / unexpected / misshapen tensors are all reported as such.
    """
    data = Path(path).read_bytes()
    if data[:4] != MAGIC:
        raise WeightFormatError(f"not a weights file: magic {data[:4]!r}")
    if len(data) < 8:
        raise WeightFormatError("file truncated before version field")
    stored_crc = struct.unpack("<I", data[-4:])[0]
    actual_crc = zlib.crc32(data[4:-4])
    if stored_crc != actual_crc:
        raise WeightFormatError(
            f"checksum mismatch: stored {stored_crc:#010x}, computed {actual_crc:#010x}"
        )

    r = _Reader(data[:-4], 4)
    version = r.u32()
    if version != FORMAT_VERSION:
        raise WeightFormatError(f"unsupported format version {version}")
    scheme_name = r.string()
    ledger_text = r.string()
    feature_dim = r.u32()
    num_blocks = r.u32()
    lstm_hidden = r.u32()
    count = r.u32()

    scheme = compile_scheme(ledger_text, name=scheme_name)
    config = ModelConfig(
        scheme=scheme,
        feature_dim=feature_dim,
        num_blocks=num_blocks,
        lstm_hidden=lstm_hidden,
    )

    tensors: dict[str, np.ndarray] = {}
    for _ in range(count):
        name = r.string()
        dtype_code = r.u8()
        if dtype_code != DTYPE_F32:
            raise WeightFormatError(f"tensor {name}: unknown dtype code {dtype_code}")
        ndim = r.u32()
        shape = tuple(r.u32() for _ in range(ndim))
        size = int(np.prod(shape, dtype=np.int64)) if shape else 1
        raw = r.take(4 * size)
        if name in tensors:
            raise WeightFormatError(f"duplicate tensor: {name}")
        tensors[name] = np.frombuffer(raw, dtype="<f4").reshape(shape).copy()
    if r.pos != len(r.data):
        raise WeightFormatError(f"{len(r.data) - r.pos} trailing bytes after last tensor")

    weights = ModelWeights(tensors=tensors)
    try:
        validate_weights(weights, config)
    except ValueError as exc:
        raise WeightFormatError(str(exc)) from exc
    return weights, config


def save_probe(path: str | Path, spec: ComplexSpectrogram, kind: str = "spectrogram") -> None:
    """Write a spectrogram (kind="spectrogram") or mask (kind="mask") probe."""
    magic = {"spectrogram": PROBE_SPECTROGRAM_MAGIC, "mask": PROBE_MASK_MAGIC}.get(kind)
    if magic is None:
        raise ValueError(f"unknown probe kind: {kind!r}")
    header = struct.pack(
        "<IIIII",
        spec.num_bins,
        spec.num_frames,
        spec.sample_rate,
        spec.n_fft,
        spec.hop,
    )
    # column-major: frame by frame, so a streaming writer never seeks
    payload = np.ascontiguousarray(spec.bins.T, dtype="<c8").tobytes()
    Path(path).write_bytes(magic + header + payload)


def load_probe(path: str | Path) -> tuple[ComplexSpectrogram, str]:
    data = Path(path).read_bytes()
    kinds = {PROBE_SPECTROGRAM_MAGIC: "spectrogram", PROBE_MASK_MAGIC: "mask"}
    kind = kinds.get(data[:4])
    if kind is None:
        raise WeightFormatError(f"not a probe file: magic {data[:4]!r}")
    if len(data) < 24:
        raise WeightFormatError("probe file truncated in header")
    bins, frames, rate, n_fft, hop = struct.unpack("<IIIII", data[4:24])
    expected = 24 + bins * frames * 8
    if len(data) != expected:
        raise WeightFormatError(
            f"probe payload is {len(data) - 24} bytes, expected {expected - 24}"
        )
    grid = np.frombuffer(data[24:], dtype="<c8").reshape(frames, bins).T
    spec = ComplexSpectrogram(
        bins=grid.copy(), n_fft=n_fft, hop=hop, sample_rate=rate
    )
    return spec, kind
