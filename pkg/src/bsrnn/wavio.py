"""RIFF/WAVE file reading and writing.

Supports PCM 16-bit, PCM 24-bit, and IEEE float32; float32 round trips are
bit-exact. Python's stdlib ``wave`` module cannot read float WAVs, so the
chunk parsing is done by hand.
"""

from __future__ import annotations

import struct

import numpy as np

from .audio import AudioTrack

__all__ = ["WavFormatError", "read_wav", "write_wav"]

_FORMAT_PCM = 1
_FORMAT_IEEE_FLOAT = 3

ENCODINGS = ("pcm16", "pcm24", "float32")


class WavFormatError(ValueError):
    """Malformed or unsupported WAV data. The message carries a byte offset."""


def read_wav(path: str) -> AudioTrack:
    """Read a WAV file into an AudioTrack with float64 samples in [-1, 1]."""
    with open(path, "rb") as fh:
        raw = fh.read()

    if len(raw) < 12:
        raise WavFormatError(f"{path}: file too short for a RIFF header (offset 0)")
    if raw[0:4] != b"RIFF":
        raise WavFormatError(f"{path}: missing RIFF tag (offset 0)")
    if raw[8:12] != b"WAVE":
        raise WavFormatError(f"{path}: missing WAVE tag (offset 8)")

    fmt = None
    data = None
    pos = 12
    while pos + 8 <= len(raw):
        chunk_id = raw[pos : pos + 4]
        (chunk_size,) = struct.unpack_from("<I", raw, pos + 4)
        body_start = pos + 8
        if body_start + chunk_size > len(raw):
            raise WavFormatError(
                f"{path}: chunk {chunk_id!r} of size {chunk_size} truncated (offset {pos})"
            )
        if chunk_id == b"fmt ":
            if chunk_size < 16:
                raise WavFormatError(f"{path}: fmt chunk too small (offset {pos})")
            fmt = struct.unpack_from("<HHIIHH", raw, body_start)
        elif chunk_id == b"data":
            data = (body_start, chunk_size)
        pos = body_start + chunk_size + (chunk_size & 1)

    if fmt is None:
        raise WavFormatError(f"{path}: no fmt chunk found (offset {len(raw)})")
    if data is None:
        raise WavFormatError(f"{path}: no data chunk found (offset {len(raw)})")

    audio_format, channels, sample_rate, _byte_rate, block_align, bits = fmt
    if channels < 1:
        raise WavFormatError(f"{path}: channel count {channels} invalid")
    body_start, size = data
    payload = raw[body_start : body_start + size]

    if audio_format == _FORMAT_PCM and bits == 16:
        flat = np.frombuffer(payload[: size - size % (2 * channels)], dtype="<i2")
        samples = flat.astype(np.float64) / 32768.0
    elif audio_format == _FORMAT_PCM and bits == 24:
        usable = size - size % (3 * channels)
        triples = np.frombuffer(payload[:usable], dtype=np.uint8).reshape(-1, 3)
        as_int = (
            triples[:, 0].astype(np.int32)
            | (triples[:, 1].astype(np.int32) << 8)
            | (triples[:, 2].astype(np.int32) << 16)
        )
        as_int = np.where(as_int >= 1 << 23, as_int - (1 << 24), as_int)
        samples = as_int.astype(np.float64) / 8388608.0
    elif audio_format == _FORMAT_IEEE_FLOAT and bits == 32:
        flat = np.frombuffer(payload[: size - size % (4 * channels)], dtype="<f4")
        samples = flat.astype(np.float64)
    else:
        raise WavFormatError(
            f"{path}: unsupported codec (format {audio_format}, {bits}-bit)"
            f" (offset {body_start - 8})"
        )

    if block_align != channels * (bits // 8):
        raise WavFormatError(
            f"{path}: block align {block_align} inconsistent with "
            f"{channels} x {bits}-bit samples"
        )

    frames = samples.reshape(-1, channels).T
    return AudioTrack(data=frames, sample_rate=sample_rate)


def write_wav(path: str, track: AudioTrack, encoding: str = "float32") -> None:
    """Write an AudioTrack as PCM 16/24-bit or IEEE float32."""
    if encoding not in ENCODINGS:
        raise ValueError(f"encoding must be one of {ENCODINGS}, got {encoding!r}")

    interleaved = np.ascontiguousarray(track.data.T)
    if encoding == "pcm16":
        scaled = np.clip(np.round(interleaved * 32768.0), -32768, 32767)
        payload = scaled.astype("<i2").tobytes()
        audio_format, bits = _FORMAT_PCM, 16
    elif encoding == "pcm24":
        scaled = np.clip(np.round(interleaved * 8388608.0), -(1 << 23), (1 << 23) - 1)
        as_int = scaled.astype(np.int32)
        out = np.empty((as_int.size, 3), dtype=np.uint8)
        flat = as_int.reshape(-1)
        out[:, 0] = flat & 0xFF
        out[:, 1] = (flat >> 8) & 0xFF
        out[:, 2] = (flat >> 16) & 0xFF
        payload = out.tobytes()
        audio_format, bits = _FORMAT_PCM, 24
    else:
        payload = interleaved.astype("<f4").tobytes()
        audio_format, bits = _FORMAT_IEEE_FLOAT, 32

    channels = track.channels
    block_align = channels * (bits // 8)
    byte_rate = track.sample_rate * block_align
    fmt_chunk = struct.pack(
        "<HHIIHH", audio_format, channels, track.sample_rate, byte_rate, block_align, bits
    )

    with open(path, "wb") as fh:
        fh.write(b"RIFF")
        fh.write(struct.pack("<I", 4 + 8 + len(fmt_chunk) + 8 + len(payload)))
        fh.write(b"WAVE")
        fh.write(b"fmt ")
        fh.write(struct.pack("<I", len(fmt_chunk)))
        fh.write(fmt_chunk)
        fh.write(b"data")
        fh.write(struct.pack("<I", len(payload)))
        fh.write(payload)
        if len(payload) & 1:
            fh.write(b"\x00")
