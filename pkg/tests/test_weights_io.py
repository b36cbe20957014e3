"""Checkpoint container round trips and corruption detection."""

import struct

import numpy as np
import pytest

from bsrnn.model import init_weights, validate_weights
from bsrnn.weights_io import (
    WeightFormatError,
    load_probe,
    load_weights,
    save_probe,
    save_weights,
)
from conftest import random_spectrogram


def test_roundtrip_bit_exact(tmp_path, tiny_config, tiny_weights):
    path = str(tmp_path / "model.bsrw")
    save_weights(path, tiny_weights, tiny_config)
    loaded, config = load_weights(path)
    assert config.feature_dim == tiny_config.feature_dim
    assert config.num_blocks == tiny_config.num_blocks
    assert config.lstm_hidden == tiny_config.lstm_hidden
    assert config.scheme.bands == tiny_config.scheme.bands
    assert config.scheme.name == tiny_config.scheme.name
    assert loaded.names() == tiny_weights.names()
    for name in tiny_weights.names():
        tensor = loaded[name]
        assert tensor.dtype == np.float32
        np.testing.assert_array_equal(tensor, tiny_weights[name])
    validate_weights(loaded, config)


def test_save_is_deterministic(tmp_path, tiny_config, tiny_weights):
    a = tmp_path / "a.bsrw"
    b = tmp_path / "b.bsrw"
    save_weights(str(a), tiny_weights, tiny_config)
    save_weights(str(b), tiny_weights, tiny_config)
    assert a.read_bytes() == b.read_bytes()


def test_save_rejects_invalid_weights(tmp_path, tiny_config, tiny_weights):
    from bsrnn.model import ModelWeights

    broken = ModelWeights(tensors=dict(tiny_weights.tensors))
    del broken.tensors["bandsplit.0.fc.weight"]
    with pytest.raises(ValueError, match="missing tensor"):
        save_weights(str(tmp_path / "x.bsrw"), broken, tiny_config)


def test_load_rejects_bad_magic(tmp_path):
    path = tmp_path / "x.bsrw"
    path.write_bytes(b"NOPE" + b"\x00" * 64)
    with pytest.raises(WeightFormatError, match="not a weights file"):
        load_weights(str(path))


def test_load_rejects_flipped_payload_byte(tmp_path, tiny_config, tiny_weights):
    path = tmp_path / "x.bsrw"
    save_weights(str(path), tiny_weights, tiny_config)
    raw = bytearray(path.read_bytes())
    raw[len(raw) // 2] ^= 0xFF
    path.write_bytes(bytes(raw))
    with pytest.raises(WeightFormatError, match="checksum mismatch"):
        load_weights(str(path))


def test_load_rejects_truncation(tmp_path, tiny_config, tiny_weights):
    path = tmp_path / "x.bsrw"
    save_weights(str(path), tiny_weights, tiny_config)
    raw = path.read_bytes()
    path.write_bytes(raw[: len(raw) - 16])
    with pytest.raises(WeightFormatError):
        load_weights(str(path))


def test_load_rejects_unknown_version(tmp_path, tiny_config, tiny_weights):
    path = tmp_path / "x.bsrw"
    save_weights(str(path), tiny_weights, tiny_config)
    raw = bytearray(path.read_bytes())
    import zlib

    struct.pack_into("<I", raw, 4, 99)
    # refresh the trailing checksum so only the version is wrong
    body = bytes(raw[4:-4])
    struct.pack_into("<I", raw, len(raw) - 4, zlib.crc32(body))
    path.write_bytes(bytes(raw))
    with pytest.raises(WeightFormatError, match="version"):
        load_weights(str(path))


def test_load_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_weights(str(tmp_path / "absent.bsrw"))


def test_ledger_text_roundtrip(tmp_path, tiny_config, tiny_weights):
    from bsrnn.bands import format_ledger

    path = str(tmp_path / "x.bsrw")
    save_weights(path, tiny_weights, tiny_config)
    _, config = load_weights(path)
    assert format_ledger(config.scheme.ledger) == format_ledger(tiny_config.scheme.ledger)


def test_probe_roundtrip_spectrogram(tmp_path):
    spec = random_spectrogram(frames=7, seed=31)
    path = str(tmp_path / "p.bspx")
    save_probe(path, spec, kind="spectrogram")
    back, kind = load_probe(path)
    assert kind == "spectrogram"
    assert back.n_fft == spec.n_fft
    assert back.hop == spec.hop
    assert back.sample_rate == spec.sample_rate
    np.testing.assert_array_equal(
        back.bins, spec.bins.astype(np.complex64).astype(spec.bins.dtype)
    )


def test_probe_roundtrip_mask(tmp_path):
    spec = random_spectrogram(frames=3, seed=32)
    path = str(tmp_path / "p.bspm")
    save_probe(path, spec, kind="mask")
    _, kind = load_probe(path)
    assert kind == "mask"


def test_probe_rejects_bad_magic(tmp_path):
    path = tmp_path / "p.bspx"
    path.write_bytes(b"XXXX" + struct.pack("<IIIII", 1, 1, 44100, 2048, 512) + b"\x00" * 8)
    with pytest.raises(WeightFormatError):
        load_probe(str(path))


def test_probe_rejects_short_payload(tmp_path):
    spec = random_spectrogram(frames=2, seed=33)
    path = tmp_path / "p.bspx"
    save_probe(str(path), spec)
    raw = path.read_bytes()
    path.write_bytes(raw[:-4])
    with pytest.raises(WeightFormatError):
        load_probe(str(path))
