"""The band-split separation network: configuration, weights, forward pass.

The forward pass maps a mixture spectrogram X to a complex mask M and the
separated spectrogram S = M * X in three stages:

  1. band split: each subband's (real, imag) rows are normalized per frame
     and projected to an N-dimensional feature, giving Z of shape (N, K, T);
  2. interleaved modeling: num_blocks repetitions of a residual BLSTM over
     time (shared across bands) followed by a residual BLSTM over bands
     (shared across frames);
  3. mask estimation: a per-band MLP (tanh hidden layer, GLU output) emits
     the real and imaginary mask rows, merged back to the full spectrum.

All model arithmetic is single precision; spectrogram containers keep their
own dtype at the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import bands, nn
from .audio import ComplexSpectrogram
from .bands import BandScheme

__all__ = [
    "ModelConfig",
    "ModelWeights",
    "weight_table",
    "init_weights",
    "validate_weights",
    "band_split_forward",
    "band_seq_forward",
    "mask_forward",
    "separate_spectrogram",
    "param_count",
]


@dataclass(frozen=True)
class ModelConfig:
    scheme: BandScheme
    feature_dim: int = 128
    num_blocks: int = 12
    lstm_hidden: int = 256

    def __post_init__(self) -> None:
        if min(self.feature_dim, self.num_blocks, self.lstm_hidden) < 1:
            raise ValueError("feature_dim, num_blocks and lstm_hidden must all be >= 1")

    @property
    def mlp_hidden(self) -> int:
        return 4 * self.feature_dim


@dataclass
class ModelWeights:
    """Named-tensor store for every parameter of the network."""

    tensors: dict[str, np.ndarray]

    def __getitem__(self, name: str) -> np.ndarray:
        return self.tensors[name]

    def __contains__(self, name: str) -> bool:
        return name in self.tensors

    def names(self) -> list[str]:
        return list(self.tensors)


@dataclass(frozen=True)
class TensorSpec:
    shape: tuple[int, ...]
    fan_in: int


def _iter_table(config: ModelConfig) -> Iterator[tuple[str, TensorSpec]]:
    n = config.feature_dim
    h = config.lstm_hidden
    mlp = config.mlp_hidden
    for i, (_, width) in enumerate(config.scheme.bands):
        g2 = 2 * width
        yield f"bandsplit.{i}.norm.gamma", TensorSpec((g2,), 1)
        yield f"bandsplit.{i}.norm.beta", TensorSpec((g2,), 1)
        yield f"bandsplit.{i}.fc.weight", TensorSpec((n, g2), g2)
        yield f"bandsplit.{i}.fc.bias", TensorSpec((n,), g2)
    for b in range(config.num_blocks):
        for path in ("seq", "band"):
            prefix = f"block.{b}.{path}"
            yield f"{prefix}.norm.gamma", TensorSpec((n,), 1)
            yield f"{prefix}.norm.beta", TensorSpec((n,), 1)
            for direction in ("fw", "bw"):
                yield f"{prefix}.blstm.{direction}.w_ih", TensorSpec((4 * h, n), n)
                yield f"{prefix}.blstm.{direction}.w_hh", TensorSpec((4 * h, h), h)
                yield f"{prefix}.blstm.{direction}.bias", TensorSpec((4 * h,), h)
            yield f"{prefix}.fc.weight", TensorSpec((n, 2 * h), 2 * h)
            yield f"{prefix}.fc.bias", TensorSpec((n,), 2 * h)
    for i, (_, width) in enumerate(config.scheme.bands):
        g4 = 4 * width
        yield f"mask.{i}.norm.gamma", TensorSpec((n,), 1)
        yield f"mask.{i}.norm.beta", TensorSpec((n,), 1)
        yield f"mask.{i}.fc1.weight", TensorSpec((mlp, n), n)
        yield f"mask.{i}.fc1.bias", TensorSpec((mlp,), n)
        yield f"mask.{i}.fc2.weight", TensorSpec((g4, mlp), mlp)
        yield f"mask.{i}.fc2.bias", TensorSpec((g4,), mlp)


def weight_table(config: ModelConfig) -> dict[str, TensorSpec]:
    """Canonical (ordered) name -> shape/fan-in table for a configuration."""
    return dict(_iter_table(config))


def init_weights(config: ModelConfig, seed: int) -> ModelWeights:
    """Seeded random initialization.

    Every weight is i.i.d. uniform in +-1/sqrt(fan_in); norm gammas are 1
    and betas are 0. The same seed always produces the same tensors.
    """
    rng = np.random.default_rng(seed)
    tensors: dict[str, np.ndarray] = {}
    for name, spec in _iter_table(config):
        if name.endswith(".gamma"):
            tensors[name] = np.ones(spec.shape, dtype=np.float32)
        elif name.endswith(".beta"):
            tensors[name] = np.zeros(spec.shape, dtype=np.float32)
        else:
            bound = 1.0 / np.sqrt(spec.fan_in)
            tensors[name] = rng.uniform(-bound, bound, spec.shape).astype(np.float32)
    return ModelWeights(tensors=tensors)


def validate_weights(weights: ModelWeights, config: ModelConfig) -> None:
    """Check the name set and every shape against the configuration's table."""
    table = weight_table(config)
    for name, spec in table.items():
        if name not in weights.tensors:
            raise ValueError(f"missing tensor: {name}")
        got = weights.tensors[name].shape
        if tuple(got) != spec.shape:
            raise ValueError(f"shape mismatch for {name}: file {got} vs config {spec.shape}")
    for name in weights.tensors:
        if name not in table:
            raise ValueError(f"unexpected tensor: {name}")


def param_count(config: ModelConfig) -> int:
    """Closed-form parameter count for a configuration."""
    n = config.feature_dim
    h = config.lstm_hidden
    mlp = config.mlp_hidden
    f = config.scheme.total_bins
    k = config.scheme.num_bands

    # band split: per band, norm over 2G features plus a 2G -> N projection
    split_params = 4 * f + (2 * n * f + k * n)
    # one residual RNN: norm + two LSTM directions + 2H -> N projection
    lstm_direction = 4 * h * n + 4 * h * h + 4 * h
    block_path = 2 * n + 2 * lstm_direction + (n * 2 * h + n)
    block_params = config.num_blocks * 2 * block_path
    # mask MLP: per band, norm + N -> 4N hidden + 4N -> 4G output
    mask_fixed = k * (2 * n + mlp * n + mlp)
    mask_out = 4 * f * mlp + 4 * f
    return split_params + block_params + mask_fixed + mask_out


def _lstm_params(weights: ModelWeights, prefix: str) -> nn.LstmParams:
    return nn.LstmParams(
        w_ih=weights[f"{prefix}.w_ih"],
        w_hh=weights[f"{prefix}.w_hh"],
        bias=weights[f"{prefix}.bias"],
    )


def band_split_forward(
    spec: ComplexSpectrogram, weights: ModelWeights, config: ModelConfig
) -> np.ndarray:
    """Project each subband into the shared feature space; returns (N, K, T)."""
    scheme = config.scheme
    if spec.num_bins != scheme.total_bins:
        raise ValueError(
            f"spectrogram has {spec.num_bins} bins, scheme expects {scheme.total_bins}"
        )
    frames = spec.num_frames
    out = np.empty((config.feature_dim, scheme.num_bands, frames), dtype=np.float32)
    for i, (start, width) in enumerate(scheme.bands):
        block = spec.bins[start : start + width]
        feat = np.concatenate(
            [block.real.astype(np.float32), block.imag.astype(np.float32)], axis=0
        )
        normed = nn.layer_norm_cols(
            feat, weights[f"bandsplit.{i}.norm.gamma"], weights[f"bandsplit.{i}.norm.beta"]
        )
        out[:, i, :] = (
            weights[f"bandsplit.{i}.fc.weight"] @ normed
            + weights[f"bandsplit.{i}.fc.bias"][:, None]
        )
    return out


def _residual_pass(
    x: np.ndarray, weights: ModelWeights, prefix: str, over_bands: bool
) -> np.ndarray:
    """One residual norm -> BLSTM -> affine pass over time or over bands.

    x has shape (N, K, T). The time pass treats each band as a sequence of T
    steps; the band pass treats each frame as a sequence of K steps, low to
    high frequency. Parameters are shared across the batch dimension.
    """
    gamma = weights[f"{prefix}.norm.gamma"]
    beta = weights[f"{prefix}.norm.beta"]
    axes = (0, 1) if over_bands else (0, 2)
    mean = x.mean(axis=axes, keepdims=True)
    var = x.var(axis=axes, keepdims=True)
    normed = (x - mean) / np.sqrt(var + nn.NORM_EPS) * gamma[:, None, None] + beta[
        :, None, None
    ]

    # (N, K, T) -> (batch, steps, N)
    order = (2, 1, 0) if over_bands else (1, 2, 0)
    seq = np.ascontiguousarray(normed.transpose(order))
    hidden = nn.blstm_batch(
        seq, _lstm_params(weights, f"{prefix}.blstm.fw"), _lstm_params(weights, f"{prefix}.blstm.bw")
    )
    projected = hidden @ weights[f"{prefix}.fc.weight"].T + weights[f"{prefix}.fc.bias"]
    inverse = (2, 1, 0) if over_bands else (2, 0, 1)
    return x + projected.transpose(inverse)


def band_seq_forward(
    features: np.ndarray, weights: ModelWeights, config: ModelConfig
) -> np.ndarray:
    """Interleaved time-level and band-level residual modeling of (N, K, T)."""
    x = np.asarray(features, dtype=np.float32)
    for b in range(config.num_blocks):
        x = _residual_pass(x, weights, f"block.{b}.seq", over_bands=False)
        x = _residual_pass(x, weights, f"block.{b}.band", over_bands=True)
    return x


def mask_forward(
    features: np.ndarray,
    weights: ModelWeights,
    config: ModelConfig,
    hop: int = 512,
) -> ComplexSpectrogram:
    """Per-band MLP producing the complex mask, merged to the full spectrum."""
    scheme = config.scheme
    subbands = []
    for i, (_, width) in enumerate(scheme.bands):
        band_feat = features[:, i, :]
        normed = nn.layer_norm_cols(
            band_feat, weights[f"mask.{i}.norm.gamma"], weights[f"mask.{i}.norm.beta"]
        )
        hidden = np.tanh(
            weights[f"mask.{i}.fc1.weight"] @ normed + weights[f"mask.{i}.fc1.bias"][:, None]
        )
        raw = weights[f"mask.{i}.fc2.weight"] @ hidden + weights[f"mask.{i}.fc2.bias"][:, None]
        gated = raw[: 2 * width] * nn.sigmoid(raw[2 * width :])
        subbands.append(gated[:width] + 1j * gated[width:])
    return bands.merge(subbands, scheme, hop=hop)


def separate_spectrogram(
    spec: ComplexSpectrogram, weights: ModelWeights, config: ModelConfig
) -> ComplexSpectrogram:
    """Full forward pass: estimate the mask and apply it to the input."""
    features = band_split_forward(spec, weights, config)
    modeled = band_seq_forward(features, weights, config)
    mask = mask_forward(modeled, weights, config, hop=spec.hop)
    return ComplexSpectrogram(
        bins=mask.bins * spec.bins,
        n_fft=spec.n_fft,
        hop=spec.hop,
        sample_rate=spec.sample_rate,
    )
