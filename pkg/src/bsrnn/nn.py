"""Deterministic forward-pass primitives: affine maps, norms, BLSTM, GLU.

Everything here is a pure function over numpy arrays. The batched LSTM
helpers exist so the model can run one recurrence over many independent
sequences at once; ``blstm`` is the single-sequence view of the same code.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "LstmParams",
    "linear",
    "layer_norm",
    "layer_norm_cols",
    "group_norm_single",
    "blstm",
    "blstm_batch",
    "glu",
    "sigmoid",
]

NORM_EPS = 1e-5


def sigmoid(x: np.ndarray) -> np.ndarray:
    # tanh form avoids overflow for large negative inputs
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def linear(x: np.ndarray, weight: np.ndarray, bias: np.ndarray) -> np.ndarray:
    """Affine map weight @ x + bias for a single feature vector."""
    x = np.asarray(x)
    if weight.ndim != 2 or x.ndim != 1 or weight.shape[1] != x.shape[0]:
        raise ValueError(f"shape mismatch: weight {weight.shape} @ x {x.shape}")
    if bias.shape != (weight.shape[0],):
        raise ValueError(f"bias shape {bias.shape} does not match output {weight.shape[0]}")
    return weight @ x + bias


def layer_norm(
    x: np.ndarray, gamma: np.ndarray, beta: np.ndarray, eps: float = NORM_EPS
) -> np.ndarray:
    """Normalize a feature vector to zero mean / unit variance, then rescale."""
    x = np.asarray(x)
    mean = x.mean()
    var = x.var()
    return (x - mean) / np.sqrt(var + eps) * gamma + beta


def layer_norm_cols(
    x: np.ndarray, gamma: np.ndarray, beta: np.ndarray, eps: float = NORM_EPS
) -> np.ndarray:
    """layer_norm applied independently to every column of a (D, T) matrix."""
    mean = x.mean(axis=0, keepdims=True)
    var = x.var(axis=0, keepdims=True)
    return (x - mean) / np.sqrt(var + eps) * gamma[:, None] + beta[:, None]


def group_norm_single(
    x: np.ndarray, gamma: np.ndarray, beta: np.ndarray, eps: float = NORM_EPS
) -> np.ndarray:
    """Single-group normalization of an (N, S) instance.

    Statistics are taken over all N*S entries; gamma/beta rescale per feature
    row.
    """
    x = np.asarray(x)
    if x.ndim != 2:
        raise ValueError(f"expected an (N, S) matrix, got shape {x.shape}")
    mean = x.mean()
    var = x.var()
    return (x - mean) / np.sqrt(var + eps) * gamma[:, None] + beta[:, None]


@dataclass(frozen=True)
class LstmParams:
    """One direction of an LSTM. Gate blocks are ordered [input, forget, cell, output]."""

    w_ih: np.ndarray  # (4H, D)
    w_hh: np.ndarray  # (4H, H)
    bias: np.ndarray  # (4H,)

    def __post_init__(self) -> None:
        four_h, _ = self.w_ih.shape
        if four_h % 4 != 0:
            raise ValueError(f"gate dimension {four_h} is not a multiple of 4")
        h = four_h // 4
        if self.w_hh.shape != (four_h, h):
            raise ValueError(f"w_hh shape {self.w_hh.shape}, expected {(four_h, h)}")
        if self.bias.shape != (four_h,):
            raise ValueError(f"bias shape {self.bias.shape}, expected {(four_h,)}")

    @property
    def hidden_size(self) -> int:
        return self.w_hh.shape[1]

    @property
    def input_size(self) -> int:
        return self.w_ih.shape[1]


def _sigmoid_inplace(x: np.ndarray) -> None:
    # same tanh form as sigmoid(), applied without temporaries
    x *= 0.5
    np.tanh(x, out=x)
    x += 1.0
    x *= 0.5


def _lstm_direction(x: np.ndarray, params: LstmParams, reverse: bool) -> np.ndarray:
    """Run one LSTM direction over (B, T, D) input; returns (B, T, H).

    The input projection for all steps is one matmul up front; the loop
    keeps only the recurrent term and works in preallocated buffers, since
    per-step temporaries dominate the runtime otherwise.
    """
    batch, steps, _ = x.shape
    h_size = params.hidden_size
    dtype = np.result_type(x.dtype, params.w_ih.dtype)
    proj = x @ params.w_ih.T + params.bias
    proj = np.ascontiguousarray(proj.transpose(1, 0, 2), dtype=dtype)  # (T, B, 4H)
    w_hh_t = np.ascontiguousarray(params.w_hh.T, dtype=dtype)

    h = np.zeros((batch, h_size), dtype=dtype)
    c = np.zeros((batch, h_size), dtype=dtype)
    gates = np.empty((batch, 4 * h_size), dtype=dtype)
    tmp = np.empty((batch, h_size), dtype=dtype)
    out = np.empty((steps, batch, h_size), dtype=dtype)
    # time runs backwards for the reverse direction; out is indexed by real
    # time either way, so no array reversal (and no slow strided matmul)
    order = range(steps - 1, -1, -1) if reverse else range(steps)
    for t in order:
        np.matmul(h, w_hh_t, out=gates)
        gates += proj[t]
        i = gates[:, :h_size]
        f = gates[:, h_size : 2 * h_size]
        g = gates[:, 2 * h_size : 3 * h_size]
        o = gates[:, 3 * h_size :]
        _sigmoid_inplace(i)
        _sigmoid_inplace(f)
        np.tanh(g, out=g)
        _sigmoid_inplace(o)
        c *= f
        np.multiply(i, g, out=tmp)
        c += tmp
        np.tanh(c, out=tmp)
        h = np.multiply(o, tmp, out=out[t])
    return out.transpose(1, 0, 2)


def blstm_batch(x: np.ndarray, fw: LstmParams, bw: LstmParams) -> np.ndarray:
    """Bidirectional LSTM over a batch of sequences.

    x: (B, T, D) with zero initial states per sequence; output (B, T, 2H) is
    the per-step concatenation [forward, backward].
    """
    x = np.asarray(x)
    if x.ndim != 3:
        raise ValueError(f"expected (B, T, D) input, got shape {x.shape}")
    if x.shape[2] != fw.input_size or x.shape[2] != bw.input_size:
        raise ValueError(
            f"input feature size {x.shape[2]} does not match params "
            f"({fw.input_size}/{bw.input_size})"
        )
    forward = _lstm_direction(x, fw, reverse=False)
    backward = _lstm_direction(x, bw, reverse=True)
    return np.concatenate([forward, backward], axis=2)


def blstm(seq: np.ndarray, fw: LstmParams, bw: LstmParams) -> np.ndarray:
    """Bidirectional LSTM over a single (T, D) sequence; returns (T, 2H)."""
    seq = np.asarray(seq)
    if seq.ndim != 2 or seq.shape[0] < 1:
        raise ValueError(f"expected a non-empty (T, D) sequence, got shape {seq.shape}")
    return blstm_batch(seq[None], fw, bw)[0]


def glu(x: np.ndarray) -> np.ndarray:
    """Gated linear unit: split in half, gate the first half by sigmoid of the second."""
    x = np.asarray(x)
    if x.shape[0] % 2 != 0:
        raise ValueError(f"GLU input length must be even, got {x.shape[0]}")
    half = x.shape[0] // 2
    return x[:half] * sigmoid(x[half:])
