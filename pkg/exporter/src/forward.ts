/**
 * Float32 forward pass over canonically named tensors, mirroring the
 * engine's mask computation: per-band split and projection, interleaved
 * residual BLSTMs over time and over bands, then a per-band mask MLP with
 * a GLU output. Dot products accumulate in double precision and every
 * stored intermediate is rounded to float32, which tracks the engine's
 * single-precision arithmetic to well below the verification tolerance.
 */

import { ProbeGrid } from './probes';
import { ModelDims } from './table';
import { Tensor, TensorMap } from './tensors';

const NORM_EPS = 1e-5;
const f32 = Math.fround;

/** 0.5 * (1 + tanh(0.5 x)) with float32 rounding after every step. */
function sigmoid32(x: number): number {
  let v = f32(x * 0.5);
  v = f32(Math.tanh(v));
  v = f32(1.0 + v);
  return f32(v * 0.5);
}

function need(tensors: TensorMap, name: string): Tensor {
  const tensor = tensors.get(name);
  if (!tensor) {
    throw new Error(`missing tensor: ${name}`);
  }
  return tensor;
}

/** Column-wise layer norm of a (rows, cols) grid, in place. */
function layerNormCols(
  x: Float32Array,
  rows: number,
  cols: number,
  gamma: Float32Array,
  beta: Float32Array
): void {
  for (let t = 0; t < cols; t++) {
    let sum = 0;
    for (let d = 0; d < rows; d++) {
      sum += x[d * cols + t];
    }
    const mean = f32(sum / rows);
    let sq = 0;
    for (let d = 0; d < rows; d++) {
      const dev = x[d * cols + t] - mean;
      sq += dev * dev;
    }
    const denom = f32(Math.sqrt(f32(f32(sq / rows) + NORM_EPS)));
    for (let d = 0; d < rows; d++) {
      let v = f32(x[d * cols + t] - mean);
      v = f32(v / denom);
      v = f32(v * gamma[d]);
      x[d * cols + t] = f32(v + beta[d]);
    }
  }
}

interface LstmWeights {
  wIh: Tensor;
  wHh: Tensor;
  bias: Tensor;
}

/**
 * One LSTM direction over a (batch, steps, dim) sequence array; returns
 * (batch, steps, hidden) indexed by real step either way. Gate blocks are
 * ordered [input, forget, cell, output]; states start at zero.
 */
function lstmDirection(
  seq: Float32Array,
  batch: number,
  steps: number,
  dim: number,
  params: LstmWeights,
  reverse: boolean
): Float32Array {
  const fourH = params.wIh.shape[0];
  const hSize = fourH / 4;
  const wIh = params.wIh.data;
  const wHh = params.wHh.data;
  const bias = params.bias.data;

  // input projection for all steps up front, like the engine
  const proj = new Float32Array(batch * steps * fourH);
  for (let b = 0; b < batch; b++) {
    for (let s = 0; s < steps; s++) {
      const row = (b * steps + s) * dim;
      const out = (b * steps + s) * fourH;
      for (let j = 0; j < fourH; j++) {
        let acc = 0;
        for (let d = 0; d < dim; d++) {
          acc += seq[row + d] * wIh[j * dim + d];
        }
        proj[out + j] = f32(f32(acc) + bias[j]);
      }
    }
  }

  const h = new Float32Array(batch * hSize);
  const c = new Float32Array(batch * hSize);
  const gates = new Float32Array(fourH);
  const out = new Float32Array(batch * steps * hSize);
  for (let step = 0; step < steps; step++) {
    const t = reverse ? steps - 1 - step : step;
    for (let b = 0; b < batch; b++) {
      const hRow = b * hSize;
      const pRow = (b * steps + t) * fourH;
      for (let j = 0; j < fourH; j++) {
        let acc = 0;
        for (let k = 0; k < hSize; k++) {
          acc += h[hRow + k] * wHh[j * hSize + k];
        }
        gates[j] = f32(f32(acc) + proj[pRow + j]);
      }
      const oRow = (b * steps + t) * hSize;
      for (let k = 0; k < hSize; k++) {
        const iGate = sigmoid32(gates[k]);
        const fGate = sigmoid32(gates[hSize + k]);
        const gGate = f32(Math.tanh(gates[2 * hSize + k]));
        const oGate = sigmoid32(gates[3 * hSize + k]);
        let cell = f32(c[hRow + k] * fGate);
        cell = f32(cell + f32(iGate * gGate));
        c[hRow + k] = cell;
        const hv = f32(oGate * f32(Math.tanh(cell)));
        h[hRow + k] = hv;
        out[oRow + k] = hv;
      }
    }
  }
  return out;
}

/** Bidirectional LSTM; output is the per-step concatenation [forward, backward]. */
function blstmBatch(
  seq: Float32Array,
  batch: number,
  steps: number,
  dim: number,
  fw: LstmWeights,
  bw: LstmWeights
): Float32Array {
  const hSize = fw.wHh.shape[1];
  const forward = lstmDirection(seq, batch, steps, dim, fw, false);
  const backward = lstmDirection(seq, batch, steps, dim, bw, true);
  const out = new Float32Array(batch * steps * 2 * hSize);
  for (let b = 0; b < batch; b++) {
    for (let s = 0; s < steps; s++) {
      const src = (b * steps + s) * hSize;
      const dst = (b * steps + s) * 2 * hSize;
      for (let k = 0; k < hSize; k++) {
        out[dst + k] = forward[src + k];
        out[dst + hSize + k] = backward[src + k];
      }
    }
  }
  return out;
}

/**
 * One residual norm -> BLSTM -> affine pass over an (N, K, T) feature grid.
 * The time pass runs each band as a sequence of T steps with statistics per
 * band; the band pass runs each frame as a sequence of K steps, low to high
 * frequency, with statistics per frame. gamma/beta rescale per feature row.
 */
function residualPass(
  x: Float32Array,
  tensors: TensorMap,
  prefix: string,
  overBands: boolean,
  n: number,
  k: number,
  t: number
): Float32Array {
  const gamma = need(tensors, `${prefix}.norm.gamma`).data;
  const beta = need(tensors, `${prefix}.norm.beta`).data;
  const normed = new Float32Array(n * k * t);

  const outerCount = overBands ? t : k;
  const innerCount = overBands ? k : t;
  const at = (ni: number, ki: number, ti: number): number => (ni * k + ki) * t + ti;
  const pick = (ni: number, outer: number, inner: number): number =>
    overBands ? at(ni, inner, outer) : at(ni, outer, inner);

  for (let outer = 0; outer < outerCount; outer++) {
    let sum = 0;
    for (let ni = 0; ni < n; ni++) {
      for (let inner = 0; inner < innerCount; inner++) {
        sum += x[pick(ni, outer, inner)];
      }
    }
    const count = n * innerCount;
    const mean = f32(sum / count);
    let sq = 0;
    for (let ni = 0; ni < n; ni++) {
      for (let inner = 0; inner < innerCount; inner++) {
        const dev = x[pick(ni, outer, inner)] - mean;
        sq += dev * dev;
      }
    }
    const denom = f32(Math.sqrt(f32(f32(sq / count) + NORM_EPS)));
    for (let ni = 0; ni < n; ni++) {
      for (let inner = 0; inner < innerCount; inner++) {
        const idx = pick(ni, outer, inner);
        let v = f32(x[idx] - mean);
        v = f32(v / denom);
        v = f32(v * gamma[ni]);
        normed[idx] = f32(v + beta[ni]);
      }
    }
  }

  // (N, K, T) -> (batch, steps, N)
  const batch = overBands ? t : k;
  const steps = overBands ? k : t;
  const seq = new Float32Array(batch * steps * n);
  for (let ni = 0; ni < n; ni++) {
    for (let ki = 0; ki < k; ki++) {
      for (let ti = 0; ti < t; ti++) {
        const b = overBands ? ti : ki;
        const s = overBands ? ki : ti;
        seq[(b * steps + s) * n + ni] = normed[at(ni, ki, ti)];
      }
    }
  }

  const fw: LstmWeights = {
    wIh: need(tensors, `${prefix}.blstm.fw.w_ih`),
    wHh: need(tensors, `${prefix}.blstm.fw.w_hh`),
    bias: need(tensors, `${prefix}.blstm.fw.bias`),
  };
  const bw: LstmWeights = {
    wIh: need(tensors, `${prefix}.blstm.bw.w_ih`),
    wHh: need(tensors, `${prefix}.blstm.bw.w_hh`),
    bias: need(tensors, `${prefix}.blstm.bw.bias`),
  };
  const hidden = blstmBatch(seq, batch, steps, n, fw, bw);
  const twoH = 2 * fw.wHh.shape[1];

  const weight = need(tensors, `${prefix}.fc.weight`);
  const bias = need(tensors, `${prefix}.fc.bias`);
  const out = new Float32Array(n * k * t);
  for (let b = 0; b < batch; b++) {
    for (let s = 0; s < steps; s++) {
      const row = (b * steps + s) * twoH;
      for (let ni = 0; ni < n; ni++) {
        let acc = 0;
        for (let j = 0; j < twoH; j++) {
          acc += hidden[row + j] * weight.data[ni * twoH + j];
        }
        const v = f32(f32(acc) + bias.data[ni]);
        const idx = overBands ? at(ni, s, b) : at(ni, b, s);
        out[idx] = f32(x[idx] + v);
      }
    }
  }
  return out;
}

export interface MaskGrid {
  bins: number;
  frames: number;
  re: Float32Array;
  im: Float32Array;
}

/** Predict the complex mask the engine computes for a spectrogram probe. */
export function maskFromSpectrogram(
  probe: ProbeGrid,
  bands: [number, number][],
  dims: ModelDims,
  tensors: TensorMap
): MaskGrid {
  const n = dims.featureDim;
  const k = bands.length;
  const t = probe.frames;
  const mlp = 4 * n;

  // band split
  let feats: Float32Array = new Float32Array(n * k * t);
  bands.forEach(([start, width], i) => {
    const d = 2 * width;
    const feat = new Float32Array(d * t);
    for (let r = 0; r < width; r++) {
      for (let ti = 0; ti < t; ti++) {
        feat[r * t + ti] = probe.re[(start + r) * probe.frames + ti];
        feat[(width + r) * t + ti] = probe.im[(start + r) * probe.frames + ti];
      }
    }
    layerNormCols(
      feat,
      d,
      t,
      need(tensors, `bandsplit.${i}.norm.gamma`).data,
      need(tensors, `bandsplit.${i}.norm.beta`).data
    );
    const weight = need(tensors, `bandsplit.${i}.fc.weight`).data;
    const bias = need(tensors, `bandsplit.${i}.fc.bias`).data;
    for (let ni = 0; ni < n; ni++) {
      for (let ti = 0; ti < t; ti++) {
        let acc = 0;
        for (let di = 0; di < d; di++) {
          acc += weight[ni * d + di] * feat[di * t + ti];
        }
        feats[(ni * k + i) * t + ti] = f32(f32(acc) + bias[ni]);
      }
    }
  });

  // interleaved residual modeling
  for (let b = 0; b < dims.numBlocks; b++) {
    feats = residualPass(feats, tensors, `block.${b}.seq`, false, n, k, t);
    feats = residualPass(feats, tensors, `block.${b}.band`, true, n, k, t);
  }

  // per-band mask MLP
  const re = new Float32Array(probe.bins * t);
  const im = new Float32Array(probe.bins * t);
  bands.forEach(([start, width], i) => {
    const feat = new Float32Array(n * t);
    for (let ni = 0; ni < n; ni++) {
      for (let ti = 0; ti < t; ti++) {
        feat[ni * t + ti] = feats[(ni * k + i) * t + ti];
      }
    }
    layerNormCols(
      feat,
      n,
      t,
      need(tensors, `mask.${i}.norm.gamma`).data,
      need(tensors, `mask.${i}.norm.beta`).data
    );
    const w1 = need(tensors, `mask.${i}.fc1.weight`).data;
    const b1 = need(tensors, `mask.${i}.fc1.bias`).data;
    const hidden = new Float32Array(mlp * t);
    for (let m = 0; m < mlp; m++) {
      for (let ti = 0; ti < t; ti++) {
        let acc = 0;
        for (let ni = 0; ni < n; ni++) {
          acc += w1[m * n + ni] * feat[ni * t + ti];
        }
        hidden[m * t + ti] = f32(Math.tanh(f32(f32(acc) + b1[m])));
      }
    }
    const w2 = need(tensors, `mask.${i}.fc2.weight`).data;
    const b2 = need(tensors, `mask.${i}.fc2.bias`).data;
    const raw = new Float32Array(4 * width * t);
    for (let r = 0; r < 4 * width; r++) {
      for (let ti = 0; ti < t; ti++) {
        let acc = 0;
        for (let m = 0; m < mlp; m++) {
          acc += w2[r * mlp + m] * hidden[m * t + ti];
        }
        raw[r * t + ti] = f32(f32(acc) + b2[r]);
      }
    }
    for (let r = 0; r < width; r++) {
      for (let ti = 0; ti < t; ti++) {
        const gateRe = sigmoid32(raw[(2 * width + r) * t + ti]);
        const gateIm = sigmoid32(raw[(3 * width + r) * t + ti]);
        re[(start + r) * t + ti] = f32(raw[r * t + ti] * gateRe);
        im[(start + r) * t + ti] = f32(raw[(width + r) * t + ti] * gateIm);
      }
    }
  });
  return { bins: probe.bins, frames: t, re, im };
}
