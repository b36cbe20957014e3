/**
 * Shared test utilities: a tiny deterministic PRNG, engine CLI wrappers,
 * probe construction, and the inverse of the torch rename convention so
 * tests can manufacture source checkpoints whose export is known exactly.
 */

import * as fs from 'node:fs';
import * as os from 'node:os';
import * as path from 'node:path';

import { ProbeGrid, writeProbe } from '../src/probes';
import { CANONICAL_GATE_ORDER } from '../src/renames';
import { runEngine } from '../src/scheme';
import { ModelDims } from '../src/table';
import { Tensor, TensorMap, numel } from '../src/tensors';

/** Seven bands over the full spectrum; keeps engine-made files small. */
export const TINY_LEDGER = '4000:1000,8000:2000 one-subband';

export const TORCH_TABLE_PATH = path.join(__dirname, '..', 'tables', 'torch.json');

export function tempDir(): string {
  return fs.mkdtempSync(path.join(os.tmpdir(), 'ckpt-exporter-test-'));
}

/** Deterministic 32-bit PRNG (mulberry32); returns floats in [0, 1). */
export function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function randomTensor(rng: () => number, shape: number[], scale = 1): Tensor {
  const data = new Float32Array(numel(shape));
  for (let i = 0; i < data.length; i++) {
    data[i] = scale * (2 * rng() - 1);
  }
  return { shape: [...shape], data };
}

export function zeroTensor(shape: number[]): Tensor {
  return { shape: [...shape], data: new Float32Array(numel(shape)) };
}

/** Ask the engine for a seeded random container; returns its bytes. */
export function engineInit(
  schemeArg: string,
  dims: ModelDims,
  seed: number,
  outPath: string
): Buffer {
  const flag = schemeArg.includes(':') ? '--ledger' : '--scheme';
  runEngine([
    'weights',
    'init',
    flag,
    schemeArg,
    '--seed',
    String(seed),
    '--feature-dim',
    String(dims.featureDim),
    '--blocks',
    String(dims.numBlocks),
    '--hidden',
    String(dims.lstmHidden),
    '--out',
    outPath,
  ]);
  return fs.readFileSync(outPath);
}

export function makeSpectrogramProbe(bins: number, frames: number, seed: number): ProbeGrid {
  const rng = mulberry32(seed);
  const re = new Float32Array(bins * frames);
  const im = new Float32Array(bins * frames);
  for (let i = 0; i < re.length; i++) {
    re[i] = 2 * rng() - 1;
    im[i] = 2 * rng() - 1;
  }
  return { kind: 'spectrogram', bins, frames, sampleRate: 44100, nFft: 2048, hop: 512, re, im };
}

export function writeProbeFile(dir: string, name: string, grid: ProbeGrid): string {
  const file = path.join(dir, name);
  fs.writeFileSync(file, writeProbe(grid));
  return file;
}

export interface InvertOptions {
  /** Gate block order the fake source checkpoint should use. */
  gateOrder?: string;
  /** How to split each folded bias into the torch ih/hh pair. */
  biasSplit?: 'zero' | 'half';
}

function invertGateRows(tensor: Tensor, order: string): Tensor {
  if (order === CANONICAL_GATE_ORDER) {
    return tensor;
  }
  const four = tensor.shape[0];
  const block = (four / 4) * (numel(tensor.shape) / four);
  const out = new Float32Array(tensor.data.length);
  // source block k holds the gate named order[k]
  for (let k = 0; k < 4; k++) {
    const j = CANONICAL_GATE_ORDER.indexOf(order[k]);
    out.set(tensor.data.subarray(j * block, (j + 1) * block), k * block);
  }
  return { shape: [...tensor.shape], data: out };
}

function splitBias(tensor: Tensor, mode: 'zero' | 'half'): [Tensor, Tensor] {
  if (mode === 'zero') {
    return [
      { shape: [...tensor.shape], data: Float32Array.from(tensor.data) },
      zeroTensor(tensor.shape),
    ];
  }
  // halving and re-adding binary32 values is exact for these magnitudes
  const a = new Float32Array(tensor.data.length);
  const b = new Float32Array(tensor.data.length);
  for (let i = 0; i < tensor.data.length; i++) {
    a[i] = 0.5 * tensor.data[i];
    b[i] = 0.5 * tensor.data[i];
  }
  return [
    { shape: [...tensor.shape], data: a },
    { shape: [...tensor.shape], data: b },
  ];
}

/**
 * Build a torch-style source checkpoint that the default rename table maps
 * back to exactly the given canonical tensors.
 */
export function invertToTorch(canonical: TensorMap, options: InvertOptions = {}): TensorMap {
  const gateOrder = options.gateOrder ?? CANONICAL_GATE_ORDER;
  const biasSplit = options.biasSplit ?? 'zero';
  const source: TensorMap = new Map();
  for (const [name, tensor] of canonical) {
    let match = /^bandsplit\.(\d+)\.(norm|fc)\.(gamma|beta|weight|bias)$/.exec(name);
    if (match) {
      const leaf = match[3] === 'gamma' ? 'weight' : match[3] === 'beta' ? 'bias' : match[3];
      source.set(`band_split.${match[1]}.${match[2]}.${leaf}`, tensor);
      continue;
    }
    match = /^mask\.(\d+)\.(norm|fc1|fc2)\.(gamma|beta|weight|bias)$/.exec(name);
    if (match) {
      const module =
        match[2] === 'norm' ? 'norm' : match[2] === 'fc1' ? 'mlp.0' : 'mlp.2';
      const leaf = match[3] === 'gamma' ? 'weight' : match[3] === 'beta' ? 'bias' : match[3];
      source.set(`mask_est.${match[1]}.${module}.${leaf}`, tensor);
      continue;
    }
    match = /^block\.(\d+)\.(seq|band)\.(norm|fc)\.(gamma|beta|weight|bias)$/.exec(name);
    if (match) {
      const word = match[2] === 'seq' ? 'time' : 'freq';
      const leaf = match[4] === 'gamma' ? 'weight' : match[4] === 'beta' ? 'bias' : match[4];
      source.set(`blocks.${match[1]}.${word}.${match[3]}.${leaf}`, tensor);
      continue;
    }
    match = /^block\.(\d+)\.(seq|band)\.blstm\.(fw|bw)\.(w_ih|w_hh|bias)$/.exec(name);
    if (match) {
      const word = match[2] === 'seq' ? 'time' : 'freq';
      const suffix = match[3] === 'bw' ? '_l0_reverse' : '_l0';
      const prefix = `blocks.${match[1]}.${word}.rnn`;
      if (match[4] === 'bias') {
        const [ih, hh] = splitBias(invertGateRows(tensor, gateOrder), biasSplit);
        source.set(`${prefix}.bias_ih${suffix}`, ih);
        source.set(`${prefix}.bias_hh${suffix}`, hh);
      } else {
        const leaf = match[4] === 'w_ih' ? 'weight_ih' : 'weight_hh';
        source.set(`${prefix}.${leaf}${suffix}`, invertGateRows(tensor, gateOrder));
      }
      continue;
    }
    throw new Error(`no torch spelling for ${name}`);
  }
  return source;
}

export function maxAbsComplexDiff(
  aRe: Float32Array,
  aIm: Float32Array,
  bRe: Float32Array,
  bIm: Float32Array
): number {
  let worst = 0;
  for (let i = 0; i < aRe.length; i++) {
    worst = Math.max(worst, Math.hypot(aRe[i] - bRe[i], aIm[i] - bIm[i]));
  }
  return worst;
}
