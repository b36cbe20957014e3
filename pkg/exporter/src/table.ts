/**
 * The engine's canonical weight table: tensor names, shapes and order for a
 * band layout plus model dimensions. This mirrors the layout the engine
 * validates a weight container against, including emission order, so the
 * exporter can write files the engine accepts byte for byte.
 */

import { SchemeInfo } from './scheme';
import { TensorMap } from './tensors';

export interface ModelDims {
  featureDim: number;
  numBlocks: number;
  lstmHidden: number;
}

export interface SpecEntry {
  name: string;
  shape: number[];
}

export function weightTable(scheme: SchemeInfo, dims: ModelDims): SpecEntry[] {
  const n = dims.featureDim;
  const h = dims.lstmHidden;
  const mlp = 4 * n;
  const table: SpecEntry[] = [];
  scheme.bands.forEach(([, width], i) => {
    table.push({ name: `bandsplit.${i}.norm.gamma`, shape: [2 * width] });
    table.push({ name: `bandsplit.${i}.norm.beta`, shape: [2 * width] });
    table.push({ name: `bandsplit.${i}.fc.weight`, shape: [n, 2 * width] });
    table.push({ name: `bandsplit.${i}.fc.bias`, shape: [n] });
  });
  for (let b = 0; b < dims.numBlocks; b++) {
    for (const path of ['seq', 'band']) {
      const prefix = `block.${b}.${path}`;
      table.push({ name: `${prefix}.norm.gamma`, shape: [n] });
      table.push({ name: `${prefix}.norm.beta`, shape: [n] });
      for (const direction of ['fw', 'bw']) {
        table.push({ name: `${prefix}.blstm.${direction}.w_ih`, shape: [4 * h, n] });
        table.push({ name: `${prefix}.blstm.${direction}.w_hh`, shape: [4 * h, h] });
        table.push({ name: `${prefix}.blstm.${direction}.bias`, shape: [4 * h] });
      }
      table.push({ name: `${prefix}.fc.weight`, shape: [n, 2 * h] });
      table.push({ name: `${prefix}.fc.bias`, shape: [n] });
    }
  }
  scheme.bands.forEach(([, width], i) => {
    table.push({ name: `mask.${i}.norm.gamma`, shape: [n] });
    table.push({ name: `mask.${i}.norm.beta`, shape: [n] });
    table.push({ name: `mask.${i}.fc1.weight`, shape: [mlp, n] });
    table.push({ name: `mask.${i}.fc1.bias`, shape: [mlp] });
    table.push({ name: `mask.${i}.fc2.weight`, shape: [4 * width, mlp] });
    table.push({ name: `mask.${i}.fc2.bias`, shape: [4 * width] });
  });
  return table;
}

/**
 * Infer model dimensions from canonically named tensors. Shapes are taken
 * at face value here; the expected table generated from the result is what
 * catches inconsistencies.
 */
export function inferDims(tensors: TensorMap): ModelDims {
  const split = tensors.get('bandsplit.0.fc.weight');
  if (!split || split.shape.length !== 2) {
    throw new Error('cannot infer feature size: bandsplit.0.fc.weight is missing or not 2-d');
  }
  const recurrent = tensors.get('block.0.seq.blstm.fw.w_hh');
  if (!recurrent || recurrent.shape.length !== 2) {
    throw new Error('cannot infer hidden size: block.0.seq.blstm.fw.w_hh is missing or not 2-d');
  }
  let blocks = 0;
  for (const name of tensors.keys()) {
    const match = /^block\.(\d+)\./.exec(name);
    if (match) {
      blocks = Math.max(blocks, Number(match[1]) + 1);
    }
  }
  return {
    featureDim: split.shape[0],
    numBlocks: blocks,
    lstmHidden: recurrent.shape[1],
  };
}
