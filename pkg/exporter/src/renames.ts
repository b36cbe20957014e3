/**
 * Source-name mapping. Name patterns live in a JSON table (tables/*.json)
 * so a new checkpoint convention is a data change, not a code change:
 *
 *   - "renames" is an ordered list of regex rewrites for plain tensors;
 *     the first matching rule wins and may use $1-style captures.
 *   - "lstm" is one structural rule for recurrent parameters. Its pattern
 *     must capture, in order: the block index, the path word, the kind
 *     (weight_ih / weight_hh / bias_ih / bias_hh) and an optional reverse
 *     marker. "paths" translates path words, "target" names the engine
 *     prefix via {block} and {path}.
 *   - "gate_order" spells the source's gate block order with the letters
 *     i, f, g, o. Anything other than "ifgo" has its gate blocks permuted.
 *
 * LSTM bias pairs are folded by addition (the engine keeps one bias per
 * direction); folds and permutations are itemized so an export report says
 * exactly what was rewritten.
 */

import * as fs from 'node:fs';

import { Tensor, TensorMap, numel, shapesEqual, shapeText } from './tensors';

export const CANONICAL_GATE_ORDER = 'ifgo';

export interface RenameRule {
  from: string;
  to: string;
}

export interface LstmRule {
  pattern: string;
  paths: Record<string, string>;
  target: string;
}

export interface RenameTable {
  name: string;
  gateOrder: string;
  renames: RenameRule[];
  lstm: LstmRule;
}

export function loadRenameTable(file: string): RenameTable {
  let body: Record<string, unknown>;
  try {
    body = JSON.parse(fs.readFileSync(file, 'utf8'));
  } catch (err) {
    throw new Error(`rename table ${file}: ${(err as Error).message}`);
  }
  const gateOrder = body.gate_order as string;
  if (
    typeof gateOrder !== 'string' ||
    gateOrder.length !== 4 ||
    [...gateOrder].sort().join('') !== 'fgio'
  ) {
    throw new Error(`rename table ${file}: gate_order must be a permutation of "ifgo"`);
  }
  const renames = body.renames as RenameRule[];
  const lstm = body.lstm as LstmRule;
  if (!Array.isArray(renames) || !lstm || typeof lstm.pattern !== 'string') {
    throw new Error(`rename table ${file}: missing renames list or lstm rule`);
  }
  return { name: String(body.name ?? file), gateOrder, renames, lstm };
}

/** Reorder the four gate blocks along axis 0 into canonical i, f, g, o. */
export function permuteGateRows(tensor: Tensor, order: string): Tensor {
  const four = tensor.shape[0];
  if (four % 4 !== 0) {
    throw new Error(`gate dimension ${four} is not a multiple of 4`);
  }
  const block = (four / 4) * (numel(tensor.shape) / four);
  const out = new Float32Array(tensor.data.length);
  [...CANONICAL_GATE_ORDER].forEach((gate, j) => {
    const k = order.indexOf(gate);
    out.set(tensor.data.subarray(k * block, (k + 1) * block), j * block);
  });
  return { shape: [...tensor.shape], data: out };
}

export interface MappedTensor {
  source: string;
  target: string;
}

export interface FoldNote {
  target: string;
  sources: string[];
}

export interface PermuteNote {
  target: string;
  from: string;
}

export interface MapResult {
  tensors: TensorMap;
  mapped: MappedTensor[];
  folds: FoldNote[];
  permutations: PermuteNote[];
  problems: string[];
}

export function mapCheckpoint(source: TensorMap, table: RenameTable): MapResult {
  const lstmRe = new RegExp(table.lstm.pattern);
  const rules = table.renames.map((rule) => ({ re: new RegExp(rule.from), to: rule.to }));
  const tensors: TensorMap = new Map();
  const origin = new Map<string, string>();
  const mapped: MappedTensor[] = [];
  const folds: FoldNote[] = [];
  const permutations: PermuteNote[] = [];
  const problems: string[] = [];
  const pendingBias = new Map<string, { sources: string[]; parts: Tensor[] }>();

  const put = (target: string, tensor: Tensor, sourceName: string): void => {
    if (tensors.has(target)) {
      problems.push(`duplicate mapping: ${sourceName} and ${origin.get(target)} both target ${target}`);
      return;
    }
    tensors.set(target, tensor);
    origin.set(target, sourceName);
  };

  const toCanonicalGates = (target: string, tensor: Tensor): Tensor => {
    if (table.gateOrder === CANONICAL_GATE_ORDER) {
      return tensor;
    }
    permutations.push({ target, from: table.gateOrder });
    return permuteGateRows(tensor, table.gateOrder);
  };

  for (const [name, tensor] of source) {
    const lstm = lstmRe.exec(name);
    if (lstm) {
      const path = table.lstm.paths[lstm[2]];
      if (!path) {
        problems.push(`lstm path word ${lstm[2]} in ${name} is not in the rename table`);
        continue;
      }
      const direction = lstm[4] ? 'bw' : 'fw';
      const base =
        table.lstm.target.replace('{block}', lstm[1]).replace('{path}', path) + `.${direction}`;
      const kind = lstm[3];
      if (kind === 'weight_ih' || kind === 'weight_hh') {
        const target = kind === 'weight_ih' ? `${base}.w_ih` : `${base}.w_hh`;
        mapped.push({ source: name, target });
        put(target, toCanonicalGates(target, tensor), name);
      } else {
        const target = `${base}.bias`;
        const entry = pendingBias.get(target) ?? { sources: [], parts: [] };
        entry.sources.push(name);
        entry.parts.push(tensor);
        pendingBias.set(target, entry);
        mapped.push({ source: name, target });
      }
      continue;
    }
    const rule = rules.find((candidate) => candidate.re.test(name));
    if (!rule) {
      problems.push(`unmapped tensor: ${name}`);
      continue;
    }
    const target = name.replace(rule.re, rule.to);
    mapped.push({ source: name, target });
    put(target, tensor, name);
  }

  for (const [target, entry] of pendingBias) {
    const shape = entry.parts[0].shape;
    if (!entry.parts.every((part) => shapesEqual(part.shape, shape))) {
      problems.push(
        `bias halves for ${target} disagree on shape: ` +
          entry.parts.map((part) => shapeText(part.shape)).join(' vs ')
      );
      continue;
    }
    let folded = entry.parts[0];
    if (entry.parts.length > 1) {
      const data = new Float32Array(folded.data.length);
      data.set(folded.data);
      for (const part of entry.parts.slice(1)) {
        for (let i = 0; i < data.length; i++) {
          data[i] = data[i] + part.data[i];
        }
      }
      folded = { shape: [...shape], data };
      folds.push({ target, sources: [...entry.sources] });
    }
    put(target, toCanonicalGates(target, folded), entry.sources.join(' + '));
  }

  return { tensors, mapped, folds, permutations, problems };
}
