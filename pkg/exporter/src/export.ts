/**
 * Checkpoint export: read a source checkpoint, rename every tensor to the
 * engine's canonical names (folding LSTM bias pairs and permuting gate
 * blocks where the source convention requires it), validate the result
 * against the canonical weight table, and write a .bsrw container in
 * canonical order. Nothing is written unless the mapping is complete and
 * every shape agrees.
 */

import * as fs from 'node:fs';

import { writeBsrw } from './bsrw';
import { loadCheckpoint } from './checkpoint';
import { FoldNote, MappedTensor, PermuteNote, RenameTable, mapCheckpoint } from './renames';
import { SchemeInfo, resolveScheme } from './scheme';
import { ModelDims, inferDims, weightTable } from './table';
import { TensorMap, allFinite, numel, shapeText, shapesEqual } from './tensors';

export interface ExportReport {
  scheme: SchemeInfo;
  dims: ModelDims | null;
  tensorCount: number;
  paramCount: number;
  mapped: MappedTensor[];
  folds: FoldNote[];
  permutations: PermuteNote[];
  /** Empty on success; on failure no output file is written. */
  problems: string[];
}

export function exportCheckpoint(
  checkpointPath: string,
  schemeArg: string,
  outPath: string,
  table: RenameTable
): ExportReport {
  const source = loadCheckpoint(checkpointPath);
  const scheme = resolveScheme(schemeArg);
  const result = mapCheckpoint(source, table);
  const problems = [...result.problems];

  for (const [name, tensor] of source) {
    if (!allFinite(tensor)) {
      problems.push(`non-finite values in ${name}`);
    }
  }

  let dims: ModelDims | null = null;
  try {
    dims = inferDims(result.tensors);
  } catch (err) {
    problems.push((err as Error).message);
  }

  let tensorCount = 0;
  let paramCount = 0;
  const ordered: TensorMap = new Map();
  if (dims) {
    const expected = weightTable(scheme, dims);
    const expectedNames = new Set(expected.map((entry) => entry.name));
    for (const entry of expected) {
      const got = result.tensors.get(entry.name);
      if (!got) {
        problems.push(`missing tensor: ${entry.name}`);
      } else if (!shapesEqual(got.shape, entry.shape)) {
        problems.push(
          `shape conflict for ${entry.name}: file ${shapeText(got.shape)} vs expected ${shapeText(entry.shape)}`
        );
      } else {
        ordered.set(entry.name, got);
        paramCount += numel(entry.shape);
      }
    }
    for (const name of result.tensors.keys()) {
      if (!expectedNames.has(name)) {
        problems.push(`unexpected tensor: ${name}`);
      }
    }
    tensorCount = expected.length;
  }

  if (problems.length === 0 && dims) {
    const buf = writeBsrw({
      scheme: scheme.name,
      ledger: scheme.ledger,
      featureDim: dims.featureDim,
      numBlocks: dims.numBlocks,
      lstmHidden: dims.lstmHidden,
      tensors: ordered,
    });
    fs.writeFileSync(outPath, buf);
  }

  return {
    scheme,
    dims,
    tensorCount,
    paramCount,
    mapped: result.mapped,
    folds: result.folds,
    permutations: result.permutations,
    problems,
  };
}
