/**
 * Verification: run a checkpoint through this tool's own forward pass and
 * the exported container through the engine's probe command, then compare
 * the two masks on the same spectrogram probe. The worst deviation and its
 * location (bin, frame, band) are reported; anything above the tolerance
 * is a failed export.
 */

import * as fs from 'node:fs';
import * as os from 'node:os';
import * as path from 'node:path';

import { readBsrw } from './bsrw';
import { loadCheckpoint } from './checkpoint';
import { maskFromSpectrogram } from './forward';
import { readProbe } from './probes';
import { RenameTable, mapCheckpoint } from './renames';
import { engineMask, resolveScheme } from './scheme';
import { inferDims, weightTable } from './table';
import { shapeText, shapesEqual } from './tensors';

export const DEVIATION_LIMIT = 1e-3;

export interface VerifyReport {
  deviation: number;
  limit: number;
  pass: boolean;
  /** Location of the worst deviation; null only for an empty grid. */
  worst: { bin: number; frame: number; band: number } | null;
  bins: number;
  frames: number;
}

export function verifyCheckpoint(
  checkpointPath: string,
  weightsPath: string,
  probePath: string,
  table: RenameTable,
  limit: number = DEVIATION_LIMIT
): VerifyReport {
  const container = readBsrw(fs.readFileSync(weightsPath));
  const scheme = resolveScheme(container.ledger);

  const source = loadCheckpoint(checkpointPath);
  const result = mapCheckpoint(source, table);
  if (result.problems.length > 0) {
    throw new Error(`checkpoint does not map cleanly:\n${result.problems.join('\n')}`);
  }
  const dims = inferDims(result.tensors);
  if (
    dims.featureDim !== container.featureDim ||
    dims.numBlocks !== container.numBlocks ||
    dims.lstmHidden !== container.lstmHidden
  ) {
    throw new Error(
      `model dimensions disagree: checkpoint ${dims.featureDim}/${dims.numBlocks}/${dims.lstmHidden} ` +
        `vs container ${container.featureDim}/${container.numBlocks}/${container.lstmHidden}`
    );
  }
  for (const entry of weightTable(scheme, dims)) {
    const got = result.tensors.get(entry.name);
    if (!got) {
      throw new Error(`missing tensor: ${entry.name}`);
    }
    if (!shapesEqual(got.shape, entry.shape)) {
      throw new Error(
        `shape conflict for ${entry.name}: file ${shapeText(got.shape)} vs expected ${shapeText(entry.shape)}`
      );
    }
  }

  const probe = readProbe(fs.readFileSync(probePath));
  if (probe.kind !== 'spectrogram') {
    throw new Error('verification probe must be a spectrogram probe');
  }
  if (probe.bins !== scheme.totalBins) {
    throw new Error(`probe has ${probe.bins} bins, scheme expects ${scheme.totalBins}`);
  }

  const predicted = maskFromSpectrogram(probe, scheme.bands, dims, result.tensors);

  const workDir = fs.mkdtempSync(path.join(os.tmpdir(), 'ckpt-exporter-'));
  const maskPath = path.join(workDir, 'engine.bspm');
  let engine;
  try {
    engineMask(weightsPath, probePath, maskPath);
    engine = readProbe(fs.readFileSync(maskPath));
  } finally {
    fs.rmSync(workDir, { recursive: true, force: true });
  }
  if (engine.kind !== 'mask' || engine.bins !== probe.bins || engine.frames !== probe.frames) {
    throw new Error(
      `engine returned a ${engine.bins}x${engine.frames} ${engine.kind} probe, ` +
        `expected a ${probe.bins}x${probe.frames} mask`
    );
  }

  let deviation = 0;
  let worst: VerifyReport['worst'] = null;
  for (let b = 0; b < probe.bins; b++) {
    for (let t = 0; t < probe.frames; t++) {
      const at = b * probe.frames + t;
      const dev = Math.hypot(predicted.re[at] - engine.re[at], predicted.im[at] - engine.im[at]);
      if (worst === null || dev > deviation) {
        deviation = dev;
        worst = { bin: b, frame: t, band: bandOfBin(scheme.bands, b) };
      }
    }
  }
  return { deviation, limit, pass: deviation <= limit, worst, bins: probe.bins, frames: probe.frames };
}

function bandOfBin(bands: [number, number][], bin: number): number {
  for (let i = 0; i < bands.length; i++) {
    const [start, width] = bands[i];
    if (bin >= start && bin < start + width) {
      return i;
    }
  }
  return -1;
}
