/**
 * Engine queries over its CLI. The exporter never re-derives band layouts
 * from Hz tables itself; it asks the installed engine so the two tools
 * cannot drift apart on bin arithmetic.
 */

import { spawnSync } from 'node:child_process';

export interface SchemeInfo {
  name: string;
  ledger: string;
  numBands: number;
  totalBins: number;
  /** [start bin, width] per band, low to high. */
  bands: [number, number][];
}

export function runEngine(args: string[]): Buffer {
  const result = spawnSync('bsrnn', args, { maxBuffer: 1 << 28 });
  if (result.error) {
    if ((result.error as NodeJS.ErrnoException).code === 'ENOENT') {
      throw new Error('bsrnn engine CLI not found on PATH');
    }
    throw result.error;
  }
  if (result.status !== 0) {
    const detail = result.stderr.toString('utf8').trim();
    throw new Error(`bsrnn ${args.join(' ')} failed: ${detail}`);
  }
  return result.stdout;
}

/** Resolve a builtin scheme name or a ledger string to its band layout. */
export function resolveScheme(arg: string): SchemeInfo {
  const flag = arg.includes(':') ? '--ledger' : '--scheme';
  const body = JSON.parse(runEngine(['scheme', 'show', flag, arg, '--json']).toString('utf8'));
  return {
    name: body.name,
    ledger: body.ledger,
    numBands: body.num_bands,
    totalBins: body.total_bins,
    bands: body.bands,
  };
}

/** Run the engine's mask probe: weights + spectrogram probe in, mask probe out. */
export function engineMask(weightsPath: string, probePath: string, outPath: string): void {
  runEngine(['weights', 'probe', '--weights', weightsPath, '--probe', probePath, '--out', outPath]);
}
