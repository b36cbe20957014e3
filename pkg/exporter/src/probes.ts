/**
 * Probe files: one complex grid per file, either a spectrogram (magic BSPX)
 * or a mask (BSPM). Header is five u32 fields (bins, frames, sample rate,
 * n_fft, hop), then bins*frames interleaved (real, imag) float32 pairs
 * stored column-major, frame by frame.
 */

import { numel } from './tensors';

const SPECTROGRAM_MAGIC = 'BSPX';
const MASK_MAGIC = 'BSPM';
const HEADER_BYTES = 24;

export type ProbeKind = 'spectrogram' | 'mask';

export interface ProbeGrid {
  kind: ProbeKind;
  bins: number;
  frames: number;
  sampleRate: number;
  nFft: number;
  hop: number;
  /** Row-major (bins, frames): element (b, t) sits at b * frames + t. */
  re: Float32Array;
  im: Float32Array;
}

export function readProbe(buf: Buffer): ProbeGrid {
  const magic = buf.subarray(0, 4).toString('latin1');
  const kind: ProbeKind | undefined =
    magic === SPECTROGRAM_MAGIC ? 'spectrogram' : magic === MASK_MAGIC ? 'mask' : undefined;
  if (buf.length < HEADER_BYTES || kind === undefined) {
    throw new Error(`not a probe file: magic ${JSON.stringify(magic)}`);
  }
  const bins = buf.readUInt32LE(4);
  const frames = buf.readUInt32LE(8);
  const sampleRate = buf.readUInt32LE(12);
  const nFft = buf.readUInt32LE(16);
  const hop = buf.readUInt32LE(20);
  const expected = HEADER_BYTES + bins * frames * 8;
  if (buf.length !== expected) {
    throw new Error(`probe payload is ${buf.length - HEADER_BYTES} bytes, expected ${expected - HEADER_BYTES}`);
  }
  const re = new Float32Array(numel([bins, frames]));
  const im = new Float32Array(re.length);
  for (let t = 0; t < frames; t++) {
    for (let b = 0; b < bins; b++) {
      const at = HEADER_BYTES + (t * bins + b) * 8;
      re[b * frames + t] = buf.readFloatLE(at);
      im[b * frames + t] = buf.readFloatLE(at + 4);
    }
  }
  return { kind, bins, frames, sampleRate, nFft, hop, re, im };
}

export function writeProbe(grid: ProbeGrid): Buffer {
  const magic = grid.kind === 'spectrogram' ? SPECTROGRAM_MAGIC : MASK_MAGIC;
  const buf = Buffer.alloc(HEADER_BYTES + grid.bins * grid.frames * 8);
  buf.write(magic, 0, 'latin1');
  buf.writeUInt32LE(grid.bins, 4);
  buf.writeUInt32LE(grid.frames, 8);
  buf.writeUInt32LE(grid.sampleRate, 12);
  buf.writeUInt32LE(grid.nFft, 16);
  buf.writeUInt32LE(grid.hop, 20);
  for (let t = 0; t < grid.frames; t++) {
    for (let b = 0; b < grid.bins; b++) {
      const at = HEADER_BYTES + (t * grid.bins + b) * 8;
      buf.writeFloatLE(grid.re[b * grid.frames + t], at);
      buf.writeFloatLE(grid.im[b * grid.frames + t], at + 4);
    }
  }
  return buf;
}
