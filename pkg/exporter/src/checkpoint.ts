/**
 * Checkpoint loading. A checkpoint is a flat name -> float32 tensor map,
 * read either from a safetensors file or from an npz archive of npy arrays.
 */

import * as fs from 'node:fs';
import * as path from 'node:path';

import { parseNpz } from './npy';
import { parseSafetensors } from './safetensors';
import { TensorMap } from './tensors';

const ZIP_MAGIC = 0x04034b50;

export function loadCheckpoint(file: string): TensorMap {
  const buf = fs.readFileSync(file);
  const ext = path.extname(file).toLowerCase();
  if (ext === '.npz') {
    return parseNpz(buf);
  }
  if (ext === '.safetensors') {
    return parseSafetensors(buf);
  }
  // renamed files still load: zip magic wins, anything else tries safetensors
  if (buf.length >= 4 && buf.readUInt32LE(0) === ZIP_MAGIC) {
    return parseNpz(buf);
  }
  try {
    return parseSafetensors(buf);
  } catch {
    throw new Error(`${file}: unrecognized checkpoint format (expected safetensors or npz)`);
  }
}
