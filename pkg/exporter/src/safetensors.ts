/**
 * safetensors reader and writer: an 8-byte little-endian header length, a
 * JSON header naming dtype/shape/byte ranges per tensor, then raw data.
 * Restricted to F32, matching the weight container.
 */

import { Tensor, TensorMap, bytesToFloat32, float32ToBytes, numel } from './tensors';

interface HeaderEntry {
  dtype: string;
  shape: number[];
  data_offsets: [number, number];
}

export function parseSafetensors(buf: Buffer): TensorMap {
  if (buf.length < 8) {
    throw new Error('not a safetensors file');
  }
  const headerLen = Number(buf.readBigUInt64LE(0));
  if (headerLen <= 0 || 8 + headerLen > buf.length) {
    throw new Error('safetensors header length is out of range');
  }
  let header: Record<string, unknown>;
  try {
    header = JSON.parse(buf.subarray(8, 8 + headerLen).toString('utf8'));
  } catch {
    throw new Error('safetensors header is not valid JSON');
  }
  const data = buf.subarray(8 + headerLen);
  const tensors: TensorMap = new Map();
  for (const [name, info] of Object.entries(header)) {
    if (name === '__metadata__') {
      continue;
    }
    const entry = info as HeaderEntry;
    if (entry.dtype !== 'F32') {
      throw new Error(`unsupported dtype ${entry.dtype} for ${name}, expected F32`);
    }
    const [start, end] = entry.data_offsets;
    const expected = numel(entry.shape) * 4;
    if (end - start !== expected) {
      throw new Error(`byte range for ${name} holds ${end - start} bytes, expected ${expected}`);
    }
    if (start < 0 || end > data.length) {
      throw new Error(`byte range for ${name} runs past the end of the file`);
    }
    tensors.set(name, { shape: [...entry.shape], data: bytesToFloat32(data.subarray(start, end)) });
  }
  return tensors;
}

export function writeSafetensors(tensors: TensorMap): Buffer {
  const header: Record<string, HeaderEntry> = {};
  let offset = 0;
  const payloads: Buffer[] = [];
  for (const [name, tensor] of tensors) {
    const bytes = float32ToBytes(tensor.data);
    header[name] = {
      dtype: 'F32',
      shape: [...tensor.shape],
      data_offsets: [offset, offset + bytes.length],
    };
    payloads.push(bytes);
    offset += bytes.length;
  }
  // pad the header with spaces so tensor data starts 8-aligned
  let text = JSON.stringify(header);
  text += ' '.repeat((8 - ((8 + text.length) % 8)) % 8);
  const head = Buffer.alloc(8);
  head.writeBigUInt64LE(BigInt(text.length), 0);
  return Buffer.concat([head, Buffer.from(text, 'utf8'), ...payloads]);
}
