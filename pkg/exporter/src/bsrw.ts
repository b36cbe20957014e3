/**
 * The engine's weight container (.bsrw, format version 1).
 *
 * Layout, all integers little-endian: 4-byte magic "BSRW"; a body holding
 * u32 version, scheme name and ledger text (u32 byte length + UTF-8 each),
 * u32 feature dim / block count / LSTM hidden size / tensor count, then per
 * tensor a name string, a u8 dtype code (0 = float32), u32 ndim, ndim u32
 * dims and the raw row-major payload; finally u32 CRC-32 over the body.
 * Reading preserves tensor order, so read -> write round-trips are
 * byte-identical.
 */

import * as zlib from 'node:zlib';

import { Tensor, TensorMap, bytesToFloat32, float32ToBytes, numel } from './tensors';

const MAGIC = 'BSRW';
const FORMAT_VERSION = 1;
const DTYPE_F32 = 0;

export interface WeightsFile {
  scheme: string;
  ledger: string;
  featureDim: number;
  numBlocks: number;
  lstmHidden: number;
  tensors: TensorMap;
}

class Reader {
  private pos: number;

  constructor(private readonly data: Buffer) {
    this.pos = 0;
  }

  take(count: number): Buffer {
    if (this.pos + count > this.data.length) {
      throw new Error(`weights file truncated at byte ${this.pos + 4}`);
    }
    const chunk = this.data.subarray(this.pos, this.pos + count);
    this.pos += count;
    return chunk;
  }

  u32(): number {
    return this.take(4).readUInt32LE(0);
  }

  u8(): number {
    return this.take(1)[0];
  }

  string(): string {
    return this.take(this.u32()).toString('utf8');
  }

  get remaining(): number {
    return this.data.length - this.pos;
  }
}

export function readBsrw(buf: Buffer): WeightsFile {
  if (buf.length < 8 || buf.subarray(0, 4).toString('latin1') !== MAGIC) {
    throw new Error('not a weights file');
  }
  const body = buf.subarray(4, buf.length - 4);
  const stored = buf.readUInt32LE(buf.length - 4);
  const computed = zlib.crc32(body);
  if (stored !== computed) {
    throw new Error(
      `checksum mismatch: stored 0x${stored.toString(16).padStart(8, '0')}, ` +
        `computed 0x${computed.toString(16).padStart(8, '0')}`
    );
  }
  const r = new Reader(body);
  const version = r.u32();
  if (version !== FORMAT_VERSION) {
    throw new Error(`unsupported format version ${version}`);
  }
  const scheme = r.string();
  const ledger = r.string();
  const featureDim = r.u32();
  const numBlocks = r.u32();
  const lstmHidden = r.u32();
  const count = r.u32();
  const tensors: TensorMap = new Map();
  for (let i = 0; i < count; i++) {
    const name = r.string();
    const dtype = r.u8();
    if (dtype !== DTYPE_F32) {
      throw new Error(`tensor ${name}: unknown dtype code ${dtype}`);
    }
    const ndim = r.u32();
    const shape: number[] = [];
    for (let d = 0; d < ndim; d++) {
      shape.push(r.u32());
    }
    const raw = r.take(4 * numel(shape));
    if (tensors.has(name)) {
      throw new Error(`duplicate tensor: ${name}`);
    }
    tensors.set(name, { shape, data: bytesToFloat32(raw) });
  }
  if (r.remaining !== 0) {
    throw new Error(`${r.remaining} trailing bytes after last tensor`);
  }
  return { scheme, ledger, featureDim, numBlocks, lstmHidden, tensors };
}

function packU32(value: number): Buffer {
  const buf = Buffer.alloc(4);
  buf.writeUInt32LE(value, 0);
  return buf;
}

function packString(text: string): Buffer {
  const raw = Buffer.from(text, 'utf8');
  return Buffer.concat([packU32(raw.length), raw]);
}

export function writeBsrw(file: WeightsFile): Buffer {
  const parts: Buffer[] = [
    packU32(FORMAT_VERSION),
    packString(file.scheme),
    packString(file.ledger),
    packU32(file.featureDim),
    packU32(file.numBlocks),
    packU32(file.lstmHidden),
    packU32(file.tensors.size),
  ];
  for (const [name, tensor] of file.tensors) {
    parts.push(packString(name));
    parts.push(Buffer.from([DTYPE_F32]));
    parts.push(packU32(tensor.shape.length));
    for (const dim of tensor.shape) {
      parts.push(packU32(dim));
    }
    parts.push(float32ToBytes(tensor.data));
  }
  const body = Buffer.concat(parts);
  return Buffer.concat([Buffer.from(MAGIC, 'latin1'), body, packU32(zlib.crc32(body))]);
}

export function tensorByName(file: WeightsFile, name: string): Tensor {
  const tensor = file.tensors.get(name);
  if (!tensor) {
    throw new Error(`missing tensor: ${name}`);
  }
  return tensor;
}
