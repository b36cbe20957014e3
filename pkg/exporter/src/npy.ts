/**
 * Minimal .npy / .npz reader and writer.
 *
 * Only little-endian float32 C-order arrays are supported. That is the one
 * dtype the weight container stores, so anything else in a checkpoint is an
 * error worth surfacing rather than a conversion to apply silently.
 */

import * as zlib from 'node:zlib';

import { Tensor, TensorMap, bytesToFloat32, float32ToBytes, numel } from './tensors';

const NPY_MAGIC = Buffer.from('\x93NUMPY', 'latin1');

const ZIP_LOCAL_SIG = 0x04034b50;
const ZIP_CENTRAL_SIG = 0x02014b50;
const ZIP_END_SIG = 0x06054b50;

function headerField(header: string, pattern: RegExp, label: string, field: string): string {
  const match = pattern.exec(header);
  if (!match) {
    throw new Error(`${label}: npy header has no ${field} field`);
  }
  return match[1];
}

export function parseNpy(buf: Buffer, label = 'array'): Tensor {
  if (buf.length < 10 || !buf.subarray(0, 6).equals(NPY_MAGIC)) {
    throw new Error(`${label}: not an npy array`);
  }
  const major = buf[6];
  let headerLen: number;
  let headerStart: number;
  if (major === 1) {
    headerLen = buf.readUInt16LE(8);
    headerStart = 10;
  } else if (major === 2 || major === 3) {
    headerLen = buf.readUInt32LE(8);
    headerStart = 12;
  } else {
    throw new Error(`${label}: unsupported npy version ${major}`);
  }
  if (headerStart + headerLen > buf.length) {
    throw new Error(`${label}: truncated npy header`);
  }
  const header = buf.subarray(headerStart, headerStart + headerLen).toString('latin1');
  const descr = headerField(header, /'descr'\s*:\s*'([^']+)'/, label, 'descr');
  if (descr !== '<f4') {
    throw new Error(`${label}: unsupported dtype ${descr}, expected <f4`);
  }
  const order = headerField(header, /'fortran_order'\s*:\s*(True|False)/, label, 'fortran_order');
  if (order !== 'False') {
    throw new Error(`${label}: fortran-order arrays are not supported`);
  }
  const shapeBody = headerField(header, /'shape'\s*:\s*\(([^)]*)\)/, label, 'shape');
  const shape = shapeBody
    .split(',')
    .map((part) => part.trim())
    .filter((part) => part.length > 0)
    .map((part) => {
      const dim = Number(part);
      if (!Number.isInteger(dim) || dim < 0) {
        throw new Error(`${label}: bad shape entry ${part}`);
      }
      return dim;
    });
  const body = buf.subarray(headerStart + headerLen);
  const expected = numel(shape) * 4;
  if (body.length !== expected) {
    throw new Error(`${label}: payload is ${body.length} bytes, expected ${expected}`);
  }
  return { shape, data: bytesToFloat32(body) };
}

export function writeNpy(tensor: Tensor): Buffer {
  // python tuple spelling: (), (5,), (2, 3)
  const dims =
    tensor.shape.length === 1 ? `${tensor.shape[0]},` : tensor.shape.join(', ');
  let header = `{'descr': '<f4', 'fortran_order': False, 'shape': (${dims}), }`;
  const unpadded = 10 + header.length + 1;
  header = header + ' '.repeat((64 - (unpadded % 64)) % 64) + '\n';
  const head = Buffer.alloc(10);
  NPY_MAGIC.copy(head, 0);
  head[6] = 1;
  head[7] = 0;
  head.writeUInt16LE(header.length, 8);
  return Buffer.concat([head, Buffer.from(header, 'latin1'), float32ToBytes(tensor.data)]);
}

interface ZipEntry {
  name: string;
  data: Buffer;
}

function readZipEntries(buf: Buffer): ZipEntry[] {
  // end-of-central-directory record: fixed 22 bytes plus an optional comment
  let end = -1;
  const stop = Math.max(0, buf.length - 22 - 0xffff);
  for (let i = buf.length - 22; i >= stop; i--) {
    if (buf.readUInt32LE(i) === ZIP_END_SIG) {
      end = i;
      break;
    }
  }
  if (end < 0) {
    throw new Error('not a zip archive');
  }
  const count = buf.readUInt16LE(end + 10);
  let pos = buf.readUInt32LE(end + 16);
  const entries: ZipEntry[] = [];
  for (let i = 0; i < count; i++) {
    if (buf.readUInt32LE(pos) !== ZIP_CENTRAL_SIG) {
      throw new Error('corrupt zip central directory');
    }
    const method = buf.readUInt16LE(pos + 10);
    const compressed = buf.readUInt32LE(pos + 20);
    const nameLen = buf.readUInt16LE(pos + 28);
    const extraLen = buf.readUInt16LE(pos + 30);
    const commentLen = buf.readUInt16LE(pos + 32);
    const localPos = buf.readUInt32LE(pos + 42);
    const name = buf.subarray(pos + 46, pos + 46 + nameLen).toString('utf8');
    if (buf.readUInt32LE(localPos) !== ZIP_LOCAL_SIG) {
      throw new Error(`corrupt zip entry ${name}`);
    }
    const localName = buf.readUInt16LE(localPos + 26);
    const localExtra = buf.readUInt16LE(localPos + 28);
    const dataPos = localPos + 30 + localName + localExtra;
    const raw = buf.subarray(dataPos, dataPos + compressed);
    let data: Buffer;
    if (method === 0) {
      data = Buffer.from(raw);
    } else if (method === 8) {
      data = zlib.inflateRawSync(raw);
    } else {
      throw new Error(`zip entry ${name} uses unsupported compression method ${method}`);
    }
    entries.push({ name, data });
    pos += 46 + nameLen + extraLen + commentLen;
  }
  return entries;
}

export function parseNpz(buf: Buffer): TensorMap {
  const tensors: TensorMap = new Map();
  for (const entry of readZipEntries(buf)) {
    if (!entry.name.endsWith('.npy')) {
      throw new Error(`archive entry ${entry.name} is not an npy array`);
    }
    const name = entry.name.slice(0, -4);
    if (tensors.has(name)) {
      throw new Error(`duplicate array ${name} in archive`);
    }
    tensors.set(name, parseNpy(entry.data, name));
  }
  return tensors;
}

/** Write an uncompressed npz archive (stored zip entries). */
export function writeNpz(tensors: TensorMap): Buffer {
  const locals: Buffer[] = [];
  const centrals: Buffer[] = [];
  let offset = 0;
  for (const [name, tensor] of tensors) {
    const fileName = Buffer.from(`${name}.npy`, 'utf8');
    const data = writeNpy(tensor);
    const crc = zlib.crc32(data);

    const local = Buffer.alloc(30);
    local.writeUInt32LE(ZIP_LOCAL_SIG, 0);
    local.writeUInt16LE(20, 4); // version needed
    local.writeUInt32LE(crc, 14);
    local.writeUInt32LE(data.length, 18);
    local.writeUInt32LE(data.length, 22);
    local.writeUInt16LE(fileName.length, 26);
    locals.push(local, fileName, data);

    const central = Buffer.alloc(46);
    central.writeUInt32LE(ZIP_CENTRAL_SIG, 0);
    central.writeUInt16LE(20, 4); // version made by
    central.writeUInt16LE(20, 6); // version needed
    central.writeUInt32LE(crc, 16);
    central.writeUInt32LE(data.length, 20);
    central.writeUInt32LE(data.length, 24);
    central.writeUInt16LE(fileName.length, 28);
    central.writeUInt32LE(offset, 42);
    centrals.push(central, fileName);

    offset += 30 + fileName.length + data.length;
  }
  const centralSize = centrals.reduce((total, part) => total + part.length, 0);
  const end = Buffer.alloc(22);
  end.writeUInt32LE(ZIP_END_SIG, 0);
  end.writeUInt16LE(tensors.size, 8);
  end.writeUInt16LE(tensors.size, 10);
  end.writeUInt32LE(centralSize, 12);
  end.writeUInt32LE(offset, 16);
  return Buffer.concat([...locals, ...centrals, end]);
}
