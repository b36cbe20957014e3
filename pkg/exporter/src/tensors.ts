/**
 * Flat tensor containers shared by the checkpoint readers, the container
 * writer and the forward pass. Everything downstream assumes float32.
 */

export interface Tensor {
  shape: number[];
  data: Float32Array;
}

/** Insertion order is meaningful: file writers emit tensors in map order. */
export type TensorMap = Map<string, Tensor>;

export function numel(shape: number[]): number {
  let n = 1;
  for (const dim of shape) {
    n *= dim;
  }
  return n;
}

export function shapesEqual(a: number[], b: number[]): boolean {
  return a.length === b.length && a.every((dim, i) => dim === b[i]);
}

export function shapeText(shape: number[]): string {
  return `[${shape.join(', ')}]`;
}

export function allFinite(tensor: Tensor): boolean {
  for (let i = 0; i < tensor.data.length; i++) {
    if (!Number.isFinite(tensor.data[i])) {
      return false;
    }
  }
  return true;
}

/** Copy a byte range into an aligned Float32Array (buffers may be unaligned). */
export function bytesToFloat32(bytes: Uint8Array): Float32Array {
  const aligned = new ArrayBuffer(bytes.length);
  new Uint8Array(aligned).set(bytes);
  return new Float32Array(aligned);
}

/** View tensor data as bytes in host order; the tool assumes a little-endian host. */
export function float32ToBytes(data: Float32Array): Buffer {
  return Buffer.from(data.buffer, data.byteOffset, data.byteLength);
}
