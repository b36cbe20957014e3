export { Tensor, TensorMap, numel, shapesEqual, allFinite } from './tensors';
export { parseNpy, writeNpy, parseNpz, writeNpz } from './npy';
export { parseSafetensors, writeSafetensors } from './safetensors';
export { loadCheckpoint } from './checkpoint';
export { WeightsFile, readBsrw, writeBsrw } from './bsrw';
export { ProbeGrid, ProbeKind, readProbe, writeProbe } from './probes';
export {
  CANONICAL_GATE_ORDER,
  RenameTable,
  MapResult,
  loadRenameTable,
  mapCheckpoint,
  permuteGateRows,
} from './renames';
export { SchemeInfo, resolveScheme, engineMask, runEngine } from './scheme';
export { ModelDims, SpecEntry, weightTable, inferDims } from './table';
export { MaskGrid, maskFromSpectrogram } from './forward';
export { ExportReport, exportCheckpoint } from './export';
export { DEVIATION_LIMIT, VerifyReport, verifyCheckpoint } from './verify';
export { runCli } from './cli';
