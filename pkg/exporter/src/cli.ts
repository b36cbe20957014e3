#!/usr/bin/env node
/**
 * Checkpoint exporter CLI.
 *
 * Usage:
 *   ckpt-exporter export --checkpoint model.safetensors --scheme v7 --out weights.bsrw [--table <json>]
 *   ckpt-exporter verify --checkpoint model.safetensors --weights weights.bsrw --probe input.bspx [--table <json>] [--limit 1e-3]
 *
 * export converts a training checkpoint (.safetensors or .npz) into the
 * engine's .bsrw weight container, printing every rename, bias fold and
 * gate permutation it applied. verify runs the checkpoint through this
 * tool's own forward pass and the container through the engine, then
 * compares the two masks on the given spectrogram probe.
 *
 * --scheme takes a builtin scheme name (v7, bass, ...) or a ledger string
 * such as "1000:100,8000:1000 one-subband". --table points at a rename
 * table JSON; the default describes torch-style checkpoints.
 */

import * as path from 'node:path';

import { exportCheckpoint } from './export';
import { loadRenameTable } from './renames';
import { DEVIATION_LIMIT, verifyCheckpoint } from './verify';

const USAGE = `usage: ckpt-exporter <command> [options]

commands:
  export   convert a checkpoint to a .bsrw weight container
  verify   compare a checkpoint against a container on a probe input

export options:
  --checkpoint <file>   source checkpoint (.safetensors or .npz)
  --scheme <name|text>  band scheme name or ledger string
  --out <file>          container to write
  --table <file>        rename table JSON (default: torch convention)

verify options:
  --checkpoint <file>   source checkpoint
  --weights <file>      .bsrw container to check against
  --probe <file>        spectrogram probe (.bspx)
  --table <file>        rename table JSON (default: torch convention)
  --limit <number>      deviation tolerance (default ${DEVIATION_LIMIT})
`;

interface Args {
  checkpoint?: string;
  scheme?: string;
  out?: string;
  weights?: string;
  probe?: string;
  table?: string;
  limit?: number;
}

function defaultTablePath(): string {
  return path.join(__dirname, '..', 'tables', 'torch.json');
}

function parseArgs(argv: string[]): Args | null {
  const args: Args = {};
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    switch (arg) {
      case '--checkpoint':
        args.checkpoint = argv[++i];
        break;
      case '--scheme':
        args.scheme = argv[++i];
        break;
      case '--out':
        args.out = argv[++i];
        break;
      case '--weights':
        args.weights = argv[++i];
        break;
      case '--probe':
        args.probe = argv[++i];
        break;
      case '--table':
        args.table = argv[++i];
        break;
      case '--limit': {
        const value = Number(argv[++i]);
        if (!Number.isFinite(value) || value <= 0) {
          console.error(`--limit must be a positive number, got ${argv[i]}`);
          return null;
        }
        args.limit = value;
        break;
      }
      default:
        console.error(`unknown argument: ${arg}`);
        return null;
    }
  }
  return args;
}

function require_(args: Args, names: (keyof Args)[]): boolean {
  const missing = names.filter((name) => args[name] === undefined);
  if (missing.length > 0) {
    console.error(`missing required option(s): ${missing.map((name) => `--${name}`).join(', ')}`);
    return false;
  }
  return true;
}

function runExport(args: Args): number {
  const table = loadRenameTable(args.table ?? defaultTablePath());
  const report = exportCheckpoint(args.checkpoint!, args.scheme!, args.out!, table);
  console.log(`scheme ${report.scheme.name}: ${report.scheme.numBands} bands, ${report.scheme.totalBins} bins`);
  if (report.dims) {
    console.log(
      `dims: feature ${report.dims.featureDim}, blocks ${report.dims.numBlocks}, hidden ${report.dims.lstmHidden}`
    );
  }
  for (const entry of report.mapped) {
    console.log(`map ${entry.source} -> ${entry.target}`);
  }
  for (const fold of report.folds) {
    console.log(`fold ${fold.target} <- ${fold.sources.join(' + ')}`);
  }
  for (const permutation of report.permutations) {
    console.log(`permute ${permutation.target}: gates ${permutation.from} -> ifgo`);
  }
  if (report.problems.length > 0) {
    for (const problem of report.problems) {
      console.error(`error: ${problem}`);
    }
    return 1;
  }
  console.log(`wrote ${args.out}: ${report.tensorCount} tensors, ${report.paramCount} parameters`);
  return 0;
}

function runVerify(args: Args): number {
  const table = loadRenameTable(args.table ?? defaultTablePath());
  const report = verifyCheckpoint(
    args.checkpoint!,
    args.weights!,
    args.probe!,
    table,
    args.limit ?? DEVIATION_LIMIT
  );
  const where = report.worst
    ? ` at bin ${report.worst.bin} frame ${report.worst.frame} (band ${report.worst.band})`
    : '';
  if (!report.pass) {
    console.error(
      `verification failure: deviation ${report.deviation.toExponential(3)}${where}, limit ${report.limit}`
    );
    return 1;
  }
  console.log(
    `mask deviation ${report.deviation.toExponential(3)} over ${report.bins}x${report.frames}` +
      `${where}, limit ${report.limit}: ok`
  );
  return 0;
}

export function runCli(argv: string[]): number {
  const [command, ...rest] = argv;
  if (command === undefined || command === '--help' || command === '-h') {
    console.error(USAGE);
    return command === undefined ? 2 : 0;
  }
  const args = parseArgs(rest);
  if (args === null) {
    return 2;
  }
  try {
    if (command === 'export') {
      if (!require_(args, ['checkpoint', 'scheme', 'out'])) {
        return 2;
      }
      return runExport(args);
    }
    if (command === 'verify') {
      if (!require_(args, ['checkpoint', 'weights', 'probe'])) {
        return 2;
      }
      return runVerify(args);
    }
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
  console.error(`unknown command: ${command}`);
  console.error(USAGE);
  return 2;
}

if (require.main === module) {
  process.exit(runCli(process.argv.slice(2)));
}
