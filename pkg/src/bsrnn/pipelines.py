"""Directory-level plumbing shared by the service and the command line.

Conventions:
  - a stems directory has one subdirectory per stem type (vocal, bass,
    drum, other), each holding WAV segments;
  - an unlabeled directory holds WAV mixtures directly;
  - evaluation matches reference and estimate directories by file name.

Example writers emit WAV pairs plus a tab-separated manifest, one line per
example, so a run is reproducible from its seed column alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import metrics, mixsim, semisup, wavio
from .audio import AudioTrack
from .inference import InferenceConfig, SpectrogramFn, separate_track
from .mixsim import STEM_TYPES, StemPool
from .sad import SalientSegment

__all__ = [
    "load_tracks",
    "load_stem_pool",
    "format_sad_lines",
    "write_sad_segments",
    "MIX_MANIFEST_HEADER",
    "run_mix",
    "SEMI_MANIFEST_HEADER",
    "run_semisample",
    "separator_from_fn",
    "run_eval",
    "format_eval_tsv",
]


def load_tracks(directory: str | Path) -> list[tuple[str, AudioTrack]]:
    root = Path(directory)
    if not root.is_dir():
        raise FileNotFoundError(f"not a directory: {root}")
    files = sorted(root.glob("*.wav"))
    if not files:
        raise FileNotFoundError(f"no .wav files in {root}")
    return [(f.name, wavio.read_wav(f)) for f in files]


def load_stem_pool(stems_dir: str | Path) -> StemPool:
    root = Path(stems_dir)
    stems = {}
    for stem in STEM_TYPES:
        sub = root / stem
        if not sub.is_dir():
            raise FileNotFoundError(f"missing stem directory: {sub}")
        stems[stem] = [track for _, track in load_tracks(sub)]
    return StemPool(stems=stems)


def format_sad_lines(segments: Sequence[SalientSegment]) -> str:
    return "".join(f"{seg.start}\t{seg.length}\n" for seg in segments)


def write_sad_segments(
    track: AudioTrack, segments: Sequence[SalientSegment], out_dir: str | Path
) -> list[str]:
    root = Path(out_dir)
    root.mkdir(parents=True, exist_ok=True)
    written = []
    for seg in segments:
        piece = AudioTrack(
            data=track.data[:, seg.start : seg.end], sample_rate=track.sample_rate
        )
        path = root / f"segment_{seg.start}.wav"
        wavio.write_wav(path, piece, encoding="float32")
        written.append(str(path))
    return written


@dataclass
class ExampleRecord:
    index: int
    seed: int
    mixture_path: str
    target_path: str
    gain_db: dict[str, float]
    dropped: dict[str, bool]
    degenerate: bool
    unlabeled_class: str | None = None


def _manifest_row(record: ExampleRecord, names: Sequence[str]) -> str:
    cells = [str(record.index), str(record.seed)]
    cells += [f"{record.gain_db[n]:.6f}" for n in names]
    cells += ["1" if record.dropped[n] else "0" for n in names]
    cells.append("1" if record.degenerate else "0")
    if record.unlabeled_class is not None:
        cells.append(record.unlabeled_class)
    return "\t".join(cells) + "\n"


def _write_pair(
    example: mixsim.TrainingExample, out_dir: Path, index: int
) -> tuple[str, str]:
    mix_path = out_dir / f"{index:04d}_mixture.wav"
    target_path = out_dir / f"{index:04d}_target.wav"
    wavio.write_wav(mix_path, example.mixture, encoding="float32")
    wavio.write_wav(target_path, example.target, encoding="float32")
    return str(mix_path), str(target_path)


MIX_MANIFEST_HEADER = (
    "index\tseed\t"
    + "\t".join(f"gain_{s}" for s in STEM_TYPES)
    + "\t"
    + "\t".join(f"drop_{s}" for s in STEM_TYPES)
    + "\tdegenerate\n"
)


def run_mix(
    pool: StemPool,
    target_stem: str,
    count: int,
    seed: int,
    out_dir: str | Path,
    chunk_seconds: float = 3.0,
) -> list[ExampleRecord]:
    """Generate supervised examples; each one gets its own derived seed."""
    root = Path(out_dir)
    root.mkdir(parents=True, exist_ok=True)
    records = []
    for i in range(count):
        example_seed = seed + i
        rng = np.random.default_rng(example_seed)
        example = mixsim.sample_training_example(
            pool, target_stem, rng, chunk_seconds=chunk_seconds
        )
        mix_path, target_path = _write_pair(example, root, i)
        records.append(
            ExampleRecord(
                index=i,
                seed=example_seed,
                mixture_path=mix_path,
                target_path=target_path,
                gain_db=example.gain_db,
                dropped=example.dropped,
                degenerate=example.degenerate,
            )
        )
    manifest = MIX_MANIFEST_HEADER + "".join(
        _manifest_row(r, STEM_TYPES) for r in records
    )
    (root / "manifest.tsv").write_text(manifest)
    return records


SEMI_MANIFEST_HEADER = (
    "index\tseed\tgain_target\tgain_residual\tdrop_target\tdrop_residual"
    "\tdegenerate\tclass\n"
)


def separator_from_fn(
    fn: SpectrogramFn, chunk_seconds: float = 3.0
) -> semisup.SeparatorFn:
    """Adapt a spectrogram pipeline to the separator interface.

    The chunk is processed whole (hop = chunk length) and the residual is
    the mixture minus the separated target.
    """
    config = InferenceConfig(chunk_seconds=chunk_seconds, hop_seconds=chunk_seconds)

    def separate(mixture: AudioTrack) -> tuple[AudioTrack, AudioTrack]:
        target = separate_track(mixture, fn, config)
        residual = AudioTrack(
            data=mixture.data - target.data, sample_rate=mixture.sample_rate
        )
        return target, residual

    return separate


def run_semisample(
    labeled: StemPool,
    unlabeled: Sequence[AudioTrack],
    separator: semisup.SeparatorFn,
    target_stem: str,
    count: int,
    seed: int,
    out_dir: str | Path,
    chunk_seconds: float = 3.0,
    threshold_db: float = semisup.ENERGY_GAP_DB,
) -> list[ExampleRecord]:
    root = Path(out_dir)
    root.mkdir(parents=True, exist_ok=True)
    records = []
    for i in range(count):
        example_seed = seed + i
        rng = np.random.default_rng(example_seed)
        result = semisup.sample_finetune_example(
            labeled,
            unlabeled,
            separator,
            rng,
            target_stem,
            chunk_seconds=chunk_seconds,
            threshold_db=threshold_db,
        )
        mix_path, target_path = _write_pair(result.example, root, i)
        records.append(
            ExampleRecord(
                index=i,
                seed=example_seed,
                mixture_path=mix_path,
                target_path=target_path,
                gain_db=result.example.gain_db,
                dropped=result.example.dropped,
                degenerate=result.example.degenerate,
                unlabeled_class=result.unlabeled_class.value,
            )
        )
    manifest = SEMI_MANIFEST_HEADER + "".join(
        _manifest_row(r, ("target", "residual")) for r in records
    )
    (root / "manifest.tsv").write_text(manifest)
    return records


def run_eval(
    ref_dir: str | Path, est_dir: str | Path, metric: str
) -> tuple[list[tuple[str, float]], float]:
    """Per-song metric values plus the corpus aggregate."""
    if metric not in ("usdr", "csdr"):
        raise ValueError(f"unknown metric {metric!r}, expected usdr or csdr")
    refs = dict(load_tracks(ref_dir))
    ests = dict(load_tracks(est_dir))
    common = sorted(set(refs) & set(ests))
    if not common:
        raise FileNotFoundError("reference and estimate directories share no file names")

    rows: list[tuple[str, float]] = []
    if metric == "usdr":
        for name in common:
            rows.append((name, metrics.usdr(refs[name], ests[name])))
        aggregate = metrics.usdr_corpus([(refs[n], ests[n]) for n in common])
    else:
        for name in common:
            rows.append((name, metrics.csdr_song(refs[name], ests[name])))
        aggregate = metrics.csdr_corpus([v for _, v in rows])
    return rows, aggregate


def format_eval_tsv(rows: list[tuple[str, float]], aggregate: float) -> str:
    def fmt(value: float) -> str:
        return "inf" if math.isinf(value) else f"{value:.4f}"

    body = "".join(f"{name}\t{fmt(value)}\n" for name, value in rows)
    return body + f"corpus\t{fmt(aggregate)}\n"
