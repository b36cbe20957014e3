"""Self-training data sampling on unlabeled mixtures.

A pre-trained separator is run on chunks of unlabeled songs. Each separated
chunk is classified by the energy drop between mixture and separated parts:
a near-empty separated target means the mixture itself is a clean residual
recording, a near-empty separated residual means a clean target recording,
and anything else yields a pseudo-labeled pair. The classified signals join
freshly drawn labeled chunks as candidates from which a finetuning example
is assembled with the usual gain/drop augmentation.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .audio import AudioTrack
from .mixsim import STEM_TYPES, StemPool, TrainingExample, build_example, draw_chunk

__all__ = [
    "ENERGY_GAP_DB",
    "SampleClass",
    "SeparatorFn",
    "FinetuneExample",
    "classify_separated",
    "sample_finetune_example",
    "should_replace_teacher",
]

logger = logging.getLogger(__name__)

ENERGY_GAP_DB = 30.0

# mixture chunk -> (separated target, separated residual);
# the residual is understood as mixture minus separated target
SeparatorFn = Callable[[AudioTrack], tuple[AudioTrack, AudioTrack]]


class SampleClass(enum.Enum):
    CLEAN_RESIDUAL = "clean_residual"
    CLEAN_TARGET = "clean_target"
    PSEUDO_PAIR = "pseudo_pair"


@dataclass
class FinetuneExample:
    example: TrainingExample
    unlabeled_class: SampleClass


def _energy(track: AudioTrack) -> float:
    return float(np.sum(track.data * track.data))


def classify_separated(
    mixture: AudioTrack,
    sep_target: AudioTrack,
    sep_residual: AudioTrack,
    threshold_db: float = ENERGY_GAP_DB,
) -> SampleClass:
    """Decide what a separated unlabeled chunk can serve as.

    The decibel drop from mixture energy to separated-part energy is
    compared against the threshold; a vanished target makes the mixture a
    clean residual sample and vice versa. Scale-invariant by construction.
    """
    e_mix = _energy(mixture)
    if e_mix == 0.0:
        raise ValueError("cannot classify an all-zero mixture")

    def drop_db(part: float) -> float:
        # an all-zero separated part is an infinite drop, not an error
        return math.inf if part == 0.0 else 10.0 * math.log10(e_mix / part)

    drop_target = drop_db(_energy(sep_target))
    drop_residual = drop_db(_energy(sep_residual))
    if drop_target > threshold_db and drop_residual > threshold_db:
        logger.warning(
            "both separated parts are %g dB under the mixture; treating as clean residual",
            threshold_db,
        )
        return SampleClass.CLEAN_RESIDUAL
    if drop_target > threshold_db:
        return SampleClass.CLEAN_RESIDUAL
    if drop_residual > threshold_db:
        return SampleClass.CLEAN_TARGET
    return SampleClass.PSEUDO_PAIR


def sample_finetune_example(
    labeled: StemPool,
    unlabeled: Sequence[AudioTrack],
    separator: SeparatorFn,
    rng: np.random.Generator,
    target_stem: str,
    chunk_seconds: float = 3.0,
    threshold_db: float = ENERGY_GAP_DB,
) -> FinetuneExample:
    """Assemble one finetuning example from labeled and unlabeled sources.

    The labeled pool contributes a raw target chunk and a raw residual (the
    sum of the other stems' chunks). One unlabeled chunk is separated and
    classified: a clean recording joins the matching candidate set as-is, a
    pseudo pair contributes both separated parts. One target and one
    residual candidate are then drawn, augmented, summed and normalized.
    """
    if not unlabeled:
        raise ValueError("unlabeled pool is empty")
    first = labeled.require(STEM_TYPES[0])[0]
    chunk_len = round(chunk_seconds * first.sample_rate)

    labeled_chunks = {
        stem: draw_chunk(labeled.require(stem), rng, chunk_len) for stem in STEM_TYPES
    }
    labeled_target = labeled_chunks[target_stem]
    labeled_residual = np.zeros_like(labeled_target)
    for stem in STEM_TYPES:
        if stem != target_stem:
            labeled_residual = labeled_residual + labeled_chunks[stem]

    mix_chunk = AudioTrack(
        data=draw_chunk(unlabeled, rng, chunk_len), sample_rate=first.sample_rate
    )
    sep_target, sep_residual = separator(mix_chunk)
    if sep_target.num_samples != mix_chunk.num_samples:
        raise ValueError("separator changed the chunk length")
    sample_class = classify_separated(mix_chunk, sep_target, sep_residual, threshold_db)

    target_candidates = [labeled_target]
    residual_candidates = [labeled_residual]
    if sample_class is SampleClass.CLEAN_TARGET:
        target_candidates.append(mix_chunk.data)
    elif sample_class is SampleClass.CLEAN_RESIDUAL:
        residual_candidates.append(mix_chunk.data)
    else:
        target_candidates.append(sep_target.data)
        residual_candidates.append(sep_residual.data)

    target = target_candidates[int(rng.integers(len(target_candidates)))]
    residual = residual_candidates[int(rng.integers(len(residual_candidates)))]
    example = build_example(
        [("target", target), ("residual", residual)],
        "target",
        rng,
        sample_rate=first.sample_rate,
    )
    return FinetuneExample(example=example, unlabeled_class=sample_class)


def should_replace_teacher(val_new: float, val_best: float) -> bool:
    """Swap the pseudo-label generator only on a strict validation gain."""
    return val_new > val_best
