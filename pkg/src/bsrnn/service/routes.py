"""HTTP handlers; each one is a thin shim over the library."""

from __future__ import annotations

import math

from fastapi import APIRouter

from .. import bands, model, pipelines, sad, wavio, weights_io
from ..inference import InferenceConfig, model_spectrogram_fn, separate_track
from . import schemas

router = APIRouter()


@router.get("/health")
def health() -> dict:
    return {"status": "ok"}


@router.get("/schemes", response_model=schemas.SchemeListResponse)
def list_schemes() -> schemas.SchemeListResponse:
    summaries = [
        schemas.SchemeSummary(name=name, num_bands=bands.builtin_scheme(name).num_bands)
        for name in bands.BUILTIN_NAMES
    ]
    return schemas.SchemeListResponse(schemes=summaries)


def _resolve_scheme(name: str | None, ledger: str | None) -> bands.BandScheme:
    if (name is None) == (ledger is None):
        raise ValueError("exactly one of scheme name or ledger must be given")
    if name is not None:
        return bands.builtin_scheme(name)
    return bands.compile_scheme(ledger)


@router.post("/schemes/compile", response_model=schemas.SchemeCompileResponse)
def compile_scheme(req: schemas.SchemeCompileRequest) -> schemas.SchemeCompileResponse:
    scheme = _resolve_scheme(req.name, req.ledger)
    return schemas.SchemeCompileResponse(
        name=scheme.name,
        num_bands=scheme.num_bands,
        total_bins=scheme.total_bins,
        ledger=bands.format_ledger(scheme.ledger),
        bands=list(scheme.bands),
    )


@router.post("/weights/init", response_model=schemas.WeightsInfoResponse)
def weights_init(req: schemas.WeightsInitRequest) -> schemas.WeightsInfoResponse:
    scheme = _resolve_scheme(req.scheme, req.ledger)
    config = model.ModelConfig(
        scheme=scheme,
        feature_dim=req.feature_dim,
        num_blocks=req.num_blocks,
        lstm_hidden=req.lstm_hidden,
    )
    weights = model.init_weights(config, req.seed)
    weights_io.save_weights(req.out_path, weights, config)
    return schemas.WeightsInfoResponse(
        path=req.out_path,
        scheme=scheme.name,
        ledger=bands.format_ledger(scheme.ledger),
        num_bands=scheme.num_bands,
        feature_dim=config.feature_dim,
        num_blocks=config.num_blocks,
        lstm_hidden=config.lstm_hidden,
        tensor_count=len(weights.tensors),
        param_count=model.param_count(config),
    )


@router.post("/weights/info", response_model=schemas.WeightsInfoResponse)
def weights_info(req: schemas.WeightsInfoRequest) -> schemas.WeightsInfoResponse:
    weights, config = weights_io.load_weights(req.path)
    return schemas.WeightsInfoResponse(
        path=req.path,
        scheme=config.scheme.name,
        ledger=bands.format_ledger(config.scheme.ledger),
        num_bands=config.scheme.num_bands,
        feature_dim=config.feature_dim,
        num_blocks=config.num_blocks,
        lstm_hidden=config.lstm_hidden,
        tensor_count=len(weights.tensors),
        param_count=model.param_count(config),
    )


@router.post("/weights/probe", response_model=schemas.WeightsProbeResponse)
def weights_probe(req: schemas.WeightsProbeRequest) -> schemas.WeightsProbeResponse:
    """Run the network on a stored spectrogram and store the mask it emits."""
    weights, config = weights_io.load_weights(req.weights_path)
    spec, _ = weights_io.load_probe(req.probe_path)
    features = model.band_split_forward(spec, weights, config)
    features = model.band_seq_forward(features, weights, config)
    mask = model.mask_forward(features, weights, config, hop=spec.hop)
    weights_io.save_probe(req.out_path, mask, kind="mask")
    return schemas.WeightsProbeResponse(
        out_path=req.out_path, bins=mask.num_bins, frames=mask.num_frames
    )


@router.post("/separate", response_model=schemas.SeparateResponse)
def separate(req: schemas.SeparateRequest) -> schemas.SeparateResponse:
    weights, model_config = weights_io.load_weights(req.weights_path)
    track = wavio.read_wav(req.in_path)
    config = InferenceConfig(
        chunk_seconds=req.chunk_seconds,
        hop_seconds=req.hop_seconds,
        threads=req.threads,
    )
    result = separate_track(track, model_spectrogram_fn(weights, model_config), config)
    wavio.write_wav(req.out_path, result, encoding=req.encoding)
    return schemas.SeparateResponse(
        out_path=req.out_path, channels=result.channels, samples=result.num_samples
    )


@router.post("/sad", response_model=schemas.SadResponse)
def detect_salient(req: schemas.SadRequest) -> schemas.SadResponse:
    track = wavio.read_wav(req.in_path)
    segments = sad.detect_salient_segments(track, segment_seconds=req.segment_seconds)
    written = []
    if req.out_dir is not None:
        written = pipelines.write_sad_segments(track, segments, req.out_dir)
    return schemas.SadResponse(
        segments=[schemas.SadSegment(start=s.start, length=s.length) for s in segments],
        written=written,
    )


def _example_rows(records: list[pipelines.ExampleRecord]) -> list[schemas.ExampleRow]:
    return [
        schemas.ExampleRow(
            index=r.index,
            seed=r.seed,
            mixture_path=r.mixture_path,
            target_path=r.target_path,
            gain_db=r.gain_db,
            dropped=r.dropped,
            degenerate=r.degenerate,
            unlabeled_class=r.unlabeled_class,
        )
        for r in records
    ]


@router.post("/mix", response_model=schemas.ExamplesResponse)
def mix(req: schemas.MixRequest) -> schemas.ExamplesResponse:
    pool = pipelines.load_stem_pool(req.stems_dir)
    records = pipelines.run_mix(
        pool,
        req.target,
        count=req.count,
        seed=req.seed,
        out_dir=req.out_dir,
        chunk_seconds=req.chunk_seconds,
    )
    return schemas.ExamplesResponse(
        examples=_example_rows(records), manifest_path=f"{req.out_dir}/manifest.tsv"
    )


@router.post("/semisample", response_model=schemas.ExamplesResponse)
def semisample(req: schemas.SemisampleRequest) -> schemas.ExamplesResponse:
    pool = pipelines.load_stem_pool(req.labeled_dir)
    unlabeled = [track for _, track in pipelines.load_tracks(req.unlabeled_dir)]
    weights, model_config = weights_io.load_weights(req.weights_path)
    separator = pipelines.separator_from_fn(
        model_spectrogram_fn(weights, model_config), chunk_seconds=req.chunk_seconds
    )
    records = pipelines.run_semisample(
        pool,
        unlabeled,
        separator,
        req.target,
        count=req.count,
        seed=req.seed,
        out_dir=req.out_dir,
        chunk_seconds=req.chunk_seconds,
        threshold_db=req.threshold_db,
    )
    return schemas.ExamplesResponse(
        examples=_example_rows(records), manifest_path=f"{req.out_dir}/manifest.tsv"
    )


@router.post("/eval", response_model=schemas.EvalResponse)
def evaluate(req: schemas.EvalRequest) -> schemas.EvalResponse:
    rows, aggregate = pipelines.run_eval(req.ref_dir, req.est_dir, req.metric)
    return schemas.EvalResponse(
        rows=[
            schemas.EvalRow(name=n, value=None if math.isinf(v) else v)
            for n, v in rows
        ],
        aggregate=None if math.isinf(aggregate) else aggregate,
        tsv=pipelines.format_eval_tsv(rows, aggregate),
    )
