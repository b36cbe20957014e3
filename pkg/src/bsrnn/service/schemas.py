"""Request and response bodies for the HTTP service.

All file and directory fields are paths on the server's filesystem; the
service reads and writes audio and weights in place rather than streaming
multi-hundred-megabyte payloads through request bodies.
"""

from __future__ import annotations

from pydantic import BaseModel


class SchemeSummary(BaseModel):
    name: str
    num_bands: int


class SchemeListResponse(BaseModel):
    schemes: list[SchemeSummary]


class SchemeCompileRequest(BaseModel):
    name: str | None = None
    ledger: str | None = None


class SchemeCompileResponse(BaseModel):
    name: str
    num_bands: int
    total_bins: int
    ledger: str
    bands: list[tuple[int, int]]


class WeightsInitRequest(BaseModel):
    out_path: str
    scheme: str | None = None
    ledger: str | None = None
    seed: int = 0
    feature_dim: int = 128
    num_blocks: int = 12
    lstm_hidden: int = 256


class WeightsInfoRequest(BaseModel):
    path: str


class WeightsInfoResponse(BaseModel):
    path: str
    scheme: str
    ledger: str
    num_bands: int
    feature_dim: int
    num_blocks: int
    lstm_hidden: int
    tensor_count: int
    param_count: int


class WeightsProbeRequest(BaseModel):
    weights_path: str
    probe_path: str
    out_path: str


class WeightsProbeResponse(BaseModel):
    out_path: str
    bins: int
    frames: int


class SeparateRequest(BaseModel):
    weights_path: str
    in_path: str
    out_path: str
    chunk_seconds: float = 3.0
    hop_seconds: float = 0.5
    threads: int = 1
    encoding: str = "float32"


class SeparateResponse(BaseModel):
    out_path: str
    channels: int
    samples: int


class SadRequest(BaseModel):
    in_path: str
    segment_seconds: float = 6.0
    out_dir: str | None = None


class SadSegment(BaseModel):
    start: int
    length: int


class SadResponse(BaseModel):
    segments: list[SadSegment]
    written: list[str]


class MixRequest(BaseModel):
    stems_dir: str
    target: str
    out_dir: str
    count: int = 1
    seed: int = 0
    chunk_seconds: float = 3.0


class ExampleRow(BaseModel):
    index: int
    seed: int
    mixture_path: str
    target_path: str
    gain_db: dict[str, float]
    dropped: dict[str, bool]
    degenerate: bool
    unlabeled_class: str | None = None


class ExamplesResponse(BaseModel):
    examples: list[ExampleRow]
    manifest_path: str


class SemisampleRequest(BaseModel):
    labeled_dir: str
    unlabeled_dir: str
    weights_path: str
    target: str
    out_dir: str
    threshold_db: float = 30.0
    count: int = 1
    seed: int = 0
    chunk_seconds: float = 3.0


class EvalRequest(BaseModel):
    ref_dir: str
    est_dir: str
    metric: str = "usdr"


# None stands for an infinite SDR: strict JSON has no Infinity literal
class EvalRow(BaseModel):
    name: str
    value: float | None


class EvalResponse(BaseModel):
    rows: list[EvalRow]
    aggregate: float | None
    tsv: str
