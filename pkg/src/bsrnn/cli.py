"""Command-line front end.

Every subcommand is a thin client of the HTTP service: by default the
service application is mounted in-process (no socket, same request/response
semantics), and --server redirects the same calls to a remote instance.
Since requests carry file paths, a remote server must share a filesystem
with the client.

Exit codes: 0 success, 1 runtime failure (one-line diagnostic on stderr),
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from typing import Any

import httpx

__all__ = ["main"]


class ServiceError(RuntimeError):
    pass


class Client:
    """Minimal JSON-over-HTTP caller with the in-process default."""

    def __init__(self, server: str | None):
        if server is None:
            with warnings.catch_warnings():
                # some environments warn about the test client's http stack
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

            from .service import create_app

            self._http: Any = TestClient(create_app())
        else:
            self._http = httpx.Client(base_url=server, timeout=600.0)

    def call(self, method: str, path: str, body: dict | None = None) -> dict:
        response = self._http.request(method, path, json=body)
        if response.status_code != 200:
            try:
                detail = response.json().get("detail", response.text)
            except ValueError:
                detail = response.text
            raise ServiceError(f"{path}: {detail}")
        return response.json()

    def get(self, path: str) -> dict:
        return self.call("GET", path)

    def post(self, path: str, body: dict) -> dict:
        return self.call("POST", path, body)


def _scheme_or_ledger(args: argparse.Namespace) -> dict:
    return {"name": args.scheme, "ledger": args.ledger}


def cmd_scheme_list(client: Client, args: argparse.Namespace) -> None:
    for row in client.get("/schemes")["schemes"]:
        print(f"{row['name']}\t{row['num_bands']}")


def cmd_scheme_show(client: Client, args: argparse.Namespace) -> None:
    resp = client.post("/schemes/compile", _scheme_or_ledger(args))
    if args.json:
        print(json.dumps(resp, indent=2))
        return
    print(f"name: {resp['name']}")
    print(f"bands: {resp['num_bands']}")
    print(f"bins: {resp['total_bins']}")
    print(f"ledger: {resp['ledger']}")
    for i, (start, width) in enumerate(resp["bands"]):
        print(f"  band {i}: bins [{start}, {start + width})")


def cmd_weights_init(client: Client, args: argparse.Namespace) -> None:
    body = {
        "out_path": args.out,
        "seed": args.seed,
        "feature_dim": args.feature_dim,
        "num_blocks": args.blocks,
        "lstm_hidden": args.hidden,
        "scheme": args.scheme,
        "ledger": args.ledger,
    }
    resp = client.post("/weights/init", body)
    print(
        f"wrote {resp['path']}: scheme {resp['scheme']} ({resp['num_bands']} bands), "
        f"{resp['tensor_count']} tensors, {resp['param_count']} parameters"
    )


def cmd_weights_info(client: Client, args: argparse.Namespace) -> None:
    resp = client.post("/weights/info", {"path": args.path})
    if args.json:
        print(json.dumps(resp, indent=2))
        return
    for key in (
        "path",
        "scheme",
        "ledger",
        "num_bands",
        "feature_dim",
        "num_blocks",
        "lstm_hidden",
        "tensor_count",
        "param_count",
    ):
        print(f"{key}: {resp[key]}")


def cmd_weights_probe(client: Client, args: argparse.Namespace) -> None:
    resp = client.post(
        "/weights/probe",
        {"weights_path": args.weights, "probe_path": args.probe, "out_path": args.out},
    )
    print(f"wrote {resp['out_path']}: {resp['bins']}x{resp['frames']} mask")


def cmd_separate(client: Client, args: argparse.Namespace) -> None:
    resp = client.post(
        "/separate",
        {
            "weights_path": args.weights,
            "in_path": args.in_path,
            "out_path": args.out,
            "chunk_seconds": args.chunk,
            "hop_seconds": args.hop,
            "threads": args.threads,
            "encoding": args.encoding,
        },
    )
    print(f"wrote {resp['out_path']}: {resp['channels']} ch, {resp['samples']} samples")


def cmd_sad(client: Client, args: argparse.Namespace) -> None:
    resp = client.post(
        "/sad",
        {
            "in_path": args.in_path,
            "segment_seconds": args.segment_seconds,
            "out_dir": args.out_dir,
        },
    )
    for seg in resp["segments"]:
        print(f"{seg['start']}\t{seg['length']}")
    for path in resp["written"]:
        print(f"wrote {path}", file=sys.stderr)


def cmd_mix(client: Client, args: argparse.Namespace) -> None:
    resp = client.post(
        "/mix",
        {
            "stems_dir": args.stems_dir,
            "target": args.target,
            "out_dir": args.out_dir,
            "count": args.count,
            "seed": args.seed,
            "chunk_seconds": args.chunk,
        },
    )
    print(f"wrote {len(resp['examples'])} examples, manifest {resp['manifest_path']}")


def cmd_semisample(client: Client, args: argparse.Namespace) -> None:
    resp = client.post(
        "/semisample",
        {
            "labeled_dir": args.labeled_dir,
            "unlabeled_dir": args.unlabeled_dir,
            "weights_path": args.weights,
            "target": args.target,
            "out_dir": args.out_dir,
            "threshold_db": args.threshold_db,
            "count": args.count,
            "seed": args.seed,
            "chunk_seconds": args.chunk,
        },
    )
    for row in resp["examples"]:
        print(f"{row['index']}\t{row['unlabeled_class']}")
    print(f"wrote {len(resp['examples'])} examples, manifest {resp['manifest_path']}")


def cmd_eval(client: Client, args: argparse.Namespace) -> None:
    resp = client.post(
        "/eval", {"ref_dir": args.ref_dir, "est_dir": args.est_dir, "metric": args.metric}
    )
    print(resp["tsv"], end="")


def cmd_serve(client: Client, args: argparse.Namespace) -> None:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)


def _add_scheme_source(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--scheme", help="builtin band-scheme name")
    group.add_argument("--ledger", help='custom layout, e.g. "1000:100,8000:1000 one-subband"')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bsrnn", description=__doc__)
    parser.add_argument("--server", help="base URL of a running service (default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    scheme = sub.add_parser("scheme", help="inspect band layouts")
    scheme_sub = scheme.add_subparsers(dest="action", required=True)
    p = scheme_sub.add_parser("list", help="builtin schemes and their band counts")
    p.set_defaults(func=cmd_scheme_list)
    p = scheme_sub.add_parser("show", help="full layout of one scheme")
    _add_scheme_source(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_scheme_show)

    weights = sub.add_parser("weights", help="create and inspect weight files")
    weights_sub = weights.add_subparsers(dest="action", required=True)
    p = weights_sub.add_parser("init", help="write seeded random weights")
    _add_scheme_source(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--feature-dim", type=int, default=128)
    p.add_argument("--blocks", type=int, default=12)
    p.add_argument("--hidden", type=int, default=256)
    p.set_defaults(func=cmd_weights_init)
    p = weights_sub.add_parser("info", help="summarize a weight file")
    p.add_argument("path")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_weights_info)
    p = weights_sub.add_parser("probe", help="run the net on a stored spectrogram")
    p.add_argument("--weights", required=True)
    p.add_argument("--probe", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_weights_probe)

    p = sub.add_parser("separate", help="separate a full song")
    p.add_argument("--weights", required=True)
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--chunk", type=float, default=3.0, help="chunk length, seconds")
    p.add_argument("--hop", type=float, default=0.5, help="chunk hop, seconds")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--encoding", choices=("pcm16", "pcm24", "float32"), default="float32")
    p.set_defaults(func=cmd_separate)

    p = sub.add_parser("sad", help="list salient segments of a track")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--segment-seconds", type=float, default=6.0)
    p.add_argument("--out-dir", help="also write each segment as a WAV")
    p.set_defaults(func=cmd_sad)

    p = sub.add_parser("mix", help="simulate supervised training examples")
    p.add_argument("--stems-dir", required=True)
    p.add_argument("--target", required=True, choices=("vocal", "bass", "drum", "other"))
    p.add_argument("--out-dir", required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--chunk", type=float, default=3.0)
    p.set_defaults(func=cmd_mix)

    p = sub.add_parser("semisample", help="sample finetuning examples from unlabeled audio")
    p.add_argument("--labeled-dir", required=True)
    p.add_argument("--unlabeled-dir", required=True)
    p.add_argument("--weights", required=True)
    p.add_argument("--target", required=True, choices=("vocal", "bass", "drum", "other"))
    p.add_argument("--out-dir", required=True)
    p.add_argument("--threshold-db", type=float, default=30.0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--chunk", type=float, default=3.0)
    p.set_defaults(func=cmd_semisample)

    p = sub.add_parser("eval", help="score estimates against references")
    p.add_argument("--ref-dir", required=True)
    p.add_argument("--est-dir", required=True)
    p.add_argument("--metric", choices=("usdr", "csdr"), default="usdr")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    client = None if args.func is cmd_serve else Client(args.server)
    try:
        args.func(client, args)
    except (ServiceError, httpx.HTTPError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
