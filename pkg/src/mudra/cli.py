"""Command-line surface: thin bindings over the library.

Subcommands: enroll, classify, stream, split, eval, serve.
Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .classify import ClassifierConfig, StreamState, classify, stream_step
from .dataset import DatasetManifest, parse_frame_record, read_frames
from .errors import AnchorDegenerate, FormatError, MudraError, SingularAnchors
from .evaluate import SplitSpec, evaluate, make_split, report_render
from .gallery import Gallery
from .geometry import AnchorSet, default_reference_anchors, normalize

USAGE_ERROR = 1
DATA_ERROR = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; this tool reserves 2 for data errors.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def load_reference(path: str | None) -> AnchorSet:
    """Reference anchors from a JSON file ([[x,y,z]*4] or {"rows": ...})."""
    if path is None:
        return default_reference_anchors()
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    rows = data["rows"] if isinstance(data, dict) else data
    return AnchorSet(np.array(rows, dtype=np.float64))


def _classifier_config(args, window: int = 1) -> ClassifierConfig:
    threshold = math.inf if args.threshold is None else args.threshold
    return ClassifierConfig(top_n=args.n, threshold=threshold, window=window)


def _split_spec(args) -> SplitSpec:
    classes = tuple(args.classes.split(",")) if args.classes else None
    if args.k is not None:
        return SplitSpec(per_class=args.k, seed=args.seed, classes=classes)
    return SplitSpec(fraction=args.fraction, seed=args.seed, classes=classes)


def _prediction_line(prediction, output: str) -> str:
    if output == "json":
        return json.dumps(prediction.to_dict())
    if output == "csv":
        top = prediction.ranked[0] if prediction.ranked else ("", "")
        return ",".join(
            [
                prediction.source_id,
                prediction.outcome,
                prediction.label or "",
                str(top[0]),
                repr(top[1]) if prediction.ranked else "",
            ]
        )
    top = " ".join(f"{label}={distance:.6g}" for label, distance in prediction.ranked)
    return f"{prediction.source_id}\t{prediction.outcome}\t{prediction.label or '-'}\t{top}"


def cmd_enroll(args) -> int:
    manifest = DatasetManifest.load(args.manifest)
    if len(manifest) == 0:
        raise MudraError("no records in manifest")
    reference = load_reference(args.reference)
    gallery = Gallery(dim=63)
    rejected: list[str] = []
    for record in manifest.records:
        frame = record.resolve(manifest.base_dir)
        try:
            vector = normalize(frame, reference)
        except (AnchorDegenerate, SingularAnchors):
            rejected.append(record.source_id)
            continue
        gallery.add(record.label, vector, {"source_id": record.source_id})
    gallery.save(args.gallery)

    counts = gallery.labels()
    if args.output == "json":
        print(
            json.dumps(
                {
                    "gallery": args.gallery,
                    "enrolled": len(gallery),
                    "per_class": counts,
                    "rejected": rejected,
                }
            )
        )
    else:
        print(f"enrolled {len(gallery)} entries to {args.gallery}")
        for label in sorted(counts):
            print(f"  {label}  {counts[label]}")
        if rejected:
            print(f"rejected {len(rejected)}:")
            for source_id in rejected:
                print(f"  {source_id}")
    return 0


def cmd_classify(args) -> int:
    gallery = Gallery.load(args.gallery)
    reference = load_reference(args.reference)
    config = _classifier_config(args)
    if args.output == "csv":
        print("source_id,outcome,label,top_label,top_distance")
    for path in args.inputs:
        for frame in read_frames(path):
            prediction = classify(gallery, frame, reference, config)
            print(_prediction_line(prediction, args.output))
    return 0


def cmd_stream(args) -> int:
    gallery = Gallery.load(args.gallery)
    reference = load_reference(args.reference)
    config = _classifier_config(args, window=args.window)
    state = StreamState.initial(config)
    if args.output == "csv":
        print("source_id,outcome,label,top_label,top_distance", flush=True)
    for lineno, line in enumerate(sys.stdin, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            if not isinstance(record, dict):
                raise FormatError("expected a JSON object", lineno)
            if lineno == 1 and "format" in record and "landmarks" not in record:
                continue
            frame = parse_frame_record(record, lineno)
        except (json.JSONDecodeError, FormatError) as exc:
            print(f"skipping line {lineno}: {exc}", file=sys.stderr)
            continue
        state, prediction = stream_step(state, gallery, frame, reference, config)
        print(_prediction_line(prediction, args.output), flush=True)
    return 0


def cmd_split(args) -> int:
    manifest = DatasetManifest.load(args.manifest)
    spec = _split_spec(args)
    train, test = make_split(manifest, spec)
    for side, out_path in ((train, args.train_out), (test, args.test_out)):
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            for record in side.records:
                fh.write(record.source_id + "\n")
    if args.train_manifest:
        train.save(args.train_manifest)
    if args.test_manifest:
        test.save(args.test_manifest)
    summary = {
        "train_size": len(train),
        "test_size": len(test),
        "classes": len(train.classes),
        "seed": spec.seed,
    }
    if args.output == "json":
        print(json.dumps(summary))
    else:
        print(f"train {len(train)} / test {len(test)} over {len(train.classes)} classes (seed {spec.seed})")
    return 0


def cmd_eval(args) -> int:
    manifest = DatasetManifest.load(args.manifest)
    spec = _split_spec(args)
    train, test = make_split(manifest, spec)
    reference = load_reference(args.reference)
    report = evaluate(train, test, reference, seed=spec.seed, split=spec.describe())
    out = report_render(report, args.output)
    print(out, end="" if out.endswith("\n") else "\n")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import create_app

    app = create_app(gallery_path=args.gallery, reference=load_reference(args.reference))
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="mudra", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_reference(p):
        p.add_argument("--reference", help="JSON file with custom reference anchors (4x3)")

    def add_query_flags(p):
        p.add_argument("--n", type=int, default=1, help="top-N matches per frame")
        p.add_argument(
            "--threshold",
            type=_positive_float,
            default=None,
            help="max match distance (> 0); omit to disable",
        )
        p.add_argument("--output", choices=("text", "json", "csv"), default="text")

    p = sub.add_parser("enroll", help="build a gallery from a labeled manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--gallery", required=True)
    p.add_argument("--output", choices=("text", "json"), default="text")
    add_reference(p)
    p.set_defaults(func=cmd_enroll)

    p = sub.add_parser("classify", help="classify landmark frame files")
    p.add_argument("--gallery", required=True)
    add_query_flags(p)
    add_reference(p)
    p.add_argument("inputs", nargs="+", help="frame JSONL files")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("stream", help="smooth predictions over frame JSONL on stdin")
    p.add_argument("--gallery", required=True)
    p.add_argument("--window", type=int, default=10, help="vote window length W")
    add_query_flags(p)
    add_reference(p)
    p.set_defaults(func=cmd_stream)

    def add_split_flags(p):
        p.add_argument("--manifest", required=True)
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--k", type=int, help="train samples per class")
        group.add_argument("--fraction", type=float, help="train fraction in (0,1)")
        p.add_argument("--classes", help="comma-separated class subset")
        p.add_argument("--seed", type=int, default=42)

    p = sub.add_parser("split", help="write deterministic train/test source-id lists")
    add_split_flags(p)
    p.add_argument("--train-out", required=True)
    p.add_argument("--test-out", required=True)
    p.add_argument("--train-manifest", help="also write the train manifest here")
    p.add_argument("--test-manifest", help="also write the test manifest here")
    p.add_argument("--output", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("eval", help="split a manifest and report accuracy")
    add_split_flags(p)
    p.add_argument("--output", choices=("text", "json", "csv"), default="text")
    add_reference(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--gallery", help="gallery file to serve (fresh empty one if omitted)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    add_reference(p)
    p.set_defaults(func=cmd_serve)

    return parser


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("threshold must be > 0")
    return value


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage error or --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except MudraError as exc:
        print(f"mudra {args.command}: {exc}", file=sys.stderr)
        return DATA_ERROR
    except FileNotFoundError as exc:
        print(f"mudra {args.command}: {exc}", file=sys.stderr)
        return DATA_ERROR
    except ValueError as exc:
        print(f"mudra {args.command}: {exc}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
