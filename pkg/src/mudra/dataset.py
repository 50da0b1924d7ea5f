"""Landmark frame records and dataset manifests (JSON Lines).

A frame record is one detected hand:

    {"source_id": "...", "landmarks": [[x, y, z] * 21],
     "handedness": "Left"|"Right"|"Unknown", "timestamp_ms": 123.0}

A manifest labels frames for enrollment/evaluation; each line carries the
inline landmarks or a path to a frame file (resolved relative to the
manifest's directory):

    {"source_id": "...", "label": "...", "landmarks": [[...]]}
    {"source_id": "...", "label": "...", "landmarks_file": "frames/a.json"}

A manifest may start with an optional header object ({"format":
"gesture-manifest", ...}); extractors use it to record provenance such as
the pose-model version, and the parser skips it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterator

from .errors import FormatError
from .geometry import HANDEDNESS_VALUES, HandLandmarks

MANIFEST_FORMAT = "gesture-manifest"


def parse_frame_record(record: dict, lineno: int | None = None) -> HandLandmarks:
    """Build HandLandmarks from a frame (or inline-manifest) record."""
    landmarks = record.get("landmarks")
    if not isinstance(landmarks, list) or len(landmarks) != 21:
        raise FormatError("landmarks must be a list of 21 [x, y, z] points", lineno)
    handedness = record.get("handedness", "Unknown")
    if handedness not in HANDEDNESS_VALUES:
        raise FormatError(f"handedness must be one of {HANDEDNESS_VALUES}", lineno)
    source_id = record.get("source_id", "")
    if not isinstance(source_id, str):
        raise FormatError("source_id must be a string", lineno)
    try:
        return HandLandmarks(landmarks, handedness=handedness, source_id=source_id)
    except ValueError as exc:
        raise FormatError(str(exc), lineno) from None


def frame_to_record(
    frame: HandLandmarks, label: str | None = None, timestamp_ms: float | None = None
) -> dict:
    record: dict = {
        "source_id": frame.source_id,
        "landmarks": frame.points.tolist(),
        "handedness": frame.handedness,
    }
    if label is not None:
        record["label"] = label
    if timestamp_ms is not None:
        record["timestamp_ms"] = timestamp_ms
    return record


def _object_lines(fh: IO[str]) -> Iterator[tuple[int, dict]]:
    for lineno, line in enumerate(fh, start=1):
        if not line.strip():
            continue
        try:
            value = json.loads(line)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON ({exc.msg})", lineno) from None
        if not isinstance(value, dict):
            raise FormatError("expected a JSON object", lineno)
        yield lineno, value


def read_frames(source: str | Path | IO[str]) -> list[HandLandmarks]:
    """All frame records in a JSON Lines file (header line allowed and skipped)."""
    if hasattr(source, "read"):
        return [frame for _, frame in iter_frames(source)]
    with open(source, "r", encoding="utf-8") as fh:
        return [frame for _, frame in iter_frames(fh)]


def iter_frames(fh: IO[str]) -> Iterator[tuple[int, HandLandmarks]]:
    for lineno, record in _object_lines(fh):
        if lineno == 1 and "format" in record and "landmarks" not in record:
            continue
        yield lineno, parse_frame_record(record, lineno)


@dataclass(frozen=True)
class ManifestRecord:
    """One labeled sample: inline landmarks or a pointer to a frame file."""

    source_id: str
    label: str
    landmarks: HandLandmarks | None = None
    landmarks_file: str | None = None

    def resolve(self, base_dir: Path | None = None) -> HandLandmarks:
        """The record's landmarks, loading the referenced file if needed."""
        if self.landmarks is not None:
            return self.landmarks
        path = Path(self.landmarks_file)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        with open(path, "r", encoding="utf-8") as fh:
            for _, frame in iter_frames(fh):
                return frame
        raise FormatError(f"no frame record in {path}")

    def to_record(self) -> dict:
        if self.landmarks is not None:
            record = frame_to_record(self.landmarks, label=self.label)
            record["source_id"] = self.source_id
            return record
        return {
            "source_id": self.source_id,
            "label": self.label,
            "landmarks_file": self.landmarks_file,
        }


@dataclass(frozen=True)
class DatasetManifest:
    """Ordered labeled records plus the class set they must belong to."""

    records: tuple[ManifestRecord, ...]
    classes: tuple[str, ...] = ()
    base_dir: Path | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        declared = tuple(self.classes) or tuple(sorted({r.label for r in self.records}))
        object.__setattr__(self, "classes", declared)
        allowed = set(declared)
        for record in self.records:
            if record.label not in allowed:
                raise ValueError(
                    f"record {record.source_id!r} has label {record.label!r} "
                    "outside the declared class set"
                )

    def __len__(self) -> int:
        return len(self.records)

    def class_counts(self) -> dict[str, int]:
        counts = {label: 0 for label in self.classes}
        for record in self.records:
            counts[record.label] += 1
        return counts

    def filter(self, classes) -> DatasetManifest:
        """Restrict to the given labels (order-preserving)."""
        keep = tuple(classes)
        missing = set(keep) - set(self.classes)
        if missing:
            raise ValueError(f"classes not in manifest: {sorted(missing)}")
        records = tuple(r for r in self.records if r.label in set(keep))
        return DatasetManifest(records, classes=keep, base_dir=self.base_dir)

    @classmethod
    def load(cls, source: str | Path | IO[str]) -> DatasetManifest:
        if hasattr(source, "read"):
            return cls._read(source, base_dir=None)
        path = Path(source)
        with open(path, "r", encoding="utf-8") as fh:
            return cls._read(fh, base_dir=path.parent)

    @classmethod
    def _read(cls, fh: IO[str], base_dir: Path | None) -> DatasetManifest:
        records = []
        for lineno, obj in _object_lines(fh):
            if lineno == 1 and obj.get("format") == MANIFEST_FORMAT:
                continue
            records.append(_manifest_record(obj, lineno))
        return cls(tuple(records), base_dir=base_dir)

    def save(self, destination: str | Path | IO[str]) -> None:
        if hasattr(destination, "write"):
            self._write(destination)
        else:
            with open(destination, "w", encoding="utf-8", newline="\n") as fh:
                self._write(fh)

    def _write(self, fh: IO[str]) -> None:
        for record in self.records:
            fh.write(json.dumps(record.to_record()) + "\n")


def _manifest_record(obj: dict, lineno: int) -> ManifestRecord:
    label = obj.get("label")
    if not isinstance(label, str) or not label:
        raise FormatError("label must be a nonempty string", lineno)
    source_id = obj.get("source_id")
    if not isinstance(source_id, str) or not source_id:
        raise FormatError("source_id must be a nonempty string", lineno)
    has_file = "landmarks_file" in obj
    has_inline = "landmarks" in obj
    if has_file == has_inline:
        raise FormatError("record needs exactly one of landmarks / landmarks_file", lineno)
    if has_file:
        path = obj["landmarks_file"]
        if not isinstance(path, str) or not path:
            raise FormatError("landmarks_file must be a nonempty path", lineno)
        return ManifestRecord(source_id, label, landmarks_file=path)
    return ManifestRecord(source_id, label, landmarks=parse_frame_record(obj, lineno))
