"""Labeled reference-vector store with exact nearest-neighbor search.

The gallery is the "training set" of the engine: each entry is one
normalized feature vector plus its class label.  Queries are exact
Euclidean k-nearest-neighbor over a flat in-memory matrix; with tens to
a few thousand 63-dim vectors a linear scan is microseconds-scale and
needs no index structure.  Ties are broken by ascending entry id, so
results are fully deterministic.

Persistence is JSON Lines: a header record followed by one record per
entry, with floats serialized at full round-trip precision.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable

import numpy as np

from .errors import DimensionMismatch, EmptyGallery, FormatError
from .geometry import FeatureVector

FORMAT_NAME = "gesture-gallery"
FORMAT_VERSION = 1


@dataclass(frozen=True)
class GalleryEntry:
    id: int
    label: str
    vector: np.ndarray
    meta: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Neighbor:
    """One ranked query result."""

    id: int
    label: str
    distance: float


class Gallery:
    """Ordered collection of labeled vectors sharing one dimensionality.

    Concurrent reads are safe; add() and load() serialize through an
    internal lock and never expose a partially inserted entry.
    """

    def __init__(self, dim: int = 63):
        if dim < 1:
            raise ValueError("dim must be positive")
        self.dim = dim
        self._entries: list[GalleryEntry] = []
        self._matrix: np.ndarray | None = None
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._entries)

    @property
    def entries(self) -> tuple[GalleryEntry, ...]:
        return tuple(self._entries)

    def labels(self) -> dict[str, int]:
        """Per-label entry counts."""
        counts: dict[str, int] = {}
        for entry in self._entries:
            counts[entry.label] = counts.get(entry.label, 0) + 1
        return counts

    def add(self, label: str, vector, meta: dict | None = None) -> int:
        """Append a labeled vector; returns the assigned id (max id + 1, first 0)."""
        if not label:
            raise ValueError("label must be nonempty")
        if isinstance(vector, FeatureVector):
            values = vector.values
        else:
            values = np.asarray(vector, dtype=np.float64)
        if values.shape != (self.dim,):
            raise DimensionMismatch(
                f"vector has {values.size} values, gallery dimension is {self.dim}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("vector contains non-finite values")
        values = values.copy()
        values.flags.writeable = False
        with self._lock:
            next_id = self._entries[-1].id + 1 if self._entries else 0
            entry = GalleryEntry(next_id, label, values, dict(meta or {}))
            self._entries.append(entry)
            self._matrix = None
        return entry.id

    def _stacked(self) -> np.ndarray:
        with self._lock:
            if self._matrix is None or self._matrix.shape[0] != len(self._entries):
                self._matrix = np.array([e.vector for e in self._entries])
            return self._matrix

    def nearest(self, query, k: int = 1) -> list[Neighbor]:
        """The k entries nearest to the query under Euclidean distance.

        Results are in ascending distance order, ties broken by ascending
        entry id; fewer than k are returned if the gallery is smaller.
        Distances are exact (full scan, double precision).
        """
        if k < 1:
            raise ValueError("k must be at least 1")
        if isinstance(query, FeatureVector):
            q = query.values
        else:
            q = np.asarray(query, dtype=np.float64)
        if q.shape != (self.dim,):
            raise DimensionMismatch(
                f"query has {q.size} values, gallery dimension is {self.dim}"
            )
        entries = self._entries
        if not entries:
            raise EmptyGallery("gallery has no entries")
        matrix = self._stacked()
        distances = np.sqrt(((matrix - q) ** 2).sum(axis=1))
        # Stable sort on distance keeps insertion (= ascending id) order on ties.
        order = np.argsort(distances, kind="stable")[:k]
        return [
            Neighbor(entries[i].id, entries[i].label, float(distances[i])) for i in order
        ]

    # --- persistence ---

    def save(self, destination: str | Path | IO[str]) -> None:
        """Write the gallery as JSONL (header line, then one line per entry)."""
        if hasattr(destination, "write"):
            self._write(destination)
        else:
            with open(destination, "w", encoding="utf-8", newline="\n") as fh:
                self._write(fh)

    def _write(self, fh: IO[str]) -> None:
        header = {"format": FORMAT_NAME, "version": FORMAT_VERSION, "dim": self.dim}
        fh.write(json.dumps(header) + "\n")
        for entry in self._entries:
            record = {
                "id": entry.id,
                "label": entry.label,
                "vector": entry.vector.tolist(),
                "meta": entry.meta,
            }
            fh.write(json.dumps(record) + "\n")

    @classmethod
    def load(cls, source: str | Path | IO[str]) -> Gallery:
        """Read a gallery produced by save(); FormatError names the bad line."""
        if hasattr(source, "read"):
            return cls._read(source)
        with open(source, "r", encoding="utf-8") as fh:
            return cls._read(fh)

    @classmethod
    def _read(cls, fh: IO[str]) -> Gallery:
        lines = iter(enumerate(fh, start=1))
        try:
            lineno, first = next(lines)
        except StopIteration:
            raise FormatError("empty file, expected gallery header") from None
        header = _parse_json_line(first, lineno)
        if header.get("format") != FORMAT_NAME:
            raise FormatError(f"not a {FORMAT_NAME} file", lineno)
        if header.get("version") != FORMAT_VERSION:
            raise FormatError(f"unsupported version {header.get('version')!r}", lineno)
        dim = header.get("dim")
        if not isinstance(dim, int) or dim < 1:
            raise FormatError("header dim must be a positive integer", lineno)

        gallery = cls(dim=dim)
        last_id = -1
        for lineno, line in lines:
            if not line.strip():
                continue
            record = _parse_json_line(line, lineno)
            entry = _entry_from_record(record, dim, lineno)
            if entry.id <= last_id:
                raise FormatError(
                    f"entry id {entry.id} does not increase (previous {last_id})", lineno
                )
            last_id = entry.id
            gallery._entries.append(entry)
        return gallery


def _parse_json_line(line: str, lineno: int) -> dict:
    try:
        value = json.loads(line)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON ({exc.msg})", lineno) from None
    if not isinstance(value, dict):
        raise FormatError("expected a JSON object", lineno)
    return value


def _entry_from_record(record: dict, dim: int, lineno: int) -> GalleryEntry:
    try:
        entry_id = record["id"]
        label = record["label"]
        vector = record["vector"]
    except KeyError as exc:
        raise FormatError(f"missing field {exc.args[0]!r}", lineno) from None
    meta = record.get("meta", {})
    if not isinstance(entry_id, int):
        raise FormatError("id must be an integer", lineno)
    if not isinstance(label, str) or not label:
        raise FormatError("label must be a nonempty string", lineno)
    if not isinstance(meta, dict):
        raise FormatError("meta must be an object", lineno)
    if not isinstance(vector, list) or len(vector) != dim:
        raise FormatError(
            f"vector must have {dim} values, got "
            f"{len(vector) if isinstance(vector, list) else type(vector).__name__}",
            lineno,
        )
    values = np.array(vector, dtype=np.float64)
    if values.shape != (dim,) or not np.all(np.isfinite(values)):
        raise FormatError("vector values must be finite numbers", lineno)
    values.flags.writeable = False
    return GalleryEntry(entry_id, label, values, meta)


def build_gallery(items: Iterable[tuple[str, FeatureVector, dict | None]], dim: int = 63) -> Gallery:
    """Convenience constructor from (label, vector, meta) triples."""
    gallery = Gallery(dim=dim)
    for label, vector, meta in items:
        gallery.add(label, vector, meta)
    return gallery
