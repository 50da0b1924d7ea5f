import json

import numpy as np
import pytest

from mudra.dataset import (
    DatasetManifest,
    ManifestRecord,
    frame_to_record,
    parse_frame_record,
    read_frames,
)
from mudra.errors import FormatError
from synth import random_frame


def write_manifest(path, lines):
    path.write_text("".join(json.dumps(line) + "\n" for line in lines))


class TestFrameRecords:
    def test_round_trip(self):
        frame = random_frame(np.random.default_rng(0), source_id="f1", handedness="Left")
        record = frame_to_record(frame, timestamp_ms=12.5)
        back = parse_frame_record(record)
        assert np.array_equal(back.points, frame.points)
        assert back.handedness == "Left"
        assert back.source_id == "f1"
        assert record["timestamp_ms"] == 12.5

    def test_label_included_when_given(self):
        frame = random_frame(np.random.default_rng(1))
        assert frame_to_record(frame, label="Pataka")["label"] == "Pataka"

    def test_wrong_landmark_count(self):
        with pytest.raises(FormatError):
            parse_frame_record({"landmarks": [[0, 0, 0]] * 20})

    def test_bad_handedness(self):
        with pytest.raises(FormatError):
            parse_frame_record({"landmarks": [[0, 0, 0]] * 21, "handedness": "left"})

    def test_read_frames_skips_header(self, tmp_path):
        frame = random_frame(np.random.default_rng(2), source_id="a")
        path = tmp_path / "frames.jsonl"
        write_manifest(
            path,
            [{"format": "gesture-manifest", "version": 1}, frame_to_record(frame)],
        )
        frames = read_frames(path)
        assert len(frames) == 1
        assert frames[0].source_id == "a"

    def test_read_frames_multiple(self, tmp_path):
        rng = np.random.default_rng(3)
        path = tmp_path / "frames.jsonl"
        write_manifest(path, [frame_to_record(random_frame(rng)) for _ in range(4)])
        assert len(read_frames(path)) == 4


class TestManifest:
    def test_inline_save_load_round_trip(self, tmp_path):
        rng = np.random.default_rng(4)
        records = tuple(
            ManifestRecord(f"s{i}", "A" if i % 2 else "B", landmarks=random_frame(rng, source_id=f"s{i}"))
            for i in range(6)
        )
        manifest = DatasetManifest(records)
        path = tmp_path / "m.jsonl"
        manifest.save(path)
        loaded = DatasetManifest.load(path)
        assert len(loaded) == 6
        assert loaded.classes == ("A", "B")
        for a, b in zip(manifest.records, loaded.records):
            assert (a.source_id, a.label) == (b.source_id, b.label)
            assert np.array_equal(a.landmarks.points, b.landmarks.points)

    def test_landmarks_file_resolved_relative_to_manifest(self, tmp_path):
        rng = np.random.default_rng(5)
        frame = random_frame(rng, source_id="f")
        frames_dir = tmp_path / "frames"
        frames_dir.mkdir()
        (frames_dir / "f.json").write_text(json.dumps(frame_to_record(frame)) + "\n")
        manifest_path = tmp_path / "m.jsonl"
        write_manifest(
            manifest_path,
            [{"source_id": "f", "label": "A", "landmarks_file": "frames/f.json"}],
        )
        loaded = DatasetManifest.load(manifest_path)
        resolved = loaded.records[0].resolve(loaded.base_dir)
        assert np.array_equal(resolved.points, frame.points)

    def test_header_line_skipped(self, tmp_path):
        rng = np.random.default_rng(6)
        frame = random_frame(rng, source_id="x")
        path = tmp_path / "m.jsonl"
        header = {"format": "gesture-manifest", "version": 1, "model": "stub-0"}
        record = frame_to_record(frame, label="A")
        record["source_id"] = "x"
        write_manifest(path, [header, record])
        assert len(DatasetManifest.load(path)) == 1

    def test_missing_label_names_line(self, tmp_path):
        path = tmp_path / "m.jsonl"
        write_manifest(path, [{"source_id": "a", "landmarks_file": "x.json"}])
        with pytest.raises(FormatError) as excinfo:
            DatasetManifest.load(path)
        assert excinfo.value.line == 1

    def test_both_landmark_forms_rejected(self, tmp_path):
        path = tmp_path / "m.jsonl"
        write_manifest(
            path,
            [
                {
                    "source_id": "a",
                    "label": "A",
                    "landmarks_file": "x.json",
                    "landmarks": [[0, 0, 0]] * 21,
                }
            ],
        )
        with pytest.raises(FormatError):
            DatasetManifest.load(path)

    def test_filter_preserves_order_and_restricts(self):
        rng = np.random.default_rng(7)
        records = tuple(
            ManifestRecord(f"s{i}", label, landmarks=random_frame(rng))
            for i, label in enumerate(["A", "B", "C", "A", "B"])
        )
        manifest = DatasetManifest(records)
        filtered = manifest.filter(["A", "C"])
        assert [r.source_id for r in filtered.records] == ["s0", "s2", "s3"]
        assert filtered.classes == ("A", "C")

    def test_filter_unknown_class(self):
        manifest = DatasetManifest(
            (ManifestRecord("s0", "A", landmarks=random_frame(np.random.default_rng(8))),)
        )
        with pytest.raises(ValueError):
            manifest.filter(["A", "Nope"])

    def test_declared_classes_enforced(self):
        record = ManifestRecord("s0", "A", landmarks=random_frame(np.random.default_rng(9)))
        with pytest.raises(ValueError):
            DatasetManifest((record,), classes=("B",))

    def test_class_counts(self):
        rng = np.random.default_rng(10)
        records = tuple(
            ManifestRecord(f"s{i}", label, landmarks=random_frame(rng))
            for i, label in enumerate(["A", "A", "B"])
        )
        assert DatasetManifest(records).class_counts() == {"A": 2, "B": 1}
