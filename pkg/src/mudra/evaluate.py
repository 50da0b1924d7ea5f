"""Split generation and accuracy evaluation.

Splits are seeded and deterministic: per-class-k draws exactly k train
samples per class uniformly at random, fraction splits are stratified
per class.  Evaluation enrolls the train side into a fresh gallery and
classifies every test record with top-1 and the threshold disabled.
Samples whose landmarks are degenerate are tallied in a dedicated
rejected column and excluded from the accuracy denominator, so the
reported denominator is always transparent.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .classify import ClassifierConfig, classify
from .dataset import DatasetManifest
from .errors import AnchorDegenerate, EmptyTest, EmptyTrain, InsufficientSamples, SingularAnchors
from .gallery import Gallery
from .geometry import AnchorSet, normalize

REJECTED_COLUMN = "rejected"


@dataclass(frozen=True)
class SplitSpec:
    """How to cut a manifest into train/test.

    Exactly one of ``per_class`` (k train samples per class) or
    ``fraction`` (train share in (0, 1)) must be set.  ``classes``
    optionally restricts the split to a label subset first.
    """

    per_class: int | None = None
    fraction: float | None = None
    seed: int = 42
    classes: tuple[str, ...] | None = None

    def __post_init__(self):
        if (self.per_class is None) == (self.fraction is None):
            raise ValueError("set exactly one of per_class / fraction")
        if self.per_class is not None and self.per_class < 1:
            raise ValueError("per_class must be at least 1")
        if self.fraction is not None and not 0.0 < self.fraction < 1.0:
            raise ValueError("fraction must be in (0, 1)")
        if self.classes is not None:
            object.__setattr__(self, "classes", tuple(self.classes))

    def describe(self) -> str:
        mode = (
            f"per_class={self.per_class}"
            if self.per_class is not None
            else f"fraction={self.fraction}"
        )
        scope = f", classes={len(self.classes)}" if self.classes is not None else ""
        return f"{mode}, seed={self.seed}{scope}"


def make_split(
    manifest: DatasetManifest, spec: SplitSpec
) -> tuple[DatasetManifest, DatasetManifest]:
    """Deterministic disjoint train/test manifests covering the (filtered) input."""
    if spec.classes is not None:
        manifest = manifest.filter(spec.classes)
    by_class: dict[str, list[int]] = {label: [] for label in manifest.classes}
    for index, record in enumerate(manifest.records):
        by_class[record.label].append(index)

    rng = np.random.default_rng(spec.seed)
    train_indices: list[int] = []
    test_indices: list[int] = []
    for label in sorted(manifest.classes):
        indices = by_class[label]
        n = len(indices)
        if spec.per_class is not None:
            n_train = spec.per_class
            if n <= n_train:
                raise InsufficientSamples(label, n, n_train)
        else:
            if n < 2:
                raise InsufficientSamples(label, n, 1)
            n_train = min(n - 1, max(1, math.floor(spec.fraction * n)))
        order = rng.permutation(n)
        chosen = set(order[:n_train].tolist())
        for position, index in enumerate(indices):
            (train_indices if position in chosen else test_indices).append(index)

    def subset(indices: list[int]) -> DatasetManifest:
        records = tuple(manifest.records[i] for i in sorted(indices))
        return DatasetManifest(records, classes=manifest.classes, base_dir=manifest.base_dir)

    return subset(train_indices), subset(test_indices)


@dataclass(frozen=True)
class EvalReport:
    """Confusion counts and derived metrics for one train/test run.

    ``confusion`` rows follow ``classes`` order (true label); columns are
    the same classes plus a trailing rejected/no-match column.  Row sums
    equal per-class test counts; accuracy is over scored (non-rejected)
    samples only.
    """

    classes: tuple[str, ...]
    confusion: np.ndarray
    accuracy: float
    precision: dict[str, float]
    recall: dict[str, float]
    train_size: int
    test_size: int
    train_rejected: tuple[str, ...]
    test_rejected: tuple[str, ...]
    seed: int | None = None
    split: str | None = None

    @property
    def scored(self) -> int:
        return self.test_size - int(self.confusion[:, -1].sum())

    def to_dict(self) -> dict:
        return {
            "classes": list(self.classes),
            "confusion": self.confusion.tolist(),
            "accuracy": self.accuracy,
            "precision": dict(self.precision),
            "recall": dict(self.recall),
            "train_size": self.train_size,
            "test_size": self.test_size,
            "scored": self.scored,
            "train_rejected": list(self.train_rejected),
            "test_rejected": list(self.test_rejected),
            "seed": self.seed,
            "split": self.split,
        }


def evaluate(
    train: DatasetManifest,
    test: DatasetManifest,
    reference: AnchorSet | None = None,
    seed: int | None = None,
    split: str | None = None,
) -> EvalReport:
    """Enroll the train manifest, classify the test manifest, tally the result."""
    if len(train) == 0:
        raise EmptyTrain("training manifest has no records")
    if len(test) == 0:
        raise EmptyTest("test manifest has no records")

    classes = tuple(sorted(set(train.classes) | set(test.classes)))
    column = {label: i for i, label in enumerate(classes)}
    rejected_col = len(classes)

    gallery = Gallery(dim=63)
    train_rejected: list[str] = []
    for record in train.records:
        frame = record.resolve(train.base_dir)
        try:
            vector = normalize(frame, reference)
        except (AnchorDegenerate, SingularAnchors):
            train_rejected.append(record.source_id)
            continue
        gallery.add(record.label, vector, {"source_id": record.source_id})
    if len(gallery) == 0:
        raise EmptyTrain("all training records were rejected")

    config = ClassifierConfig(top_n=1, threshold=math.inf)
    confusion = np.zeros((len(classes), len(classes) + 1), dtype=np.int64)
    test_rejected: list[str] = []
    for record in test.records:
        frame = record.resolve(test.base_dir)
        prediction = classify(gallery, frame, reference, config)
        row = column[record.label]
        if prediction.label is None:
            confusion[row, rejected_col] += 1
            test_rejected.append(record.source_id)
        else:
            confusion[row, column[prediction.label]] += 1

    scored = int(confusion[:, :rejected_col].sum())
    correct = int(np.trace(confusion[:, :rejected_col]))
    accuracy = correct / scored if scored else 0.0
    precision = {}
    recall = {}
    for label in classes:
        i = column[label]
        predicted = int(confusion[:, i].sum())
        actual = int(confusion[i, :rejected_col].sum())
        precision[label] = confusion[i, i] / predicted if predicted else 0.0
        recall[label] = confusion[i, i] / actual if actual else 0.0

    confusion.flags.writeable = False
    return EvalReport(
        classes=classes,
        confusion=confusion,
        accuracy=accuracy,
        precision=precision,
        recall=recall,
        train_size=len(train),
        test_size=len(test),
        train_rejected=tuple(train_rejected),
        test_rejected=tuple(test_rejected),
        seed=seed,
        split=split,
    )


def report_render(report: EvalReport, format: str = "text") -> str:
    """Render a report as an aligned table, stable JSON, or a confusion-grid CSV."""
    if format == "json":
        return json.dumps(report.to_dict(), indent=2, sort_keys=True)
    if format == "csv":
        return _render_csv(report)
    if format == "text":
        return _render_text(report)
    raise ValueError(f"unknown report format {format!r}")


def _render_csv(report: EvalReport) -> str:
    out = io.StringIO()
    columns = list(report.classes) + [REJECTED_COLUMN]
    out.write(",".join(["true\\predicted"] + columns) + "\n")
    for i, label in enumerate(report.classes):
        out.write(",".join([label] + [str(int(v)) for v in report.confusion[i]]) + "\n")
    return out.getvalue()


def _render_text(report: EvalReport) -> str:
    lines = []
    lines.append(f"train {report.train_size} / test {report.test_size}"
                 + (f"  (split {report.split})" if report.split else ""))
    if report.seed is not None:
        lines.append(f"seed {report.seed}")
    lines.append(
        f"scored {report.scored}, rejected {len(report.test_rejected)}"
        + (f", train rejected {len(report.train_rejected)}" if report.train_rejected else "")
    )
    lines.append(f"accuracy {report.accuracy * 100:.2f}%")
    lines.append("")
    width = max([len(c) for c in report.classes] + [5])
    lines.append(f"{'class':<{width}}  {'n':>5}  {'correct':>7}  {'prec':>6}  {'recall':>6}")
    for i, label in enumerate(report.classes):
        actual = int(report.confusion[i, :-1].sum()) + int(report.confusion[i, -1])
        correct = int(report.confusion[i, i])
        lines.append(
            f"{label:<{width}}  {actual:>5}  {correct:>7}  "
            f"{report.precision[label]:>6.3f}  {report.recall[label]:>6.3f}"
        )
    return "\n".join(lines) + "\n"
