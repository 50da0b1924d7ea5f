"""Prediction logic on top of the gallery: thresholding, top-N, stream voting.

A single frame is classified by normalizing it and ranking its gallery
neighbors; matches farther than the distance threshold are dropped.  For
video/live streams, per-frame results are noisy, so a sliding window
keeps the top-N labels of the last W frames and emits the most frequent
label among those (up to N*W) votes.  Frames without a usable hand still
advance the window, so stale matches age out during occlusion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import AnchorDegenerate, SingularAnchors
from .gallery import Gallery
from .geometry import AnchorSet, HandLandmarks, normalize

# One frame's post-threshold matches, best first.
FrameMatches = tuple[tuple[str, float], ...]


@dataclass(frozen=True)
class ClassifierConfig:
    """Per-query settings: top-N size, distance threshold, stream window length.

    The threshold defaults to +inf (disabled); production deployments
    should set one explicitly to reject weak matches.
    """

    top_n: int = 1
    threshold: float = math.inf
    window: int = 10

    def __post_init__(self):
        if self.top_n < 1:
            raise ValueError("top_n must be at least 1")
        if self.window < 1:
            raise ValueError("window must be at least 1")
        if math.isnan(self.threshold) or self.threshold < 0:
            raise ValueError("threshold must be non-negative or +inf to disable")


@dataclass(frozen=True)
class Prediction:
    """Ranked matches for one frame plus the final outcome.

    ``label`` is None when nothing matched (empty gallery ranking after
    thresholding, or a rejected frame, in which case ``rejected_reason``
    carries the diagnostic).
    """

    ranked: FrameMatches = ()
    label: str | None = None
    rejected_reason: str | None = None
    source_id: str = ""

    @property
    def outcome(self) -> str:
        return "match" if self.label is not None else "no_match"

    def to_dict(self) -> dict:
        record: dict = {
            "source_id": self.source_id,
            "outcome": self.outcome,
            "label": self.label,
            "ranked": [{"label": lbl, "distance": dist} for lbl, dist in self.ranked],
        }
        if self.rejected_reason is not None:
            record["rejected_reason"] = self.rejected_reason
        return record


def classify(
    gallery: Gallery,
    frame: HandLandmarks,
    reference: AnchorSet | None = None,
    config: ClassifierConfig = ClassifierConfig(),
) -> Prediction:
    """Classify one frame against the gallery.

    Geometry failures (degenerate or unsolvable anchors) do not raise;
    they yield a no-match Prediction with the cause in rejected_reason.
    """
    try:
        vector = normalize(frame, reference)
    except (AnchorDegenerate, SingularAnchors) as exc:
        return Prediction(rejected_reason=str(exc), source_id=frame.source_id)
    neighbors = gallery.nearest(vector, k=config.top_n)
    ranked = tuple(
        (n.label, n.distance) for n in neighbors if n.distance <= config.threshold
    )
    return Prediction(
        ranked=ranked,
        label=ranked[0][0] if ranked else None,
        source_id=frame.source_id,
    )


@dataclass(frozen=True)
class StreamState:
    """Sliding window over the last ``capacity`` frames' match lists (oldest first)."""

    window: tuple[FrameMatches, ...] = ()
    capacity: int = 10
    top_n: int = 1

    @classmethod
    def initial(cls, config: ClassifierConfig) -> StreamState:
        return cls(window=(), capacity=config.window, top_n=config.top_n)

    def push(self, matches: FrameMatches) -> StreamState:
        window = (self.window + (matches,))[-self.capacity :]
        return StreamState(window=window, capacity=self.capacity, top_n=self.top_n)


def window_vote(window: tuple[FrameMatches, ...]) -> str | None:
    """Most frequent label among all windowed matches; None for an empty window.

    Frequency ties go to the label with the smallest distance seen in
    the window, then to the lexicographically smallest label.
    """
    counts: dict[str, int] = {}
    best: dict[str, float] = {}
    for matches in window:
        for label, distance in matches:
            counts[label] = counts.get(label, 0) + 1
            if label not in best or distance < best[label]:
                best[label] = distance
    if not counts:
        return None
    return min(counts, key=lambda label: (-counts[label], best[label], label))


def stream_step(
    state: StreamState,
    gallery: Gallery,
    frame: HandLandmarks,
    reference: AnchorSet | None = None,
    config: ClassifierConfig = ClassifierConfig(),
) -> tuple[StreamState, Prediction]:
    """Advance the window with one frame and emit the smoothed prediction.

    The frame's post-threshold top-N enters the window (empty for
    rejected frames, which still advance it); the emitted label is the
    window vote, independent of this frame alone.
    """
    current = classify(gallery, frame, reference, config)
    next_state = state.push(current.ranked)
    return next_state, Prediction(
        ranked=current.ranked,
        label=window_vote(next_state.window),
        rejected_reason=current.rejected_reason,
        source_id=frame.source_id,
    )
