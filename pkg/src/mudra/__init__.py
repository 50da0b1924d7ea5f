"""Hand-gesture classification from 3D pose landmarks.

Frames are normalized into a canonical coordinate system by a
dynamically solved 4-anchor affine transform, flattened to 63-dim
feature vectors, and matched against a labeled gallery by exact
Euclidean nearest neighbor, with thresholding, top-N ranking, and
sliding-window vote smoothing for streams.
"""

from .classify import ClassifierConfig, Prediction, StreamState, classify, stream_step, window_vote
from .dataset import DatasetManifest, ManifestRecord, frame_to_record, parse_frame_record, read_frames
from .errors import (
    AnchorDegenerate,
    DimensionMismatch,
    EmptyGallery,
    EmptyTest,
    EmptyTrain,
    FormatError,
    InsufficientSamples,
    MudraError,
    SingularAnchors,
)
from .evaluate import EvalReport, SplitSpec, evaluate, make_split, report_render
from .gallery import Gallery, GalleryEntry, Neighbor
from .geometry import (
    ANCHOR_INDICES,
    AnchorSet,
    FeatureVector,
    HandLandmarks,
    TransformMatrix,
    compute_transform,
    default_reference_anchors,
    extract_anchors,
    normalize,
)

__version__ = "0.1.0"

__all__ = [
    "ANCHOR_INDICES",
    "AnchorDegenerate",
    "AnchorSet",
    "ClassifierConfig",
    "DatasetManifest",
    "DimensionMismatch",
    "EmptyGallery",
    "EmptyTest",
    "EmptyTrain",
    "EvalReport",
    "FeatureVector",
    "FormatError",
    "Gallery",
    "GalleryEntry",
    "HandLandmarks",
    "InsufficientSamples",
    "ManifestRecord",
    "MudraError",
    "Neighbor",
    "Prediction",
    "SingularAnchors",
    "SplitSpec",
    "StreamState",
    "TransformMatrix",
    "classify",
    "compute_transform",
    "default_reference_anchors",
    "evaluate",
    "extract_anchors",
    "frame_to_record",
    "make_split",
    "normalize",
    "parse_frame_record",
    "read_frames",
    "report_render",
    "stream_step",
    "window_vote",
]
