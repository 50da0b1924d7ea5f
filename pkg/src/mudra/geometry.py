"""Canonical-frame projection of 3D hand landmarks.

A hand is 21 ordered landmarks in image coordinates.  Four of them move
very little relative to each other regardless of the gesture being shown:
the wrist (0), the thumb base (1), the index base (5), and the pinky
base (17).  Pinning those four anchors to fixed target positions
determines a unique affine map (rotation, scaling, translation, and
reflection for mirrored hands), which we then apply to all 21 points.
Two frames showing the same gesture at different positions, sizes, or
angles land on near-identical coordinates afterwards.

Points are row vectors; the map is applied on the right in homogeneous
form: ``[x y z 1] @ T``.  Solving ``S_h @ T = P_h`` for the stacked
anchor rows gives T directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import AnchorDegenerate, SingularAnchors

# Landmark indices of the anchors, in anchor-row order.
ANCHOR_INDICES = (0, 1, 5, 17)

HANDEDNESS_VALUES = ("Left", "Right", "Unknown")

# |det| of the homogenized 4x4 below this is treated as affinely dependent.
DEGENERACY_EPS = 1e-12
# Offset added to all x coordinates on the retry pass for a singular solve.
RETRY_X_OFFSET = 1e-4
# Max per-component anchor mapping error accepted from any solve path.
ANCHOR_RESIDUAL_TOL = 1e-6

_AFFINE_COLUMN_TOL = 1e-9


def _as_array(values, shape: tuple[int, ...], what: str) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    if arr.shape != shape:
        raise ValueError(f"{what} must have shape {shape}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} contains non-finite values")
    arr.flags.writeable = False
    return arr


def _homogenize(points: np.ndarray) -> np.ndarray:
    return np.hstack([points, np.ones((points.shape[0], 1))])


@dataclass(frozen=True)
class HandLandmarks:
    """One detected hand: 21 ordered (x, y, z) image-frame points."""

    points: np.ndarray
    handedness: str = "Unknown"
    source_id: str = ""

    def __post_init__(self):
        object.__setattr__(self, "points", _as_array(self.points, (21, 3), "points"))
        if self.handedness not in HANDEDNESS_VALUES:
            raise ValueError(f"handedness must be one of {HANDEDNESS_VALUES}")


@dataclass(frozen=True)
class AnchorSet:
    """The four anchor points, as rows (wrist, thumb base, index base, pinky base).

    Construction rejects affinely dependent rows: the homogenized 4x4
    matrix must have |det| above ``eps``, otherwise no unique affine map
    through these points exists.
    """

    rows: np.ndarray
    eps: float = field(default=DEGENERACY_EPS, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "rows", _as_array(self.rows, (4, 3), "anchor rows"))
        if abs(np.linalg.det(self.homogeneous())) < self.eps:
            raise AnchorDegenerate(
                "anchor points are affinely dependent (homogeneous determinant below "
                f"{self.eps:g})"
            )

    def homogeneous(self) -> np.ndarray:
        """Rows with a trailing 1 appended: the 4x4 solve matrix."""
        return _homogenize(self.rows)


@dataclass(frozen=True)
class TransformMatrix:
    """A 4x4 affine map for homogeneous row vectors ``[x y z 1]``."""

    m: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "m", _as_array(self.m, (4, 4), "transform"))
        if np.max(np.abs(self.m[:, 3] - np.array([0.0, 0.0, 0.0, 1.0]))) > _AFFINE_COLUMN_TOL:
            raise ValueError("transform has a projective component")
        if abs(np.linalg.det(self.m)) <= DEGENERACY_EPS:
            raise ValueError("transform is not invertible")

    def apply(self, points: np.ndarray) -> np.ndarray:
        """Map an (n, 3) array of points through this transform."""
        return (_homogenize(np.asarray(points, dtype=np.float64)) @ self.m)[:, :3]


@dataclass(frozen=True)
class FeatureVector:
    """63 values: the row-major flattening of 21 normalized points."""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _as_array(self.values, (63,), "feature vector"))

    def as_points(self) -> np.ndarray:
        """The un-flattened 21x3 view."""
        return self.values.reshape(21, 3)

    def tolist(self) -> list[float]:
        return self.values.tolist()


# Fixed anchor targets of the canonical frame: wrist bottom-center
# (x=0.5, y=0.75), thumb to the left, palm facing forward, hand size set
# by the fixed inter-anchor distances.
_DEFAULT_REFERENCE = (
    (0.5, 0.75, 0.0),
    (0.42, 0.7, -0.03),
    (0.4, 0.45, -0.01),
    (0.6, 0.5, -0.02),
)


def default_reference_anchors() -> AnchorSet:
    """The built-in canonical anchor targets.

    Callers may substitute their own AnchorSet to choose a different
    canonical placement; the constructor enforces affine independence.
    """
    return AnchorSet(np.array(_DEFAULT_REFERENCE))


def extract_anchors(frame: HandLandmarks) -> AnchorSet:
    """Pick the frame's anchor landmarks (indices 0, 1, 5, 17) as an AnchorSet.

    Raises AnchorDegenerate when the four points are affinely dependent
    even after the x-offset retry.
    """
    rows = frame.points[list(ANCHOR_INDICES)]
    try:
        return AnchorSet(rows)
    except AnchorDegenerate:
        retry = rows.copy()
        retry[:, 0] += RETRY_X_OFFSET
        try:
            return AnchorSet(retry)
        except AnchorDegenerate:
            raise AnchorDegenerate(
                f"frame {frame.source_id!r}: anchor landmarks 0/1/5/17 are affinely "
                "dependent"
            ) from None


def _solve(s_h: np.ndarray, p_h: np.ndarray) -> np.ndarray | None:
    if abs(np.linalg.det(s_h)) < DEGENERACY_EPS:
        return None
    return np.linalg.solve(s_h, p_h)


def _residual(s_h: np.ndarray, t: np.ndarray, p_h: np.ndarray) -> float:
    return float(np.max(np.abs(s_h @ t - p_h)))


def compute_transform(source: AnchorSet, reference: AnchorSet) -> TransformMatrix:
    """Solve for the affine map sending each source anchor to its reference anchor.

    Solve chain: direct 4x4 solve; retry once with a small x offset added
    to the source anchors; last, a least-squares solve.  Whatever path
    produced the candidate, it is accepted only if it reproduces the
    anchor correspondence to within ANCHOR_RESIDUAL_TOL per component;
    otherwise SingularAnchors is raised.
    """
    s_h = source.homogeneous()
    p_h = reference.homogeneous()

    t = _solve(s_h, p_h)
    if t is None or _residual(s_h, t, p_h) > ANCHOR_RESIDUAL_TOL:
        s_retry = s_h.copy()
        s_retry[:, 0] += RETRY_X_OFFSET
        t = _solve(s_retry, p_h)
        if t is None or _residual(s_h, t, p_h) > ANCHOR_RESIDUAL_TOL:
            t, _, _, _ = np.linalg.lstsq(s_h, p_h, rcond=None)
            if _residual(s_h, t, p_h) > ANCHOR_RESIDUAL_TOL:
                raise SingularAnchors(
                    "anchor correspondence has no affine solution within "
                    f"{ANCHOR_RESIDUAL_TOL:g}"
                )
    try:
        return TransformMatrix(t)
    except ValueError as exc:
        raise SingularAnchors(f"solved transform is not a valid affine map: {exc}") from None


def normalize(frame: HandLandmarks, reference: AnchorSet | None = None) -> FeatureVector:
    """Project all 21 landmarks of a frame into the canonical coordinate system.

    Returns the row-major 63-value flattening of the transformed points.
    The transformed anchor rows coincide with the reference anchors, and
    the output is invariant under any invertible affine map applied to
    the input frame.

    Raises AnchorDegenerate / SingularAnchors for frames whose anchors do
    not determine a transform.
    """
    if reference is None:
        reference = default_reference_anchors()
    transform = compute_transform(extract_anchors(frame), reference)
    return FeatureVector(transform.apply(frame.points).reshape(63))
