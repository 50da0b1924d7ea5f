import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mudra.errors import AnchorDegenerate, SingularAnchors
from mudra.geometry import (
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
from synth import (
    canonical_points,
    random_affine,
    random_anchorset,
    random_frame,
    transformed_frame,
)

REFERENCE_ROWS = np.array(
    [
        [0.5, 0.75, 0.0],
        [0.42, 0.7, -0.03],
        [0.4, 0.45, -0.01],
        [0.6, 0.5, -0.02],
    ]
)


def frame_with_anchor_rows(rows: np.ndarray, rng: np.random.Generator) -> HandLandmarks:
    pts = np.asarray(random_frame(rng).points).copy()
    pts[list(ANCHOR_INDICES)] = rows
    return HandLandmarks(pts)


class TestDefaultReference:
    def test_matches_fixed_values(self):
        assert np.array_equal(default_reference_anchors().rows, REFERENCE_ROWS)

    def test_wrist_centered_low_in_frame(self):
        rows = default_reference_anchors().rows
        assert rows[0, 0] == 0.5  # horizontal middle
        assert rows[0, 1] == 0.75  # lower half

    def test_affinely_independent(self):
        # constructor validates; a nonzero homogeneous determinant backs it up
        anchors = default_reference_anchors()
        assert abs(np.linalg.det(anchors.homogeneous())) > 1e-6


class TestAnchorSet:
    def test_rejects_coplanar_rows(self):
        rows = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]], dtype=float)
        with pytest.raises(AnchorDegenerate):
            AnchorSet(rows)

    def test_rejects_non_finite(self):
        rows = REFERENCE_ROWS.copy()
        rows[2, 1] = np.nan
        with pytest.raises(ValueError):
            AnchorSet(rows)

    def test_custom_rows_accepted(self):
        rows = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]], dtype=float)
        assert AnchorSet(rows).rows.shape == (4, 3)


class TestExtractAnchors:
    def test_reference_valued_frame_reproduces_reference(self):
        frame = frame_with_anchor_rows(REFERENCE_ROWS, np.random.default_rng(1))
        assert np.array_equal(extract_anchors(frame).rows, REFERENCE_ROWS)

    def test_row_two_is_landmark_five(self):
        frame = random_frame(np.random.default_rng(2))
        assert np.array_equal(extract_anchors(frame).rows[2], frame.points[5])

    def test_all_identical_points_degenerate(self):
        frame = HandLandmarks(np.full((21, 3), 0.25))
        with pytest.raises(AnchorDegenerate):
            extract_anchors(frame)


class TestComputeTransform:
    def test_source_equals_reference_gives_identity(self):
        anchors = default_reference_anchors()
        t = compute_transform(anchors, anchors)
        assert np.allclose(t.m, np.eye(4), atol=1e-9)

    def test_uniform_scaling_inverts_to_half(self):
        # source generated by a known transform; T must equal its inverse
        reference = default_reference_anchors()
        scale = np.diag([2.0, 2.0, 2.0, 1.0])
        source = AnchorSet((reference.homogeneous() @ scale)[:, :3])
        t = compute_transform(source, reference)
        assert np.allclose(t.m, np.linalg.inv(scale), atol=1e-9)
        assert np.allclose(np.diag(t.m), [0.5, 0.5, 0.5, 1.0], atol=1e-9)

    def test_translation_inverts(self):
        reference = default_reference_anchors()
        shift = np.eye(4)
        shift[3, :3] = [0.1, 0.2, 0.0]
        source = AnchorSet((reference.homogeneous() @ shift)[:, :3])
        t = compute_transform(source, reference)
        assert np.allclose(t.m, np.linalg.inv(shift), atol=1e-9)
        assert np.allclose(t.m[3, :3], [-0.1, -0.2, 0.0], atol=1e-9)

    def test_anchor_postcondition(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            source = random_anchorset(rng)
            reference = random_anchorset(rng)
            t = compute_transform(source, reference)
            mapped = source.homogeneous() @ t.m
            assert np.max(np.abs(mapped - reference.homogeneous())) < 1e-9

    def test_round_trip_is_identity(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            s = random_anchorset(rng)
            p = random_anchorset(rng)
            forward = compute_transform(s, p)
            backward = compute_transform(p, s)
            assert np.allclose(forward.m @ backward.m, np.eye(4), atol=1e-8)

    def test_affine_invariants_of_result(self):
        rng = np.random.default_rng(5)
        t = compute_transform(random_anchorset(rng), random_anchorset(rng))
        assert np.max(np.abs(t.m[:, 3] - [0, 0, 0, 1])) <= 1e-9
        assert abs(np.linalg.det(t.m)) > 1e-12

    def test_degenerate_source_raises_singular(self):
        # eps=0 bypasses construction validation to reach the solve chain
        rows = np.array([[0, 0, 0], [1, 0, 0], [2, 0, 0], [3, 0, 0]], dtype=float)
        degenerate = AnchorSet(rows, eps=0.0)
        with pytest.raises(SingularAnchors):
            compute_transform(degenerate, default_reference_anchors())

    def test_consistent_degenerate_system_still_rejected(self):
        # coincident rows mapped to coincident targets solve consistently by
        # least squares, but the result is not invertible
        rows = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0.5, 0.5, 0]], dtype=float)
        degenerate = AnchorSet(rows, eps=0.0)
        with pytest.raises(SingularAnchors):
            compute_transform(degenerate, AnchorSet(rows, eps=0.0))


class TestNormalize:
    def test_already_canonical_frame_unchanged(self):
        pts = canonical_points(np.random.default_rng(6))
        result = normalize(HandLandmarks(pts))
        assert np.allclose(result.as_points(), pts, atol=1e-9)

    def test_anchor_rows_land_on_reference(self):
        rng = np.random.default_rng(7)
        reference = default_reference_anchors()
        for _ in range(100):
            vec = normalize(random_frame(rng))
            anchors = vec.as_points()[list(ANCHOR_INDICES)]
            assert np.max(np.abs(anchors - reference.rows)) < 1e-6

    def test_mirrored_hand_matches_original(self):
        # x -> 1 - x is itself an affine map, so left/right hands coincide
        rng = np.random.default_rng(8)
        frame = random_frame(rng, handedness="Left")
        mirror = np.eye(4)
        mirror[0, 0] = -1.0
        mirror[3, 0] = 1.0
        flipped = transformed_frame(frame, mirror, handedness="Right")
        a = normalize(frame).values
        b = normalize(flipped).values
        assert np.max(np.abs(a - b)) < 1e-6

    def test_affine_invariance(self):
        rng = np.random.default_rng(9)
        for _ in range(50):
            frame = random_frame(rng)
            moved = transformed_frame(frame, random_affine(rng))
            delta = normalize(frame).values - normalize(moved).values
            assert np.max(np.abs(delta)) < 1e-6

    def test_idempotent_on_normalized_output(self):
        rng = np.random.default_rng(10)
        first = normalize(random_frame(rng))
        again = normalize(HandLandmarks(first.as_points()))
        assert np.max(np.abs(again.values - first.values)) < 1e-9

    def test_custom_reference_respected(self):
        rng = np.random.default_rng(11)
        reference = random_anchorset(rng)
        vec = normalize(random_frame(rng), reference)
        anchors = vec.as_points()[list(ANCHOR_INDICES)]
        assert np.max(np.abs(anchors - reference.rows)) < 1e-6

    def test_deterministic_bits(self):
        frame = random_frame(np.random.default_rng(12))
        assert np.array_equal(normalize(frame).values, normalize(frame).values)

    def test_degenerate_frame_propagates(self):
        with pytest.raises(AnchorDegenerate):
            normalize(HandLandmarks(np.zeros((21, 3))))


class TestTypes:
    def test_hand_landmarks_shape_enforced(self):
        with pytest.raises(ValueError):
            HandLandmarks(np.zeros((20, 3)))

    def test_hand_landmarks_finite_enforced(self):
        pts = np.zeros((21, 3))
        pts[3, 2] = np.inf
        with pytest.raises(ValueError):
            HandLandmarks(pts)

    def test_hand_landmarks_handedness_enforced(self):
        with pytest.raises(ValueError):
            HandLandmarks(np.zeros((21, 3)) + 0.5, handedness="left")

    def test_transform_rejects_projective_column(self):
        m = np.eye(4)
        m[0, 3] = 1e-6
        with pytest.raises(ValueError):
            TransformMatrix(m)

    def test_transform_rejects_singular(self):
        m = np.eye(4)
        m[0, 0] = 0.0
        with pytest.raises(ValueError):
            TransformMatrix(m)

    def test_feature_vector_length(self):
        with pytest.raises(ValueError):
            FeatureVector(np.zeros(62))

    def test_feature_vector_points_view(self):
        vec = FeatureVector(np.arange(63, dtype=float))
        assert vec.as_points().shape == (21, 3)
        assert vec.as_points()[1, 0] == 3.0


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_affine_invariance_property(seed):
    rng = np.random.default_rng(seed)
    frame = random_frame(rng)
    moved = transformed_frame(frame, random_affine(rng))
    assert np.max(np.abs(normalize(frame).values - normalize(moved).values)) < 1e-6
