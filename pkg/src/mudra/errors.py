"""Exception types shared across the engine."""


class MudraError(Exception):
    """Base class for all engine errors."""


class AnchorDegenerate(MudraError):
    """The four anchor landmarks of a frame are affinely dependent."""


class SingularAnchors(MudraError):
    """No affine transform maps the source anchors onto the reference."""


class DimensionMismatch(MudraError):
    """Vector length does not match the gallery dimensionality."""


class EmptyGallery(MudraError):
    """A query was issued against a gallery with no entries."""


class FormatError(MudraError):
    """A persisted file is malformed.

    Carries the 1-based line number of the offending record when known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InsufficientSamples(MudraError):
    """A class cannot supply the requested train samples plus one test sample."""

    def __init__(self, label: str, available: int, requested: int):
        self.label = label
        self.available = available
        self.requested = requested
        super().__init__(
            f"class {label!r} has {available} samples; "
            f"needs {requested} for training plus at least 1 for testing"
        )


class EmptyTrain(MudraError):
    """The training side of an evaluation has no usable records."""


class EmptyTest(MudraError):
    """The test side of an evaluation has no usable records."""
