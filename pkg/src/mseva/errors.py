"""Exception types shared across the mseva pipeline.

Every stage raises a named error so that job failures can report a
structured (stage, cause) pair instead of a bare traceback.
"""


class MsevaError(Exception):
    """Base class for all pipeline errors."""


class ConfigError(MsevaError):
    """Invalid configuration file or value."""


# --- media preparation ---

class UnreadableMedia(MsevaError):
    """Container is corrupt or in an unsupported format."""


class NoAudioStream(MsevaError):
    """Container has no audio stream."""


class NoVideoStream(MsevaError):
    """Container has no video stream."""


class AmbiguousRules(ConfigError):
    """More than one resolution rule matches the same input size."""


class FrameDecodeFailure(MsevaError):
    """A requested frame could not be decoded; partial batches are rejected."""


class DetectorUnavailable(MsevaError):
    """The configured face detector adapter failed to load."""


class TranscoderFailure(MsevaError):
    """The external transcoder exited with an error."""


# --- segmenter ---

class EmptyAudio(MsevaError):
    """Audio buffer contains no samples."""


class SegmentOutOfRange(MsevaError):
    """Segment bounds fall outside the asset duration."""


# --- transcriber ---

class BackendFailure(MsevaError):
    """An inference backend (ASR or text) failed.

    ``index`` is the segment index for per-clip failures, or None for
    load-time failures.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class IoFailure(MsevaError):
    """Filesystem read or write failed."""


class MalformedLine(MsevaError):
    """A transcript line is not valid JSON or misses required fields."""

    def __init__(self, message, line_number):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class InvariantViolation(MsevaError):
    """Parsed data violates a documented invariant."""


# --- emotion model ---

class ShapeMismatch(MsevaError):
    """Input tensor shape does not match the model contract."""


class ClipTooShort(MsevaError):
    """Audio clip is shorter than one analysis window."""


class WeightSumInvalid(MsevaError):
    """Fusion weights are non-finite or do not sum to 1."""


class EmptyDataset(MsevaError):
    """Training requires at least one sample."""


class LabelOutOfRange(MsevaError):
    """A training label is outside [0, num_classes)."""


class ModelNotLoaded(MsevaError):
    """Inference requested before a model was loaded."""


class EmptyTrack(MsevaError):
    """Video-level aggregation requires at least one segment prediction."""


# --- annotation kit ---

class IncompleteRatings(MsevaError):
    """A video does not have the full complement of rater records."""

    def __init__(self, video_id):
        super().__init__(f"video {video_id!r} does not have exactly the expected rater count")
        self.video_id = video_id


class DegenerateExpectation(MsevaError):
    """Chance agreement is 1 while observed agreement is not; kappa undefined."""


# --- eval harness ---

class EmptyMatrix(MsevaError):
    """Confusion matrix has zero total count."""


class SingleClass(MsevaError):
    """AUC needs both a positive and a negative example."""


class ZeroBaseline(MsevaError):
    """Relative improvement is undefined for a non-positive baseline."""


class MissingTextVariant(MsevaError):
    """An ablation item lacks the requested text variant."""

    def __init__(self, item_id, variant):
        super().__init__(f"item {item_id!r} has no text variant {variant!r}")
        self.item_id = item_id
        self.variant = variant


# --- service ---

class TooLarge(MsevaError):
    """Upload exceeds the configured size limit."""


class TooLong(MsevaError):
    """Video exceeds the configured duration limit."""


class UnknownJob(MsevaError):
    """No job with the given id."""


class NotReady(MsevaError):
    """Result requested before the job reached the done state."""
