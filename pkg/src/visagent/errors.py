"""Exception hierarchy shared across the package."""


class VisAgentError(Exception):
    """Base class for all domain errors raised by this package."""


class ConfigError(VisAgentError):
    """An agent configuration violates its invariants."""


class MissingField(VisAgentError):
    """A prompt template placeholder has no binding."""

    def __init__(self, name: str):
        super().__init__(f"unbound template placeholder: {name!r}")
        self.name = name


class MissingAssessment(VisAgentError):
    """An agent response contains no ASSESSMENT section."""


class WrongAssessmentKind(VisAgentError):
    """A planner received an assessment variant it cannot act on."""


class UnknownStructure(VisAgentError):
    """A structure id is absent from the supplied statistics."""


class PerceptionError(VisAgentError):
    """Perception failed after exhausting its retry budget."""


class AuthError(VisAgentError):
    """Chat endpoint credential is missing or rejected."""


class RateLimited(VisAgentError):
    """Chat endpoint kept returning 429 past the attempt budget."""


class ProviderError(VisAgentError):
    """Chat endpoint returned a non-retryable error status."""

    def __init__(self, status: int, detail: str = ""):
        super().__init__(f"provider error {status}: {detail}")
        self.status = status


class SizeMismatch(VisAgentError):
    """A raw volume file does not match its declared dimensions."""


class EmptyPointSet(VisAgentError):
    """A scatterplot render was asked for zero points."""


class MissingPosition(VisAgentError):
    """A node-link render is missing a layout position for some node."""


class BadParams(VisAgentError):
    """Benchmark case parameters fall outside the supported ranges."""


class OverlappingBands(VisAgentError):
    """Two phantom structures claim overlapping scalar bands."""


class ToolUnreachable(VisAgentError):
    """A visualization tool endpoint could not be reached."""


class ProtocolError(VisAgentError):
    """A tool endpoint responded outside the wire protocol contract."""

    def __init__(self, code: str, detail: str = ""):
        super().__init__(f"protocol error [{code}] {detail}".rstrip())
        self.code = code


class BindError(VisAgentError):
    """A server could not bind its requested address."""


class DegenerateColumnWarning(UserWarning):
    """A parallel-coordinates column has min == max; axis collapses to midline."""
