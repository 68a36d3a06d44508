"""Exception hierarchy shared across the pipeline.

Every error class maps to a stable CLI exit code (see cli.EXIT_CODES), so
new classes here need a corresponding entry there.
"""


class OntoScaffoldError(Exception):
    """Base class for all pipeline errors."""


class ConfigError(OntoScaffoldError):
    """Invalid configuration value or unknown option."""


class InputEncodingError(OntoScaffoldError):
    """Document bytes do not decode as UTF-8."""


class EmptyDocumentError(OntoScaffoldError):
    """Document contains no non-blank text."""


class FormatError(OntoScaffoldError):
    """A prediction/gold file does not match its documented schema."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class TaggerUnavailableError(OntoScaffoldError):
    """Remote tagger endpoint unreachable or returned garbage."""


class LLMUnavailableError(OntoScaffoldError):
    """LLM endpoint unreachable or returned a transport-level failure."""


class CassetteMissError(OntoScaffoldError):
    """Replay cassette has no entry for a request fingerprint.

    Raised loudly rather than falling back: a miss means prompt
    construction drifted since the cassette was recorded.
    """

    def __init__(self, fingerprint: str):
        self.fingerprint = fingerprint
        super().__init__(f"no cassette entry for fingerprint {fingerprint}")


class ParseError(OntoScaffoldError):
    """LLM response could not be parsed into a valid triple array."""


class NoJsonArrayError(ParseError):
    """No balanced top-level JSON array found in the response text."""


class MalformedJsonError(ParseError):
    """A bracket-balanced candidate array failed JSON parsing."""


class TripleShapeError(ParseError):
    """JSON array parsed but an element is not a well-formed triple object."""


class SimilarityUnavailableError(OntoScaffoldError):
    """Remote embedding endpoint unreachable."""
