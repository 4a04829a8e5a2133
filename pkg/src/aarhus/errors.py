"""Exception types shared across the kernel."""


class AarhusError(Exception):
    """Base class for domain errors (CLI exit code 2)."""


class LimitExceeded(AarhusError):
    pass


class SpaceMismatch(AarhusError):
    pass


class BadConstantTerm(AarhusError):
    pass


class SolveFailure(AarhusError):
    pass


class NotGaussianForm(AarhusError):
    pass


class SingularCovariance(AarhusError):
    pass


class NonInvertibleUnit(AarhusError):
    pass


class BadLieData(AarhusError):
    pass


class UnsupportedDiagram(AarhusError):
    pass


class ParseError(Exception):
    """Malformed input text (CLI exit code 1)."""

    def __init__(self, line, expected):
        self.line = line
        self.expected = expected
        super().__init__(f"line {line}: expected {expected}")


class VersionMismatch(ParseError):
    def __init__(self, line, found):
        Exception.__init__(self, f"line {line}: unsupported format version {found!r}")
        self.line = line
        self.expected = "format version 1"
