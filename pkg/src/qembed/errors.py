"""Exception hierarchy shared by every qembed module."""


class QembedError(Exception):
    """Base class for all errors raised by qembed."""


class InputError(QembedError):
    """Problems with a user-supplied function or file (CLI exit code 2)."""


class WidthOverflow(InputError):
    pass


class UncoveredMinterm(InputError):
    def __init__(self, minterm: str, message: str | None = None):
        self.minterm = minterm
        super().__init__(message or f"input {minterm} is not covered by any cube")


class InconsistentFunction(InputError):
    def __init__(self, minterm: str, first: str, second: str):
        self.minterm = minterm
        self.outputs = (first, second)
        super().__init__(
            f"cubes disagree on input {minterm}: {first} vs {second}"
        )


class ParseError(InputError):
    """Malformed PLA / truth-table text."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnsupportedFeature(ParseError):
    pass


class EmptyFunction(ParseError):
    pass


class DuplicateRow(ParseError):
    pass


class MissingRow(ParseError):
    pass


class TooLarge(InputError):
    pass


class EmptyHistogram(QembedError):
    pass


class HistogramNotComplete(QembedError):
    pass


class HypothesisViolated(QembedError):
    pass


class TooWideForCompletion(TooLarge):
    pass


class GarbageOverflow(QembedError):
    """A pattern has more preimages than its garbage field can distinguish."""
