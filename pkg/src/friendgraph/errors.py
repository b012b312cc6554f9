"""Exception hierarchy.

Everything a caller can trigger with bad input derives from ``GraphInputError``
so the CLI can map it to exit status 1.
"""


class GraphInputError(ValueError):
    """Invalid input data or parameters."""


class IntegrityError(GraphInputError):
    """A graph violates the simple-graph preconditions."""


class GraphMLParseError(GraphInputError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnsupportedSchemaError(GraphInputError):
    """Well-formed GraphML that uses features outside the supported schema."""


class DegenerateGraphError(GraphInputError):
    """The requested metric is undefined for this graph (e.g. no edges)."""
