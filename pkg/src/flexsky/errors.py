"""Exception types shared across the engine."""


class FlexskyError(Exception):
    """Base class for all engine-specific failures."""


class CsvError(FlexskyError):
    """A CSV file could not be ingested (missing file, bad header, bad cell)."""


class ParseError(FlexskyError):
    """A constraint line failed to parse; carries the offending location."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None and column is not None:
            message = f"line {line}, column {column}: {message}"
        elif line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyRegionError(FlexskyError):
    """The weight region defined by the constraints contains no feasible vector."""


class BudgetError(FlexskyError):
    """Exact vertex enumeration was requested beyond its dimension or constraint budget."""
