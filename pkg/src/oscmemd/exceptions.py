"""Exception hierarchy for oscmemd.

Input problems derive from :class:`InputError` (a ``ValueError``) so callers
can catch bad data separately from decomposition dead ends.
"""


class OscMemdError(Exception):
    """Base class for every error raised by this package."""


class InputError(OscMemdError, ValueError):
    """Malformed or inconsistent input."""


class LengthMismatchError(InputError):
    pass


class NonFiniteError(InputError):
    pass


class RateInvalidError(InputError):
    pass


class TooShortError(InputError):
    pass


class DimensionMismatchError(InputError):
    pass


class TooFewKnotsError(InputError):
    pass


class DuplicateKnotIndexError(InputError):
    pass


class BadSchemeError(InputError):
    pass


class TooFewDirectionsError(InputError):
    pass


class WrongChannelCountError(InputError):
    pass


class EmptyWindowError(InputError):
    pass


class BadScenarioError(InputError):
    pass


class TooFewCrossingsError(InputError):
    pass


class ImfIndexError(OscMemdError, IndexError):
    """IMF index outside ``0..M-1`` (or ``0..M`` where the residue is allowed)."""


class ParseError(InputError):
    """CSV or config text that cannot be parsed.

    ``row`` and ``column`` are 1-based positions in the file when known.
    """

    def __init__(self, message, row=None, column=None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class NonUniformSamplingError(InputError):
    pass


class DecompositionError(OscMemdError):
    """Sifting cannot proceed; the outer loops treat this as a stop signal."""


class InsufficientExtremaError(DecompositionError):
    """Too few extrema to build envelopes (signal is effectively monotonic)."""


class AllDirectionsDegenerateError(DecompositionError):
    """Every projection direction lacks the maxima needed for an envelope."""


class WriteError(OscMemdError, OSError):
    pass
