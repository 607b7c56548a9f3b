"""Exception types raised by the decoding engine.

Every domain error derives from :class:`EedgekitError` so callers (and the
CLI) can distinguish domain failures (exit code 1) from usage errors
(exit code 2) and genuine bugs.
"""


class EedgekitError(Exception):
    """Base class for all domain errors."""


# --- ingestion / windowing ---------------------------------------------------

class EmptyFileError(EedgekitError):
    pass


class MissingColumnError(EedgekitError):
    def __init__(self, name):
        super().__init__(f"column {name!r} not found in CSV header")
        self.name = name


class NonNumericCellError(EedgekitError):
    def __init__(self, row, col):
        super().__init__(f"non-numeric cell at row {row}, column {col!r}")
        self.row = row
        self.col = col


class NonIntegralWindowError(EedgekitError):
    pass


# --- preprocessing -----------------------------------------------------------

class InvalidBandError(EedgekitError):
    pass


class AllSamplesRejectedError(EedgekitError):
    def __init__(self, channel):
        super().__init__(f"channel {channel}: no samples survive the z-score threshold")
        self.channel = channel


# --- features ----------------------------------------------------------------

class TooShortError(EedgekitError):
    pass


class DegenerateSpectrumError(EedgekitError):
    pass


class EmptyBandError(EedgekitError):
    pass


class TooFewPointsError(EedgekitError):
    pass


# --- selection ---------------------------------------------------------------

class TooFewChannelsError(EedgekitError):
    pass


class EmptyInputError(EedgekitError):
    pass


class NoCandidatesError(EedgekitError):
    pass


class UnknownFeatureError(EedgekitError):
    def __init__(self, name):
        super().__init__(f"unknown feature {name!r}")
        self.name = name


# --- model / weight bundle ---------------------------------------------------

class ShapeMismatchError(EedgekitError):
    def __init__(self, layer, expected=None, actual=None):
        msg = f"tensor {layer!r} has wrong shape"
        if expected is not None:
            msg += f": expected {tuple(expected)}, got {tuple(actual)}"
        super().__init__(msg)
        self.layer = layer


class BadMagicError(EedgekitError):
    pass


class TruncatedPayloadError(EedgekitError):
    pass


class CorruptBundleError(EedgekitError):
    pass


# --- evaluation --------------------------------------------------------------

class LengthMismatchError(EedgekitError):
    pass


class TooFewRunsError(EedgekitError):
    pass


class InvalidCountsError(EedgekitError):
    pass


class MissingSubjectIdError(EedgekitError):
    pass


# --- benchmarking ------------------------------------------------------------

class NoWindowsError(EedgekitError):
    pass


class NoReadingsError(EedgekitError):
    pass
