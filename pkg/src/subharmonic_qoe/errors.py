"""Exception types raised across the package."""


class InvalidInputError(ValueError):
    """An argument violates an operation's precondition."""


class ConfigurationError(ValueError):
    """A combination of settings cannot be honoured (e.g. a DFT grid that does not fit the rate)."""


class FrameRangeError(IndexError):
    """A frame index points outside the waveform."""


class InvalidSpecError(ValueError):
    """A synthesis specification is inconsistent."""


class WavFormatError(ValueError):
    """A WAV file is malformed or uses an unsupported encoding."""


class ValidationError(ValueError):
    """A CSV or config file failed schema validation."""
