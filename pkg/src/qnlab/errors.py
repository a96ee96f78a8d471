"""Exception types shared across the library.

All of them derive from ValueError so callers that do not care about the
distinction can catch a single class.  The CLI maps any of these to exit
code 2 (malformed input / undecidable request).
"""


class InputError(ValueError):
    """Raised when caller-supplied data violates a documented precondition."""


class GaugeDefinitionError(ValueError):
    """Raised when a gauge or Orlicz function fails its own sanity checks."""


class DegenerateCubeError(ValueError):
    """Raised when a requested cube contains no grid cell centers."""
