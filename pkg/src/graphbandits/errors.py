"""Exception types shared across the package."""


class GraphBanditsError(Exception):
    """Base class for errors raised by this package."""


class InputError(GraphBanditsError, ValueError):
    """A caller-supplied value is outside the documented domain."""


class ConfigError(GraphBanditsError):
    """An experiment configuration is missing fields or malformed."""


class CapabilityError(GraphBanditsError):
    """The request exceeds what this build can compute exactly."""
