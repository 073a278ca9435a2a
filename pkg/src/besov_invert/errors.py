"""Exception taxonomy shared by all modules.

Exit-code mapping used by the CLI: ConfigError -> 2, NumericalError -> 3,
CapabilityError -> 4.
"""


class BesovInvertError(Exception):
    """Base class for library errors."""


class ConfigError(BesovInvertError):
    """Invalid configuration: bad field value, unknown key, missing file."""


class NumericalError(BesovInvertError):
    """A numerical routine failed to reach its required tolerance."""


class CapabilityError(BesovInvertError):
    """The request is outside what this implementation supports."""
