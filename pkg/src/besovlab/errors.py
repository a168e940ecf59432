"""Exception hierarchy shared across the package.

Exit-code mapping for the CLI lives in cli.py, not here.
"""


class BesovLabError(Exception):
    """Base class for all package errors."""


class ParameterError(BesovLabError):
    """A numeric parameter is outside its valid range."""


class ConfigurationError(BesovLabError):
    """A spec/config object is malformed (bad weight descriptor, missing sign, ...)."""


class ResolutionError(BesovLabError):
    """A request needs finer dyadic resolution than the data carries."""


class SizeError(BesovLabError):
    """Exact enumeration requested beyond the hard size cutoff."""
