"""
Exception types raised by harvestr.

The command line front end maps these onto exit codes: validation and
configuration problems exit with 2, domain errors with 3.
"""


class HarvestrError(Exception):
    """Base class for all harvestr errors."""


class ValidationError(HarvestrError, ValueError):
    """Malformed input or a composite value that breaks its invariants."""


class ConfigError(ValidationError):
    """A configuration document or referenced file could not be used."""


class DomainError(HarvestrError, ValueError):
    """An argument lies outside the domain of a model equation."""
