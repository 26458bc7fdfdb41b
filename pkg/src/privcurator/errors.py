"""Typed exceptions raised by the curator library.

Everything derives from CuratorError so callers can catch the whole family,
while budget rejection and session corruption stay individually catchable.
"""


class CuratorError(Exception):
    """Base class for all errors raised by this package."""


class BoundsError(CuratorError):
    """Invalid domain bounds, or a value outside the declared finite bounds."""


class CsvFormatError(CuratorError):
    """Unparseable or empty input file; the message names the offending row."""


class QueryError(CuratorError):
    """Malformed query specification (bad kind, bad range, bad edges)."""


class PreconditionError(CuratorError):
    """A documented precondition does not hold (even-n median, short dataset, ...)."""


class ConfigError(CuratorError):
    """Invalid mechanism configuration or an unsupported query/noise combination."""


class SensitivityError(CuratorError):
    """The regime needs a finite sensitivity but the value is unbounded."""


class BudgetExceededError(CuratorError):
    """A charge was rejected because it would exceed the session budget."""


class SessionError(CuratorError):
    """Session file is corrupt, has a wrong version, or violates the budget invariant."""
