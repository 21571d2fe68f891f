"""Exception types shared across the package."""


class InsightError(Exception):
    """Base class for all package-specific errors."""


class InputError(InsightError):
    """Bad user input: unreadable files, malformed queries, empty tokens."""


class ConfigError(InsightError):
    """A configuration value is outside its allowed range."""


class IndexUnavailableError(InsightError):
    """The on-disk index is missing or unreadable."""


class NotFoundError(InsightError):
    """A referenced record does not exist in the index."""


class InvalidTargetError(InsightError):
    """The requested target cannot be ranked (e.g. an answer without code)."""
