"""Exception types shared across the package."""

from __future__ import annotations


class GuandanError(Exception):
    """Base class for every error raised by this package."""


class InvalidInput(GuandanError, ValueError):
    """An argument is malformed (wrong deck size, bad locale, k < 1, ...)."""


class InvalidCombo(GuandanError, ValueError):
    """Cards do not form the declared combination kind."""


class InvalidWild(InvalidCombo):
    """A wildcard assignment is not allowed."""


class InvalidState(GuandanError, RuntimeError):
    """Operation not permitted in the current deal state."""


class IllegalAction(GuandanError, ValueError):
    """An action that is not in the current legal action list."""


class BackendError(GuandanError, RuntimeError):
    """The language-model backend failed after exhausting its retries."""
