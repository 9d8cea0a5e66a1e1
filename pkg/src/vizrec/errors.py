"""Exception hierarchy shared across the engine.

Every error carries a stable ``code`` (used verbatim in API error payloads)
and an optional ``context`` dict with machine-readable details.
"""

from __future__ import annotations

from typing import Any


class VizrecError(Exception):
    """Base class for all engine errors."""

    code = "error"

    def __init__(self, message: str, **context: Any) -> None:
        super().__init__(message)
        self.message = message
        self.context = context


class ParseError(VizrecError):
    """Malformed CSV input (ragged row, duplicate header, empty input)."""

    code = "parse_error"


class UnknownVariableError(VizrecError):
    """A variable name that does not exist in the dataset."""

    code = "unknown_variable"


class ChannelUnavailableError(VizrecError):
    """Assignment to a channel gated off by the X/Y rule."""

    code = "channel_unavailable"


class InvalidFieldError(VizrecError):
    """A field modifier or channel placement incompatible with the variable type."""

    code = "invalid_field"


class NoMappingError(VizrecError):
    """No chart rule exists for the requested type combination."""

    code = "no_mapping"


class UnsupportedSelectionError(VizrecError):
    """Question lookup called with a selection size outside 1..3."""

    code = "unsupported_selection"


class DanglingFieldError(VizrecError):
    """A spec references a variable absent from its dataset."""

    code = "dangling_field"


class FilterError(VizrecError):
    """A filter clause incompatible with its variable."""

    code = "invalid_filter"
