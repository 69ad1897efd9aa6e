"""Exception hierarchy. Each class carries the CLI exit code it maps to."""

from __future__ import annotations


class ItctError(Exception):
    """Base class for all pipeline errors."""

    exit_code = 1


class UsageError(ItctError):
    """Invalid configuration or arguments."""

    exit_code = 1


class DataError(ItctError):
    """Problem with input data: schema, CSV, cache, balancing, feature sets."""

    exit_code = 2


class ModelFormatError(DataError):
    """Unreadable model file: bad magic, version, checksum or truncation."""


class NumericalError(ItctError):
    """Non-finite values where finite ones are required."""

    exit_code = 3


class ShapeError(ItctError):
    """Operand shapes do not agree."""

    exit_code = 3
