"""Shared exception types."""


class DataError(Exception):
    """Bad or inconsistent input data (malformed files, key conflicts, missing columns).

    The CLI maps this to exit code 2; anything else unexpected is an internal
    error (exit code 3).
    """
