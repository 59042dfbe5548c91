"""Error types shared across the package.

ConfigError covers bad invocations: unknown options, invalid parameter
values, missing configuration. DataError covers bad inputs discovered
while processing: unreadable files, malformed corpora, inconsistent
artifacts. The command line maps them to exit codes 1 and 2.
"""


class ConfigError(Exception):
    """Invalid configuration or usage."""


class DataError(Exception):
    """Invalid or inconsistent input data."""
