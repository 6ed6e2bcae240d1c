"""Exception hierarchy shared across the pipeline.

The CLI maps these onto exit codes: ConfigError -> 1, DataError -> 2,
ProviderError -> 3.
"""


class TrihateError(Exception):
    """Base class for all pipeline errors."""


class ConfigError(TrihateError):
    """Invalid configuration or usage."""

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class DataError(TrihateError):
    """Malformed or inconsistent input data."""


class ProviderError(TrihateError):
    """External provider (translation / LLM) failure.

    ``retryable`` marks transient failures (network, quota) that a caller
    may retry; hard failures (empty output, bad credentials) are not.
    """

    def __init__(self, message, retryable=False):
        super().__init__(message)
        self.retryable = retryable
