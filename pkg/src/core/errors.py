class RobustnessError(Exception):
    """Base class for every error raised by the evaluation toolkit."""


class ConfigurationError(RobustnessError):
    pass


class TransportError(RobustnessError):
    """Endpoint unreachable or answering non-2xx after all retries."""

    def __init__(self, message: str, attempts: int = 1, cause: Exception | None = None):
        super().__init__(f"{message} (after {attempts} attempt(s))")
        self.attempts = attempts
        self.cause = cause


class ProtocolError(RobustnessError):
    """Endpoint answered, but the payload breaks the wire contract."""


class IngestionError(RobustnessError):
    def __init__(self, message: str, line_number: int | None = None):
        where = f" (line {line_number})" if line_number is not None else ""
        super().__init__(f"{message}{where}")
        self.line_number = line_number


class UndefinedMetricError(RobustnessError):
    def __init__(self, metric: str, grouping: str = "all records"):
        super().__init__(f"{metric} is undefined on an empty record set for {grouping}")
        self.metric = metric
        self.grouping = grouping


class BackTranslationError(RobustnessError):
    pass


class EmptyQueryError(RobustnessError, ValueError):
    pass
