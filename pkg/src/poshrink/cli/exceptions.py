from poshrink.core.exceptions import InvalidArgumentError


class IngestError(InvalidArgumentError):
    """Base class for count file ingestion errors"""


class IngestParseError(IngestError):
    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"{message} (line {line})")


class IngestValidationError(IngestError):
    pass
