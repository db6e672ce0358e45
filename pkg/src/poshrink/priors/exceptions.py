from poshrink.core.exceptions import InvalidArgumentError


class PriorBaseException(InvalidArgumentError):
    """Base class for all prior construction exceptions"""


class HypothesisError(PriorBaseException):
    pass


class GrammarError(PriorBaseException):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} (at position {position})")
