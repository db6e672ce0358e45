import logging
import sys
import typing as t

import pydantic

from poshrink.core.exceptions import InvalidArgumentError, NumericalError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID_ARGUMENT = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


def _report(message: str) -> None:
    sys.stderr.write(f"poshrink: error: {message}\n")


def invalid_argument_error_handler(exc: Exception) -> int:
    """
    Handler for invalid arguments, malformed prior expressions, violated proposition hypotheses and bad input files

    :param exc: InvalidArgumentError or pydantic ValidationError

    :return: Exit code 2
    """
    _report(str(exc))
    return EXIT_INVALID_ARGUMENT


def numerical_error_handler(exc: NumericalError) -> int:
    """
    Handler for NumericalError exceptions (divergent integrals, singular factors)

    :param exc: NumericalError exception

    :return: Exit code 3
    """
    _report(f"numerical failure: {exc}")
    return EXIT_NUMERICAL


def io_error_handler(exc: OSError) -> int:
    """
    Handler for OSError exceptions

    :param exc: OSError exception

    :return: Exit code 4
    """
    _report(f"I/O failure: {exc}")
    return EXIT_IO


EXCEPTION_HANDLERS: t.List[t.Tuple[t.Type[BaseException], t.Callable[[t.Any], int]]] = [
    (InvalidArgumentError, invalid_argument_error_handler),
    (pydantic.ValidationError, invalid_argument_error_handler),
    (NumericalError, numerical_error_handler),
    (OSError, io_error_handler),
]


def handle_exception(exc: BaseException) -> int:
    """
    Map an exception to the exit code of its first matching handler; unknown exceptions are re-raised.
    """
    for exc_type, handler in EXCEPTION_HANDLERS:
        if isinstance(exc, exc_type):
            logger.debug("Command failed", exc_info=exc)
            return handler(exc)
    raise exc
