from functools import wraps
import logging
from typing import Dict, Optional, Type

import click

from securesum.exceptions import (
    CertificateNotFoundError,
    Error,
    InfeasibleError,
    StateSpaceTooLargeError,
    TranscriptIntegrityError,
)


LOGLEVELS = ["DEBUG", "INFO", "WARNING", "ERROR"]

# Exit codes. Anything not listed (schema, config, dimension and seed errors) exits 1.
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INSECURE = 2
EXIT_STATE_LIMIT = 3
EXIT_NO_CERTIFICATE = 4

EXIT_CODES: Dict[Type[Error], int] = {
    InfeasibleError: EXIT_INSECURE,
    TranscriptIntegrityError: EXIT_INSECURE,
    StateSpaceTooLargeError: EXIT_STATE_LIMIT,
    CertificateNotFoundError: EXIT_NO_CERTIFICATE,
}


class CommandError(click.ClickException):
    def __init__(self, message: str, exit_code: int = EXIT_USAGE) -> None:
        super().__init__(message)
        self.exit_code = exit_code


class ClickHandler(logging.Handler):
    """
    Writes log records to stderr through click, so output follows whatever stream
    click is currently bound to.
    """

    def emit(self, record: logging.LogRecord) -> None:
        try:
            click.echo(self.format(record), err=True)
        except Exception:
            self.handleError(record)


_handler: Optional[ClickHandler] = None


def configure_logging(loglevel: str) -> None:
    global _handler
    logger = logging.getLogger("securesum")
    if _handler is None:
        _handler = ClickHandler()
        _handler.setFormatter(
            logging.Formatter("%(asctime)s - %(levelname)s - %(name)s - %(message)s")
        )
        logger.addHandler(_handler)
        logger.propagate = False
    logger.setLevel(getattr(logging, loglevel.upper()))


def handles_errors(command):
    """
    Turn library errors into click errors carrying the documented exit code.
    """

    @wraps(command)
    def wrapped_command(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except Error as exc:
            exit_code = next(
                (code for cls, code in EXIT_CODES.items() if isinstance(exc, cls)),
                EXIT_USAGE,
            )
            raise CommandError(click.style(str(exc), fg="red"), exit_code)

    return wrapped_command


def load_config(config_path: str):
    """
    Load a `Config` and apply its log level unless one was given on the command line.
    """
    from securesum.services.config import Config

    config = Config.from_file(config_path)
    ctx = click.get_current_context()
    if not (ctx.obj or {}).get("loglevel"):
        configure_logging(config.project.loglevel)
    return config


def requires_config(command):
    """
    Pass the ``CONFIG`` argument to the command as a loaded `Config`.
    """

    @wraps(command)
    def wrapped_command(*args, config_path: str, **kwargs):
        return command(load_config(config_path), *args, **kwargs)

    return wrapped_command


def passed(ok: bool) -> str:
    return click.style("PASS", fg="green") if ok else click.style("FAIL", fg="red")
