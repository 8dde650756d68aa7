import datetime as dt
import logging
import sys
from pathlib import Path

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: str | int = "WARNING") -> None:
    """Send log records to stderr; stdout carries the report only."""
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.WARNING
    logging.basicConfig(stream=sys.stderr, level=level, format=LOG_FORMAT, force=True)


def verbosity_level(verbose: int, default: str = "WARNING") -> str:
    if verbose >= 2:
        return "DEBUG"
    if verbose == 1:
        return "INFO"
    return default


def utc_stamp(moment: dt.datetime) -> str:
    """ISO-8601 UTC time to the second with a trailing Z."""
    return moment.astimezone(dt.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def write_output(path: str | Path, content: str) -> Path:
    """Writes report text to the given file, creating parent folders."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(content, encoding="utf-8")
    return target


#  status messages collected while a command runs
message = {
    "warn": [],
    "info": [],
}


def clear_messages() -> None:
    """Clear all messages."""
    for key in message:
        message[key].clear()


def set_message(type: str, new_message: str) -> dict:
    """Record a message; unknown types are filed under info."""
    message[type if type in message else "info"].append(new_message)
    return message


def get_message(msg_type: str | None = None) -> dict | list:
    """Retrieve the recorded message(s)."""
    if msg_type:
        return list(message.get(msg_type, []))
    return {key: list(values) for key, values in message.items()}
