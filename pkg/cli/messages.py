import logging
import configparser

# Project
import config

__all__ = [
    "MessageKeeper",
    "message_keeper",
]

logger = logging.getLogger(__name__)


class MessageKeeper:
    """User-facing strings of the command line, kept in text.ini."""

    def __init__(self, filepath: str = config.TEXT_FILEPATH):
        self.parser = configparser.ConfigParser(interpolation=None)
        if not self.parser.read(filepath, encoding="utf-8"):
            logger.error(f"Message catalogue not found at {filepath=}")

    def get_message(self, section: str, alias: str) -> str:
        try:
            message = self.parser[section][alias]
        except KeyError as e:
            logger.error(f"Couldn't load message {section=}, {alias=}.\nException: {e!r}")
            message = config.CRITICAL_ERROR_MSG
        return message


message_keeper = MessageKeeper()
