"""
Module for setting up and configuring the logging system.
"""

import logging
import logging.config
from pathlib import Path

LOGGING_CONFIG_FILE_PATH = Path(__file__).parent.parent / "logging.ini"


def setup_logger(debug: bool = False) -> None:
    """
    Set up the logger using the configuration INI file.

    :param debug: Whether to lower the root log level to `DEBUG`.
    """
    logging.config.fileConfig(LOGGING_CONFIG_FILE_PATH, disable_existing_loggers=False)
    if debug:
        logging.getLogger().setLevel(logging.DEBUG)
