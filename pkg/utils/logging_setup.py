"""
Logging Setup
=============
Configures the package loggers from the "logging" section of the
configuration. Log records go to stderr (and an optional file) so that
stdout only ever carries the report itself.
"""

import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional

ROOT_LOGGER = 'src'

DEFAULT_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def setup_logging(config: Dict[str, Any], level: Optional[str] = None) -> logging.Logger:
    """
    Configure the package logger.

    Args:
        config: Application configuration (uses config['logging'])
        level: Explicit level name, overriding the configured one

    Returns:
        logging.Logger: The configured package logger
    """
    settings = config.get('logging', {})
    logger = logging.getLogger(ROOT_LOGGER)
    logger.setLevel((level or settings.get('level', 'WARNING')).upper())

    # Re-running setup (tests, repeated CLI calls) must not stack handlers
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    formatter = logging.Formatter(settings.get('format', DEFAULT_FORMAT))

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    log_file = settings.get('log_file')
    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file, mode='a', encoding='utf-8')
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    logger.propagate = False
    return logger
