# coding=utf-8
import logging


def get_default_logger(name):
    """Logger for a library module; silent until the application configures logging."""

    logger = logging.getLogger(name)
    if not logger.hasHandlers():
        # keep messages away from the lastResort stderr handler
        logger.addHandler(logging.NullHandler())
    return logger


def configure_logging(verbosity=0, level_name=None):
    """
    Configure root logging for command line use. Logs go to stderr.
    :param verbosity: int: number of -v flags; 1 -> INFO, 2 or more -> DEBUG
    :param level_name: str: explicit level name (e.g. from AMBIENT_LOG_LEVEL), wins over verbosity
    :return: the effective level
    """
    if level_name:
        level = logging.getLevelName(level_name.upper())
        if not isinstance(level, int):
            level = logging.WARNING
    elif verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    return level
