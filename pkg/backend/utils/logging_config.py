import logging
import os
from logging.handlers import RotatingFileHandler
from utils.db_logger import DatabaseLogHandler
import constants

LOG_FORMAT = '%(asctime)s [%(levelname)s] %(name)s: %(message)s'
_configured = False

def resolve_level(level=None):
    level = level or os.environ.get(constants.LOG_LEVEL_ENV_VAR, 'INFO')
    if isinstance(level, str):
        resolved = logging.getLevelName(level.upper())
        return resolved if isinstance(resolved, int) else logging.INFO
    return level

def setup_logging(session_maker=None, level=None):
    global _configured
    level = resolve_level(level)
    if _configured:
        logging.getLogger('').setLevel(level)
        return
    _configured = True
    log_dir = os.environ.get(constants.LOG_DIR_ENV_VAR, constants.DEFAULT_LOG_DIR)

    # create logs directory if it doesn't exist
    os.makedirs(log_dir, exist_ok=True)

    # configure root logger
    logging.basicConfig(
        level=level,
        format=LOG_FORMAT,
        datefmt='%Y-%m-%d %H:%M:%S'
    )
    root = logging.getLogger('')
    root.setLevel(level)

    # create file handler
    file_handler = RotatingFileHandler(
        os.path.join(log_dir, 'spatial_reuse.log'),
        maxBytes=10*1024*1024,  # 10MB
        backupCount=5
    )
    file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(file_handler)

    # experiment runs also get their own file
    harness_logger = logging.getLogger('harness')
    harness_file_handler = RotatingFileHandler(
        os.path.join(log_dir, 'experiments.log'),
        maxBytes=10*1024*1024,  # 10MB
        backupCount=5
    )
    harness_file_handler.setFormatter(logging.Formatter(
        '%(asctime)s [%(levelname)s] %(message)s'
    ))
    harness_logger.addHandler(harness_file_handler)

    # warnings and errors go to the results ledger
    if session_maker is not None:
        db_handler = DatabaseLogHandler(session_maker)
        db_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root.addHandler(db_handler)

def detach_database_handlers():
    """Worker processes must not share the parent's database connections."""
    root = logging.getLogger('')
    for handler in list(root.handlers):
        if isinstance(handler, DatabaseLogHandler):
            root.removeHandler(handler)
