"""
Centralized logging configuration for ifsweep.
Provides structured logging with appropriate levels and formatting.
"""

import functools
import logging
import sys
import time
from datetime import datetime
from pathlib import Path
from typing import Optional

ROOT_LOGGER_NAME = "ifsweep"


def setup_logging(log_level: str = "INFO", log_to_file: bool = False,
                  log_dir: str = "logs") -> logging.Logger:
    """
    Setup centralized logging configuration for ifsweep.

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_to_file: Whether to also log to a daily file
        log_dir: Directory for log files

    Returns:
        Configured root application logger
    """
    logger = logging.getLogger(ROOT_LOGGER_NAME)
    logger.setLevel(getattr(logging, log_level.upper(), logging.INFO))

    # Clear any existing handlers
    logger.handlers.clear()

    formatter = logging.Formatter(
        fmt='%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    # Console goes to stderr so report output on stdout stays clean
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(logger.level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if log_to_file:
        try:
            path = Path(log_dir)
            path.mkdir(exist_ok=True)
            log_file = path / f"ifsweep_{datetime.now().strftime('%Y%m%d')}.log"
            file_handler = logging.FileHandler(log_file, mode='a', encoding='utf-8')
            file_handler.setLevel(logging.DEBUG)
            file_handler.setFormatter(formatter)
            logger.addHandler(file_handler)
            logger.info(f"Logging to file: {log_file}")
        except OSError as e:
            logger.warning(f"Could not setup file logging: {e}")

    logger.debug(f"Log level set to: {log_level}")
    return logger


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """
    Get a logger instance for a specific module.

    Args:
        name: Logger name (typically __name__ from calling module)

    Returns:
        Logger instance
    """
    if name is None:
        return logging.getLogger(ROOT_LOGGER_NAME)
    return logging.getLogger(f"{ROOT_LOGGER_NAME}.{name}")


def log_function_entry(logger: logging.Logger, func_name: str, **kwargs):
    """Log function entry with parameters."""
    if kwargs:
        params = ", ".join(f"{k}={v}" for k, v in kwargs.items())
        logger.debug(f"Entering {func_name}({params})")
    else:
        logger.debug(f"Entering {func_name}()")


def log_function_exit(logger: logging.Logger, func_name: str, result=None):
    """Log function exit with optional summary of the result."""
    if result is not None:
        logger.debug(f"Exiting {func_name}() -> {result}")
    else:
        logger.debug(f"Exiting {func_name}()")


def log_error(logger: logging.Logger, error: Exception, context: Optional[str] = None):
    """
    Log an error with context information.

    Args:
        logger: Logger instance
        error: Exception instance
        context: Additional context about where the error occurred
    """
    error_msg = f"{type(error).__name__}: {error}"
    if context:
        error_msg = f"{context} - {error_msg}"
    logger.error(error_msg, exc_info=logger.isEnabledFor(logging.DEBUG))


def log_performance(logger: logging.Logger, operation: str, duration: float,
                    details: Optional[str] = None):
    """Log the wall time of an operation."""
    msg = f"Performance: {operation} took {duration:.3f}s"
    if details:
        msg += f" ({details})"
    if duration > 1.0:
        logger.info(msg)
    else:
        logger.debug(msg)


def log_execution_time(logger: Optional[logging.Logger] = None):
    """
    Decorator to log function execution time.

    Args:
        logger: Logger instance (one is created from the function's module if omitted)
    """
    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            nonlocal logger
            if logger is None:
                logger = get_logger(func.__module__)

            start_time = time.perf_counter()
            try:
                result = func(*args, **kwargs)
            except Exception:
                log_performance(logger, f"{func.__name__} (failed)",
                                time.perf_counter() - start_time)
                raise
            log_performance(logger, func.__name__, time.perf_counter() - start_time)
            return result

        return wrapper
    return decorator
