"""
Shared utilities for QSR Lab: the exception hierarchy and structured logging.
"""

from .logging_utils import setup_logging, get_structured_logger, log_event, JsonFormatter

__all__ = [
    "setup_logging",
    "get_structured_logger",
    "log_event",
    "JsonFormatter",
]
