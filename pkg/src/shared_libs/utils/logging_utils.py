import logging
import json
from typing import Any, Dict, Optional

# Định dạng JSON cho toàn bộ log của lab
class JsonFormatter(logging.Formatter):
    """
    Custom logging formatter that outputs logs as JSON strings.
    """
    def format(self, record: logging.LogRecord) -> str:
        log_data = {
            "timestamp": self.formatTime(record),
            "level": record.levelname,
            "name": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "line": record.lineno,
            "event_type": getattr(record, 'event_type', 'generic'),  # e.g. 'solver', 'protocol_step', 'check'
            "data": getattr(record, 'extra_data', {}),
        }
        if record.exc_info:
            log_data['exception'] = self.formatException(record.exc_info)

        return json.dumps(log_data, default=str)


def setup_logging(level: int = logging.INFO, json_format: bool = True) -> None:
    """
    Sets up the application's logging. JSON output is the default; plain text is
    kept for interactive use.
    """
    handler = logging.StreamHandler()
    if json_format:
        handler.setFormatter(JsonFormatter())
    else:
        handler.setFormatter(logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s'))

    root_logger = logging.getLogger()
    root_logger.setLevel(level)
    # Tránh gắn handler hai lần khi cli được gọi lặp lại trong cùng process (tests)
    for existing in list(root_logger.handlers):
        if getattr(existing, "_qsrlab_handler", False):
            root_logger.removeHandler(existing)
    handler._qsrlab_handler = True
    root_logger.addHandler(handler)

    logging.getLogger('asyncio').setLevel(logging.WARNING)


def get_structured_logger(name: str) -> logging.Logger:
    """Returns a logger instance for structured logging."""
    return logging.getLogger(name)


def log_event(logger: logging.Logger, message: str, event_type: str,
              data: Optional[Dict[str, Any]] = None, level: int = logging.INFO) -> None:
    """Logs `message` with the structured fields understood by JsonFormatter."""
    logger.log(level, message, extra={'event_type': event_type, 'extra_data': data or {}})

# Usage:
# logger = get_structured_logger(__name__)
# log_event(logger, "Barrier step", "solver", {"t": 1e4, "gap": 1e-5}, level=logging.DEBUG)
