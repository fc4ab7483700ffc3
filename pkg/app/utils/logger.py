"""structlog setup shared by the CLI, the API and the services.

Events go to stderr: the CLI writes schedules and reports to stdout.
"""

import logging
import sys
from typing import Any, MutableMapping

import numpy as np
import structlog

from app.core.config import settings


def numpy_to_builtin(logger: Any, method_name: str, event_dict: MutableMapping[str, Any]):
    """Render numpy scalars and arrays as plain numbers and lists."""
    for key, value in event_dict.items():
        if isinstance(value, np.generic):
            event_dict[key] = value.item()
        elif isinstance(value, np.ndarray):
            event_dict[key] = value.tolist()
    return event_dict


def configure_logging(log_format: str, debug: bool) -> None:
    logging.basicConfig(
        format="%(message)s",
        stream=sys.stderr,
        level=logging.DEBUG if debug else logging.INFO,
    )
    renderer = (
        structlog.processors.JSONRenderer()
        if log_format == "json"
        else structlog.dev.ConsoleRenderer(colors=False)
    )
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.format_exc_info,
            numpy_to_builtin,
            renderer,
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )


configure_logging(settings.LOG_FORMAT, settings.DEBUG)

logger = structlog.get_logger("qrl")
