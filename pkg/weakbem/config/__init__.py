"""Settings and structured logging."""
from .settings import get_settings, Settings
from .logging_config import bind_run_context, clear_run_context, get_logger, setup_logging

__all__ = ["get_settings", "Settings", "setup_logging", "get_logger", "bind_run_context", "clear_run_context"]
