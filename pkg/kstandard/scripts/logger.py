import os
import logging
from typing import Optional

from pythonjsonlogger import jsonlogger


class Logger:
    """Logging setup for verification runs: JSON lines to a file, plain text to the terminal"""

    def __init__(self, log_file: Optional[str] = None, level: str = "INFO"):
        self.log_file = log_file
        self.level = getattr(logging, str(level).upper(), None)
        if not isinstance(self.level, int):
            raise ValueError(f"✗ Error: unknown log level {level!r}")
        self.setup_logging()

    def setup_logging(self):
        """Setup logging configuration"""
        stream = logging.StreamHandler()
        stream.setFormatter(logging.Formatter('%(asctime)s - %(levelname)s - %(message)s'))
        handlers = [stream]
        if self.log_file:
            os.makedirs(os.path.dirname(os.path.abspath(self.log_file)), exist_ok=True)
            file_handler = logging.FileHandler(self.log_file)
            file_handler.setFormatter(jsonlogger.JsonFormatter('%(asctime)s %(name)s %(levelname)s %(message)s'))
            handlers.append(file_handler)

        logging.basicConfig(level=self.level, handlers=handlers, force=True)
        self.logger = logging.getLogger("kstandard")

    def info(self, message: str):
        self.logger.info(message)

    def error(self, message: str):
        self.logger.error(message)

    def warning(self, message: str):
        self.logger.warning(message)

    def debug(self, message: str):
        self.logger.debug(message)
