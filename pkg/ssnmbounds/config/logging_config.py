import logging
import os
import sys
from datetime import datetime

from ssnmbounds.config.settings import Config


def setup_logging(level=None, log_to_file=None):
    """Configure logging for the application.

    Records go to standard error (standard output carries CSV/JSON data) and,
    unless disabled, to a timestamped file under ``Config.LOG_DIR``.
    """
    level = level or Config.LOG_LEVEL
    if log_to_file is None:
        log_to_file = Config.LOG_TO_FILE

    # Reconfigure stderr to use UTF-8 encoding
    if hasattr(sys.stderr, "reconfigure"):
        sys.stderr.reconfigure(encoding='utf-8')

    handlers = [logging.StreamHandler(sys.stderr)]
    if log_to_file:
        os.makedirs(Config.LOG_DIR, exist_ok=True)
        log_file = os.path.join(Config.LOG_DIR, f"ssnmbounds_{datetime.now().strftime('%Y%m%d_%H%M%S')}.log")
        handlers.append(logging.FileHandler(log_file, encoding='utf-8'))

    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )

    logger = logging.getLogger('ssnmbounds')
    logger.debug("Logging initialized")

    return logger
