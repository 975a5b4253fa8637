# ssnmbounds/config/settings.py
import os
import psutil
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


def _env_bool(name, default):
    value = os.getenv(name)
    if value is None:
        return default
    return value.strip().lower() in ("1", "true", "yes", "on")


class Config:
    """Centralized configuration for ssnmbounds"""

    # Application paths
    BASE_DIR = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    OUTPUT_DIR = os.getenv("SSNM_OUTPUT_DIR", os.path.join(BASE_DIR, "data", "output"))
    CONFIGS_DIR = os.path.join(BASE_DIR, "data", "configs")
    LOG_DIR = os.getenv("SSNM_LOG_DIR", os.path.join(BASE_DIR, "logs"))

    # Logging configuration
    LOG_LEVEL = os.getenv("SSNM_LOG_LEVEL", "INFO")
    LOG_TO_FILE = _env_bool("SSNM_LOG_TO_FILE", True)

    # Worker pool
    DEFAULT_THREADS = int(os.getenv("SSNM_THREADS", psutil.cpu_count(logical=True) or 1))

    # Quadrature defaults
    QUAD_ABS_TOL = float(os.getenv("SSNM_QUAD_ABS_TOL", "1e-10"))
    QUAD_REL_TOL = float(os.getenv("SSNM_QUAD_REL_TOL", "1e-8"))
    QUAD_MAX_SUBDIVISIONS = int(os.getenv("SSNM_QUAD_MAX_SUBDIVISIONS", "200"))
    QUAD_TRUNCATION_SIGMAS = float(os.getenv("SSNM_QUAD_TRUNCATION_SIGMAS", "10"))

    # Linear algebra
    PINV_EIG_TOL_REL = 1e-12
    GRAM_EXPONENT_LIMIT = 700.0

    # Guards
    ML_EXACT_MAX_N = 20
    QP_MAX_CELLS = int(os.getenv("SSNM_QP_MAX_CELLS", "4096"))
    MC_MIN_TRIALS = 1000

    # Output
    CSV_SIGNIFICANT_DIGITS = 17
    RUN_CONFIG_SCHEMA_VERSION = 1

    # Create necessary directories
    @classmethod
    def ensure_directories(cls):
        """Ensure all required directories exist"""
        os.makedirs(cls.OUTPUT_DIR, exist_ok=True)
        os.makedirs(cls.LOG_DIR, exist_ok=True)
