from ssnmbounds.config.logging_config import setup_logging
from ssnmbounds.config.settings import Config
from ssnmbounds.config.run_config import QuadratureSpec, RunConfig

__all__ = ['setup_logging', 'Config', 'QuadratureSpec', 'RunConfig']
