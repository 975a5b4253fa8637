#!/usr/bin/env python3
"""
Regenerate the data files behind all four figures into Config.OUTPUT_DIR
"""

import os
import sys
import time
import logging
from dotenv import load_dotenv

# Setup path to allow imports from the main project
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from ssnmbounds.config.settings import Config
from ssnmbounds.config.run_config import RunConfig
from ssnmbounds.errors import SSNMError
from ssnmbounds.experiments.figures import FIGURE_KEYS, FIGURES

logger = logging.getLogger('ssnmbounds')

load_dotenv()


def reproduce_figures(threads=None, fmt="csv"):
    """
    Run every figure with its shipped configuration in data/configs/

    Returns:
        list: Paths written.
    """
    Config.ensure_directories()
    threads = threads or Config.DEFAULT_THREADS
    written = []
    for name, run_figure in FIGURES.items():
        config_path = os.path.join(Config.CONFIGS_DIR, f"{name}.json")
        if os.path.exists(config_path):
            run = RunConfig.from_file(config_path)
        else:
            logger.warning(f"{config_path} not found; using the defaults for {name}")
            run = RunConfig()

        kwargs = {key: getattr(run, key) for key in FIGURE_KEYS[name] if getattr(run, key) is not None}
        start = time.time()
        try:
            result = run_figure(quad=run.quadrature, threads=run.get("threads", threads), **kwargs)
        except SSNMError as e:
            logger.error(f"{name}: {type(e).__name__}: {e}")
            continue

        out_path = os.path.join(Config.OUTPUT_DIR, f"{name}.{fmt}")
        written.append(result.write(out_path, fmt))
        logger.info(f"{name}: {len(result.snr_db)} rows in {time.time() - start:.1f}s")
    return written


if __name__ == "__main__":
    logging.basicConfig(
        level=logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )

    print("Reproducing figure data...")
    paths = reproduce_figures()

    if len(paths) == len(FIGURES):
        print("\nAll figures written:")
    else:
        print(f"\n{len(paths)} of {len(FIGURES)} figures written; check the logs for details.")
    for path in paths:
        print(f"  {path}")
