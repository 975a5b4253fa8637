import json
import logging
import os
import subprocess
from collections import OrderedDict
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from ssnmbounds import __version__
from ssnmbounds.config.settings import Config
from ssnmbounds.errors import ConfigError, DimensionMismatch

logger = logging.getLogger('ssnmbounds')

FORMATS = ("csv", "json")


def git_describe():
    """``git describe --always --dirty`` of the source tree, or "unknown"."""
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            cwd=Config.BASE_DIR, capture_output=True, text=True, timeout=5, check=True)
        return out.stdout.strip() or "unknown"
    except (OSError, subprocess.SubprocessError):
        return "unknown"


def run_timestamp():
    """UTC ISO-8601 time; SOURCE_DATE_EPOCH pins it for reproducible output."""
    epoch = os.getenv("SOURCE_DATE_EPOCH")
    if epoch is not None:
        try:
            return datetime.fromtimestamp(int(epoch), tz=timezone.utc).isoformat()
        except ValueError:
            logger.warning(f"Ignoring malformed SOURCE_DATE_EPOCH={epoch!r}")
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat()


def build_metadata(config, **fields_):
    """Provenance block stored with every result."""
    meta = OrderedDict()
    meta["package_version"] = __version__
    meta["N"] = config.N
    meta["S"] = config.S
    meta["sigma2"] = config.sigma2
    for key, value in fields_.items():
        meta[key] = value.to_dict() if hasattr(value, "to_dict") else value
    meta["git_describe"] = git_describe()
    meta["timestamp"] = run_timestamp()
    return meta


def _fmt(value):
    return f"{float(value):.{Config.CSV_SIGNIFICANT_DIGITS}g}"


@dataclass(eq=False)
class SweepResult:
    """Named columns over a shared SNR axis plus provenance metadata."""

    config: object
    snr_db: np.ndarray
    columns: "OrderedDict[str, np.ndarray]" = field(default_factory=OrderedDict)
    meta: dict = field(default_factory=OrderedDict)

    def __post_init__(self):
        self.snr_db = np.asarray(self.snr_db, dtype=float).reshape(-1)
        cols = OrderedDict()
        for name, values in self.columns.items():
            arr = np.asarray(values, dtype=float).reshape(-1)
            if arr.size != self.snr_db.size:
                raise DimensionMismatch(
                    f"column '{name}' has {arr.size} values, snr_db has {self.snr_db.size}")
            cols[name] = arr
        self.columns = cols

    @property
    def column_names(self):
        return ["snr_db"] + list(self.columns)

    def column(self, name):
        return self.snr_db if name == "snr_db" else self.columns[name]

    def to_csv(self):
        lines = [",".join(self.column_names)]
        table = [self.snr_db] + list(self.columns.values())
        for i in range(self.snr_db.size):
            lines.append(",".join(_fmt(col[i]) for col in table))
        return "\n".join(lines) + "\n"

    def to_json(self):
        payload = OrderedDict()
        payload["meta"] = self.meta
        payload["columns"] = OrderedDict((name, self.column(name).tolist()) for name in self.column_names)
        return json.dumps(payload, indent=2) + "\n"

    def render(self, fmt="csv"):
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ConfigError(f"unknown output format '{fmt}' (expected csv or json)")

    def write(self, path, fmt="csv"):
        """Write the table; CSV output gets a ``<path>.meta.json`` sidecar for the metadata."""
        directory = os.path.dirname(os.path.abspath(path))
        os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(self.render(fmt))
        if fmt == "csv":
            with open(path + ".meta.json", "w", encoding="utf-8", newline="\n") as f:
                f.write(json.dumps(self.meta, indent=2) + "\n")
        logger.info(f"Wrote {self.snr_db.size} rows to {path}")
        return path
