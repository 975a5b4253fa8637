import json
import logging
from dataclasses import dataclass, field, fields, replace
from typing import Optional

from ssnmbounds.config.settings import Config
from ssnmbounds.errors import ConfigError

logger = logging.getLogger('ssnmbounds')

INT_FIELDS = ("schema_version", "N", "S", "Q", "n_trials", "n_vectors", "seed", "threads", "max_subdivisions")
REAL_FIELDS = ("sigma2", "alpha", "t", "threshold", "abs_tol", "rel_tol", "truncation_radius_sigmas")
LIST_FIELDS = ("x", "snr_grid_db", "snr_ratios")


def _is_real(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def check_field_types(data):
    """Raise ConfigError when a JSON value has the wrong type for its key."""
    for key, value in data.items():
        if value is None:
            continue
        if key in INT_FIELDS and not (isinstance(value, int) and not isinstance(value, bool)):
            raise ConfigError(f"{key} must be an integer, got {value!r}")
        if key in REAL_FIELDS and not _is_real(value):
            raise ConfigError(f"{key} must be a number, got {value!r}")
        if key in LIST_FIELDS and not (isinstance(value, list) and all(_is_real(v) for v in value)):
            raise ConfigError(f"{key} must be a list of numbers, got {value!r}")
        if key == "exact_marginals" and not isinstance(value, bool):
            raise ConfigError(f"exact_marginals must be true or false, got {value!r}")


@dataclass(frozen=True)
class QuadratureSpec:
    """Accuracy controls for the adaptive 1-D integrals."""

    abs_tol: float = Config.QUAD_ABS_TOL
    rel_tol: float = Config.QUAD_REL_TOL
    max_subdivisions: int = Config.QUAD_MAX_SUBDIVISIONS
    truncation_radius_sigmas: float = Config.QUAD_TRUNCATION_SIGMAS

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ConfigError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ConfigError("max_subdivisions must be >= 1")
        if self.truncation_radius_sigmas < 8:
            raise ConfigError("truncation_radius_sigmas must be >= 8")

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ConfigError("quadrature must be a JSON object")
        unknown = set(data) - {f.name for f in fields(cls)}
        if unknown:
            raise ConfigError(f"unknown quadrature keys: {sorted(unknown)}")
        check_field_types(data)
        return cls(**data)

    def to_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class RunConfig:
    """Settings for one CLI run. Every field is optional; commands supply their own defaults."""

    schema_version: int = Config.RUN_CONFIG_SCHEMA_VERSION
    N: Optional[int] = None
    S: Optional[int] = None
    sigma2: Optional[float] = None
    x: Optional[list] = None
    snr_grid_db: Optional[list] = None
    snr_ratios: Optional[list] = None
    Q: Optional[int] = None
    alpha: Optional[float] = None
    t: Optional[float] = None
    n_trials: Optional[int] = None
    n_vectors: Optional[int] = None
    threshold: Optional[float] = None
    estimator: Optional[dict] = None
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    seed: Optional[int] = None
    threads: Optional[int] = None
    exact_marginals: Optional[bool] = None

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ConfigError("run configuration must be a JSON object")
        allowed = {f.name for f in fields(cls)}
        unknown = set(data) - allowed
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        check_field_types({k: v for k, v in data.items() if k != "quadrature"})
        if "schema_version" not in data:
            raise ConfigError("configuration is missing schema_version")
        if data["schema_version"] != Config.RUN_CONFIG_SCHEMA_VERSION:
            raise ConfigError(
                f"unsupported schema_version {data['schema_version']!r} "
                f"(expected {Config.RUN_CONFIG_SCHEMA_VERSION})")
        values = dict(data)
        if "quadrature" in values:
            values["quadrature"] = QuadratureSpec.from_dict(values["quadrature"])
        if values.get("estimator") is not None and not isinstance(values["estimator"], dict):
            raise ConfigError("estimator must be a JSON object such as {\"kind\": \"ml\"}")
        return cls(**values)

    @classmethod
    def from_file(cls, path):
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except FileNotFoundError:
            raise ConfigError(f"configuration file not found: {path}")
        except json.JSONDecodeError as e:
            raise ConfigError(f"configuration file {path} is not valid JSON: {e}")
        logger.info(f"Loaded run configuration from {path}")
        return cls.from_dict(data)

    def override(self, **kwargs):
        """Return a copy with every non-None keyword applied."""
        updates = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **updates) if updates else self

    def get(self, name, default):
        value = getattr(self, name)
        return default if value is None else value
