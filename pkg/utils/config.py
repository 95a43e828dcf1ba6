import json
import os
from dataclasses import asdict, dataclass, fields, replace
from typing import Any, Dict, Optional

import psutil
from dotenv import load_dotenv
from loguru import logger

from utils.errors import ConfigError

CONFIG_FILE = "k3ml_config.json"
OUTPUT_FORMATS = ("json", "csv", "text")
LOG_LEVELS = ("TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL")

ENV_VARS = {
    "radius": "K3ML_RADIUS",
    "quadrature_tol": "K3ML_QUADRATURE_TOL",
    "n_max": "K3ML_N_MAX",
    "p_max": "K3ML_P_MAX",
    "threads": "K3ML_THREADS",
    "output": "K3ML_OUTPUT",
    "archive_path": "K3ML_DB_PATH",
    "log_level": "K3ML_LOG_LEVEL",
    "log_file": "K3ML_LOG_FILE",
}


def default_threads() -> int:
    return max(1, psutil.cpu_count(logical=False) or 1)


@dataclass(frozen=True)
class RunConfig:
    """All tolerances and budgets of a run"""
    radius: int = 4096
    quadrature_tol: float = 1e-6
    n_max: int = 100_000
    p_max: int = 50
    threads: int = 1
    output: str = "text"
    r2_p_max: int = 7
    archive_path: Optional[str] = None
    log_level: str = "INFO"
    log_file: Optional[str] = None

    def __post_init__(self):
        for name in ("radius", "n_max", "p_max", "threads", "r2_p_max"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ConfigError(f"{name} must be a positive integer, got {value!r}")
        if not isinstance(self.quadrature_tol, (int, float)) or not 0 < self.quadrature_tol < 1:
            raise ConfigError(f"quadrature_tol must lie in (0, 1), got {self.quadrature_tol!r}")
        if self.output not in OUTPUT_FORMATS:
            raise ConfigError(f"output must be one of {', '.join(OUTPUT_FORMATS)}, got {self.output!r}")
        if str(self.log_level).upper() not in LOG_LEVELS:
            raise ConfigError(f"unknown log level {self.log_level!r}")
        object.__setattr__(self, "log_level", str(self.log_level).upper())

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _coerce(name: str, raw: Any) -> Any:
    """Convert a config-file or environment value to the field's type"""
    if raw is None or raw == "":
        return None
    try:
        if name in ("radius", "n_max", "p_max", "threads", "r2_p_max"):
            if isinstance(raw, float) and not raw.is_integer():
                raise ValueError(raw)
            return int(raw)
        if name == "quadrature_tol":
            return float(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} has an invalid value {raw!r}")
    return str(raw)


class Config:
    """Singleton configuration class"""
    _instance = None

    def __new__(cls, config_file: str = CONFIG_FILE):
        if cls._instance is None:
            cls._instance = super(Config, cls).__new__(cls)
            cls._instance._initialized = False
        return cls._instance

    def __init__(self, config_file: str = CONFIG_FILE):
        if self._initialized:
            return

        load_dotenv()

        self.config_file = config_file
        values: Dict[str, Any] = {"threads": default_threads()}
        values.update(self._load_config_file())

        for name, var in ENV_VARS.items():
            raw = os.getenv(var)
            if raw:
                values[name] = _coerce(name, raw)

        if values.get("archive_path"):
            values["archive_path"] = os.path.abspath(os.path.expanduser(values["archive_path"]))

        self.run = RunConfig(**values)
        logger.debug(f"Run configuration: {self.run}")

        self._initialized = True

    @classmethod
    def reset(cls) -> None:
        """Forget the singleton so the next Config() reloads every layer"""
        cls._instance = None

    def _load_config_file(self) -> Dict[str, Any]:
        """Load RunConfig overrides from the JSON config file"""
        try:
            with open(self.config_file, "r") as f:
                data = json.load(f)
        except FileNotFoundError:
            return {}
        except json.JSONDecodeError as e:
            raise ConfigError(f"{self.config_file} is not valid JSON: {e}")

        if not isinstance(data, dict):
            raise ConfigError(f"{self.config_file} must hold a JSON object")

        known = {f.name for f in fields(RunConfig)}
        unknown = sorted(set(data) - known)
        if unknown:
            logger.warning(f"Ignoring unknown keys in {self.config_file}: {', '.join(unknown)}")
        return {name: _coerce(name, value) for name, value in data.items() if name in known}

    def apply_overrides(self, **overrides: Any) -> RunConfig:
        """Apply explicit CLI values on top of the loaded layers; None means not given"""
        given = {name: value for name, value in overrides.items() if value is not None}
        if given.get("archive_path"):
            given["archive_path"] = os.path.abspath(os.path.expanduser(given["archive_path"]))
        try:
            self.run = replace(self.run, **given)
        except TypeError as e:
            raise ConfigError(f"unknown configuration key: {e}")
        return self.run

    def save_config(self) -> None:
        """Save the current run configuration to the JSON config file"""
        try:
            data = self.run.as_dict()
            data.pop("log_file", None)
            with open(self.config_file, "w") as f:
                json.dump(data, f, indent=4)
        except Exception as e:
            logger.error(f"Failed to save config: {e}")
