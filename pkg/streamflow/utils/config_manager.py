"""
Configuration Manager for Streamflow

Handles loading and validation of configuration settings
from YAML files and environment variables, and builds the
validated run settings used by the pipeline.
"""

import copy
import os
from pathlib import Path
from typing import Any, Dict, Literal, Optional

import yaml
from dotenv import load_dotenv
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .errors import ConfigError

# Load environment variables
load_dotenv()

LOG_ENV_VAR = "STREAMFLOW_LOG"

DEFAULT_CONFIG: Dict[str, Any] = {
    "pipeline": {
        "window": 4,
        "step": 1,
        "min_shared_refs": 2,
        "binarize": False,
    },
    "detection": {
        "detector": "louvain",
        "resolution": 1.0,
        "seeds": 10,
        "seed": 0,
    },
    "linking": {
        "similarity": "jaccard",
        "link_threshold": 0.0,
    },
    "denoise": {
        "max_iterations": None,
    },
    "output": {
        "out_dir": "streamflow_out",
    },
    "logging": {
        "level": "INFO",
        "log_file": None,
        "max_file_size": "10MB",
        "backup_count": 5,
    },
}

REQUIRED_SECTIONS = ["pipeline", "detection", "linking", "denoise", "output", "logging"]


class PipelineConfig(BaseModel):
    """
    Algorithm settings shared by every pipeline stage.

    Defaults follow the reference setup: 4-year windows translated by one
    year, articles sharing fewer than 2 references left unlinked.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    window: int = Field(4, ge=1)
    step: int = Field(1, ge=1)
    min_shared_refs: int = Field(2, ge=1)
    binarize: bool = False
    detector: Literal["louvain", "greedy"] = "louvain"
    resolution: float = Field(1.0, gt=0)
    similarity: Literal["jaccard", "overlap"] = "jaccard"
    link_threshold: float = Field(0.0, ge=0.0, le=1.0)
    max_iterations: Optional[int] = Field(None, ge=1)

    @model_validator(mode="after")
    def _step_within_window(self) -> "PipelineConfig":
        if self.step > self.window:
            raise ValueError(
                f"step ({self.step}) must not exceed window ({self.window}); years would be orphaned"
            )
        return self


class RunConfig(PipelineConfig):
    """Settings of one `run` invocation: pipeline settings plus I/O and seeds."""

    corpus: Path
    out: Path = Path("streamflow_out")
    seeds: int = Field(10, ge=1)
    seed: int = Field(0, ge=0)

    @property
    def master_seeds(self) -> list:
        return [self.seed + i for i in range(self.seeds)]


def build_model(model_cls, values: Dict[str, Any]):
    """
    Validate settings into a pydantic model, wrapping failures as ConfigError.

    Args:
        model_cls: PipelineConfig, RunConfig or another settings model
        values: Raw values (None entries fall back to model defaults)

    Returns:
        Validated model instance

    Raises:
        ConfigError: If validation fails
    """
    cleaned = {k: v for k, v in values.items() if v is not None}
    try:
        return model_cls(**cleaned)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first.get("loc", ())) or "config"
        raise ConfigError(f"invalid setting {location}: {first['msg']}") from e


class ConfigManager:
    """
    Configuration manager for loading and validating settings.

    Supports YAML configuration files with environment variable overrides.
    Without an explicit path, ./config.yaml is used when present and the
    built-in defaults otherwise.
    """

    def __init__(self, config_path: Optional[str] = None):
        """
        Initialize configuration manager.

        Args:
            config_path: Path to YAML configuration file

        Raises:
            ConfigError: If the file is missing, invalid YAML, or fails validation
        """
        if config_path is None and Path("config.yaml").exists():
            config_path = "config.yaml"
        self.config_path = Path(config_path) if config_path else None
        self.config = self._load_config()
        self._validate_config()
        logger.debug(f"Configuration loaded from: {self.config_path or 'built-in defaults'}")

    def _load_config(self) -> Dict[str, Any]:
        """
        Load configuration from YAML file, layered over the defaults.

        Returns:
            Configuration dictionary
        """
        config = copy.deepcopy(DEFAULT_CONFIG)

        if self.config_path is not None:
            if not self.config_path.exists():
                raise ConfigError(f"Configuration file not found: {self.config_path}")

            try:
                with open(self.config_path, "r", encoding="utf-8") as f:
                    loaded = yaml.safe_load(f) or {}
            except yaml.YAMLError as e:
                logger.error(f"Invalid YAML configuration: {e}")
                raise ConfigError(f"invalid YAML in {self.config_path}: {e}") from e

            if not isinstance(loaded, dict):
                raise ConfigError(f"{self.config_path} must contain a mapping")

            for section, values in loaded.items():
                if isinstance(values, dict) and isinstance(config.get(section), dict):
                    config[section].update(values)
                else:
                    config[section] = values

        return self._apply_env_overrides(config)

    def _apply_env_overrides(self, config: Dict[str, Any]) -> Dict[str, Any]:
        """
        Apply environment variable overrides to configuration.

        Args:
            config: Base configuration dictionary

        Returns:
            Configuration with environment overrides applied
        """
        log_level = os.getenv(LOG_ENV_VAR)
        if log_level:
            config["logging"]["level"] = log_level.upper()

        return config

    def _validate_config(self) -> None:
        """
        Validate required configuration settings.

        Raises:
            ConfigError: If required sections are missing or values are invalid
        """
        for section in REQUIRED_SECTIONS:
            if not isinstance(self.config.get(section), dict):
                raise ConfigError(f"Required configuration section missing: {section}")

        # Algorithm settings are validated by the pydantic model
        self.pipeline_settings()

        detection = self.config["detection"]
        if int(detection.get("seeds") or 0) <= 0:
            raise ConfigError("detection.seeds must be positive")

        level = str(self.config["logging"].get("level", "INFO")).upper()
        if level not in {"TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL"}:
            raise ConfigError(f"Unknown log level: {level}")

    def get_section(self, section: str) -> Dict[str, Any]:
        """
        Get a specific configuration section.

        Args:
            section: Section name to retrieve

        Returns:
            Section configuration dictionary

        Raises:
            KeyError: If section doesn't exist
        """
        if section not in self.config:
            raise KeyError(f"Configuration section not found: {section}")

        return dict(self.config[section])

    def pipeline_settings(self) -> Dict[str, Any]:
        """Flatten the algorithm sections into PipelineConfig field names."""
        pipeline = self.config["pipeline"]
        detection = self.config["detection"]
        linking = self.config["linking"]
        values = {
            "window": pipeline.get("window"),
            "step": pipeline.get("step"),
            "min_shared_refs": pipeline.get("min_shared_refs"),
            "binarize": pipeline.get("binarize"),
            "detector": detection.get("detector"),
            "resolution": detection.get("resolution"),
            "similarity": linking.get("similarity"),
            "link_threshold": linking.get("link_threshold"),
            "max_iterations": self.config["denoise"].get("max_iterations"),
        }
        build_model(PipelineConfig, values)
        return values

    def run_config(self, **overrides: Any) -> RunConfig:
        """
        Build the run settings, CLI overrides taking precedence over the file.

        Args:
            **overrides: RunConfig field values; None means "not given"

        Returns:
            Validated RunConfig
        """
        values = self.pipeline_settings()
        values["seeds"] = self.config["detection"].get("seeds")
        values["seed"] = self.config["detection"].get("seed")
        values["out"] = self.config["output"].get("out_dir")
        values.update({k: v for k, v in overrides.items() if v is not None})
        return build_model(RunConfig, values)

    def get_log_config(self) -> Dict[str, Any]:
        """
        Get logging configuration for loguru setup.

        Returns:
            Logging configuration dictionary
        """
        log_config = self.get_section("logging")

        log_file = log_config.get("log_file")
        if log_file:
            Path(log_file).parent.mkdir(parents=True, exist_ok=True)

        return {
            "level": str(log_config.get("level", "INFO")).upper(),
            "file": log_file,
            "rotation": log_config.get("max_file_size", "10MB"),
            "retention": log_config.get("backup_count", 5),
            "format": "{time:YYYY-MM-DD HH:mm:ss} | {level} | {name}:{function}:{line} | {message}",
        }
