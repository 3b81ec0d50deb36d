"""
Runtime configuration for the wallcross engines.

Settings come from WALLCROSS_* environment variables, after a local .env file
has been merged by python-dotenv. Command line flags override them.
"""

import os
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv

ENV_PREFIX = "WALLCROSS_"
_TRUE_VALUES = {"1", "true", "yes", "on"}


@dataclass
class EnvironmentConfig:
    """Environment configuration"""
    default_seed: int = 0
    path_retries: int = 25
    memoize: bool = True
    parallel: bool = False
    max_workers: Optional[int] = None
    log_level: str = "WARNING"
    output_format: str = "text"

    def __post_init__(self) -> None:
        if self.path_retries < 1:
            raise ValueError("path_retries must be at least 1")
        if self.output_format not in ("text", "json"):
            raise ValueError(f"unknown output format {self.output_format!r}")
        self.log_level = self.log_level.upper()

    @classmethod
    def from_env(cls, dotenv: bool = True) -> "EnvironmentConfig":
        """Build a configuration from the process environment

        Args:
            dotenv: Merge a .env file from the working directory first

        Returns:
            The configuration
        """
        if dotenv:
            load_dotenv()
        workers = wallcross_getenv("MAX_WORKERS")
        return cls(
            default_seed=int(wallcross_getenv("SEED") or 0),
            path_retries=int(wallcross_getenv("RETRIES") or 25),
            memoize=_as_bool(wallcross_getenv("MEMOIZE"), True),
            parallel=_as_bool(wallcross_getenv("PARALLEL"), False),
            max_workers=int(workers) if workers else None,
            log_level=wallcross_getenv("LOG_LEVEL") or "WARNING",
            output_format=wallcross_getenv("FORMAT") or "text",
        )


def wallcross_getenv(var: str) -> str:
    """Get a WALLCROSS_ environment variable with empty string as default"""
    return os.getenv(ENV_PREFIX + var, "")


def _as_bool(value: str, default: bool) -> bool:
    if not value:
        return default
    return value.strip().lower() in _TRUE_VALUES


# Global configuration instance
config = EnvironmentConfig.from_env()


def reload_config() -> EnvironmentConfig:
    """Re-read the environment into the global configuration"""
    fresh = EnvironmentConfig.from_env()
    for name in fresh.__dataclass_fields__:
        setattr(config, name, getattr(fresh, name))
    return config


def get_default_seed() -> int:
    """Get default path planning seed"""
    return config.default_seed


def get_path_retries() -> int:
    """Get path planning retry budget"""
    return config.path_retries


def get_memoize() -> bool:
    """Get whether recursive Euler class calls are memoized"""
    return config.memoize


def get_parallel() -> bool:
    """Get whether top-level crossings run in a process pool"""
    return config.parallel


def get_max_workers() -> Optional[int]:
    """Get process pool size"""
    return config.max_workers


def get_log_level() -> str:
    """Get log level name"""
    return config.log_level


def get_output_format() -> str:
    """Get default output format"""
    return config.output_format
