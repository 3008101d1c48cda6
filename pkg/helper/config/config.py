"""
Configuration management for ifsweep.
Centralizes environment variables and computation budgets.
"""

import os
from dataclasses import dataclass, field
from typing import Any, Dict, List

from .logging_config import get_logger

logger = get_logger(__name__)


def _env_bool(name: str, default: str) -> bool:
    return os.environ.get(name, default).lower() == "true"


def _env_int_list(name: str, default: str) -> List[int]:
    raw = os.environ.get(name, default)
    return [int(part) for part in raw.split(",") if part.strip()]


@dataclass
class AppConfig:
    """General application configuration."""
    log_level: str = "INFO"
    log_to_file: bool = False
    output_directory: str = "results"


@dataclass
class EngineConfig:
    """Memory budgets and validation grids for the exact engines."""
    max_level_words: int = 2 ** 27
    max_atoms: int = 2 ** 27
    brute_force_max_words: int = 10 ** 6
    brute_force_max_depth: int = 6
    ratio_check_grid: int = 64


@dataclass
class MonteCarloConfig:
    """Monte-Carlo estimator defaults."""
    samples: int = 10 ** 6
    seed: int = 42
    lanes: int = 1024


@dataclass
class SweepConfig:
    """Parameter sweep defaults."""
    jobs: int = 1
    timeout_seconds: float = 300.0
    depths: List[int] = field(default_factory=lambda: [1, 2, 4, 8, 12, 14])


class ConfigManager:
    """Centralized configuration manager for ifsweep."""

    def __init__(self):
        logger.debug("Initializing configuration manager")
        self._app_config = self._load_app_config()
        self._engine_config = self._load_engine_config()
        self._monte_carlo_config = self._load_monte_carlo_config()
        self._sweep_config = self._load_sweep_config()

    def _load_app_config(self) -> AppConfig:
        config = AppConfig(
            log_level=os.environ.get("LOG_LEVEL", "INFO"),
            log_to_file=_env_bool("LOG_TO_FILE", "false"),
            output_directory=os.environ.get("OUTPUT_DIRECTORY", "results"),
        )
        logger.debug(f"App config loaded - Log level: {config.log_level}")
        return config

    def _load_engine_config(self) -> EngineConfig:
        config = EngineConfig(
            max_level_words=int(os.environ.get("MAX_LEVEL_WORDS", str(2 ** 27))),
            max_atoms=int(os.environ.get("MAX_ATOMS", str(2 ** 27))),
            brute_force_max_words=int(os.environ.get("BRUTE_FORCE_MAX_WORDS", str(10 ** 6))),
            brute_force_max_depth=int(os.environ.get("BRUTE_FORCE_MAX_DEPTH", "6")),
            ratio_check_grid=int(os.environ.get("RATIO_CHECK_GRID", "64")),
        )
        logger.debug(f"Engine config loaded - max atoms: {config.max_atoms}")
        return config

    def _load_monte_carlo_config(self) -> MonteCarloConfig:
        config = MonteCarloConfig(
            samples=int(os.environ.get("MC_SAMPLES", str(10 ** 6))),
            seed=int(os.environ.get("MC_SEED", "42")),
            lanes=int(os.environ.get("MC_LANES", "1024")),
        )
        logger.debug(f"Monte-Carlo config loaded - samples: {config.samples}, seed: {config.seed}")
        return config

    def _load_sweep_config(self) -> SweepConfig:
        config = SweepConfig(
            jobs=int(os.environ.get("SWEEP_JOBS", "1")),
            timeout_seconds=float(os.environ.get("SWEEP_TIMEOUT_SECONDS", "300")),
            depths=_env_int_list("SWEEP_DEPTHS", "1,2,4,8,12,14"),
        )
        logger.debug(f"Sweep config loaded - jobs: {config.jobs}, depths: {config.depths}")
        return config

    @property
    def app(self) -> AppConfig:
        """Get application configuration."""
        return self._app_config

    @property
    def engine(self) -> EngineConfig:
        """Get engine budgets."""
        return self._engine_config

    @property
    def monte_carlo(self) -> MonteCarloConfig:
        """Get Monte-Carlo defaults."""
        return self._monte_carlo_config

    @property
    def sweep(self) -> SweepConfig:
        """Get sweep defaults."""
        return self._sweep_config

    def get_environment_info(self) -> Dict[str, Any]:
        """Get environment information for debugging."""
        return {
            "log_level": self._app_config.log_level,
            "output_directory": self._app_config.output_directory,
            "max_level_words": self._engine_config.max_level_words,
            "max_atoms": self._engine_config.max_atoms,
            "mc_samples": self._monte_carlo_config.samples,
            "mc_seed": self._monte_carlo_config.seed,
            "sweep_jobs": self._sweep_config.jobs,
            "sweep_timeout_seconds": self._sweep_config.timeout_seconds,
        }

    def validate_configuration(self) -> Dict[str, bool]:
        """Validate all configuration sections."""
        results = {
            "valid_log_level": self._app_config.log_level.upper() in
                ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
            "level_words_positive": self._engine_config.max_level_words > 0,
            "atoms_positive": self._engine_config.max_atoms > 0,
            "brute_force_depth_valid": 1 <= self._engine_config.brute_force_max_depth <= 6,
            "ratio_grid_valid": self._engine_config.ratio_check_grid >= 2,
            "mc_samples_positive": self._monte_carlo_config.samples > 0,
            "mc_lanes_positive": self._monte_carlo_config.lanes > 0,
            "sweep_jobs_positive": self._sweep_config.jobs >= 1,
            "sweep_timeout_positive": self._sweep_config.timeout_seconds > 0,
            "sweep_depths_valid": all(n >= 1 for n in self._sweep_config.depths),
        }
        passed = sum(bool(v) for v in results.values())
        logger.info(f"Configuration validation completed: {passed}/{len(results)} checks passed")
        return results


_config_manager = None


def get_config() -> ConfigManager:
    """Get the global configuration manager instance."""
    global _config_manager
    if _config_manager is None:
        _config_manager = ConfigManager()
    return _config_manager


def reload_config() -> ConfigManager:
    """Re-read the environment, replacing the global configuration."""
    global _config_manager
    _config_manager = ConfigManager()
    return _config_manager
