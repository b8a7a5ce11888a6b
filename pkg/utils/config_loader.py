"""
Configuration Loader Utility
=============================
Centralized configuration management for Queen-Spectra

This module handles loading configuration from:
1. config/config.json
2. Environment variables (.env file or system env)
3. Command-line flags (applied by the CLI on top of the loaded values)

Priority: Command-line flags > Environment Variables > config.json
"""

import json
import os
from pathlib import Path
from typing import Any, Dict

from dotenv import load_dotenv


class ConfigurationError(Exception):
    """Raised when configuration is invalid or missing"""
    pass


# Environment variable -> configuration key (all positive integers)
ENV_OVERRIDES: Dict[str, str] = {
    'QUEEN_SPECTRA_BUDGET': 'enumeration_budget',
    'QUEEN_SPECTRA_ORACLE_BUDGET': 'oracle_budget',
    'QUEEN_SPECTRA_WORKERS': 'workers',
}

POSITIVE_KEYS = ['enumeration_budget', 'oracle_budget', 'oracle_check_budget', 'workers']
REQUIRED_KEYS = POSITIVE_KEYS + ['seed', 'residual_sample_size', 'logging']


class ConfigLoader:
    """
    Singleton configuration loader for the application.

    Usage:
        config = ConfigLoader().get_config()
        budget = config['enumeration_budget']
    """

    _instance = None
    _config = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(ConfigLoader, cls).__new__(cls)
        return cls._instance

    def __init__(self):
        if self._config is None:
            self._load_configuration()

    def _load_configuration(self) -> None:
        """Load configuration from all sources"""
        load_dotenv()

        project_root = Path(__file__).parent.parent
        config_file = project_root / 'config' / 'config.json'

        if not config_file.exists():
            raise ConfigurationError(f"Configuration file not found: {config_file}")

        with open(config_file, 'r', encoding='utf-8') as f:
            config = json.load(f)

        self._apply_env_overrides(config)
        self._validate_config(config)
        # Only a fully validated configuration is ever cached
        self._config = config

    def _apply_env_overrides(self, config: Dict[str, Any]) -> None:
        """Override configuration with environment variables"""
        for env_name, key in ENV_OVERRIDES.items():
            raw = os.getenv(env_name)
            if raw:
                config[key] = _parse_int(env_name, raw)

        if os.getenv('LOG_LEVEL'):
            config.setdefault('logging', {})['level'] = os.getenv('LOG_LEVEL').upper()

    def _validate_config(self, config: Dict[str, Any]) -> None:
        """Validate that required configuration exists and budgets are usable"""
        for key in REQUIRED_KEYS:
            if key not in config:
                raise ConfigurationError(f"Missing required configuration: {key}")

        for key in POSITIVE_KEYS:
            value = config[key]
            if isinstance(value, bool) or not isinstance(value, int) or value <= 0:
                raise ConfigurationError(f"{key} must be a positive integer, got {value!r}")

    def get_config(self) -> Dict[str, Any]:
        """Get the complete configuration dictionary"""
        return self._config

    def get(self, key: str, default: Any = None) -> Any:
        """
        Get a specific configuration value.

        Supports nested keys using dot notation:
            config.get('logging.level')
            config.get('verify.trace_powers')
        """
        keys = key.split('.')
        value = self._config

        for k in keys:
            if isinstance(value, dict) and k in value:
                value = value[k]
            else:
                return default

        return value

    def reload(self) -> None:
        """Reload configuration from files"""
        self._config = None
        self._load_configuration()


def _parse_int(name: str, raw: str) -> int:
    try:
        if 'e' not in raw.lower():
            return int(raw)
        value = float(raw)
    except ValueError:
        raise ConfigurationError(f"{name} must be an integer, got {raw!r}")
    # Exponent notation is accepted only for whole numbers
    if not value.is_integer():
        raise ConfigurationError(f"{name} must be an integer, got {raw!r}")
    return int(value)


# Convenience function for quick access
def load_config() -> Dict[str, Any]:
    """
    Load and return the application configuration.

    Returns:
        dict: Complete configuration dictionary
    """
    return ConfigLoader().get_config()


def get_config_value(key: str, default: Any = None) -> Any:
    """
    Get a specific configuration value.

    Args:
        key: Configuration key (supports dot notation)
        default: Default value if key not found

    Returns:
        Configuration value or default
    """
    return ConfigLoader().get(key, default)
