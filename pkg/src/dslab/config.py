"""
Configuration module for dslab

Loads configuration from defaults, an optional YAML/JSON file with one section
per suite, DSLAB_* environment variables and finally command-line overrides.
"""

import copy
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

import dotenv
import yaml

from .errors import ConfigError

logger = logging.getLogger(__name__)

# Default configuration, one section per verification suite
DEFAULT_CONFIG: Dict[str, Dict[str, Any]] = {
    "general": {
        "threads": 1,
        "seed": 42,
        "log_level": "INFO",
        "factorial_cache": 512,
        "format": "json",
        "debug": False,
    },
    "integrals": {
        "rel_tol": 1e-9,
        "abs_tol": 1e-12,
        "max_subdivisions": 500,
        "laplace_truncation": 100.0,
        "bessel_tol": 1e-14,
    },
    "gamma": {
        "mu_max": 20,
        "nu_max": 20,
        "r_max": 50,
    },
    "walks": {
        "a_max": 5,
        "n_max": 30,
        "oracle_n_max": 14,
        "p_values": ["1/2", "1/3", "2/5"],
        "hitting_horizon": 10000,
        "bridge_r_max": 15,
    },
    "genfun": {
        "order": 60,
        "index_max": 6,
    },
    "montecarlo": {
        "samples": 1000000,
        "seed": None,  # falls back to general.seed
        "horizon": 1000,
        "alpha_level": 0.001,
        "chunk_size": 65536,
        "bridge_r": 4,
    },
}

TRUE_STRINGS = ["true", "1", "yes"]


def _coerce(value: Any, default: Any) -> Any:
    """Coerce an environment string to the type of its default."""
    if not isinstance(value, str):
        return value
    if isinstance(default, bool):
        return value.lower() in TRUE_STRINGS
    if isinstance(default, int):
        return int(value)
    if isinstance(default, float):
        return float(value)
    return value


def load_config_file(path: Optional[str]) -> Dict[str, Any]:
    """Load a sectioned configuration file (YAML, or JSON as a YAML subset)."""
    if not path:
        return {}
    config_path = Path(path)
    try:
        with config_path.open("r") as f:
            loaded = yaml.safe_load(f)
    except (OSError, yaml.YAMLError) as e:
        raise ConfigError(f"Cannot read config file {config_path}: {e}") from e
    if loaded is None:
        return {}
    if not isinstance(loaded, dict):
        raise ConfigError(f"Config file {config_path} must contain a mapping of sections")
    for section, values in loaded.items():
        if section not in DEFAULT_CONFIG:
            raise ConfigError(f"Unknown config section '{section}' in {config_path}")
        if not isinstance(values, dict):
            raise ConfigError(f"Config section '{section}' in {config_path} must be a mapping")
        unknown = set(values) - set(DEFAULT_CONFIG[section])
        if unknown:
            raise ConfigError(f"Unknown keys {sorted(unknown)} in section '{section}' of {config_path}")
    logger.debug(f"Loaded configuration from {config_path}")
    return loaded


def load_config(path: Optional[str] = None, overrides: Optional[Dict[str, Dict[str, Any]]] = None) -> Dict[str, Dict[str, Any]]:
    """Build the effective configuration.

    Precedence, lowest first: defaults, config file, DSLAB_<KEY> environment
    variables (general section only), explicit overrides from the command line.
    """
    dotenv.load_dotenv()

    config = copy.deepcopy(DEFAULT_CONFIG)
    file_config = load_config_file(path)
    for section, values in file_config.items():
        config[section].update(values)

    for key, default in DEFAULT_CONFIG["general"].items():
        env_key = f"DSLAB_{key.upper()}"
        if env_key in os.environ:
            try:
                config["general"][key] = _coerce(os.environ[env_key], default)
            except ValueError as e:
                raise ConfigError(f"Invalid value for {env_key}: {os.environ[env_key]!r}") from e

    for section, values in (overrides or {}).items():
        config.setdefault(section, {})
        config[section].update({k: v for k, v in values.items() if v is not None})

    if config["general"]["debug"]:
        logger.debug(f"Effective configuration: {config}")

    return config
