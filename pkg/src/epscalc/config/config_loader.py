#!/usr/bin/env python3
"""
Configuration loading and management for the calculus engine.

This module loads the packaged YAML defaults, optionally merges a named
profile on top, applies the ``EPSCALC_TOL`` environment override and
finally overlays explicitly provided command-line arguments.

Configuration Structure:
- tolerance: default function-value tolerance
- certification: grid sizes, fitting inflation, evaluation noise
- search / integration: witness search and bracketed integration settings
- funnel / lhopital / taylor: per-command defaults
"""

import argparse
import copy
import logging
import os
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

import yaml

from ..errors import ConfigError

logger = logging.getLogger(__name__)

TOL_ENV_VAR = "EPSCALC_TOL"


def _read_yaml(path: Path) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except (FileNotFoundError, PermissionError) as e:
        raise FileNotFoundError(f"Could not load configuration: {e}")
    except yaml.YAMLError as e:
        raise yaml.YAMLError(f"Invalid YAML in configuration file: {e}")
    return data or {}


def deep_merge(base: Dict[str, Any], override: Mapping[str, Any]) -> Dict[str, Any]:
    """Recursively merge ``override`` into a copy of ``base``."""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, Mapping) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def load_config(profile: str = "defaults", environ: Optional[Mapping[str, str]] = None) -> Dict[str, Any]:
    """
    Load engine configuration from YAML files.

    Args:
        profile: "defaults" or a profile name mapping to
                 config/profiles/{profile}.yml
        environ: Environment mapping (defaults to ``os.environ``)

    Returns:
        Complete configuration dictionary

    Raises:
        FileNotFoundError: If the named profile does not exist
        yaml.YAMLError: If a configuration file has invalid YAML syntax
        ConfigError: If ``EPSCALC_TOL`` is set but not a positive number

    Example:
        >>> config = load_config("fast")
        >>> config["certification"]["grid_points"]
        513
    """
    config_dir = Path(__file__).parent
    config = _read_yaml(config_dir / "defaults.yml")

    if profile != "defaults":
        profile_path = config_dir / "profiles" / f"{profile}.yml"
        if not profile_path.exists():
            raise FileNotFoundError(f"Could not load configuration: unknown profile '{profile}'")
        config = deep_merge(config, _read_yaml(profile_path))

    env = os.environ if environ is None else environ
    raw = env.get(TOL_ENV_VAR)
    if raw is not None and raw.strip():
        try:
            tol = float(raw)
        except ValueError:
            raise ConfigError(f"{TOL_ENV_VAR} must be a number, got '{raw}'")
        if not tol > 0:
            raise ConfigError(f"{TOL_ENV_VAR} must be positive, got '{raw}'")
        logger.debug("tolerance overridden from environment: %g", tol)
        config["tolerance"]["default"] = tol

    return config


def merge_cli_args(config: Dict[str, Any], args: argparse.Namespace) -> Dict[str, Any]:
    """
    Merge command-line arguments into loaded configuration.

    Only arguments explicitly provided (not None) are merged; everything
    else keeps the value from the YAML files or the environment.

    Example:
        >>> config = load_config()
        >>> args = argparse.Namespace(tol=1e-6, boxes=12)
        >>> merge_cli_args(config, args)["funnel"]["boxes"]
        12
    """
    cli_mapping = {
        "tol": ("tolerance", "default"),
        "format": ("output", "format"),
        "boxes": ("funnel", "boxes"),
        "y0": ("funnel", "y0"),
        "radius": ("funnel", "radius"),
        "samples": ("funnel", "samples"),
        "width": ("integration", "width"),
    }

    for arg_name, (section, key) in cli_mapping.items():
        if hasattr(args, arg_name):
            value = getattr(args, arg_name)
            if value is not None:
                if section not in config:
                    config[section] = {}
                config[section][key] = value

    return config
