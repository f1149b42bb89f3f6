"""Tests for configuration loading, profiles and overrides."""

import argparse

import pytest

from epscalc.config.config_loader import TOL_ENV_VAR, deep_merge, load_config, merge_cli_args
from epscalc.errors import ConfigError


class TestLoadConfig:
    """YAML defaults, profiles and the environment override."""

    def test_defaults(self, default_config):
        assert default_config["tolerance"]["default"] == 1e-9
        assert default_config["certification"]["grid_points"] == 4097
        assert default_config["integration"]["max_panels"] == 2**20
        assert default_config["output"]["format"] == "text"

    def test_fast_profile_overrides_only_named_keys(self, fast_config):
        assert fast_config["certification"]["grid_points"] == 513
        assert fast_config["certification"]["depth"] == 40
        assert fast_config["tolerance"]["default"] == 1e-7
        assert fast_config["funnel"]["boxes"] == 8

    def test_strict_profile(self):
        config = load_config("strict", environ={})
        assert config["tolerance"]["default"] == 1e-12
        assert config["certification"]["inflate"] == 1.25

    def test_unknown_profile(self):
        with pytest.raises(FileNotFoundError):
            load_config("nonexistent", environ={})

    def test_environment_tolerance(self):
        config = load_config(environ={TOL_ENV_VAR: "1e-6"})
        assert config["tolerance"]["default"] == 1e-6

    def test_blank_environment_value_ignored(self):
        assert load_config(environ={TOL_ENV_VAR: "  "})["tolerance"]["default"] == 1e-9

    @pytest.mark.parametrize("raw", ["abc", "0", "-1e-3", "nan"])
    def test_bad_environment_tolerance(self, raw):
        with pytest.raises(ConfigError):
            load_config(environ={TOL_ENV_VAR: raw})

    def test_loads_are_independent(self):
        first = load_config(environ={})
        first["funnel"]["boxes"] = 99
        assert load_config(environ={})["funnel"]["boxes"] == 8


class TestMerge:
    """Deep merge and command-line overlays."""

    def test_deep_merge_keeps_siblings(self):
        base = {"a": {"x": 1, "y": 2}, "b": 3}
        merged = deep_merge(base, {"a": {"y": 5}})
        assert merged == {"a": {"x": 1, "y": 5}, "b": 3}
        assert base["a"]["y"] == 2

    def test_explicit_flags_win(self):
        config = load_config(environ={TOL_ENV_VAR: "1e-6"})
        args = argparse.Namespace(tol=1e-4, boxes=12, width=1e-3, format="json")
        merged = merge_cli_args(config, args)
        assert merged["tolerance"]["default"] == 1e-4
        assert merged["funnel"]["boxes"] == 12
        assert merged["integration"]["width"] == 1e-3
        assert merged["output"]["format"] == "json"

    def test_unset_flags_keep_config(self):
        config = load_config(environ={})
        args = argparse.Namespace(tol=None, y0=None, samples=None)
        merged = merge_cli_args(config, args)
        assert merged["tolerance"]["default"] == 1e-9
        assert merged["funnel"]["y0"] == 0.1
        assert merged["funnel"]["samples"] == 257
