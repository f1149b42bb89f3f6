"""Argument parser module."""

from .args_parser import create_parser, parse_args

__all__ = ["create_parser", "parse_args"]
