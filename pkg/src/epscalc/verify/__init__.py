"""Verification suites behind ``epscalc verify``."""

from .suites import SUITE_NAMES, SUITES, TABLE_COLUMNS, SuiteReport, run_suite

__all__ = ["SUITES", "SUITE_NAMES", "TABLE_COLUMNS", "SuiteReport", "run_suite"]
