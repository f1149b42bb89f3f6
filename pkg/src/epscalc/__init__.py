"""Limit-free calculus engine with certified error envelopes."""

__version__ = "0.3.0"
