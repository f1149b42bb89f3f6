"""
Pytest configuration and shared fixtures for epscalc tests.

Provides the coarse ``fast`` configuration, an expression corpus with
domains, and a central-difference oracle for slope checks.
"""

from typing import Any, Callable, Dict, List, Tuple

import numpy as np
import pytest

from epscalc.config.config_loader import load_config

# (expression, domain lo, domain hi); each is differentiable on the domain
EXPRESSION_CORPUS: List[Tuple[str, float, float]] = [
    ("x^2", -3.0, 3.0),
    ("x^3 - 2*x", -2.0, 2.0),
    ("sin(x)", -3.0, 3.0),
    ("cos(x)", -3.0, 3.0),
    ("exp(x)", -2.0, 2.0),
    ("ln(x)", 0.5, 4.0),
    ("sqrt(x)", 0.5, 4.0),
    ("sinh(x)", -2.0, 2.0),
    ("cosh(x)", -2.0, 2.0),
    ("1/x", 0.5, 3.0),
    ("sin(x)*cos(x)", -2.0, 2.0),
    ("exp(x)/(1 + x^2)", -2.0, 2.0),
    ("sin(x^2)", -1.5, 1.5),
    ("ln(1 + x^2)", -2.0, 2.0),
    ("x^(1/3)", 0.5, 8.0),
    ("x^(-2)", 0.5, 3.0),
    ("exp(sin(x))", -2.0, 2.0),
    ("sqrt(1 + x^2)", -2.0, 2.0),
    ("cos(x)^2 + sin(x)^2", -2.0, 2.0),
    ("x*exp(-x)", -1.0, 3.0),
    ("abs(x)*x", 0.5, 2.0),
    ("sinh(x)/cosh(x)", -2.0, 2.0),
    ("ln(x)/x", 0.5, 4.0),
    ("(x - 1)/(x + 2)", -1.0, 3.0),
    ("exp(x)*cos(x)", -2.0, 2.0),
]


@pytest.fixture
def fast_config() -> Dict[str, Any]:
    """Coarse-grid configuration for quick tests."""
    return load_config("fast", environ={})


@pytest.fixture
def default_config() -> Dict[str, Any]:
    return load_config(environ={})


@pytest.fixture
def tol() -> float:
    return 1e-9


@pytest.fixture
def corpus() -> List[Tuple[str, float, float]]:
    return list(EXPRESSION_CORPUS)


@pytest.fixture
def base_points() -> Callable[[float, float, int], List[float]]:
    """Seeded base points inside a domain."""
    rng = np.random.default_rng(7)

    def draw(lo: float, hi: float, n: int = 8) -> List[float]:
        return [float(x) for x in rng.uniform(lo, hi, n)]

    return draw


@pytest.fixture
def central_difference() -> Callable[[Callable[[float], float], float], float]:
    """Symmetric difference quotient with step 1e-5 * max(1, |x0|)."""

    def slope(f: Callable[[float], float], x0: float) -> float:
        h = 1e-5 * max(1.0, abs(x0))
        return (f(x0 + h) - f(x0 - h)) / (2.0 * h)

    return slope
