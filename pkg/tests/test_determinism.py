"""Tests for output determinism/reproducibility."""

import io

import pytest

from epscalc.app import run
from epscalc.utils.formatting import to_json
from epscalc.verify import run_suite


def output_of(*argv):
    out = io.StringIO()
    code = run(list(argv), stdout=out, stderr=io.StringIO(), environ={})
    return code, out.getvalue()


class TestDeterminism:
    """Same command, same bytes."""

    @pytest.mark.parametrize(
        "argv",
        [
            ("jet", "exp(x)*cos(x)", "--at", "0.7"),
            ("funnel", "sin(x)-x", "--at", "0", "--profile", "fast"),
            ("integrate", "sqrt(x)", "--from", "1", "--to", "4", "--width", "1e-4"),
            ("taylor", "ln(1 + x^2)", "--at", "0.5", "--order", "4", "--profile", "fast"),
        ],
    )
    def test_json_is_byte_identical(self, argv):
        first = output_of(*argv, "--format", "json")
        second = output_of(*argv, "--format", "json")
        assert first[0] == 0
        assert first == second

    def test_seeded_suite_repeats(self, fast_config):
        first = to_json(run_suite("envelope", fast_config))
        second = to_json(run_suite("envelope", fast_config))
        assert first == second

    def test_sorted_compact_keys(self):
        assert to_json({"b": 1.0, "a": [0.5, 2.0]}) == '{"a":[0.5,2],"b":1}'
