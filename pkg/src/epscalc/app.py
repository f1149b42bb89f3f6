#!/usr/bin/env python3
"""
Main application entry point for the calculus engine.

Parses the command line, loads configuration (packaged defaults, optional
profile, ``EPSCALC_TOL``, then explicit flags), runs one command and writes
its result as text, JSON or CSV.

Exit codes:
    0: success, or every verification check passed
    1: a verification check failed (verify, taylor --check, lhopital)
    2: usage error or engine error (message on stderr)
"""

import argparse
import sys
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, TextIO, Tuple

import yaml

from .analysis.integral import integrate
from .analysis.meanvalue import LimitVerdict, lhopital_00, lhopital_general
from .analysis.taylor import tjet_from_expr, verify_peano
from .cli.args_parser import create_parser
from .config.config_loader import load_config, merge_cli_args
from .core.envelope import funnel_boxes
from .errors import EpscalcError
from .expr import ExprEvaluator, eval_jet, eval_value, parse, remainder_envelope, to_source
from .utils.formatting import key_value_rows, table_text, to_csv, to_json, to_text
from .utils.logs import configure_logging
from .verify import TABLE_COLUMNS, run_suite

Config = Dict[str, Any]

KEY_VALUE_COLUMNS = ("key", "value")


@dataclass
class CommandResult:
    """
    Output of one command.

    Attributes:
        title: Heading of the text rendering
        data: Nested mapping rendered as JSON, or flattened for text/CSV
        rows / columns: Tabular form, when the command has one
        exit_code: 0 on success, 1 when a check failed
    """

    title: str
    data: Mapping[str, Any]
    rows: Optional[List[Mapping[str, Any]]] = None
    columns: Sequence[str] = field(default_factory=tuple)
    exit_code: int = 0

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return to_json(self.data) + "\n"
        if fmt == "csv":
            if self.rows is not None:
                return to_csv(self.rows, self.columns)
            return to_csv(key_value_rows(self.data), KEY_VALUE_COLUMNS)
        if self.rows is not None:
            verdict = "PASS" if self.exit_code == 0 else "FAIL"
            return table_text(self.title, self.columns, self.rows) + f"Result: {verdict}\n"
        return to_text(self.title, self.data)


def _grid(config: Config) -> Tuple[int, int]:
    cert = config["certification"]
    return int(cert["grid_points"]), int(cert["depth"])


def _fit_settings(config: Config) -> Dict[str, Any]:
    cert = config["certification"]
    return {
        "fit_points": int(cert["fit_points"]),
        "inflate": float(cert["inflate"]),
        "noise_factor": float(cert["noise_factor"]),
    }


# -- commands --------------------------------------------------------------------


def cmd_eval(args: argparse.Namespace, config: Config) -> CommandResult:
    tol = config["tolerance"]["default"]
    e = parse(args.expr)
    value = eval_value(e, args.at, tol)
    return CommandResult("VALUE", {"expr": to_source(e), "x0": args.at, "value": value})


def cmd_jet(args: argparse.Namespace, config: Config) -> CommandResult:
    tol = config["tolerance"]["default"]
    e = parse(args.expr)
    jet = eval_jet(e, args.at, tol)
    data = dict(jet.to_dict())
    data["expr"] = to_source(e)
    return CommandResult("JET", data)


def cmd_funnel(args: argparse.Namespace, config: Config) -> CommandResult:
    """Funnel boxes of the remainder E(eps) of the jet at x0."""
    tol = config["tolerance"]["default"]
    funnel = config["funnel"]
    points = 2 * int(funnel["samples"]) + 1
    depth = int(funnel["depth"])
    e = parse(args.expr)
    jet = eval_jet(e, args.at, tol)
    env = remainder_envelope(
        e, args.at, tol, float(funnel["radius"]), points, depth, jet=jet, **_fit_settings(config)
    )
    boxes = funnel_boxes(env, int(funnel["boxes"]), float(funnel["y0"]), points, depth)
    data = {
        "expr": to_source(e),
        "x0": args.at,
        "value": jet.value,
        "slope": jet.slope,
        "env": env.to_dict(),
        "boxes": [b.to_dict() for b in boxes],
    }
    rows = [dict(box.to_dict(), box=i) for i, box in enumerate(boxes)]
    return CommandResult("FUNNEL", data, rows, ("box", "x_lo", "x_hi", "y_lo", "y_hi"))


def cmd_taylor(args: argparse.Namespace, config: Config) -> CommandResult:
    tol = config["tolerance"]["default"]
    points, depth = _grid(config)
    fit = _fit_settings(config)
    radius = float(config["taylor"]["radius"])
    e = parse(args.expr)
    tj = tjet_from_expr(e, args.at, args.order, tol, radius, points, depth, **fit)
    data = dict(tj.to_dict())
    data["expr"] = to_source(e)
    code = 0
    if args.check:
        verdict = verify_peano(tj, ExprEvaluator(e, tol, fit["noise_factor"]), radius, points,
                               depth, **fit)
        data["peano"] = verdict.to_dict()
        code = 0 if verdict.passed else 1
    return CommandResult("TAYLOR JET", data, exit_code=code)


def cmd_integrate(args: argparse.Namespace, config: Config) -> CommandResult:
    tol = config["tolerance"]["default"]
    integration = config["integration"]
    e = parse(args.expr)
    bracket = integrate(
        ExprEvaluator(e, tol),
        args.lower,
        args.upper,
        float(integration["width"]),
        int(integration["scan_points"]),
        int(integration["max_panels"]),
        max_segments=int(integration["max_segments"]),
    )
    data = dict(bracket.to_dict())
    data["expr"] = to_source(e)
    data["width"] = bracket.width
    return CommandResult("INTEGRAL", data)


def _sides(side: str) -> List[int]:
    return {"left": [-1], "right": [1], "both": [-1, 1]}[side]


def cmd_lhopital(args: argparse.Namespace, config: Config) -> CommandResult:
    """
    Limit of f/g at x0.

    Without ``--claim`` the limit comes from the jets of f and g at x0,
    which needs f(x0) = g(x0) = 0. With a claim, each requested side is
    checked by sampling.
    """
    tol = config["tolerance"]["default"]
    points, depth = _grid(config)
    lim = config["lhopital"]
    fe, ge = parse(args.f), parse(args.g)
    f, g = ExprEvaluator(fe, tol), ExprEvaluator(ge, tol)
    verdicts: List[LimitVerdict] = []
    if args.claim is None:
        verdicts.append(
            lhopital_00(eval_jet(fe, args.at, tol), eval_jet(ge, args.at, tol), f, g, points, depth)
        )
    else:
        f_jet: Callable[[float], Any] = lambda x: eval_jet(fe, x, tol)  # noqa: E731
        g_jet: Callable[[float], Any] = lambda x: eval_jet(ge, x, tol)  # noqa: E731
        for side in _sides(args.side):
            verdicts.append(
                lhopital_general(
                    f, g, args.at, side, args.claim, f_jet, g_jet,
                    radius=float(lim["radius"]),
                    depth=int(lim["depth"]),
                    points=points,
                    inflate=float(config["certification"]["inflate"]),
                    noise_factor=float(config["certification"]["noise_factor"]),
                )
            )
    passed = all(v.passed for v in verdicts)
    data = {
        "f": to_source(fe),
        "g": to_source(ge),
        "x0": args.at,
        "pass": passed,
        "verdicts": [v.to_dict() for v in verdicts],
    }
    return CommandResult("LIMIT", data, exit_code=0 if passed else 1)


def cmd_verify(args: argparse.Namespace, config: Config) -> CommandResult:
    suite = run_suite(args.suite, config)
    title = f"VERIFY {suite.name.upper()}"
    return CommandResult(
        title, suite.to_dict(), suite.rows(), TABLE_COLUMNS, 0 if suite.passed else 1
    )


COMMANDS: Dict[str, Callable[[argparse.Namespace, Config], CommandResult]] = {
    "eval": cmd_eval,
    "jet": cmd_jet,
    "funnel": cmd_funnel,
    "taylor": cmd_taylor,
    "integrate": cmd_integrate,
    "lhopital": cmd_lhopital,
    "verify": cmd_verify,
}


def _write(text: str, out: Optional[str], stdout: TextIO) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    else:
        stdout.write(text)


def run(
    argv: Optional[Sequence[str]] = None,
    stdout: Optional[TextIO] = None,
    stderr: Optional[TextIO] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> int:
    """
    Run one command and return its exit code.

    Args:
        argv: Arguments without the program name (defaults to sys.argv[1:])
        stdout / stderr: Streams for results and error messages
        environ: Environment used for ``EPSCALC_TOL``
    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = create_parser()
    try:
        args = parser.parse_args(None if argv is None else list(argv))
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2

    configure_logging(args.verbose, args.quiet)
    try:
        config = merge_cli_args(load_config(args.profile, environ), args)
        result = COMMANDS[args.command](args, config)
        _write(result.render(config["output"]["format"]), args.out, stdout)
    except (EpscalcError, FileNotFoundError, yaml.YAMLError, OSError) as e:
        print(f"epscalc {args.command}: error: {e}", file=stderr)
        return 2
    return result.exit_code


def main() -> None:
    """Console-script entry point."""
    sys.exit(run())


if __name__ == "__main__":
    main()
