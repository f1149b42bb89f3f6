#!/usr/bin/env python3
"""
Command Line Interface (CLI) argument parser for the calculus engine.

One subcommand per operation: evaluation, jets, funnel emission, Taylor
jets, bracketed integration, L'Hopital limits and the verification
suites. Output, logging and configuration flags are shared by every
subcommand and may appear after the subcommand name.

Flags left unset keep the values from the YAML configuration (and the
``EPSCALC_TOL`` environment override); see ``config_loader.merge_cli_args``.
"""

import argparse
from typing import List, Optional

from ..verify import SUITE_NAMES


def _common_parser() -> argparse.ArgumentParser:
    """Flags accepted by every subcommand."""
    common = argparse.ArgumentParser(add_help=False)

    output_group = common.add_argument_group("Output & Configuration")
    output_group.add_argument(
        "--tol",
        type=float,
        metavar="T",
        help="Function-value tolerance (default: 1e-9, or EPSCALC_TOL)",
    )
    output_group.add_argument(
        "--format",
        choices=["json", "csv", "text"],
        default=None,
        help="Output format (default: text)",
    )
    output_group.add_argument(
        "--out",
        type=str,
        metavar="FILE",
        help="Write output to FILE instead of standard output",
    )
    output_group.add_argument(
        "--profile",
        type=str,
        metavar="NAME",
        default="defaults",
        help="Configuration profile (defaults, fast, strict)",
    )
    output_group.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="Increase log detail on stderr (-v info, -vv debug)",
    )
    output_group.add_argument(
        "--quiet",
        action="store_true",
        help="Only log errors",
    )
    return common


def _add_at(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--at",
        dest="at",
        type=float,
        required=True,
        metavar="X",
        help="Base point x0",
    )


def create_parser() -> argparse.ArgumentParser:
    """
    Create and configure the argument parser for the calculus engine.

    Returns:
        argparse.ArgumentParser: Parser with one subparser per command.

    Command Details:
        eval EXPR --at X: Value of EXPR at X
        jet EXPR --at X: Value, slope and error envelope at X
        funnel EXPR --at X: Nested tolerance/width boxes of the remainder
        taylor EXPR --at X --order N: Taylor coefficients (--check adds the
            Peano verdict)
        integrate EXPR --from A --to B: Enclosure of the integral
        lhopital F G --at X: Limit of F/G at X
        verify SUITE: Pass/fail table of a verification suite
    """
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="epscalc",
        description="Limit-free calculus engine - jets, envelopes and certified checks",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Derivative of x^2 at 3 as JSON
  %(prog)s jet "x^2" --at 3 --format json

  # Funnel of the sin remainder at 0
  %(prog)s funnel "sin(x)-x" --at 0 --boxes 10

  # Integral of 1/x on [1, 2]
  %(prog)s integrate "1/x" --from 1 --to 2

  # Run every verification suite with coarse grids
  %(prog)s verify all --profile fast
        """,
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    # === Evaluation ===
    p_eval = sub.add_parser("eval", parents=[common], help="Evaluate an expression")
    p_eval.add_argument("expr", help="Expression in x")
    _add_at(p_eval)
    p_eval.add_argument(
        "--geometric",
        action="store_true",
        help="Use the area constructions for transcendentals (always on)",
    )

    p_jet = sub.add_parser("jet", parents=[common], help="First-order jet at a point")
    p_jet.add_argument("expr", help="Expression in x")
    _add_at(p_jet)

    # === Funnel ===
    p_funnel = sub.add_parser("funnel", parents=[common], help="Funnel boxes of the remainder")
    p_funnel.add_argument("expr", help="Expression in x")
    _add_at(p_funnel)
    funnel_group = p_funnel.add_argument_group("Funnel Configuration")
    funnel_group.add_argument(
        "--boxes", type=int, metavar="N", help="Number of boxes (default: 8)"
    )
    funnel_group.add_argument(
        "--y0", type=float, metavar="Y", help="Outer box height (default: 0.1)"
    )
    funnel_group.add_argument(
        "--radius", type=float, metavar="R", help="Sampling radius around x0 (default: 1)"
    )
    funnel_group.add_argument(
        "--samples", type=int, metavar="S", help="Grid points per side (default: 257)"
    )

    # === Taylor ===
    p_taylor = sub.add_parser("taylor", parents=[common], help="Order-n Taylor jet")
    p_taylor.add_argument("expr", help="Expression in x")
    _add_at(p_taylor)
    p_taylor.add_argument("--order", type=int, default=3, metavar="N", help="Order (default: 3)")
    p_taylor.add_argument(
        "--check",
        action="store_true",
        help="Also run the Peano remainder check (exit 1 when it fails)",
    )

    # === Integration ===
    p_int = sub.add_parser("integrate", parents=[common], help="Bracket a definite integral")
    p_int.add_argument("expr", help="Integrand in x")
    p_int.add_argument("--from", dest="lower", type=float, required=True, metavar="A")
    p_int.add_argument("--to", dest="upper", type=float, required=True, metavar="B")
    p_int.add_argument(
        "--width", type=float, metavar="W", help="Target bracket width (default: 1e-6)"
    )

    # === Limits ===
    p_lim = sub.add_parser("lhopital", parents=[common], help="Limit of f/g at a point")
    p_lim.add_argument("f", help="Numerator expression")
    p_lim.add_argument("g", help="Denominator expression")
    _add_at(p_lim)
    p_lim.add_argument(
        "--side",
        choices=["left", "right", "both"],
        default="both",
        help="One-sided limit (default: both sides)",
    )
    p_lim.add_argument(
        "--claim",
        type=float,
        metavar="L",
        help="Claimed limit; required unless f(x0) = g(x0) = 0 with jets at x0",
    )

    # === Verification ===
    p_verify = sub.add_parser("verify", parents=[common], help="Run a verification suite")
    p_verify.add_argument("suite", choices=list(SUITE_NAMES), help="Suite name")

    return parser


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command line arguments."""
    parser = create_parser()
    return parser.parse_args(argv)
