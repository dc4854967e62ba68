"""
Consolidated Command Line Interface
Argument parsing for the projcone command.
"""

import argparse

from ..config import RunConfig
from ..data.connection_loader import list_builtins
from ..pipeline.command_runner import COMMANDS

DEFAULTS = RunConfig()


def create_base_parser() -> argparse.ArgumentParser:
    """Create base argument parser listing the builtin connections."""
    parser = argparse.ArgumentParser(
        prog="projcone",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Builtin connections (NAME[:key=value;key=value]):
""" + "\n".join(f"  {name}: {description}" for name, description in list_builtins().items())
    )
    return parser


def add_connection_arguments(parser: argparse.ArgumentParser) -> None:
    """Add the connection source arguments."""
    parser.add_argument(
        "source",
        nargs="?",
        default=None,
        help="Builtin spec, same as --builtin (e.g. nonflat_demo, flat:n=3)"
    )

    source = parser.add_mutually_exclusive_group()
    source.add_argument(
        "--conn",
        default=None,
        help="Connection document (JSON, schema 1)"
    )
    source.add_argument(
        "--builtin",
        default=None,
        help="Builtin connection, e.g. alpha_shift:n=2;alpha=x1dx1+2*x2^2dx2"
    )

    parser.add_argument(
        "--against",
        default=None,
        help="equiv: connection file or builtin to compare with (default: flat)"
    )


def add_tolerance_arguments(parser: argparse.ArgumentParser) -> None:
    """Add tolerance and integration arguments; None means environment or default."""
    parser.add_argument(
        "--grid",
        type=int,
        default=None,
        help=f"Sampling points per axis (default: {DEFAULTS.grid})"
    )

    parser.add_argument(
        "--flat-tol",
        type=float,
        default=None,
        help=f"Flatness threshold on |W|, |C| and |R̂| (default: {DEFAULTS.flat_tol})"
    )

    parser.add_argument(
        "--step",
        type=float,
        default=None,
        help=f"RK4 step size (default: {DEFAULTS.step})"
    )

    parser.add_argument(
        "--max-steps",
        type=int,
        default=None,
        help=f"Maximum number of geodesic steps (default: {DEFAULTS.max_steps})"
    )

    parser.add_argument(
        "--match-tol",
        type=float,
        default=None,
        help=f"Unparametrized geodesic match tolerance (default: {DEFAULTS.match_tol})"
    )

    parser.add_argument(
        "--line-tol",
        type=float,
        default=None,
        help=f"Line certificate tolerance (default: {DEFAULTS.line_tol})"
    )


def add_launch_arguments(parser: argparse.ArgumentParser) -> None:
    """Add geodesic and developing-map arguments."""
    parser.add_argument("--from", dest="start", default=None,
                        help="Starting point x,... (default: box center)")
    parser.add_argument("--dir", dest="direction", default=None,
                        help="Initial velocity v,... (default: e1)")
    parser.add_argument("--fiber", default=None,
                        help="rho-geodesic initial fiber vector s0,s1,...,sn (index 0 = unit section)")
    parser.add_argument("--base", default=None,
                        help="develop: base point (default: box center)")
    parser.add_argument("--targets", default=None,
                        help="develop: CSV file of target points (columns x1..xn)")


def add_common_arguments(parser: argparse.ArgumentParser) -> None:
    """Add common arguments."""
    parser.add_argument(
        "--expect-flat",
        action="store_true",
        help="Exit with status 1 when the structure is not projectively flat"
    )

    parser.add_argument(
        "--out",
        default=None,
        help="Output directory for reports and traces (default: print the report)"
    )

    parser.add_argument(
        "--verbose", "-v",
        action="store_true",
        help="Enable verbose output"
    )

    parser.add_argument(
        "--list-builtins",
        action="store_true",
        help="List builtin connections and exit"
    )


def create_projcone_parser() -> argparse.ArgumentParser:
    """Create the projcone argument parser."""
    parser = create_base_parser()
    parser.description = "projcone - Thomas cone connections, projective invariants and developing maps"

    parser.epilog = """
Examples:
  projcone check nonflat_demo
  projcone flatness --builtin "alpha_shift:alpha=x1dx1" --expect-flat
  projcone geodesic --conn connection.json --from 0.5,0 --dir 0,1 --out output/
  projcone equiv --builtin alpha_shift --against flat
  projcone develop flat:n=2 --targets targets.csv
""" + parser.epilog

    parser.add_argument(
        "command",
        nargs="?",
        choices=COMMANDS,
        help="Command to run"
    )

    add_connection_arguments(parser)
    add_tolerance_arguments(parser)
    add_launch_arguments(parser)
    add_common_arguments(parser)

    return parser
