"""
projcone entry point: parse arguments, build the run configuration and map
outcomes to exit status.
"""

import sys
from pathlib import Path
from typing import List, Optional

from ..config import RunConfig, log_level_from_env
from ..data.connection_loader import list_builtins
from ..errors import InputError, ProjconeError
from ..pipeline.command_runner import EXIT_INPUT, EXIT_NEGATIVE, CommandOptions, CommandRunner
from ..utils.common import parse_vector, set_console_level, setup_logging
from ..utils.report_io import read_points_csv
from .arguments import create_projcone_parser

logger = setup_logging(__name__)


def build_config(args) -> RunConfig:
    """CLI flags override PROJCONE_* environment values, which override defaults."""
    return RunConfig.from_env(
        grid=args.grid,
        flat_tol=args.flat_tol,
        step=args.step,
        max_steps=args.max_steps,
        match_tol=args.match_tol,
        line_tol=args.line_tol,
        out_dir=Path(args.out) if args.out else None,
        expect_flat=args.expect_flat or None,
        verbose=args.verbose or None,
    )


def build_options(args) -> CommandOptions:
    if args.source is not None and (args.builtin is not None or args.conn is not None):
        raise InputError("give the connection once: positional source, --conn or --builtin")
    return CommandOptions(
        conn=Path(args.conn) if args.conn else None,
        builtin=args.builtin if args.builtin is not None else args.source,
        against=args.against,
        start=parse_vector(args.start, "from"),
        direction=parse_vector(args.direction, "dir"),
        fiber=parse_vector(args.fiber, "fiber"),
        base=parse_vector(args.base, "base"),
    )


def main(argv: Optional[List[str]] = None) -> int:
    """Main execution function; returns the exit status."""
    parser = create_projcone_parser()
    args = parser.parse_args(argv)

    if args.list_builtins:
        for name, description in list_builtins().items():
            print(f"{name}: {description}")
        return 0
    if args.command is None:
        parser.print_usage(sys.stderr)
        print("projcone: error: a command is required", file=sys.stderr)
        return EXIT_INPUT

    set_console_level("INFO" if args.verbose else log_level_from_env())

    try:
        config = build_config(args)
        options = build_options(args)
        runner = CommandRunner(config)
        if args.targets is not None:
            c = runner.resolve_connection(options)
            options.targets = read_points_csv(Path(args.targets), c.n)
        result = runner.run_command(args.command, options)
        return result.status
    except InputError as e:
        print(f"❌ Input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ProjconeError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_NEGATIVE
    except KeyboardInterrupt:
        print("\n⚠️ Interrupted by user", file=sys.stderr)
        return 130
