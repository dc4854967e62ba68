"""
Command Runner
Dispatches the projcone commands to the library pipelines and emits their reports.

Exit status: 0 success, 1 semantic negative (non-flat when flatness is expected,
refused development, inequivalent connections, failed verification or line
certificate), 2 input error.
"""

import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from ..analysis.invariants import classify, projective_invariants
from ..config import PATHS, RunConfig
from ..data.connection_loader import load_builtin, load_connection
from ..dynamics.devmap import develop, flatness_gate, line_certificate, loop_holonomy
from ..dynamics.geoflow import (
    COLLINEARITY_MIN_SAMPLES,
    collinearity_residual,
    compare_unparametrized,
    geodesic_classical,
    geodesic_rho,
)
from ..errors import InputError, NotFlatError
from ..geometry.chartconn import (
    CURVATURE_CONVENTION,
    ChartConnection,
    NotEquivalent,
    extract_alpha,
    shift_form_defect,
    thomas_symbols,
)
from ..geometry.thomascone import (
    build_cone,
    cone_curvature,
    cone_torsion_residual,
    descend,
)
from ..utils.common import box_center, format_point, sample_grid, setup_logging
from ..utils.report_io import dump_report, write_developed_csv, write_trace_csv
from ..validation.theorem_validator import verify_theorem

logger = setup_logging(__name__)

COMMANDS = ("check", "invariants", "cone", "flatness", "geodesic", "rho-geodesic", "equiv", "develop")

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2

DEVELOP_TARGET_GRID = 3
LINE_SAMPLES = 21
HOLONOMY_FRACTION = 1e-2


@dataclass
class CommandOptions:
    """Connection source and launch data for one command."""
    conn: Optional[Path] = None
    builtin: Optional[str] = None
    against: Optional[str] = None
    start: Optional[np.ndarray] = None
    direction: Optional[np.ndarray] = None
    fiber: Optional[np.ndarray] = None
    base: Optional[np.ndarray] = None
    targets: Optional[np.ndarray] = None


@dataclass
class CommandResult:
    status: int
    report: Dict[str, Any]
    artifacts: List[Path] = field(default_factory=list)


def _polys_report(labeled) -> List[Dict[str, Any]]:
    return [
        {"component": label, "poly": str(poly), "terms": poly.to_json()}
        for label, poly in labeled if not poly.is_zero()
    ]


def _vector(value: Optional[np.ndarray], default: np.ndarray, size: int, name: str) -> np.ndarray:
    v = default if value is None else np.asarray(value, dtype=float)
    if v.shape != (size,):
        raise InputError(f"--{name} needs {size} components, got {v.shape[0] if v.ndim else 0}")
    return v


def _status(ok: bool) -> str:
    return "✅" if ok else "❌"


class CommandRunner:
    """Runs one command against one connection."""

    def __init__(self, config: Optional[RunConfig] = None):
        """
        Initialize the command runner.

        Args:
            config: Run configuration (defaults to RunConfig())
        """
        self.config = config if config is not None else RunConfig()
        self._handlers: Dict[str, Callable[[ChartConnection, CommandOptions], CommandResult]] = {
            "check": self.run_check,
            "invariants": self.run_invariants,
            "cone": self.run_cone,
            "flatness": self.run_flatness,
            "geodesic": self.run_geodesic,
            "rho-geodesic": self.run_rho_geodesic,
            "equiv": self.run_equiv,
            "develop": self.run_develop,
        }

    # ------------------------------------------------------------------ inputs

    @staticmethod
    def resolve_connection(options: CommandOptions) -> ChartConnection:
        """--conn FILE or --builtin NAME[:params]; exactly one of them."""
        if options.conn is not None and options.builtin is not None:
            raise InputError("give either a connection file or a builtin, not both")
        if options.conn is not None:
            return load_connection(options.conn)
        if options.builtin is not None:
            return load_builtin(options.builtin)
        raise InputError("no connection given; use --conn FILE or --builtin NAME")

    @staticmethod
    def resolve_against(options: CommandOptions, c: ChartConnection) -> ChartConnection:
        """--against FILE or builtin; defaults to Γ = 0 on the same box."""
        if options.against is None:
            return ChartConnection.zero(c.n, c.domain)
        if Path(options.against).suffix == ".json" or Path(options.against).exists():
            return load_connection(Path(options.against))
        return load_builtin(options.against)

    def _grid(self, c: ChartConnection) -> np.ndarray:
        return sample_grid(c.domain, self.config.grid)

    def _launch(self, c: ChartConnection, options: CommandOptions):
        x0 = _vector(options.start, box_center(c.domain), c.n, "from")
        e1 = np.zeros(c.n)
        e1[0] = 1.0
        v0 = _vector(options.direction, e1, c.n, "dir")
        return x0, v0

    # ------------------------------------------------------------------ dispatch

    def run_command(self, name: str, options: CommandOptions) -> CommandResult:
        """
        Run a command and write or print its report.

        Args:
            name: One of COMMANDS
            options: Connection source and launch data

        Returns:
            CommandResult with exit status, report and written files
        """
        if name not in self._handlers:
            raise InputError(f"unknown command {name!r}; choose from {', '.join(COMMANDS)}")
        c = self.resolve_connection(options)
        logger.info(f"Running {name} on n={c.n} connection")
        result = self._handlers[name](c, options)
        result.report = {
            "command": name,
            "convention": CURVATURE_CONVENTION,
            "config": self.config.to_dict(),
            "status": result.status,
            **result.report,
        }
        out_dir = self.config.out_dir
        if out_dir is not None:
            path = PATHS.report_path(out_dir, name)
            dump_report(result.report, path)
            result.artifacts.insert(0, path)
            for artifact in result.artifacts:
                print(f"📂 Wrote {artifact}", file=sys.stderr)
        else:
            sys.stdout.write(dump_report(result.report))
        return result

    # ------------------------------------------------------------------ commands

    def run_check(self, c: ChartConnection, options: CommandOptions) -> CommandResult:
        k = build_cone(c)
        inv = projective_invariants(c)
        verification = verify_theorem(k, inv, self._grid(c), self.config.equality_tol)
        for check in verification["checks"].values():
            print(check["message"], file=sys.stderr)
        passed = verification["overall_status"] == "PASSED"
        print(f"{_status(passed)} Theorem verification {verification['overall_status']}", file=sys.stderr)
        return CommandResult(EXIT_OK if passed else EXIT_NEGATIVE, {"verification": verification})

    def run_invariants(self, c: ChartConnection, options: CommandOptions) -> CommandResult:
        inv = projective_invariants(c)
        report = classify(c, self._grid(c), self.config.flat_tol, invariants=inv)
        print(f"{_status(report.is_flat)} {report.verdict}: max|W| = {report.max_weyl:.3g}, "
              f"max|C| = {report.max_cotton:.3g}", file=sys.stderr)
        return CommandResult(EXIT_OK, {
            "thomas_symbols": _polys_report(inv.source.labeled()),
            "weyl": _polys_report((l, p) for l, p in inv.labeled() if l.startswith("W")),
            "cotton_york": _polys_report((l, p) for l, p in inv.labeled() if l.startswith("C")),
            "classification": report.to_dict(),
        })

    def run_cone(self, c: ChartConnection, options: CommandOptions) -> CommandResult:
        k = build_cone(c)
        curvature = cone_curvature(k)
        descended = descend(k)
        consistent = descended.allclose(thomas_symbols(c), self.config.equality_tol)
        torsion = cone_torsion_residual(k)
        print(f"{_status(torsion == 0.0)} cone torsion residual {torsion:.3g}", file=sys.stderr)
        print(f"{_status(consistent)} descended connection matches the Thomas symbols", file=sys.stderr)
        return CommandResult(EXIT_OK, {
            "dimension": k.n,
            "unit_coefficient": k.unit_coefficient,
            "gammahat": _polys_report(k.labeled()),
            "curvature": _polys_report(curvature.labeled()),
            "torsion_residual": torsion,
            "descends_to_thomas_symbols": consistent,
        })

    def _holonomy_check(self, c: ChartConnection) -> Dict[str, Any]:
        """Small-loop holonomy at the box center against the analytic cone curvature."""
        k = build_cone(c)
        curvature = cone_curvature(k)
        center = box_center(c.domain)
        widths = [hi - lo for lo, hi in c.domain]
        worst = 0.0
        size = c.n + 1
        for j in range(c.n):
            for kk in range(j + 1, c.n):
                radii = (HOLONOMY_FRACTION * widths[j], HOLONOMY_FRACTION * widths[kk])
                deviation = loop_holonomy(k, center, radii, (j, kk))
                analytic = np.array([[curvature.rhat[A, B, j + 1, kk + 1].eval(center)
                                      for B in range(size)] for A in range(size)])
                worst = max(worst, float(np.max(np.abs(deviation - analytic))))
        return {"center": [float(v) for v in center], "radius_fraction": HOLONOMY_FRACTION,
                "max_deviation_error": worst}

    def run_flatness(self, c: ChartConnection, options: CommandOptions) -> CommandResult:
        report = classify(c, self._grid(c), self.config.flat_tol)
        holonomy = self._holonomy_check(c)
        print(f"{_status(report.is_flat)} {report.verdict}", file=sys.stderr)
        if not report.is_flat:
            print(f"   witness {report.witness_component} = {report.witness_value:.6g} "
                  f"at {format_point(report.witness_point)}", file=sys.stderr)
        status = EXIT_OK
        if self.config.expect_flat and not report.is_flat:
            print("❌ expected a flat structure", file=sys.stderr)
            status = EXIT_NEGATIVE
        return CommandResult(status, {"classification": report.to_dict(),
                                      "holonomy_check": holonomy,
                                      "expect_flat": self.config.expect_flat})

    def run_geodesic(self, c: ChartConnection, options: CommandOptions) -> CommandResult:
        x0, v0 = self._launch(c, options)
        trace = geodesic_classical(c, x0, v0, self.config.step, self.config.max_steps)
        artifacts = []
        if self.config.out_dir is not None:
            artifacts.append(write_trace_csv(trace, PATHS.trace_path(self.config.out_dir, "geodesic")))
        print(f"✅ geodesic with {len(trace) - 1} steps, endpoint {format_point(trace.endpoint())}"
              + (" (left the domain)" if trace.truncated else ""), file=sys.stderr)
        return CommandResult(EXIT_OK, {
            "start": x0, "velocity": v0,
            "trace": {**trace.metadata(), "endpoint": trace.endpoint()},
        }, artifacts)

    def run_rho_geodesic(self, c: ChartConnection, options: CommandOptions) -> CommandResult:
        k = build_cone(c)
        x0, v0 = self._launch(c, options)
        s0 = _vector(options.fiber, np.concatenate([[0.0], v0]), c.n + 1, "fiber")
        trace = geodesic_rho(k, x0, s0, self.config.step, self.config.max_steps)
        residual = collinearity_residual(trace, k) if len(trace) >= COLLINEARITY_MIN_SAMPLES else None
        reference = geodesic_classical(k.source_pi, x0, s0[1:], self.config.step,
                                       self.config.max_steps * 5)
        match = compare_unparametrized(trace.projected(), reference, self.config.match_tol) \
            if len(trace) >= 2 else None
        artifacts = []
        if self.config.out_dir is not None:
            artifacts.append(write_trace_csv(trace, PATHS.trace_path(self.config.out_dir, "rho-geodesic")))
        if residual is None:
            print(f"⚠️ ρ-geodesic with {len(trace) - 1} steps is too short for a collinearity residual"
                  + (" (left the domain)" if trace.truncated else ""), file=sys.stderr)
        else:
            print(f"✅ ρ-geodesic with {len(trace) - 1} steps, collinearity residual {residual:.3g}",
                  file=sys.stderr)
        return CommandResult(EXIT_OK, {
            "start": x0, "fiber": s0,
            "trace": {**trace.metadata(), "endpoint": trace.endpoint(), "final_fiber": trace.fibers[-1]},
            "collinearity_residual": residual,
            "matches_thomas_geodesic": None if match is None else match.to_dict(),
        }, artifacts)

    def run_equiv(self, c: ChartConnection, options: CommandOptions) -> CommandResult:
        other = self.resolve_against(options, c)
        result = extract_alpha(other, c, self.config.equality_tol)
        if isinstance(result, NotEquivalent):
            print(f"❌ not projectively equivalent: residual {result.max_residual:.3g} "
                  f"in {result.component}", file=sys.stderr)
            return CommandResult(EXIT_NEGATIVE, {
                "equivalent": False,
                "max_residual": result.max_residual,
                "component": result.component,
            })
        x = box_center(c.domain)
        defect = max(shift_form_defect(other, c, x, np.eye(c.n)[axis]) for axis in range(c.n))
        print("✅ projectively equivalent", file=sys.stderr)
        return CommandResult(EXIT_OK, {
            "equivalent": True,
            "alpha": [{"component": f"alpha_{axis + 1}", "poly": str(a), "terms": a.to_json()}
                      for axis, a in enumerate(result.alpha)],
            "shift_form_defect": defect,
        })

    def run_develop(self, c: ChartConnection, options: CommandOptions) -> CommandResult:
        k = build_cone(c)
        try:
            flatness_gate(k, self.config.flat_tol, self.config.grid)
        except NotFlatError as e:
            print(f"❌ {e}", file=sys.stderr)
            return CommandResult(EXIT_NEGATIVE, {
                "developed": False,
                "refusal": {"component": e.component, "magnitude": e.magnitude, "point": e.point},
            })
        base = _vector(options.base, box_center(c.domain), c.n, "base")
        targets = options.targets if options.targets is not None else sample_grid(c.domain, DEVELOP_TARGET_GRID)
        targets = np.atleast_2d(np.asarray(targets, dtype=float))
        if targets.shape[1] != c.n:
            raise InputError(f"targets need {c.n} coordinates, got {targets.shape[1]}")
        points = develop(k, base, targets, self.config.flat_tol, self.config.grid, self.config.step,
                         progress=self.config.verbose)

        _, v0 = self._launch(c, options)
        trace = geodesic_classical(c, base, v0, self.config.step, self.config.max_steps)
        picks = np.unique(np.linspace(0, len(trace) - 1, min(len(trace), LINE_SAMPLES)).astype(int))
        samples = trace.points[picks]
        certificate = None
        if len(samples) >= 3:
            along = develop(k, base, samples, self.config.flat_tol, self.config.grid, self.config.step)
            certificate = line_certificate(along, self.config.line_tol)
        passed = certificate is None or certificate.passed

        artifacts = []
        if self.config.out_dir is not None:
            artifacts.append(write_developed_csv(targets, points, PATHS.developed_path(self.config.out_dir)))
        print(f"✅ developed {len(points)} points", file=sys.stderr)
        if certificate is not None:
            print(f"{_status(passed)} line certificate residual {certificate.residual:.3g}",
                  file=sys.stderr)
        return CommandResult(EXIT_OK if passed else EXIT_NEGATIVE, {
            "developed": True,
            "base": base,
            "points": [{"target": t, "homog": p.to_list()} for t, p in zip(targets, points)],
            "line_certificate": None if certificate is None else certificate.to_dict(),
        }, artifacts)


def run_command(name: str, options: CommandOptions, config: Optional[RunConfig] = None) -> CommandResult:
    """Module-level entry point: run one command with a fresh runner."""
    return CommandRunner(config).run_command(name, options)
