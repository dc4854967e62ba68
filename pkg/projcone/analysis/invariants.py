"""
Projective invariants of a special representative.

Weyl W^i_{ljk} = R^i_{ljk} + (1/(n−1)) (Ric_{jl} δ^i_k − Ric_{kl} δ^i_j)
Cotton-York C_{jk;l} = (∇_j Ric)_{kl} − (∇_k Ric)_{jl}

Both are always computed on the Thomas symbols Π, never on the raw Γ, so the
verdict of ``classify`` does not depend on the chosen representative.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from ..algebra.polyfields import FieldArrayEvaluator, poly_sum, zero_array
from ..errors import ContractViolation, InputError
from ..geometry.chartconn import (
    CURVATURE_CONVENTION,
    ChartConnection,
    CurvatureField,
    riemann,
    thomas_symbols,
    trace_defect,
)
from ..utils.common import sample_grid, setup_logging

logger = setup_logging(__name__)

DEFAULT_FLAT_TOL = 1e-8
DEFAULT_GRID = 5

FLAT = "FLAT"
NON_FLAT = "NON_FLAT"


def weyl_label(i: int, l: int, j: int, k: int) -> str:
    return f"W^{i + 1}_{{{l + 1}{j + 1}{k + 1}}}"


def cotton_label(j: int, k: int, l: int) -> str:
    return f"C_{{{j + 1}{k + 1};{l + 1}}}"


@dataclass(frozen=True, eq=False)
class InvariantField:
    """weyl[i, l, j, k] = W^i_{ljk}; cotton[j, k, l] = C_{jk;l}; source = Π."""
    weyl: np.ndarray
    cotton: np.ndarray
    source: ChartConnection
    curvature: Optional[CurvatureField] = None

    @property
    def n(self) -> int:
        return self.source.n

    def labeled(self):
        n = self.n
        items = [(weyl_label(*idx), self.weyl[idx]) for idx in np.ndindex(n, n, n, n)]
        items += [(cotton_label(*idx), self.cotton[idx]) for idx in np.ndindex(n, n, n)]
        return items


def _require_trace_free(pi: ChartConnection, tol: float = 1e-9) -> None:
    defect = trace_defect(pi)
    if defect > tol * (1.0 + pi.max_abs_coeff()):
        raise ContractViolation(
            f"invariants need trace-free Thomas symbols (trace defect {defect:.3g}); "
            "pass thomas_symbols(c)"
        )


def weyl(pi: ChartConnection, cf: CurvatureField) -> np.ndarray:
    """Projective Weyl tensor W^i_{ljk} of a trace-free representative."""
    _require_trace_free(pi)
    n = pi.n
    factor = 1.0 / (n - 1)
    W = zero_array((n, n, n, n), n)
    for i, l, j, k in np.ndindex(n, n, n, n):
        parts = [cf.riemann[i, l, j, k]]
        if i == k:
            parts.append(cf.ricci[j, l].scale(factor))
        if i == j:
            parts.append(cf.ricci[k, l].scale(-factor))
        W[i, l, j, k] = poly_sum(parts, n)
    return W


def cotton_york(pi: ChartConnection, cf: CurvatureField) -> np.ndarray:
    """Cotton-York tensor C_{jk;l} = (∇Ric)_{j;kl} − (∇Ric)_{k;jl}."""
    _require_trace_free(pi)
    n = pi.n
    C = zero_array((n, n, n), n)
    for j, k, l in np.ndindex(n, n, n):
        C[j, k, l] = cf.nabla_ricci[j, k, l].sub(cf.nabla_ricci[k, j, l])
    return C


def projective_invariants(c: ChartConnection) -> InvariantField:
    """thomas_symbols → riemann → weyl, cotton_york."""
    pi = thomas_symbols(c)
    cf = riemann(pi)
    return InvariantField(weyl(pi, cf), cotton_york(pi, cf), pi, cf)


def weyl_trace_defect(inv: InvariantField) -> float:
    """Largest coefficient of Σ_i W^i_{jik}."""
    n = inv.n
    return max(
        poly_sum((inv.weyl[i, j, i, k] for i in range(n)), n).max_abs_coeff()
        for j in range(n) for k in range(n)
    )


@dataclass
class InvariantReport:
    """Flatness verdict over a sampling grid, with a witness when non-flat."""
    verdict: str
    n: int
    flat_tol: float
    max_weyl: float
    max_cotton: float
    weyl_vanishes_exactly: bool
    cotton_vanishes_exactly: bool
    witness_point: Optional[List[float]] = None
    witness_component: Optional[str] = None
    witness_value: Optional[float] = None
    per_point: pd.DataFrame = field(default_factory=pd.DataFrame)

    @property
    def is_flat(self) -> bool:
        return self.verdict == FLAT

    def to_dict(self) -> Dict[str, Any]:
        return {
            "convention": CURVATURE_CONVENTION,
            "verdict": self.verdict,
            "dimension": self.n,
            "flat_tol": self.flat_tol,
            "max_weyl": self.max_weyl,
            "max_cotton": self.max_cotton,
            "weyl_vanishes_exactly": self.weyl_vanishes_exactly,
            "cotton_vanishes_exactly": self.cotton_vanishes_exactly,
            "witness": None if self.witness_component is None else {
                "point": self.witness_point,
                "component": self.witness_component,
                "value": self.witness_value,
            },
            "per_point": self.per_point.to_dict(orient="records"),
        }


def _grid_values(fields: np.ndarray, n: int, points: np.ndarray) -> np.ndarray:
    """|values| with shape (components, points), components in index order."""
    values = FieldArrayEvaluator(fields, n).eval_many(points)
    return np.abs(values.reshape(points.shape[0], -1).T)


def classify(c: ChartConnection, grid: Optional[np.ndarray] = None,
             flat_tol: float = DEFAULT_FLAT_TOL, resolution: int = DEFAULT_GRID,
             invariants: Optional[InvariantField] = None) -> InvariantReport:
    """
    Decide projective flatness by sampling W and C over a grid.

    Args:
        c: Torsion-free chart connection
        grid: (m, n) sample points; defaults to resolution**n points over the box
        flat_tol: Verdict threshold on max |W| and max |C|
        resolution: Points per axis for the default grid
        invariants: Precomputed invariants of c (recomputed when None)

    Returns:
        InvariantReport with the verdict and, when non-flat, the witness of
        maximal magnitude
    """
    if grid is None:
        grid = sample_grid(c.domain, resolution)
    grid = np.atleast_2d(np.asarray(grid, dtype=float))
    if grid.size == 0:
        raise InputError("classification grid is empty")
    if grid.shape[1] != c.n:
        raise InputError(f"grid points have {grid.shape[1]} coordinates, expected {c.n}")

    inv = invariants if invariants is not None else projective_invariants(c)
    n = c.n
    w_values = _grid_values(inv.weyl, n, grid)
    c_values = _grid_values(inv.cotton, n, grid)
    max_w = float(w_values.max()) if w_values.size else 0.0
    max_c = float(c_values.max()) if c_values.size else 0.0

    scale = 1.0 + inv.source.max_abs_coeff()
    weyl_exact = all(p.max_abs_coeff() <= flat_tol * scale for p in inv.weyl.reshape(-1))
    cotton_exact = all(p.max_abs_coeff() <= flat_tol * scale for p in inv.cotton.reshape(-1))

    per_point = pd.DataFrame(grid, columns=[f"x{a + 1}" for a in range(n)])
    per_point["max_weyl"] = w_values.max(axis=0)
    per_point["max_cotton"] = c_values.max(axis=0)

    verdict = FLAT if max_w <= flat_tol and max_c <= flat_tol else NON_FLAT
    report = InvariantReport(verdict, n, flat_tol, max_w, max_c, weyl_exact, cotton_exact,
                             per_point=per_point)
    if verdict == NON_FLAT:
        use_weyl = max_w >= max_c
        values = w_values if use_weyl else c_values
        comp, point = np.unravel_index(int(np.argmax(values)), values.shape)
        if use_weyl:
            label = weyl_label(*np.unravel_index(comp, (n,) * 4))
            signed = inv.weyl.reshape(-1)[comp].eval(grid[point])
        else:
            label = cotton_label(*np.unravel_index(comp, (n,) * 3))
            signed = inv.cotton.reshape(-1)[comp].eval(grid[point])
        report.witness_point = [float(v) for v in grid[point]]
        report.witness_component = label
        report.witness_value = float(signed)
        logger.info(f"NON_FLAT: {label} = {signed:.6g} at {report.witness_point}")
    else:
        logger.info(f"FLAT: max|W| = {max_w:.3g}, max|C| = {max_c:.3g}")
    return report
