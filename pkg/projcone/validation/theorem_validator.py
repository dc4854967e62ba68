"""
Validation of the cone ρ-connection against the conditions that characterise it.
Each check evaluates residual polynomials over a sampling grid and reports the
largest magnitude together with the point and component where it occurs.
"""

from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..algebra.polyfields import PolyField, grid_max_abs
from ..analysis.invariants import InvariantField
from ..errors import InputError
from ..geometry.chartconn import CURVATURE_CONVENTION
from ..geometry.thomascone import (
    ConeConnection,
    ConeCurvature,
    cone_curvature,
    cone_curvature_label,
    cone_gamma_label,
    cone_ricci,
    trace_identity_residuals,
    unit_rule_residuals,
)
from ..utils.common import setup_logging

logger = setup_logging(__name__)

DEFAULT_RESIDUAL_TOL = 1e-9

Labeled = Sequence[Tuple[str, PolyField]]


class TheoremValidator:
    """Checks torsion, unit rules, trace identities, Ricci-flatness and the curvature split."""

    def __init__(self, cone: ConeConnection, invariants: InvariantField,
                 grid: np.ndarray, tol: float = DEFAULT_RESIDUAL_TOL):
        """
        Initialize the validator.

        Args:
            cone: Output of build_cone
            invariants: Weyl and Cotton-York computed from the same Π
            grid: (m, n) sample points
            tol: Pass threshold on every max-abs residual
        """
        grid = np.atleast_2d(np.asarray(grid, dtype=float))
        if grid.size == 0:
            raise InputError("verification grid is empty")
        if grid.shape[1] != cone.n:
            raise InputError(f"grid points have {grid.shape[1]} coordinates, expected {cone.n}")
        if invariants.n != cone.n:
            raise InputError("invariants and cone have different dimensions")
        self.cone = cone
        self.invariants = invariants
        self.grid = grid
        self.tol = tol
        self._curvature: Optional[ConeCurvature] = None

    @property
    def curvature(self) -> ConeCurvature:
        if self._curvature is None:
            self._curvature = cone_curvature(self.cone)
        return self._curvature

    def _check(self, name: str, condition: str, labeled: Labeled) -> Dict[str, Any]:
        value, point, label = grid_max_abs(labeled, self.grid)
        is_valid = value <= self.tol
        return {
            "check": name,
            "condition": condition,
            "valid": bool(is_valid),
            "max_residual": value,
            "worst_point": None if point is None else [float(v) for v in point],
            "worst_component": label,
            "message": f"✅ {name}: max residual {value:.3g}" if is_valid
            else f"❌ {name}: max residual {value:.3g} at {label}",
        }

    def check_torsion_free(self) -> Dict[str, Any]:
        g = self.cone.gammahat
        size = self.cone.n + 1
        labeled = [
            (f"{cone_gamma_label(A, B, C)} - {cone_gamma_label(A, C, B)}", g[A, B, C].sub(g[A, C, B]))
            for A in range(size) for B in range(size) for C in range(B + 1, size)
        ]
        return self._check("torsion", "Γ̂^A_{BC} = Γ̂^A_{CB}", labeled)

    def check_unit_rules(self) -> Dict[str, Any]:
        return self._check("ii1", "∇̂_𝟙 s = −s/(n+1)", unit_rule_residuals(self.cone))

    def check_trace_identities(self) -> Dict[str, Any]:
        return self._check("ii2", "Σ_A Γ̂^A_{Ak} = 0, Σ_A Γ̂^A_{A0} = −1",
                           trace_identity_residuals(self.cone))

    def check_ricci_flat(self) -> Dict[str, Any]:
        ric = cone_ricci(self.curvature)
        size = self.cone.n + 1
        labeled = [(f"Riĉ_{{{B}{C}}}", ric[B, C]) for B in range(size) for C in range(size)]
        return self._check("ii3", "Riĉ = 0", labeled)

    def _decomposition_residuals(self) -> Tuple[List, List]:
        n = self.cone.n
        kappa = (n + 1.0) / (n - 1.0)
        R = self.curvature.rhat
        W = self.invariants.weyl
        C = self.invariants.cotton
        split = []
        for i, l, j, k in np.ndindex(n, n, n, n):
            split.append((f"{cone_curvature_label(i + 1, l + 1, j + 1, k + 1)} - W",
                          R[i + 1, l + 1, j + 1, k + 1].sub(W[i, l, j, k])))
        for l, j, k in np.ndindex(n, n, n):
            split.append((f"{cone_curvature_label(0, l + 1, j + 1, k + 1)} - κC",
                          R[0, l + 1, j + 1, k + 1].sub(C[j, k, l].scale(kappa))))
        unit_slot = [
            (cone_curvature_label(A, D, B, Cc), R[A, D, B, Cc])
            for A, D, B, Cc in np.ndindex(*R.shape) if 0 in (D, B, Cc)
        ]
        return split, unit_slot

    def check_decomposition(self) -> List[Dict[str, Any]]:
        split, unit_slot = self._decomposition_residuals()
        return [
            self._check("decomposition", "R̂^i_{ljk} = W, R̂^0_{ljk} = (n+1)/(n−1) C_{jk;l}", split),
            self._check("unit_slot", "R̂ with a 𝟙 slot vanishes", unit_slot),
        ]

    def run_comprehensive_validation(self) -> Dict[str, Any]:
        """
        Run every check.

        Returns:
            Report dictionary with one entry per condition and an overall status
        """
        checks = [
            self.check_torsion_free(),
            self.check_unit_rules(),
            self.check_trace_identities(),
            self.check_ricci_flat(),
        ]
        checks.extend(self.check_decomposition())
        value, point, label = grid_max_abs(self.curvature.labeled(), self.grid)
        failed = [c["check"] for c in checks if not c["valid"]]
        status = "PASSED" if not failed else "FAILED"
        for entry in checks:
            logger.info(entry["message"])
        if failed:
            logger.warning(f"Theorem verification failed: {', '.join(failed)}")
        return {
            "convention": CURVATURE_CONVENTION,
            "dimension": self.cone.n,
            "tolerance": self.tol,
            "grid_points": int(self.grid.shape[0]),
            "checks": {c["check"]: c for c in checks},
            "max_cone_curvature": {
                "value": value,
                "point": None if point is None else [float(v) for v in point],
                "component": label,
            },
            "overall_status": status,
        }


def verify_theorem(k: ConeConnection, inv: InvariantField, grid: np.ndarray,
                   tol: float = DEFAULT_RESIDUAL_TOL) -> Dict[str, Any]:
    """VerificationReport for a cone and the invariants of its source Π."""
    return TheoremValidator(k, inv, grid, tol).run_comprehensive_validation()
