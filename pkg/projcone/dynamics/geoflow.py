"""
Geodesic dynamics.

Classical geodesics of a chart connection (ẍ^i + Γ^i_{jk} ẋ^j ẋ^k = 0), ρ-geodesics
of the cone (dx^i/dt = s^{i+1}, ds^A/dt + Γ̂^A_{BC} s^B s^C = 0, index 0 = 𝟙) and
a parametrization-free comparison of the resulting point sets.
"""

from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence

import numpy as np
import pandas as pd

from ..algebra.polyfields import FieldArrayEvaluator
from ..errors import InputError
from ..geometry.chartconn import ChartConnection
from ..geometry.thomascone import ConeConnection
from ..utils.common import format_point, setup_logging
from .integrators import integrate_fixed

logger = setup_logging(__name__)

RK4_ORDER = 4
COLLINEARITY_EPS = 1e-9
COLLINEARITY_FLOOR = 1e-3
COLLINEARITY_MIN_SAMPLES = 5
_DISTANCE_CHUNK = 256


@dataclass
class GeodesicTrace:
    """Sampled geodesic; fibers holds s(t) for ρ-geodesics and is None otherwise."""
    params: np.ndarray
    points: np.ndarray
    step: float
    fibers: Optional[np.ndarray] = None
    order: int = RK4_ORDER
    truncated: bool = False
    kind: str = "classical"

    @property
    def n(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return len(self.params)

    def endpoint(self) -> np.ndarray:
        return self.points[-1].copy()

    def projected(self) -> "GeodesicTrace":
        """Same samples with the fiber coordinates dropped."""
        return GeodesicTrace(self.params, self.points, self.step, None, self.order,
                             self.truncated, self.kind)

    def to_frame(self) -> pd.DataFrame:
        data: Dict[str, Any] = {"t": self.params}
        for axis in range(self.n):
            data[f"x{axis + 1}"] = self.points[:, axis]
        if self.fibers is not None:
            for A in range(self.fibers.shape[1]):
                data[f"s{A}"] = self.fibers[:, A]
        return pd.DataFrame(data)

    def metadata(self) -> Dict[str, Any]:
        return {
            "integrator": "rk4",
            "step": self.step,
            "steps": len(self) - 1,
            "truncated": self.truncated,
        }


def _check_launch(c: ChartConnection, x0: Sequence[float], h: float, N: int) -> np.ndarray:
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (c.n,):
        raise InputError(f"starting point must have {c.n} coordinates, got {x0.shape}")
    if not c.contains(x0):
        raise InputError(f"starting point {format_point(x0)} is outside the domain {c.domain}")
    if not h > 0:
        raise InputError(f"step size must be positive, got {h}")
    if N < 0:
        raise InputError(f"number of steps must be >= 0, got {N}")
    return x0


def geodesic_classical(c: ChartConnection, x0: Sequence[float], v0: Sequence[float],
                       h: float, N: int) -> GeodesicTrace:
    """
    Integrate ẍ^i = −Γ^i_{jk} ẋ^j ẋ^k with fixed-step RK4.

    Args:
        c: Chart connection
        x0: Starting point inside the domain
        v0: Nonzero initial velocity
        h: Step size
        N: Maximum number of steps

    Returns:
        GeodesicTrace; ``truncated`` is set when the curve left the domain box
    """
    x0 = _check_launch(c, x0, h, N)
    v0 = np.asarray(v0, dtype=float)
    if v0.shape != (c.n,):
        raise InputError(f"initial velocity must have {c.n} components, got {v0.shape}")
    if not np.any(v0):
        raise InputError("initial velocity must be nonzero")
    n = c.n
    gamma = FieldArrayEvaluator(c.gamma, n)

    def rhs(_t, y):
        x, v = y[:n], y[n:]
        return np.concatenate([v, -np.einsum("ijk,j,k->i", gamma(x), v, v)])

    result = integrate_fixed(rhs, np.concatenate([x0, v0]), h, N,
                             accept=lambda y: c.contains(y[:n]))
    if result.truncated:
        logger.info(f"Geodesic left the domain after {len(result.params) - 1} steps")
    return GeodesicTrace(result.params, result.states[:, :n], h, None, RK4_ORDER,
                         result.truncated, "classical")


def _cone_rhs(k: ConeConnection):
    n = k.n
    gammahat = FieldArrayEvaluator(k.gammahat, n)

    def rhs(_t, y):
        x, s = y[:n], y[n:]
        return np.concatenate([s[1:], -np.einsum("abc,b,c->a", gammahat(x), s, s)])

    return rhs


def geodesic_rho(k: ConeConnection, x0: Sequence[float], s0: Sequence[float],
                 h: float, N: int) -> GeodesicTrace:
    """
    Integrate the ρ-geodesic system ρ∘s = ẋ, ∇̂_s s = 0 on the cone.

    s0[0] is the 𝟙 component and s0[1:] the horizontal part, which must be nonzero.
    """
    x0 = _check_launch(k.source_pi, x0, h, N)
    s0 = np.asarray(s0, dtype=float)
    n = k.n
    if s0.shape != (n + 1,):
        raise InputError(f"initial fiber vector must have {n + 1} components, got {s0.shape}")
    if not np.any(s0[1:]):
        raise InputError("horizontal part of the initial fiber vector must be nonzero")
    domain = k.source_pi
    result = integrate_fixed(_cone_rhs(k), np.concatenate([x0, s0]), h, N,
                             accept=lambda y: domain.contains(y[:n]))
    if result.truncated:
        logger.info(f"ρ-geodesic left the domain after {len(result.params) - 1} steps")
    return GeodesicTrace(result.params, result.states[:, :n], h, result.states[:, n:],
                         RK4_ORDER, result.truncated, "rho")


@dataclass
class MatchReport:
    """One-sided discrete Hausdorff distance from the samples of one trace to the polyline of another."""
    distance: float
    tol: float
    worst_index: int
    worst_point: np.ndarray

    @property
    def match(self) -> bool:
        return self.distance <= self.tol

    def to_dict(self) -> Dict[str, Any]:
        return {
            "distance": self.distance,
            "tol": self.tol,
            "match": self.match,
            "worst_index": self.worst_index,
            "worst_point": [float(v) for v in self.worst_point],
        }


def _point_to_polyline(points: np.ndarray, polyline: np.ndarray) -> np.ndarray:
    starts = polyline[:-1]
    seg = polyline[1:] - starts
    seg_len2 = np.einsum("si,si->s", seg, seg)
    safe = np.where(seg_len2 > 0, seg_len2, 1.0)
    out = np.empty(points.shape[0])
    for lo in range(0, points.shape[0], _DISTANCE_CHUNK):
        chunk = points[lo:lo + _DISTANCE_CHUNK]
        rel = chunk[:, None, :] - starts[None, :, :]
        u = np.clip(np.einsum("psi,si->ps", rel, seg) / safe, 0.0, 1.0)
        u = np.where(seg_len2 > 0, u, 0.0)
        nearest = starts[None, :, :] + u[:, :, None] * seg[None, :, :]
        out[lo:lo + _DISTANCE_CHUNK] = np.linalg.norm(chunk[:, None, :] - nearest, axis=2).min(axis=1)
    return out


def compare_unparametrized(t1: GeodesicTrace, t2: GeodesicTrace, tol: float) -> MatchReport:
    """
    Compare point sets regardless of parametrization.

    Args:
        t1: Trace whose samples are measured
        t2: Trace whose polyline is measured against
        tol: Match threshold

    Returns:
        MatchReport with the largest sample-to-polyline distance
    """
    if len(t1) < 2 or len(t2) < 2:
        raise InputError("traces need at least 2 points to compare")
    if t1.n != t2.n:
        raise InputError(f"traces live in different dimensions: {t1.n} vs {t2.n}")
    distances = _point_to_polyline(t1.points, t2.points)
    worst = int(np.argmax(distances))
    report = MatchReport(float(distances[worst]), tol, worst, t1.points[worst].copy())
    logger.debug(f"Unparametrized distance {report.distance:.3g} (tol {tol:.3g})")
    return report


def _wedge_norm(a: np.ndarray, b: np.ndarray) -> float:
    n = a.shape[0]
    return float(np.sqrt(sum((a[i] * b[j] - a[j] * b[i]) ** 2
                             for i in range(n) for j in range(i + 1, n))))


def _five_point_derivative(values: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order central difference along axis 0, for samples 2..m-3."""
    return (values[:-4] - 8.0 * values[1:-3] + 8.0 * values[3:-1] - values[4:]) / (12.0 * h)


def collinearity_residual(trace: GeodesicTrace, k: ConeConnection) -> float:
    """
    Projective-geodesic residual of a sampled ρ-geodesic.

    ẋ is differentiated from the sampled points and ẍ from the sampled horizontal
    fiber, both with fourth-order central differences on interior samples. At each
    sample the larger of two ratios counts:

    - collinearity ‖a ∧ ẋ‖ / ((‖a‖ + δ)‖ẋ‖ + ε) with a^i = ẍ^i + Π^i_{jk} ẋ^j ẋ^k,
      where δ = COLLINEARITY_FLOOR·(‖ẍ‖ + ‖Πẋẋ‖ + ‖ẋ‖²) absorbs differencing noise
      when a vanishes;
    - anchor ‖ẋ − ρ(s)‖ / (‖ẋ‖ + ‖ρ(s)‖ + ε).

    Args:
        trace: ρ-geodesic trace with fibers, fixed step, at least 5 samples
        k: Cone connection whose source Π defines the projective structure

    Returns:
        Maximum ratio over interior samples
    """
    if trace.fibers is None:
        raise InputError("collinearity residual needs a ρ-geodesic trace with fibers")
    if trace.n != k.n:
        raise InputError(f"trace dimension {trace.n} does not match cone dimension {k.n}")
    if len(trace) < COLLINEARITY_MIN_SAMPLES:
        raise InputError(f"collinearity residual needs at least {COLLINEARITY_MIN_SAMPLES} samples, "
                         f"got {len(trace)}")
    pi = FieldArrayEvaluator(k.source_pi.gamma, k.n)
    xdots = _five_point_derivative(trace.points, trace.step)
    xddots = _five_point_derivative(trace.fibers[:, 1:], trace.step)
    anchors = trace.fibers[2:-2, 1:]
    worst = 0.0
    for x, xdot, xddot, anchor in zip(trace.points[2:-2], xdots, xddots, anchors):
        quadratic = np.einsum("ijk,j,k->i", pi(x), xdot, xdot)
        a = xddot + quadratic
        speed = np.linalg.norm(xdot)
        floor = COLLINEARITY_FLOOR * (np.linalg.norm(xddot) + np.linalg.norm(quadratic) + speed ** 2)
        collinearity = _wedge_norm(a, xdot) / ((np.linalg.norm(a) + floor) * speed + COLLINEARITY_EPS)
        anchor_gap = np.linalg.norm(xdot - anchor) / (speed + np.linalg.norm(anchor) + COLLINEARITY_EPS)
        worst = max(worst, float(collinearity), float(anchor_gap))
    return worst
