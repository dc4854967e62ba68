"""
Horizontal transport in the cone bundle and the developing map of a flat projective structure.

A section t = t^B e_B is parallel along the lift u = f·𝟙 + γ̇^j c_U(∂_j) when
dt^A/dτ + Γ̂^A_{CB} u^C t^B = 0. The frame matrix T solves dT/dτ = −M(x, u) T with
T(0) = I, so its columns are the base frame carried to the endpoint.
"""

from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from tqdm import tqdm

from ..algebra.polyfields import FieldArrayEvaluator
from ..errors import InputError, NotFlatError
from ..geometry.thomascone import ConeConnection, ConeCurvature, cone_max_curvature
from ..utils.common import format_point, sample_grid, setup_logging
from .geoflow import GeodesicTrace
from .integrators import integrate_segment

logger = setup_logging(__name__)

DEFAULT_TRANSPORT_STEP = 1e-2
DEFAULT_LINE_TOL = 1e-6
HOLONOMY_SUBSTEPS = 16

Vertical = Union[float, Callable[[np.ndarray], float], None]


@dataclass(frozen=True, eq=False)
class ProjPoint:
    """Point of RP^n; homog has max-abs component 1 and its first such component is positive."""
    homog: np.ndarray

    @classmethod
    def from_homogeneous(cls, v: Sequence[float]) -> "ProjPoint":
        v = np.asarray(v, dtype=float)
        scale = np.max(np.abs(v)) if v.size else 0.0
        if not np.isfinite(scale) or scale == 0.0:
            raise InputError("the zero vector has no projective class")
        lead = int(np.argmax(np.abs(v)))
        return cls(v / v[lead])

    def distance(self, other: "ProjPoint") -> float:
        """Sine of the angle between the two representative lines."""
        a = self.homog / np.linalg.norm(self.homog)
        b = other.homog / np.linalg.norm(other.homog)
        # rejection form keeps precision near zero angle
        return float(np.linalg.norm(a - (a @ b) * b))

    def to_list(self) -> List[float]:
        return [float(v) for v in self.homog]


@dataclass(frozen=True, eq=False)
class TransportFrame:
    """matrix[:, B] = coordinates at the endpoint of frame vector e_B carried from the start."""
    matrix: np.ndarray
    path_length: float = 0.0

    @property
    def condition_number(self) -> float:
        return float(np.linalg.cond(self.matrix))

    def apply(self, v: Sequence[float]) -> np.ndarray:
        return self.matrix @ np.asarray(v, dtype=float)

    def inverse(self) -> np.ndarray:
        return np.linalg.inv(self.matrix)


def _connection_matrices(k: ConeConnection):
    """x ↦ Γ̂(x) as an (n+1)^3 array, Γ̂[A, C, B]."""
    return FieldArrayEvaluator(k.gammahat, k.n)


def _vertical_value(vertical: Vertical, x: np.ndarray) -> float:
    if vertical is None:
        return 0.0
    if callable(vertical):
        return float(vertical(x))
    return float(vertical)


def _check_path(k: ConeConnection, path: np.ndarray) -> np.ndarray:
    path = np.atleast_2d(np.asarray(path, dtype=float))
    if path.shape[1] != k.n:
        raise InputError(f"path points must have {k.n} coordinates, got {path.shape[1]}")
    for point in path:
        if not k.source_pi.contains(point):
            raise InputError(f"path point {format_point(point)} is outside the domain")
    return path


def horizontal_transport(k: ConeConnection, path: Sequence[Sequence[float]],
                         h: float = DEFAULT_TRANSPORT_STEP,
                         vertical: Vertical = None) -> TransportFrame:
    """
    Parallel-transport the cone frame along a polyline.

    Args:
        k: Cone ρ-connection
        path: Polyline vertices inside the domain (the box is convex, so every
            straight segment between vertices stays inside)
        h: Largest RK4 step measured in chart length
        vertical: Optional 𝟙 component f of the lift, a constant or a function
            of the point

    Returns:
        TransportFrame from the first vertex to the last
    """
    if not h > 0:
        raise InputError(f"step size must be positive, got {h}")
    path = _check_path(k, path)
    gammahat = _connection_matrices(k)
    T = np.eye(k.n + 1)
    total = 0.0
    for start, end in zip(path[:-1], path[1:]):
        delta = end - start
        length = float(np.linalg.norm(delta))
        if length == 0.0:
            continue
        direction = delta / length

        def rhs(tau, frame, start=start, direction=direction):
            x = start + tau * direction
            u = np.concatenate([[_vertical_value(vertical, x)], direction])
            M = np.einsum("acb,c->ab", gammahat(x), u)
            return -M @ frame

        T = integrate_segment(rhs, T, length, h)
        total += length
    return TransportFrame(T, total)


def loop_holonomy(k: ConeConnection, center: Sequence[float], radii: Tuple[float, float],
                  axes: Tuple[int, int]) -> np.ndarray:
    """
    (Holonomy − I)/(h1·h2) of a small coordinate rectangle, based at its center.

    The loop runs from the center to the corner center − (h1/2) e_j − (h2/2) e_k,
    around the rectangle along e_k first and then e_j, and back to the center.
    The result converges to [R̂^A_{B, j+1, k+1}] with O(h²) error.

    Args:
        k: Cone ρ-connection
        center: Rectangle center
        radii: Side lengths (h1 along axis j, h2 along axis k)
        axes: 0-based chart axes (j, k)
    """
    n = k.n
    center = np.asarray(center, dtype=float)
    if center.shape != (n,):
        raise InputError(f"center must have {n} coordinates")
    j, kk = (int(a) for a in axes)
    h1, h2 = (float(r) for r in radii)
    if not (0 <= j < n and 0 <= kk < n) or j == kk:
        raise InputError(f"axes must be two distinct indices in 0..{n - 1}, got {axes}")
    if not (h1 > 0 and h2 > 0):
        raise InputError(f"degenerate rectangle with sides {h1}, {h2}")
    e_j = np.zeros(n)
    e_j[j] = 1.0
    e_k = np.zeros(n)
    e_k[kk] = 1.0
    corner = center - 0.5 * h1 * e_j - 0.5 * h2 * e_k
    loop = [
        center,
        corner,
        corner + h2 * e_k,
        corner + h2 * e_k + h1 * e_j,
        corner + h1 * e_j,
        corner,
        center,
    ]
    for point in loop:
        if not k.source_pi.contains(point):
            raise InputError(f"rectangle around {format_point(center)} leaves the domain")
    frame = horizontal_transport(k, loop, min(h1, h2) / HOLONOMY_SUBSTEPS)
    return (frame.matrix - np.eye(n + 1)) / (h1 * h2)


def flatness_gate(k: ConeConnection, flat_tol: float, grid: int,
                  curvature: Optional[ConeCurvature] = None) -> float:
    """Raise NotFlatError when max |R̂| over the sampling grid exceeds flat_tol."""
    points = sample_grid(k.domain, grid)
    value, point, label = cone_max_curvature(k, points, curvature)
    if value > flat_tol:
        logger.warning(f"Refusing to develop: |{label}| = {value:.6g} at {format_point(point)}")
        raise NotFlatError(value, point, label)
    return value


def develop(k: ConeConnection, base: Sequence[float], targets: Sequence[Sequence[float]],
            flat_tol: float = 1e-8, grid: int = 5, h: float = DEFAULT_TRANSPORT_STEP,
            progress: bool = False) -> List[ProjPoint]:
    """
    Developing map φ(x) = [T(base→x)^{-1} · 𝟙_x] of a flat cone.

    Args:
        k: Cone ρ-connection
        base: Base point; φ(base) = [1 : 0 : … : 0]
        targets: Points to develop, each joined to base by a straight segment
        flat_tol: Largest admissible |R̂| on the sampling grid
        grid: Points per axis of the flatness grid
        h: Transport step
        progress: Show a progress bar

    Returns:
        ProjPoints in target order

    Raises:
        NotFlatError: When the cone is curved somewhere on the grid
    """
    flatness_gate(k, flat_tol, grid)
    base = np.asarray(base, dtype=float)
    unit = np.zeros(k.n + 1)
    unit[0] = 1.0
    developed = []
    for target in tqdm(list(targets), desc="Developing", disable=not progress, leave=False):
        frame = horizontal_transport(k, [base, target], h)
        developed.append(ProjPoint.from_homogeneous(np.linalg.solve(frame.matrix, unit)))
    logger.info(f"Developed {len(developed)} points from base {format_point(base)}")
    return developed


def develop_trace(k: ConeConnection, base: Sequence[float], trace: GeodesicTrace,
                  flat_tol: float = 1e-8, grid: int = 5,
                  h: float = DEFAULT_TRANSPORT_STEP) -> List[ProjPoint]:
    """Develop every sample of a geodesic trace."""
    return develop(k, base, trace.points, flat_tol, grid, h)


@dataclass
class LineCertificate:
    passed: bool
    residual: float
    singular_values: List[float]
    tol: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "residual": self.residual,
            "singular_values": self.singular_values,
            "tol": self.tol,
        }


def line_certificate(points: Sequence[ProjPoint], tol: float = DEFAULT_LINE_TOL) -> LineCertificate:
    """
    Certify that projective points lie on one projective line.

    Passes iff σ_3 ≤ tol·σ_1 for the matrix of stacked representatives;
    the residual reported is σ_3/σ_1.
    """
    if len(points) < 3:
        raise InputError(f"line certificate needs at least 3 points, got {len(points)}")
    stacked = np.array([p.homog / np.linalg.norm(p.homog) for p in points])
    sigma = np.linalg.svd(stacked, compute_uv=False)
    third = float(sigma[2]) if sigma.size > 2 else 0.0
    residual = third / float(sigma[0])
    return LineCertificate(residual <= tol, residual, [float(s) for s in sigma], tol)
