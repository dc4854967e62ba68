"""
Chart-level connection calculus.

Torsion-free connections on an axis-aligned box, projective shifts
Γ → Γ + α⊗δ + δ⊗α, the trace-free normalization (Thomas symbols) and the
curvature stack R, Ric, ∇Ric that every projective invariant is built from.

Index convention (0-based internally, 1-based in reports):
    ∇_{∂_j} ∂_k = Γ^i_{jk} ∂_i
    R(∂_j, ∂_k) ∂_l = R^i_{ljk} ∂_i,
    R^i_{ljk} = ∂_j Γ^i_{kl} − ∂_k Γ^i_{jl} + Γ^i_{jm} Γ^m_{kl} − Γ^i_{km} Γ^m_{jl}
    Ric_{jk} = Σ_i R^i_{jik}
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from ..algebra.polyfields import PolyField, poly_sum, zero_array
from ..errors import InputError
from ..utils.common import christoffel_label, setup_logging

logger = setup_logging(__name__)

CURVATURE_CONVENTION = (
    "R(d_j,d_k)d_l = R^i_{ljk} d_i; "
    "R^i_{ljk} = d_j G^i_{kl} - d_k G^i_{jl} + G^i_{jm} G^m_{kl} - G^i_{km} G^m_{jl}; "
    "Ric_{jk} = R^i_{jik}; cone index 0 = unit section"
)

DEFAULT_EQUALITY_TOL = 1e-9

Domain = Tuple[Tuple[float, float], ...]


def _normalize_domain(domain: Sequence[Sequence[float]], n: int) -> Domain:
    if len(domain) != n:
        raise InputError(f"domain has {len(domain)} intervals, expected {n}")
    box = []
    for axis, interval in enumerate(domain):
        if len(interval) != 2:
            raise InputError(f"domain interval {axis + 1} must be a (lo, hi) pair")
        lo, hi = float(interval[0]), float(interval[1])
        if not lo < hi:
            raise InputError(f"degenerate domain interval {axis + 1}: [{lo}, {hi}]")
        box.append((lo, hi))
    return tuple(box)


def default_domain(n: int) -> Domain:
    return tuple((-1.0, 1.0) for _ in range(n))


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ChartConnection:
    """Christoffel array Γ^i_{jk} = gamma[i, j, k] of PolyFields over a box."""
    n: int
    domain: Domain
    gamma: np.ndarray

    def __post_init__(self):
        if self.n < 2:
            raise InputError(f"dimension must be >= 2, got {self.n}")
        object.__setattr__(self, "domain", _normalize_domain(self.domain, self.n))
        if self.gamma.shape != (self.n,) * 3:
            raise InputError(f"gamma must have shape {(self.n,) * 3}, got {self.gamma.shape}")
        for index in np.ndindex(*self.gamma.shape):
            p = self.gamma[index]
            if not isinstance(p, PolyField) or p.num_vars != self.n:
                raise InputError(f"gamma{index} is not a PolyField in {self.n} variables")
        object.__setattr__(self, "gamma", _frozen(self.gamma))

    @classmethod
    def zero(cls, n: int, domain: Optional[Sequence[Sequence[float]]] = None) -> "ChartConnection":
        return cls(n, domain if domain is not None else default_domain(n), zero_array((n, n, n), n))

    @classmethod
    def from_entries(cls, n: int, entries, domain=None, symmetric: bool = True) -> "ChartConnection":
        """
        Build from ((i, j, k), PolyField) pairs with 0-based indices.

        With ``symmetric`` each entry is written to both (j, k) and (k, j).
        """
        gamma = zero_array((n, n, n), n)
        for (i, j, k), poly in entries:
            gamma[i, j, k] = poly
            if symmetric:
                gamma[i, k, j] = poly
        return cls(n, domain if domain is not None else default_domain(n), gamma)

    def with_gamma(self, gamma: np.ndarray) -> "ChartConnection":
        return ChartConnection(self.n, self.domain, gamma)

    def is_symmetric(self, tol: float = 0.0) -> bool:
        n = self.n
        for i in range(n):
            for j in range(n):
                for k in range(j + 1, n):
                    a, b = self.gamma[i, j, k], self.gamma[i, k, j]
                    if tol == 0.0:
                        if a != b:
                            return False
                    elif not a.allclose(b, tol):
                        return False
        return True

    def contains(self, x: Sequence[float]) -> bool:
        return len(x) == self.n and all(lo <= v <= hi for v, (lo, hi) in zip(x, self.domain))

    def max_abs_coeff(self) -> float:
        return max(p.max_abs_coeff() for p in self.gamma.reshape(-1))

    def allclose(self, other: "ChartConnection", tol: float = DEFAULT_EQUALITY_TOL) -> bool:
        if other.n != self.n:
            return False
        return all(a.allclose(b, tol) for a, b in zip(self.gamma.reshape(-1), other.gamma.reshape(-1)))

    def labeled(self):
        """(label, poly) pairs in index order, labels 1-based."""
        return [
            (christoffel_label("Γ", i, j, k), self.gamma[i, j, k])
            for i, j, k in np.ndindex(*self.gamma.shape)
        ]


@dataclass(frozen=True, eq=False)
class OneFormField:
    """One-form α = α_k dx^k with PolyField components."""
    n: int
    alpha: Tuple[PolyField, ...]

    def __post_init__(self):
        alpha = tuple(self.alpha)
        if len(alpha) != self.n:
            raise InputError(f"one-form has {len(alpha)} components, expected {self.n}")
        for k, p in enumerate(alpha):
            if not isinstance(p, PolyField) or p.num_vars != self.n:
                raise InputError(f"alpha_{k + 1} is not a PolyField in {self.n} variables")
        object.__setattr__(self, "alpha", alpha)

    @classmethod
    def zero(cls, n: int) -> "OneFormField":
        return cls(n, tuple(PolyField(n) for _ in range(n)))

    def negate(self) -> "OneFormField":
        return OneFormField(self.n, tuple(-a for a in self.alpha))

    def allclose(self, other: "OneFormField", tol: float = DEFAULT_EQUALITY_TOL) -> bool:
        return other.n == self.n and all(a.allclose(b, tol) for a, b in zip(self.alpha, other.alpha))

    def to_json(self):
        return [a.to_json() for a in self.alpha]


@dataclass(frozen=True, eq=False)
class NotEquivalent:
    """Result of ``extract_alpha`` when the difference tensor has no shift form."""
    max_residual: float
    component: str


@dataclass(frozen=True, eq=False)
class CurvatureField:
    """riemann[i, l, j, k] = R^i_{ljk}; ricci[j, k]; nabla_ricci[i, j, k] = (∇_i Ric)_{jk}."""
    n: int
    riemann: np.ndarray
    ricci: np.ndarray
    nabla_ricci: np.ndarray


def _require_torsion_free(c: ChartConnection, operation: str) -> None:
    if not c.is_symmetric():
        raise InputError(f"{operation} needs a torsion-free connection; call symmetrize first")


def symmetrize(c: ChartConnection) -> ChartConnection:
    """Average Γ^i_{jk} and Γ^i_{kj}; the geodesic equation only sees this part."""
    n = c.n
    gamma = zero_array((n, n, n), n)
    for i in range(n):
        for j in range(n):
            gamma[i, j, j] = c.gamma[i, j, j]
            for k in range(j + 1, n):
                avg = c.gamma[i, j, k].add(c.gamma[i, k, j]).scale(0.5)
                gamma[i, j, k] = avg
                gamma[i, k, j] = avg
    return c.with_gamma(gamma)


def projective_shift(c: ChartConnection, a: OneFormField) -> ChartConnection:
    """Γ'^i_{jk} = Γ^i_{jk} + α_j δ^i_k + α_k δ^i_j."""
    if a.n != c.n:
        raise InputError(f"dimension mismatch: connection n={c.n}, one-form n={a.n}")
    _require_torsion_free(c, "projective_shift")
    n = c.n
    gamma = zero_array((n, n, n), n)
    for i in range(n):
        for j in range(n):
            for k in range(j, n):
                shift = []
                if i == k:
                    shift.append(a.alpha[j])
                if i == j:
                    shift.append(a.alpha[k])
                value = c.gamma[i, j, k]
                if shift:
                    value = poly_sum([value] + shift, n)
                gamma[i, j, k] = value
                gamma[i, k, j] = value
    return c.with_gamma(gamma)


def _traces(c: ChartConnection) -> Tuple[PolyField, ...]:
    """t_k = Σ_l Γ^l_{lk}."""
    return tuple(poly_sum((c.gamma[l, l, k] for l in range(c.n)), c.n) for k in range(c.n))


def extract_alpha(c1: ChartConnection, c2: ChartConnection,
                  tol: float = DEFAULT_EQUALITY_TOL) -> Union[OneFormField, NotEquivalent]:
    """
    Recover α with c2 = projective_shift(c1, α), or report why none exists.

    α_k = (1/(n+1)) Σ_i D^i_{ik} with D = Γ2 − Γ1; the residual
    D − α⊗δ − δ⊗α must vanish as term maps.
    """
    if c1.n != c2.n:
        raise InputError(f"dimension mismatch: n={c1.n} vs n={c2.n}")
    if c1.domain != c2.domain:
        raise InputError("connections live on different domains")
    _require_torsion_free(c1, "extract_alpha")
    _require_torsion_free(c2, "extract_alpha")
    n = c1.n
    diff = np.empty((n, n, n), dtype=object)
    for index in np.ndindex(n, n, n):
        diff[index] = c2.gamma[index].sub(c1.gamma[index])
    alpha = tuple(
        poly_sum((diff[i, i, k] for i in range(n)), n).scale(1.0 / (n + 1))
        for k in range(n)
    )
    scale = 1.0 + max(c1.max_abs_coeff(), c2.max_abs_coeff())
    worst, worst_label = 0.0, christoffel_label("D", 0, 0, 0)
    for i, j, k in np.ndindex(n, n, n):
        residual = diff[i, j, k]
        if i == k:
            residual = residual.sub(alpha[j])
        if i == j:
            residual = residual.sub(alpha[k])
        magnitude = residual.max_abs_coeff()
        if magnitude > worst:
            worst, worst_label = magnitude, christoffel_label("D", i, j, k)
    if worst > tol * scale:
        logger.info(f"Connections are not projectively equivalent: residual {worst:.3g} in {worst_label}")
        return NotEquivalent(worst, worst_label)
    return OneFormField(n, alpha)


def shift_form_defect(c1: ChartConnection, c2: ChartConnection,
                      x: Sequence[float], v: Sequence[float]) -> float:
    """
    Pointwise equivalence criterion: distance of D(v, v) from span(v).

    For projectively equivalent connections D(v, v) = 2 α(v) v, so the defect
    vanishes for every v; it is an independent cross-check of ``extract_alpha``.
    """
    if c1.n != c2.n:
        raise InputError(f"dimension mismatch: n={c1.n} vs n={c2.n}")
    v = np.asarray(v, dtype=float)
    if v.shape != (c1.n,) or not np.any(v):
        raise InputError("v must be a nonzero vector of length n")
    n = c1.n
    d = np.array([
        sum((c2.gamma[i, j, k].eval(x) - c1.gamma[i, j, k].eval(x)) * v[j] * v[k]
            for j in range(n) for k in range(n))
        for i in range(n)
    ])
    along = (d @ v) / (v @ v) * v
    return float(np.linalg.norm(d - along))


def thomas_symbols(c: ChartConnection) -> ChartConnection:
    """
    Trace-free special representative in the chart volume gauge.

    Π^i_{jk} = Γ^i_{jk} − (1/(n+1)) (δ^i_j t_k + δ^i_k t_j),  t_k = Σ_l Γ^l_{lk}
    """
    _require_torsion_free(c, "thomas_symbols")
    n = c.n
    traces = [t.scale(-1.0 / (n + 1)) for t in _traces(c)]
    gamma = zero_array((n, n, n), n)
    for i in range(n):
        for j in range(n):
            for k in range(j, n):
                parts = [c.gamma[i, j, k]]
                if i == j:
                    parts.append(traces[k])
                if i == k:
                    parts.append(traces[j])
                value = poly_sum(parts, n) if len(parts) > 1 else parts[0]
                gamma[i, j, k] = value
                gamma[i, k, j] = value
    return c.with_gamma(gamma)


def trace_defect(c: ChartConnection) -> float:
    """Largest coefficient of Σ_l Γ^l_{lk}; zero for Thomas symbols."""
    return max(t.max_abs_coeff() for t in _traces(c))


def riemann(c: ChartConnection) -> CurvatureField:
    """Riemann, Ricci and ∇Ricci of a torsion-free chart connection."""
    _require_torsion_free(c, "riemann")
    n = c.n
    g = c.gamma
    partials = np.empty((n, n, n, n), dtype=object)   # partials[a, i, j, k] = ∂_a Γ^i_{jk}
    for a, i, j, k in np.ndindex(n, n, n, n):
        partials[a, i, j, k] = g[i, j, k].partial(a)

    R = zero_array((n, n, n, n), n)
    for i in range(n):
        for l in range(n):
            for j in range(n):
                for k in range(j + 1, n):
                    parts = [partials[j, i, k, l], -partials[k, i, j, l]]
                    for m in range(n):
                        parts.append(g[i, j, m].mul(g[m, k, l]))
                        parts.append(-g[i, k, m].mul(g[m, j, l]))
                    value = poly_sum(parts, n)
                    R[i, l, j, k] = value
                    R[i, l, k, j] = -value

    ricci = np.empty((n, n), dtype=object)
    for j in range(n):
        for k in range(n):
            ricci[j, k] = poly_sum((R[i, j, i, k] for i in range(n)), n)

    nabla = np.empty((n, n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                parts = [ricci[j, k].partial(i)]
                for m in range(n):
                    parts.append(-g[m, i, j].mul(ricci[m, k]))
                    parts.append(-g[m, i, k].mul(ricci[j, m]))
                nabla[i, j, k] = poly_sum(parts, n)

    logger.debug(f"Computed curvature stack for n={n}")
    return CurvatureField(n, _frozen(R), _frozen(ricci), _frozen(nabla))


def ricci_asymmetry(cf: CurvatureField) -> float:
    """Largest coefficient of Ric_{jk} − Ric_{kj}."""
    n = cf.n
    return max(
        (cf.ricci[j, k].sub(cf.ricci[k, j]).max_abs_coeff() for j in range(n) for k in range(n)),
        default=0.0,
    )


def first_bianchi_residual(cf: CurvatureField, points: np.ndarray) -> float:
    """max over points of |R^i_{ljk} + R^i_{jkl} + R^i_{klj}|."""
    n = cf.n
    R = cf.riemann
    worst = 0.0
    for i, l, j, k in np.ndindex(n, n, n, n):
        cyclic = poly_sum([R[i, l, j, k], R[i, j, k, l], R[i, k, l, j]], n)
        if not cyclic.is_zero():
            worst = max(worst, float(np.max(np.abs(cyclic.eval_many(points)))))
    return worst
