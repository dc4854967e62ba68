"""
The Thomas cone ρ-connection on E = chart × R^{n+1}.

Frame: index 0 is the unit section 𝟙 (the vertical direction, ρ(𝟙) = 0) and
index i+1 is the horizontal lift c_U(∂_i). All frame brackets vanish, so
torsion-freeness is symmetry of Γ̂^A_{BC} in (B, C) with ∇̂_{e_B} e_C = Γ̂^A_{BC} e_A.

In the gauge of the Thomas symbols Π:
    Γ̂^{i}_{jk} = Π^i_{jk}            Γ̂^0_{jk} = ((n+1)/(n−1)) Ric(Π)_{jk}
    Γ̂^{i}_{0k} = −δ^i_k/(n+1)         Γ̂^0_{0k} = 0
    Γ̂^0_{00}  = −1/(n+1)              Γ̂^{i}_{00} = 0
(horizontal indices written in chart terms; storage offsets them by one).
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from ..algebra.polyfields import PolyField, grid_max_abs, poly_sum, zero_array
from ..errors import InputError
from ..utils.common import setup_logging
from .chartconn import ChartConnection, riemann, thomas_symbols

logger = setup_logging(__name__)


def cone_gamma_label(A: int, B: int, C: int) -> str:
    return f"Γ̂^{A}_{{{B}{C}}}"


def cone_curvature_label(A: int, D: int, B: int, C: int) -> str:
    return f"R̂^{A}_{{{D}{B}{C}}}"


@dataclass(frozen=True, eq=False)
class ConeConnection:
    """gammahat[A, B, C] = Γ̂^A_{BC}, A, B, C ∈ {0..n}; source_pi is the representative Π."""
    n: int
    gammahat: np.ndarray
    source_pi: ChartConnection

    def __post_init__(self):
        size = self.n + 1
        if self.gammahat.shape != (size,) * 3:
            raise InputError(f"gammahat must have shape {(size,) * 3}, got {self.gammahat.shape}")
        frozen = self.gammahat.copy()
        frozen.setflags(write=False)
        object.__setattr__(self, "gammahat", frozen)

    @property
    def domain(self):
        return self.source_pi.domain

    @property
    def unit_coefficient(self) -> float:
        """The −1/(n+1) of ∇̂_𝟙 s = −s/(n+1)."""
        return -1.0 / (self.n + 1)

    def with_gammahat(self, gammahat: np.ndarray) -> "ConeConnection":
        return ConeConnection(self.n, gammahat, self.source_pi)

    def labeled(self):
        return [
            (cone_gamma_label(*idx), self.gammahat[idx])
            for idx in np.ndindex(*self.gammahat.shape)
        ]


@dataclass(frozen=True, eq=False)
class ConeCurvature:
    """rhat[A, D, B, C] = R̂^A_{DBC}, same convention as the chart curvature, ∂_0 ≡ 0."""
    n: int
    rhat: np.ndarray

    def labeled(self):
        return [
            (cone_curvature_label(*idx), self.rhat[idx])
            for idx in np.ndindex(*self.rhat.shape)
        ]


def build_cone(c: ChartConnection) -> ConeConnection:
    """Thomas cone ρ-connection of the projective class of c, in the Π gauge."""
    n = c.n
    if n < 2:
        raise InputError(f"cone construction needs n >= 2, got {n}")
    pi = thomas_symbols(c)
    cf = riemann(pi)
    kappa = (n + 1.0) / (n - 1.0)
    unit = -1.0 / (n + 1)
    size = n + 1
    gh = zero_array((size,) * 3, n)

    for i in range(n):
        for j in range(n):
            for k in range(n):
                gh[i + 1, j + 1, k + 1] = pi.gamma[i, j, k]
    for j in range(n):
        for k in range(j, n):
            # symmetric part; Ric(Π) is symmetric up to rounding
            vertical = cf.ricci[j, k].add(cf.ricci[k, j]).scale(0.5 * kappa)
            gh[0, j + 1, k + 1] = vertical
            gh[0, k + 1, j + 1] = vertical

    unit_poly = PolyField.constant(n, unit)
    for k in range(n):
        gh[k + 1, 0, k + 1] = unit_poly
        gh[k + 1, k + 1, 0] = unit_poly
    gh[0, 0, 0] = unit_poly

    logger.info(f"Built cone connection n={n}")
    return ConeConnection(n, gh, pi)


def descend(k: ConeConnection) -> ChartConnection:
    """∇^U_X Y = ρ(∇̂_{c_U X} c_U Y): the chart connection the cone induces."""
    n = k.n
    gamma = np.empty((n, n, n), dtype=object)
    for i, j, l in np.ndindex(n, n, n):
        gamma[i, j, l] = k.gammahat[i + 1, j + 1, l + 1]
    return k.source_pi.with_gamma(gamma)


def _frame_partial(p: PolyField, B: int) -> PolyField:
    """∂_B with ∂_0 ≡ 0 (the unit direction projects to the zero vector)."""
    if B == 0:
        return PolyField(p.num_vars)
    return p.partial(B - 1)


def cone_curvature(k: ConeConnection) -> ConeCurvature:
    """R̂^A_{DBC} = ∂_B Γ̂^A_{CD} − ∂_C Γ̂^A_{BD} + Γ̂^A_{BE} Γ̂^E_{CD} − Γ̂^A_{CE} Γ̂^E_{BD}."""
    n = k.n
    size = n + 1
    g = k.gammahat
    R = zero_array((size,) * 4, n)
    for A in range(size):
        for D in range(size):
            for B in range(size):
                for C in range(B + 1, size):
                    parts = [_frame_partial(g[A, C, D], B), -_frame_partial(g[A, B, D], C)]
                    for E in range(size):
                        parts.append(g[A, B, E].mul(g[E, C, D]))
                        parts.append(-g[A, C, E].mul(g[E, B, D]))
                    value = poly_sum(parts, n)
                    R[A, D, B, C] = value
                    R[A, D, C, B] = -value
    R.setflags(write=False)
    return ConeCurvature(n, R)


def cone_ricci(r: ConeCurvature) -> np.ndarray:
    """Riĉ_{BC} = Σ_A R̂^A_{BAC}."""
    size = r.n + 1
    ric = np.empty((size, size), dtype=object)
    for B in range(size):
        for C in range(size):
            ric[B, C] = poly_sum((r.rhat[A, B, A, C] for A in range(size)), r.n)
    return ric


def cone_torsion_residual(k: ConeConnection) -> float:
    """Largest coefficient of Γ̂^A_{BC} − Γ̂^A_{CB}."""
    size = k.n + 1
    return max(
        (k.gammahat[A, B, C].sub(k.gammahat[A, C, B]).max_abs_coeff()
         for A in range(size) for B in range(size) for C in range(B + 1, size)),
        default=0.0,
    )


def cone_max_curvature(k: ConeConnection, points: np.ndarray,
                       curvature: Optional[ConeCurvature] = None
                       ) -> Tuple[float, Optional[np.ndarray], Optional[str]]:
    """max |R̂| over points with its witness point and component."""
    r = curvature if curvature is not None else cone_curvature(k)
    return grid_max_abs(r.labeled(), points)


def unit_rule_residuals(k: ConeConnection) -> List[Tuple[str, PolyField]]:
    """Residual polynomials of the unit-section rules ∇̂_𝟙 s = −s/(n+1), ∇̂_s 𝟙 = −s/(n+1)."""
    n = k.n
    unit = k.unit_coefficient
    g = k.gammahat
    out = []
    for A in range(n + 1):
        for C in range(n + 1):
            target = unit if A == C else 0.0
            out.append((cone_gamma_label(A, 0, C), g[A, 0, C].sub(PolyField.constant(n, target))))
    return out


def trace_identity_residuals(k: ConeConnection) -> List[Tuple[str, PolyField]]:
    """Σ_A Γ̂^A_{Ak} (should be 0) and Σ_A Γ̂^A_{A0} + 1 (should be 0)."""
    n = k.n
    size = n + 1
    g = k.gammahat
    out = []
    for C in range(1, size):
        out.append((f"sum_A Γ̂^A_{{A{C}}}", poly_sum((g[A, A, C] for A in range(size)), n)))
    vertical = poly_sum([g[A, A, 0] for A in range(size)] + [PolyField.constant(n, 1.0)], n)
    out.append(("sum_A Γ̂^A_{A0} + 1", vertical))
    return out
