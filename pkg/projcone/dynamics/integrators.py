"""
Fixed-step classic Runge-Kutta integration on numpy state arrays.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..errors import InputError

RHS = Callable[[float, np.ndarray], np.ndarray]


def rk4_step(rhs: RHS, t: float, y: np.ndarray, h: float) -> np.ndarray:
    """One classic fourth-order step; y may be a vector or a matrix."""
    k1 = rhs(t, y)
    k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = rhs(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


@dataclass
class IntegrationResult:
    params: np.ndarray
    states: np.ndarray
    truncated: bool


def integrate_fixed(rhs: RHS, y0: np.ndarray, h: float, steps: int,
                    accept: Optional[Callable[[np.ndarray], bool]] = None,
                    t0: float = 0.0) -> IntegrationResult:
    """
    Integrate ``steps`` RK4 steps of size h from y0.

    Args:
        rhs: Right-hand side f(t, y)
        y0: Initial state
        h: Step size (> 0)
        steps: Maximum number of steps (>= 0)
        accept: Predicate on a new state; the first rejected state ends the run
            and is discarded
        t0: Initial parameter

    Returns:
        IntegrationResult with params of shape (m,) and states of shape (m, *y0.shape)
    """
    if not h > 0:
        raise InputError(f"step size must be positive, got {h}")
    if steps < 0:
        raise InputError(f"number of steps must be >= 0, got {steps}")
    y = np.array(y0, dtype=float)
    params = [t0]
    states = [y.copy()]
    truncated = False
    for m in range(steps):
        t = t0 + m * h
        y_next = rk4_step(rhs, t, y, h)
        if not np.all(np.isfinite(y_next)) or (accept is not None and not accept(y_next)):
            truncated = True
            break
        y = y_next
        params.append(t0 + (m + 1) * h)
        states.append(y.copy())
    return IntegrationResult(np.array(params), np.array(states), truncated)


def integrate_segment(rhs: RHS, y0: np.ndarray, length: float, max_step: float) -> np.ndarray:
    """Integrate over [0, length] with the fewest equal steps no longer than max_step."""
    if not max_step > 0:
        raise InputError(f"step size must be positive, got {max_step}")
    y = np.array(y0, dtype=float)
    if length <= 0.0:
        return y
    steps = max(1, int(np.ceil(length / max_step - 1e-12)))
    h = length / steps
    for m in range(steps):
        y = rk4_step(rhs, m * h, y, h)
    return y
