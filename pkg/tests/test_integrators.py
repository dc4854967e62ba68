import numpy as np
import pytest

from projcone.dynamics.integrators import integrate_fixed, integrate_segment, rk4_step
from projcone.errors import InputError


def test_rk4_step_is_exact_for_cubic_in_t():
    y = rk4_step(lambda t, _y: np.array([4.0 * t ** 3]), 0.0, np.array([0.0]), 1.0)
    assert y[0] == pytest.approx(1.0, abs=1e-15)


def test_rk4_step_accepts_matrices():
    m = np.array([[0.0, 1.0], [0.0, 0.0]])
    y = rk4_step(lambda _t, y: -m @ y, 0.0, np.eye(2), 0.5)
    np.testing.assert_allclose(y, np.eye(2) - 0.5 * m, atol=1e-15)


def test_fourth_order_convergence():
    rhs = lambda _t, y: -y  # noqa: E731
    errors = []
    for steps in (10, 20):
        result = integrate_fixed(rhs, np.array([1.0]), 1.0 / steps, steps)
        errors.append(abs(result.states[-1, 0] - np.exp(-1.0)))
    assert 12.0 < errors[0] / errors[1] < 20.0


def test_integrate_fixed_shapes_and_params():
    result = integrate_fixed(lambda _t, y: np.zeros_like(y), np.zeros(3), 0.25, 4, t0=1.0)
    assert result.states.shape == (5, 3)
    np.testing.assert_allclose(result.params, [1.0, 1.25, 1.5, 1.75, 2.0])
    assert not result.truncated


def test_rejected_state_ends_run_and_is_discarded():
    result = integrate_fixed(lambda _t, y: np.ones_like(y), np.zeros(1), 0.5, 10,
                             accept=lambda y: y[0] <= 1.2)
    assert result.truncated
    np.testing.assert_allclose(result.states[:, 0], [0.0, 0.5, 1.0])


def test_non_finite_state_truncates():
    with np.errstate(over="ignore", invalid="ignore"):
        result = integrate_fixed(lambda _t, y: y ** 2, np.array([1.0]), 1.0, 50)
    assert result.truncated
    assert np.all(np.isfinite(result.states))


@pytest.mark.parametrize("h, steps", [(0.0, 3), (-0.1, 3), (0.1, -1)])
def test_invalid_step_arguments(h, steps):
    with pytest.raises(InputError):
        integrate_fixed(lambda _t, y: y, np.zeros(1), h, steps)


def test_integrate_segment():
    y = integrate_segment(lambda _t, y: np.ones_like(y), np.zeros(2), 1.0, 0.3)
    np.testing.assert_allclose(y, [1.0, 1.0])
    np.testing.assert_array_equal(integrate_segment(lambda _t, y: y, np.ones(2), 0.0, 0.1), [1.0, 1.0])
    with pytest.raises(InputError):
        integrate_segment(lambda _t, y: y, np.ones(2), 1.0, 0.0)
