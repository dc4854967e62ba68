import numpy as np
import pytest

from projcone.data.connection_loader import load_builtin
from projcone.dynamics.devmap import (
    ProjPoint,
    TransportFrame,
    develop,
    develop_trace,
    flatness_gate,
    horizontal_transport,
    line_certificate,
    loop_holonomy,
)
from projcone.dynamics.geoflow import geodesic_classical
from projcone.errors import InputError, NotFlatError
from projcone.geometry.thomascone import build_cone, cone_curvature


def flat_frame(x):
    """Closed-form transport of the flat cone from the origin to x."""
    n = len(x)
    T = np.eye(n + 1)
    T[1:, 0] = np.asarray(x) / (n + 1)
    return T


def test_flat_transport_closed_form(flat3):
    k = build_cone(flat3)
    frame = horizontal_transport(k, [(0.0, 0.0, 0.0), (0.3, -0.6, 0.9)])
    np.testing.assert_allclose(frame.matrix, flat_frame([0.3, -0.6, 0.9]), atol=1e-14)
    assert frame.path_length == pytest.approx(np.linalg.norm([0.3, -0.6, 0.9]))


def test_degenerate_path_is_identity(nonflat):
    k = build_cone(nonflat)
    frame = horizontal_transport(k, [(0.2, 0.1), (0.2, 0.1)])
    np.testing.assert_array_equal(frame.matrix, np.eye(3))
    assert frame.path_length == 0.0
    assert frame.condition_number == pytest.approx(1.0)


def test_reverse_path_gives_inverse(nonflat):
    k = build_cone(nonflat)
    path = [(0.5, -0.5), (0.8, 0.2), (-0.3, 0.6)]
    forward = horizontal_transport(k, path, h=2e-3)
    backward = horizontal_transport(k, path[::-1], h=2e-3)
    np.testing.assert_allclose(backward.matrix @ forward.matrix, np.eye(3), atol=1e-9)
    np.testing.assert_allclose(forward.inverse(), backward.matrix, atol=1e-9)


def test_vertical_lift_only_rescales(flat2):
    k = build_cone(flat2)
    path = [(0.0, 0.0), (0.6, 0.8)]
    plain = horizontal_transport(k, path)
    lifted = horizontal_transport(k, path, vertical=0.7)
    np.testing.assert_allclose(lifted.matrix, np.exp(0.7 * 1.0 / 3.0) * plain.matrix, rtol=1e-10)
    varying = horizontal_transport(k, path, vertical=lambda x: x[0])
    e0 = np.eye(3)[0]
    a = ProjPoint.from_homogeneous(np.linalg.solve(plain.matrix, e0))
    b = ProjPoint.from_homogeneous(np.linalg.solve(varying.matrix, e0))
    assert a.distance(b) < 1e-10


def test_transport_rejects_points_outside_domain(nonflat):
    k = build_cone(nonflat)
    with pytest.raises(InputError):
        horizontal_transport(k, [(0.0, 0.0), (1.5, 0.0)])
    with pytest.raises(InputError):
        horizontal_transport(k, [(0.0, 0.0, 0.0), (0.5, 0.0, 0.0)])
    with pytest.raises(InputError):
        horizontal_transport(k, [(0.0, 0.0), (0.5, 0.0)], h=0.0)


def test_loop_holonomy_of_flat_cone_vanishes(flat2):
    k = build_cone(flat2)
    hol = loop_holonomy(k, (0.1, 0.2), (0.1, 0.1), (0, 1))
    np.testing.assert_allclose(hol, 0.0, atol=1e-9)


def test_loop_holonomy_recovers_curvature(nonflat):
    k = build_cone(nonflat)
    center = np.array([0.5, 0.5])
    rhat = cone_curvature(k).rhat
    expected = np.array([[rhat[A, B, 1, 2].eval(center) for B in range(3)] for A in range(3)])
    assert expected[0, 2] == pytest.approx(6.0)
    hol = loop_holonomy(k, center, (0.02, 0.02), (0, 1))
    np.testing.assert_allclose(hol, expected, atol=0.05)
    assert hol[0, 2] == pytest.approx(6.0, abs=0.05)


def test_loop_holonomy_error_shrinks_quadratically(nonflat):
    k = build_cone(nonflat)
    errors = [abs(loop_holonomy(k, (0.5, 0.5), (h, h), (0, 1))[0, 2] - 6.0) for h in (0.2, 0.1)]
    assert errors[1] <= errors[0] / 2.5 + 1e-9


@pytest.mark.parametrize("center, radii, axes", [
    ((0.0, 0.0), (0.1, 0.1), (0, 0)),
    ((0.0, 0.0), (0.1, 0.1), (0, 2)),
    ((0.0, 0.0), (0.0, 0.1), (0, 1)),
    ((0.99, 0.0), (0.1, 0.1), (0, 1)),
    ((0.0, 0.0, 0.0), (0.1, 0.1), (0, 1)),
])
def test_loop_holonomy_argument_errors(nonflat, center, radii, axes):
    with pytest.raises(InputError):
        loop_holonomy(build_cone(nonflat), center, radii, axes)


def test_develop_flat_closed_form(flat2):
    k = build_cone(flat2)
    targets = [(0.3, -0.6), (-0.9, 0.9), (0.0, 0.0)]
    developed = develop(k, (0.0, 0.0), targets, h=0.1)
    for x, point in zip(targets, developed):
        np.testing.assert_allclose(point.homog, [1.0, -x[0] / 3.0, -x[1] / 3.0], atol=1e-14)
    assert developed[2].to_list() == [1.0, 0.0, 0.0]


def test_develop_alpha_shift_matches_flat(flat2, alpha_shift):
    targets = [(0.5, 0.5), (-0.2, 0.7)]
    a = develop(build_cone(flat2), (0.1, 0.1), targets, h=0.1)
    b = develop(build_cone(alpha_shift), (0.1, 0.1), targets, h=0.1)
    for p, q in zip(a, b):
        assert p.distance(q) < 1e-12


def test_develop_is_path_independent_on_flat_cone(alpha_shift):
    k = build_cone(alpha_shift)
    e0 = np.eye(3)[0]
    direct = horizontal_transport(k, [(0.0, 0.0), (0.6, 0.4)], h=0.1)
    detour = horizontal_transport(k, [(0.0, 0.0), (-0.5, 0.9), (0.6, 0.4)], h=0.1)
    p = ProjPoint.from_homogeneous(np.linalg.solve(direct.matrix, e0))
    q = ProjPoint.from_homogeneous(np.linalg.solve(detour.matrix, e0))
    assert p.distance(q) < 1e-12


@pytest.mark.parametrize("spec", ["alpha_shift", "alpha_shift:alpha=x2dx1 - 0.5*x1^2dx2"])
def test_shift_family_transport_is_path_independent(spec):
    k = build_cone(load_builtin(spec))
    straight = horizontal_transport(k, [(0.0, 0.0), (0.6, 0.4)], h=0.01)
    l_shaped = horizontal_transport(k, [(0.0, 0.0), (0.6, 0.0), (0.6, 0.4)], h=0.01)
    np.testing.assert_allclose(l_shaped.matrix, straight.matrix, rtol=0, atol=1e-7)
    np.testing.assert_allclose(straight.matrix, flat_frame((0.6, 0.4)), rtol=0, atol=1e-7)


def test_develop_refuses_curved_cone(nonflat):
    k = build_cone(nonflat)
    with pytest.raises(NotFlatError) as excinfo:
        develop(k, (0.0, 0.0), [(0.5, 0.5)])
    assert excinfo.value.magnitude == pytest.approx(6.0)
    assert excinfo.value.component.startswith("R̂^0_")
    with pytest.raises(NotFlatError):
        flatness_gate(k, 1e-8, 3)
    assert flatness_gate(k, 10.0, 3) == pytest.approx(6.0)


def test_developed_flat_geodesic_is_a_line(alpha_shift):
    k = build_cone(alpha_shift)
    trace = geodesic_classical(alpha_shift, (-0.3, 0.1), (0.2, 0.3), 0.05, 20)
    developed = develop_trace(k, (0.0, 0.0), trace, h=0.1)
    assert len(developed) == len(trace)
    certificate = line_certificate(developed)
    assert certificate.passed
    assert certificate.residual < 1e-6


def test_proj_point_normalization():
    p = ProjPoint.from_homogeneous([2.0, -4.0, 1.0])
    assert p.to_list() == [-0.5, 1.0, -0.25]
    assert ProjPoint.from_homogeneous([-1.0, 2.0, -0.5]).to_list() == p.to_list()
    assert p.distance(ProjPoint.from_homogeneous([-1.0, 2.0, -0.5])) < 1e-14
    assert ProjPoint.from_homogeneous([1.0, 0.0]).distance(ProjPoint.from_homogeneous([0.0, 1.0])) == 1.0
    with pytest.raises(InputError):
        ProjPoint.from_homogeneous([0.0, 0.0, 0.0])


def test_line_certificate_examples():
    on_line = [ProjPoint.from_homogeneous(v) for v in ([1, 0, 0], [1, 1, 0], [1, 2, 0])]
    cert = line_certificate(on_line)
    assert cert.passed
    assert cert.residual < 1e-15
    spread = [ProjPoint.from_homogeneous(v) for v in np.eye(3)]
    cert = line_certificate(spread)
    assert not cert.passed
    assert cert.residual == pytest.approx(1.0)
    assert cert.to_dict()["tol"] == 1e-6
    with pytest.raises(InputError):
        line_certificate(on_line[:2])


def test_transport_frame_apply():
    frame = TransportFrame(np.array([[1.0, 0.0], [2.0, 1.0]]))
    np.testing.assert_allclose(frame.apply([1.0, 1.0]), [1.0, 3.0])
