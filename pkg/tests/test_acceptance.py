"""
End-to-end property suites over randomized connections.

Each suite draws from RunConfig.rng (PROJCONE_SEED, default 0) and is marked
slow; run them with ``pytest -m slow``.
"""

import json

import numpy as np
import pytest

from projcone.algebra.polyfields import grid_max_abs
from projcone.analysis.invariants import FLAT, NON_FLAT, classify, projective_invariants
from projcone.cli.main import main
from projcone.config import RunConfig
from projcone.data.connection_loader import nonflat_demo, parse_connection, serialize_connection
from projcone.dynamics.devmap import develop, develop_trace, line_certificate, loop_holonomy
from projcone.dynamics.geoflow import (
    collinearity_residual,
    compare_unparametrized,
    geodesic_classical,
    geodesic_rho,
)
from projcone.geometry.chartconn import (
    ChartConnection,
    OneFormField,
    extract_alpha,
    projective_shift,
    thomas_symbols,
)
from projcone.geometry.thomascone import build_cone, cone_curvature
from projcone.utils.common import sample_grid
from projcone.validation.theorem_validator import verify_theorem

pytestmark = pytest.mark.slow



def suite_rng(stream):
    return RunConfig.from_env().rng(stream)


def random_instances(make_connection, count, stream, **kwargs):
    rng = suite_rng(stream)
    return rng, [make_connection(rng, int(rng.integers(2, 4)), **kwargs) for _ in range(count)]


def arrays_allclose(a, b, tol=1e-9):
    return all(p.allclose(q, tol) for p, q in zip(a.reshape(-1), b.reshape(-1)))


def test_cone_conditions_and_curvature_split(make_connection):
    _, instances = random_instances(make_connection, 50, stream=1)
    for c in instances:
        k = build_cone(c)
        inv = projective_invariants(c)
        grid = sample_grid(c.domain, 5)
        report = verify_theorem(k, inv, grid, 1e-9)
        for name in ("torsion", "ii1", "ii2", "ii3", "decomposition"):
            assert report["checks"][name]["valid"], report["checks"][name]
        r = cone_curvature(k).rhat
        unit_slot = [("slot", r[idx]) for idx in np.ndindex(*r.shape) if 0 in idx[1:]]
        assert grid_max_abs(unit_slot, grid)[0] <= 1e-12


def test_projective_invariance_under_random_shifts(make_connection, make_one_form):
    rng, instances = random_instances(make_connection, 10, stream=2)
    for c in instances:
        n = c.n
        pi = thomas_symbols(c)
        for trial in range(20):
            alpha = make_one_form(rng, n)
            shifted = projective_shift(c, alpha)
            assert thomas_symbols(shifted).allclose(pi)
            recovered = extract_alpha(c, shifted)
            assert isinstance(recovered, OneFormField)
            assert recovered.allclose(alpha)
            if trial < 4:
                k1, k2 = build_cone(c), build_cone(shifted)
                assert arrays_allclose(k1.gammahat, k2.gammahat)
                inv1, inv2 = projective_invariants(c), projective_invariants(shifted)
                assert arrays_allclose(inv1.weyl, inv2.weyl)
                assert arrays_allclose(inv1.cotton, inv2.cotton)


def test_flat_family_develops_geodesics_to_lines(make_one_form):
    rng = suite_rng(3)
    for _ in range(10):
        n = int(rng.integers(2, 4))
        c = projective_shift(ChartConnection.zero(n), make_one_form(rng, n, scale=0.2))
        report = classify(c)
        assert report.verdict == FLAT
        k = build_cone(c)
        grid = sample_grid(c.domain, 3)
        assert grid_max_abs(cone_curvature(k).labeled(), grid)[0] <= 1e-9
        base = np.zeros(n)
        assert len(develop(k, base, grid[:4], h=0.1)) == 4
        for _ in range(5):
            x0 = rng.uniform(-0.3, 0.3, size=n)
            v0 = rng.normal(size=n)
            v0 *= 0.25 / np.linalg.norm(v0)
            trace = geodesic_classical(c, x0, v0, 0.05, 20)
            assert len(trace) >= 20
            certificate = line_certificate(develop_trace(k, base, trace, h=0.1), 1e-6)
            assert certificate.passed, certificate.to_dict()


def test_nonflat_witness_against_finite_differences(capsys):
    c = nonflat_demo()
    h = 1e-3
    point = np.array([0.3, -0.2])
    eye = np.eye(2)

    def gamma(x):
        return np.array([[[c.gamma[i, j, k].eval(x) for k in range(2)] for j in range(2)] for i in range(2)])

    def ricci(x):
        dg = np.array([(gamma(x + h * e) - gamma(x - h * e)) / (2 * h) for e in eye])
        g = gamma(x)
        riem = (np.einsum("jikl->iljk", dg) - np.einsum("kijl->iljk", dg)
                + np.einsum("ijm,mkl->iljk", g, g) - np.einsum("ikm,mjl->iljk", g, g))
        return np.einsum("ijik->jk", riem)

    def nabla_ricci(x):
        dric = np.array([(ricci(x + h * e) - ricci(x - h * e)) / (2 * h) for e in eye])
        g, ric = gamma(x), ricci(x)
        return dric - np.einsum("mij,mk->ijk", g, ric) - np.einsum("mik,jm->ijk", g, ric)

    nr = nabla_ricci(point)
    oracle = nr[0, 1, 1] - nr[1, 0, 1]
    assert oracle == pytest.approx(2.0, abs=1e-4)

    inv = projective_invariants(c)
    values = inv.cotton[0, 1, 1].eval_many(sample_grid(c.domain, 5))
    np.testing.assert_allclose(values, 2.0, atol=1e-9)
    report = classify(c)
    assert report.verdict == NON_FLAT
    assert report.witness_component == "C_{12;2}"
    assert main(["develop", "nonflat_demo"]) == 1
    capsys.readouterr()


@pytest.mark.parametrize("name", ["flat", "nonflat_demo"])
def test_holonomy_oracle_matches_cone_curvature(name):
    c = ChartConnection.zero(2) if name == "flat" else nonflat_demo()
    k = build_cone(c)
    rhat = cone_curvature(k).rhat
    rng = suite_rng(4)
    for _ in range(10):
        center = rng.uniform(-0.8, 0.8, size=2)
        analytic = np.array([[rhat[A, B, 1, 2].eval(center) for B in range(3)] for A in range(3)])
        scale = max(np.max(np.abs(analytic)), 1e-4)
        fine = loop_holonomy(k, center, (1e-3, 1e-3), (0, 1))
        np.testing.assert_allclose(fine, analytic, atol=0.01 * scale)
        if name == "nonflat_demo":
            errors = [np.max(np.abs(loop_holonomy(k, center, (s, s), (0, 1)) - analytic))
                      for s in (0.02, 0.01)]
            assert 3.5 <= errors[0] / errors[1] <= 4.5


def test_geodesic_contracts(make_connection, make_one_form):
    rng, instances = random_instances(make_connection, 10, stream=5, degree=2, scale=0.5)
    for c in instances:
        n = c.n
        shifted = projective_shift(c, make_one_form(rng, n, scale=0.3))
        x0 = rng.uniform(-0.2, 0.2, size=n)
        v0 = rng.normal(size=n)
        v0 *= 0.3 / np.linalg.norm(v0)
        measured = geodesic_classical(shifted, x0, v0, 0.01, 100)
        wide = ChartConnection(n, ((-2.0, 2.0),) * n, c.gamma)
        reference = geodesic_classical(wide, x0, v0, 0.002, 2500)
        assert compare_unparametrized(measured, reference, 1e-5).match

        k = build_cone(c)
        s0 = np.concatenate([[rng.uniform(-0.5, 0.5)], v0])
        rho = geodesic_rho(k, x0, s0, 1e-3, 1000)
        assert collinearity_residual(rho, k) <= 1e-6

    nonflat = nonflat_demo()
    x0, v0 = (0.5, 0.0), (0.0, 1.0)
    reference = geodesic_classical(nonflat, x0, v0, 0.001, 800).endpoint()
    errors = [np.linalg.norm(geodesic_classical(nonflat, x0, v0, h, steps).endpoint() - reference)
              for h, steps in ((0.04, 20), (0.02, 40))]
    assert 8.0 <= errors[0] / errors[1] <= 32.0


def test_reports_are_byte_identical_and_documents_round_trip(capsys, tmp_path, make_connection):
    for command in ("check", "flatness", "rho-geodesic", "develop"):
        outputs = []
        for run in ("a", "b"):
            out_dir = tmp_path / run / command
            main([command, "alpha_shift", "--out", str(out_dir)])
            outputs.append((out_dir / f"{command}_report.json").read_bytes())
        assert outputs[0] == outputs[1]
    capsys.readouterr()

    _, instances = random_instances(make_connection, 10, stream=6)
    for c in instances:
        doc = serialize_connection(c)
        again = serialize_connection(parse_connection(json.loads(json.dumps(doc))))
        assert again == doc
