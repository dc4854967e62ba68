import numpy as np
import pytest

from projcone.algebra.polyfields import FieldArrayEvaluator, PolyField, grid_max_abs, poly_sum, zero_array
from projcone.errors import InputError, ParseError

X1 = PolyField.variable(2, 0)
X2 = PolyField.variable(2, 1)


def test_eval_examples():
    assert PolyField.constant(2, 1.0).eval((7, -2)) == 1.0
    assert PolyField.monomial((2, 1)).eval((2, 3)) == 12.0
    assert (3 * X1 + X2 * X2).eval((1, 2)) == 7.0


def test_eval_dimension_mismatch():
    with pytest.raises(InputError):
        X1.eval((1.0, 2.0, 3.0))
    with pytest.raises(InputError):
        X1.add(PolyField.variable(3, 0))


def test_partial_examples():
    assert PolyField.monomial((2, 1)).partial(0) == PolyField.monomial((1, 1), 2.0)
    assert PolyField.constant(2, 5.0).partial(1).is_zero()
    assert (3 * X1 + X2 * X2).partial(0) == PolyField.constant(2, 3.0)


@pytest.mark.parametrize("axis", [-1, 2, 5])
def test_partial_axis_out_of_range(axis):
    with pytest.raises(InputError):
        X1.partial(axis)


def test_ring_examples():
    assert X1.add(-X1).is_zero()
    assert X1.add(-X1).terms == {}
    assert X1.mul(X2) == PolyField.monomial((1, 1))
    assert (2 * X1).scale(0.5) == X1


def test_zero_coefficients_are_pruned():
    p = PolyField(2, {(1, 0): 0.0, (0, 1): 2.0})
    assert dict(p.terms) == {(0, 1): 2.0}
    assert PolyField(2).degree() == -1
    assert PolyField.monomial((2, 3)).degree() == 5


def test_terms_are_in_lexicographic_order():
    p = PolyField(2, {(2, 0): 1.0, (0, 1): 2.0, (1, 1): 3.0, (0, 0): 4.0})
    assert list(p.terms) == [(0, 0), (0, 1), (1, 1), (2, 0)]


def test_str_rendering():
    assert str(PolyField(2)) == "0"
    assert str(PolyField.monomial((2, 0), 2.0)) == "2*x1^2"
    assert str(X1 - 3) == "-3 + x1"


def test_random_add_mul_match_pointwise(rng, make_poly):
    for _ in range(40):
        n = int(rng.integers(2, 4))
        p = make_poly(rng, n, degree=4, n_terms=5)
        q = make_poly(rng, n, degree=4, n_terms=5)
        x = rng.uniform(-1, 1, size=n)
        s = p.eval(x) + q.eval(x)
        m = p.eval(x) * q.eval(x)
        assert p.add(q).eval(x) == pytest.approx(s, rel=1e-12, abs=1e-12)
        assert p.mul(q).eval(x) == pytest.approx(m, rel=1e-12, abs=1e-12)


def test_leibniz_rule_exact(rng, make_poly):
    for _ in range(30):
        n = int(rng.integers(2, 4))
        p = make_poly(rng, n, degree=3, n_terms=4, integer=True)
        q = make_poly(rng, n, degree=3, n_terms=4, integer=True)
        for axis in range(n):
            lhs = p.mul(q).partial(axis)
            rhs = p.partial(axis).mul(q).add(p.mul(q.partial(axis)))
            assert lhs == rhs


def test_mixed_partials_commute(rng, make_poly):
    for _ in range(30):
        p = make_poly(rng, 3, degree=4, n_terms=6)
        for i in range(3):
            for j in range(3):
                assert p.partial(i).partial(j) == p.partial(j).partial(i)


def test_eval_is_bit_reproducible(rng, make_poly):
    p = make_poly(rng, 3, degree=4, n_terms=8)
    x = rng.uniform(-1, 1, size=3)
    assert p.eval(x) == p.eval(x.copy())
    rebuilt = PolyField(3, dict(reversed(list(p.terms.items()))))
    assert rebuilt.eval(x) == p.eval(x)


def test_eval_many_matches_eval(rng, make_poly):
    p = make_poly(rng, 2, degree=3, n_terms=5)
    points = rng.uniform(-1, 1, size=(7, 2))
    np.testing.assert_allclose(p.eval_many(points), [p.eval(x) for x in points], rtol=1e-13, atol=1e-14)


def test_allclose_tolerance():
    p = PolyField(2, {(1, 0): 1.0})
    q = PolyField(2, {(1, 0): 1.0 + 1e-12})
    assert p.allclose(q)
    assert not p.allclose(PolyField(2, {(1, 0): 1.001}))


def test_operators_accept_scalars():
    assert (X1 + 1).eval((2, 0)) == 3.0
    assert (1 - X1).eval((2, 0)) == -1.0
    assert (2.5 * X2).eval((0, 2)) == 5.0


def test_json_terms_roundtrip():
    p = PolyField(2, {(2, 0): 1.5, (0, 1): -2.0})
    assert PolyField.from_json(2, p.to_json()) == p
    assert PolyField.from_json(2, None).is_zero()


def test_from_json_sums_repeated_exponents():
    p = PolyField.from_json(2, [{"coeff": 1, "exp": [1, 0]}, {"coeff": 2, "exp": [1, 0]}])
    assert p == PolyField(2, {(1, 0): 3.0})


@pytest.mark.parametrize("terms, pointer", [
    ("x1", "/p"),
    ([{"coeff": 1}], "/p/0"),
    ([{"coeff": "a", "exp": [0, 0]}], "/p/0/coeff"),
    ([{"coeff": 1, "exp": [0]}], "/p/0/exp"),
    ([{"coeff": 1, "exp": [0, -1]}], "/p/0/exp"),
    ([{"coeff": float("nan"), "exp": [0, 0]}], "/p/0/coeff"),
    ([{"coeff": float("inf"), "exp": [1, 0]}], "/p/0/coeff"),
    ([{"coeff": 10 ** 400, "exp": [1, 0]}], "/p/0/coeff"),
    ([{"coeff": True, "exp": [1, 0]}], "/p/0/coeff"),
])
def test_from_json_errors_carry_pointer(terms, pointer):
    with pytest.raises(ParseError) as excinfo:
        PolyField.from_json(2, terms, "/p")
    assert excinfo.value.pointer == pointer


def test_field_array_evaluator_matches_components(rng, make_poly):
    arr = zero_array((2, 2), 2)
    for idx in np.ndindex(2, 2):
        arr[idx] = make_poly(rng, 2, degree=2)
    ev = FieldArrayEvaluator(arr, 2)
    x = np.array([0.3, -0.7])
    expected = np.array([[arr[i, j].eval(x) for j in range(2)] for i in range(2)])
    np.testing.assert_allclose(ev(x), expected, rtol=1e-13, atol=1e-14)
    points = rng.uniform(-1, 1, size=(4, 2))
    assert ev.eval_many(points).shape == (4, 2, 2)


def test_grid_max_abs_witness_is_first_maximum():
    points = np.array([[0.0, 0.0], [1.0, 0.0], [-1.0, 0.0]])
    value, point, label = grid_max_abs([("a", X1), ("b", -X1), ("z", PolyField(2))], points)
    assert value == 1.0
    assert label == "a"
    np.testing.assert_array_equal(point, [1.0, 0.0])
    assert grid_max_abs([("z", PolyField(2))], points) == (0.0, None, None)


def test_poly_sum_empty_is_zero():
    assert poly_sum([], 3).is_zero()
