"""
Sparse multivariate polynomials with real coefficients.

Every chart-coordinate function in the package (Christoffel symbols, one-forms,
curvature components) is a ``PolyField``. Terms are kept in lexicographic order of
their exponent tuples so evaluation and serialization are bit-reproducible.
"""

from types import MappingProxyType
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..errors import InputError, ParseError
from ..utils.common import is_finite_number

Exponent = Tuple[int, ...]


class PolyField:
    """Immutable polynomial in ``num_vars`` chart coordinates."""

    __slots__ = ("num_vars", "_terms", "_arrays")

    def __init__(self, num_vars: int, terms: Optional[Mapping[Exponent, float]] = None):
        if not isinstance(num_vars, (int, np.integer)) or num_vars < 1:
            raise InputError(f"num_vars must be a positive integer, got {num_vars!r}")
        collected: Dict[Exponent, float] = {}
        for exp, coeff in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != num_vars:
                raise InputError(
                    f"exponent {exp} has length {len(exp)}, expected {num_vars}"
                )
            if any(e < 0 for e in exp):
                raise InputError(f"negative exponent in {exp}")
            coeff = float(coeff)
            if coeff != 0.0:
                collected[exp] = coeff
        self.num_vars = int(num_vars)
        self._terms = MappingProxyType(dict(sorted(collected.items())))
        self._arrays = None

    # ------------------------------------------------------------------ builders

    @classmethod
    def zero(cls, num_vars: int) -> "PolyField":
        return cls(num_vars)

    @classmethod
    def constant(cls, num_vars: int, value: float) -> "PolyField":
        return cls(num_vars, {(0,) * num_vars: value})

    @classmethod
    def variable(cls, num_vars: int, axis: int) -> "PolyField":
        """The coordinate function x_{axis+1} (``axis`` is 0-based)."""
        if not 0 <= axis < num_vars:
            raise InputError(f"axis {axis} out of range for {num_vars} variables")
        exp = [0] * num_vars
        exp[axis] = 1
        return cls(num_vars, {tuple(exp): 1.0})

    @classmethod
    def monomial(cls, exp: Sequence[int], coeff: float = 1.0) -> "PolyField":
        return cls(len(exp), {tuple(exp): coeff})

    # ------------------------------------------------------------------ queries

    @property
    def terms(self) -> Mapping[Exponent, float]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Total degree; the zero polynomial has degree -1."""
        if not self._terms:
            return -1
        return max(sum(exp) for exp in self._terms)

    def max_abs_coeff(self) -> float:
        if not self._terms:
            return 0.0
        return max(abs(c) for c in self._terms.values())

    def _check_compatible(self, other: "PolyField") -> None:
        if not isinstance(other, PolyField):
            raise InputError(f"expected PolyField, got {type(other).__name__}")
        if other.num_vars != self.num_vars:
            raise InputError(
                f"dimension mismatch: {self.num_vars} vs {other.num_vars} variables"
            )

    # ------------------------------------------------------------------ evaluation

    def eval(self, x: Sequence[float]) -> float:
        """Evaluate at one point, summing terms in lexicographic exponent order."""
        if len(x) != self.num_vars:
            raise InputError(f"point has {len(x)} coordinates, expected {self.num_vars}")
        point = [float(v) for v in x]
        total = 0.0
        for exp, coeff in self._terms.items():
            value = coeff
            for xi, e in zip(point, exp):
                if e:
                    value *= xi ** e
            total += value
        return total

    def _exponent_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        if self._arrays is None:
            exps = np.array(list(self._terms.keys()), dtype=float).reshape(-1, self.num_vars)
            coeffs = np.array(list(self._terms.values()), dtype=float)
            self._arrays = (exps, coeffs)
        return self._arrays

    def eval_many(self, points: np.ndarray) -> np.ndarray:
        """Vectorized evaluation on an (m, num_vars) array of points."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if points.shape[1] != self.num_vars:
            raise InputError(
                f"points have {points.shape[1]} coordinates, expected {self.num_vars}"
            )
        if not self._terms:
            return np.zeros(points.shape[0])
        exps, coeffs = self._exponent_arrays()
        monomials = np.prod(points[:, None, :] ** exps[None, :, :], axis=2)
        return monomials @ coeffs

    # ------------------------------------------------------------------ ring operations

    def add(self, other: "PolyField") -> "PolyField":
        self._check_compatible(other)
        terms = dict(self._terms)
        for exp, coeff in other._terms.items():
            terms[exp] = terms.get(exp, 0.0) + coeff
        return PolyField(self.num_vars, terms)

    def sub(self, other: "PolyField") -> "PolyField":
        self._check_compatible(other)
        terms = dict(self._terms)
        for exp, coeff in other._terms.items():
            terms[exp] = terms.get(exp, 0.0) - coeff
        return PolyField(self.num_vars, terms)

    def scale(self, c: float) -> "PolyField":
        c = float(c)
        if c == 0.0:
            return PolyField(self.num_vars)
        return PolyField(self.num_vars, {exp: coeff * c for exp, coeff in self._terms.items()})

    def mul(self, other: "PolyField") -> "PolyField":
        self._check_compatible(other)
        if not self._terms or not other._terms:
            return PolyField(self.num_vars)
        terms: Dict[Exponent, float] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                terms[exp] = terms.get(exp, 0.0) + c1 * c2
        return PolyField(self.num_vars, terms)

    def partial(self, axis: int) -> "PolyField":
        """Exact partial derivative with respect to x_{axis+1} (``axis`` is 0-based)."""
        if not isinstance(axis, (int, np.integer)) or not 0 <= axis < self.num_vars:
            raise InputError(f"axis {axis} out of range for {self.num_vars} variables")
        terms: Dict[Exponent, float] = {}
        for exp, coeff in self._terms.items():
            e = exp[axis]
            if e == 0:
                continue
            lowered = exp[:axis] + (e - 1,) + exp[axis + 1:]
            terms[lowered] = terms.get(lowered, 0.0) + coeff * e
        return PolyField(self.num_vars, terms)

    def allclose(self, other: "PolyField", tol: float = 1e-9) -> bool:
        """Coefficient-wise equality up to ``tol * (1 + largest coefficient)``."""
        self._check_compatible(other)
        scale = 1.0 + max(self.max_abs_coeff(), other.max_abs_coeff())
        return self.sub(other).max_abs_coeff() <= tol * scale

    # ------------------------------------------------------------------ operators

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = PolyField.constant(self.num_vars, other)
        return self.add(other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            other = PolyField.constant(self.num_vars, other)
        return self.sub(other)

    def __rsub__(self, other):
        return PolyField.constant(self.num_vars, other).sub(self)

    def __neg__(self):
        return self.scale(-1.0)

    def __mul__(self, other):
        if isinstance(other, (int, float, np.floating)):
            return self.scale(other)
        return self.mul(other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PolyField):
            return NotImplemented
        return self.num_vars == other.num_vars and dict(self._terms) == dict(other._terms)

    def __hash__(self):
        return hash((self.num_vars, tuple(self._terms.items())))

    def __repr__(self):
        return f"PolyField({self.num_vars}, {dict(self._terms)!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for exp, coeff in self._terms.items():
            factors = [
                f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}"
                for i, e in enumerate(exp) if e
            ]
            if not factors:
                parts.append(f"{coeff:g}")
            elif coeff == 1.0:
                parts.append("*".join(factors))
            else:
                parts.append(f"{coeff:g}*" + "*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")

    # ------------------------------------------------------------------ serialization

    def to_json(self) -> List[Dict[str, Any]]:
        return [{"coeff": coeff, "exp": list(exp)} for exp, coeff in self._terms.items()]

    @classmethod
    def from_json(cls, num_vars: int, terms: Any, pointer: str = "") -> "PolyField":
        """Build from the JSON term array; errors carry a JSON pointer."""
        if terms is None:
            return cls(num_vars)
        if not isinstance(terms, list):
            raise ParseError("polynomial must be an array of terms", pointer)
        collected: Dict[Exponent, float] = {}
        for index, term in enumerate(terms):
            where = f"{pointer}/{index}"
            if not isinstance(term, dict) or "coeff" not in term or "exp" not in term:
                raise ParseError("term must be an object with 'coeff' and 'exp'", where)
            coeff, exp = term["coeff"], term["exp"]
            if not is_finite_number(coeff):
                raise ParseError("coeff must be a finite number", f"{where}/coeff")
            if not isinstance(exp, list) or len(exp) != num_vars:
                raise ParseError(f"exp must be an array of {num_vars} integers", f"{where}/exp")
            if any(isinstance(e, bool) or not isinstance(e, int) or e < 0 for e in exp):
                raise ParseError("exponents must be non-negative integers", f"{where}/exp")
            key = tuple(exp)
            collected[key] = collected.get(key, 0.0) + float(coeff)
        return cls(num_vars, collected)


def poly_sum(polys: Iterable[PolyField], num_vars: int) -> PolyField:
    """Sum of polynomials, skipping zeros; empty input gives the zero polynomial."""
    terms: Dict[Exponent, float] = {}
    for p in polys:
        for exp, coeff in p.terms.items():
            terms[exp] = terms.get(exp, 0.0) + coeff
    return PolyField(num_vars, terms)


def zero_array(shape: Tuple[int, ...], num_vars: int) -> np.ndarray:
    """Object array of the given shape filled with zero polynomials."""
    arr = np.empty(shape, dtype=object)
    zero = PolyField(num_vars)
    for index in np.ndindex(*shape):
        arr[index] = zero
    return arr


class FieldArrayEvaluator:
    """
    Compiled evaluator for an object array of PolyFields.

    All components share one monomial table, so evaluating a whole Christoffel
    array at a point costs one power table and one matrix-vector product.
    """

    def __init__(self, fields: np.ndarray, num_vars: int):
        self.shape = fields.shape
        self.num_vars = num_vars
        flat = list(fields.reshape(-1))
        exponents = sorted({exp for p in flat for exp in p.terms})
        if not exponents:
            exponents = [(0,) * num_vars]
        column = {exp: idx for idx, exp in enumerate(exponents)}
        self._exps = np.array(exponents, dtype=float).reshape(-1, num_vars)
        self._coeffs = np.zeros((len(flat), len(exponents)))
        for row, p in enumerate(flat):
            for exp, coeff in p.terms.items():
                self._coeffs[row, column[exp]] = coeff

    def __call__(self, x: Sequence[float]) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        monomials = np.prod(x[None, :] ** self._exps, axis=1)
        return (self._coeffs @ monomials).reshape(self.shape)

    def eval_many(self, points: np.ndarray) -> np.ndarray:
        """Values at every point, shape (m, *fields.shape)."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        monomials = np.prod(points[:, None, :] ** self._exps[None, :, :], axis=2)
        return (monomials @ self._coeffs.T).reshape((points.shape[0],) + self.shape)


def grid_max_abs(labeled: Sequence[Tuple[str, PolyField]], points: np.ndarray
                 ) -> Tuple[float, Optional[np.ndarray], Optional[str]]:
    """
    Largest |value| of any labeled polynomial over the points.

    Ties resolve to the first label, then the first point, so the witness is
    deterministic. Returns (0.0, None, None) when there is nothing to evaluate.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    best, best_point, best_label = 0.0, None, None
    for label, poly in labeled:
        if poly.is_zero():
            continue
        values = np.abs(poly.eval_many(points))
        idx = int(np.argmax(values))
        if best_label is None or values[idx] > best:
            best, best_point, best_label = float(values[idx]), points[idx].copy(), label
    return best, best_point, best_label
