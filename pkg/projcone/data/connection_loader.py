"""
Connection Loader
Parses connection documents and builtin specs into ChartConnection objects,
and serializes connections back to the canonical document form.

Document schema (indices 1-based):

    {
      "schema": 1,
      "dimension": 2,
      "domain": [[-1, 1], [-1, 1]],            # optional, default [-1, 1]^n
      "symmetric": true,                        # optional; false = full array
      "christoffel": [
        {"i": 1, "j": 2, "k": 2, "terms": [{"coeff": 1.0, "exp": [2, 0]}]}
      ]
    }

or a builtin reference ``{"schema": 1, "builtin": "alpha_shift", "params": {...}}``.
"""

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

from ..algebra.polyfields import PolyField, poly_sum
from ..errors import InputError, ParseError
from ..geometry.chartconn import (
    ChartConnection,
    OneFormField,
    default_domain,
    projective_shift,
    symmetrize,
)
from ..utils.common import christoffel_label, is_finite_number, setup_logging

logger = setup_logging(__name__)

SCHEMA_VERSION = 1
MAX_DEGREE = 8

_NUMBER = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_FORM_TERM = re.compile(
    r"\s*(?P<sign>[+-])?\s*"
    rf"(?:(?P<coeff>{_NUMBER})\s*\*?\s*)?"
    r"(?P<mono>(?:x\d+(?:\^\d+)?\s*\*?\s*)*)"
    r"d\s*x(?P<axis>\d+)\s*"
)
_FACTOR = re.compile(r"x(\d+)(?:\^(\d+))?")


@dataclass
class Entry:
    """One Christoffel record, 0-based indices."""
    index: Tuple[int, int, int]
    poly: PolyField
    pointer: str


@dataclass
class ConnectionSpec:
    """Validated content of a connection document, before assembly."""
    dimension: int
    domain: Tuple[Tuple[float, float], ...]
    entries: List[Entry] = field(default_factory=list)
    symmetric: bool = True
    builtin: Optional[str] = None
    params: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_document(cls, document: Any) -> "ConnectionSpec":
        if not isinstance(document, dict):
            raise ParseError("connection document must be a JSON object", "/")
        if "schema" not in document:
            raise ParseError("missing required field 'schema'", "/schema")
        if document["schema"] != SCHEMA_VERSION:
            raise ParseError(f"unsupported schema {document['schema']!r}, expected {SCHEMA_VERSION}",
                             "/schema")
        if "builtin" in document:
            name = document["builtin"]
            if not isinstance(name, str) or name not in BUILTINS:
                raise ParseError(f"unknown builtin {name!r}; choose from {sorted(BUILTINS)}", "/builtin")
            params = document.get("params", {})
            if not isinstance(params, dict):
                raise ParseError("params must be an object", "/params")
            return cls(dimension=0, domain=(), builtin=name, params=dict(params))

        n = document.get("dimension")
        if isinstance(n, bool) or not isinstance(n, int):
            raise ParseError("dimension must be an integer", "/dimension")
        if n < 2:
            raise ParseError(f"dimension must be >= 2, got {n}", "/dimension")
        domain = _parse_domain(document.get("domain"), n)
        symmetric = document.get("symmetric", True)
        if not isinstance(symmetric, bool):
            raise ParseError("symmetric must be true or false", "/symmetric")
        entries = _parse_entries(document.get("christoffel", []), n, symmetric)
        return cls(n, domain, entries, symmetric)

    def build(self) -> ChartConnection:
        """Assemble the connection (symmetric completion, or symmetrization of a full array)."""
        if self.builtin is not None:
            return build_builtin(self.builtin, self.params)
        c = ChartConnection.from_entries(
            self.dimension,
            [(e.index, e.poly) for e in self.entries],
            self.domain,
            symmetric=self.symmetric,
        )
        if not self.symmetric:
            if not c.is_symmetric():
                logger.warning("Connection has torsion; using its symmetric part")
            c = symmetrize(c)
        return c


def _parse_domain(raw: Any, n: int) -> Tuple[Tuple[float, float], ...]:
    if raw is None:
        return default_domain(n)
    if not isinstance(raw, list) or len(raw) != n:
        raise ParseError(f"domain must be an array of {n} [lo, hi] pairs", "/domain")
    box = []
    for axis, interval in enumerate(raw):
        where = f"/domain/{axis}"
        if (not isinstance(interval, list) or len(interval) != 2
                or not all(is_finite_number(v) for v in interval)):
            raise ParseError("domain interval must be a [lo, hi] pair of finite numbers", where)
        lo, hi = float(interval[0]), float(interval[1])
        if not lo < hi:
            raise ParseError(f"degenerate interval [{lo}, {hi}]", where)
        box.append((lo, hi))
    return tuple(box)


def _parse_index(entry: Dict[str, Any], name: str, n: int, where: str) -> int:
    value = entry.get(name)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"index {name} must be an integer", f"{where}/{name}")
    if not 1 <= value <= n:
        raise ParseError(f"index {name}={value} out of range 1..{n}", f"{where}/{name}")
    return value - 1


def _parse_entries(raw: Any, n: int, symmetric: bool) -> List[Entry]:
    if not isinstance(raw, list):
        raise ParseError("christoffel must be an array", "/christoffel")
    seen: Dict[Tuple[int, int, int], str] = {}
    entries = []
    for position, entry in enumerate(raw):
        where = f"/christoffel/{position}"
        if not isinstance(entry, dict):
            raise ParseError("entry must be an object with i, j, k and terms", where)
        i = _parse_index(entry, "i", n, where)
        j = _parse_index(entry, "j", n, where)
        k = _parse_index(entry, "k", n, where)
        if symmetric and j > k:
            raise ParseError(
                f"symmetric documents list {christoffel_label('Γ', i, j, k)} as "
                f"{christoffel_label('Γ', i, k, j)} (j <= k)", where)
        key = (i, j, k)
        if key in seen:
            raise ParseError(
                f"duplicate entry {christoffel_label('Γ', i, j, k)} (first given at {seen[key]})", where)
        seen[key] = where
        poly = PolyField.from_json(n, entry.get("terms"), f"{where}/terms")
        if poly.degree() > MAX_DEGREE:
            raise ParseError(f"polynomial degree {poly.degree()} exceeds {MAX_DEGREE}", f"{where}/terms")
        entries.append(Entry(key, poly, where))
    return entries


def parse_connection(document: Any) -> ChartConnection:
    """
    Parse a connection document.

    Args:
        document: Decoded JSON document

    Returns:
        Torsion-free ChartConnection

    Raises:
        ParseError: With a JSON pointer to the offending field
    """
    connection = ConnectionSpec.from_document(document).build()
    logger.info(f"Parsed connection n={connection.n}")
    return connection


def serialize_connection(c: ChartConnection) -> Dict[str, Any]:
    """Canonical document: j <= k entries in index order, zero entries omitted."""
    symmetric = c.is_symmetric()
    entries = []
    for i in range(c.n):
        for j in range(c.n):
            for k in range(j if symmetric else 0, c.n):
                poly = c.gamma[i, j, k]
                if poly.is_zero():
                    continue
                entries.append({"i": i + 1, "j": j + 1, "k": k + 1, "terms": poly.to_json()})
    return {
        "schema": SCHEMA_VERSION,
        "dimension": c.n,
        "domain": [[lo, hi] for lo, hi in c.domain],
        "symmetric": symmetric,
        "christoffel": entries,
    }


def load_connection(path: Path) -> ChartConnection:
    """Read and parse a connection JSON file."""
    path = Path(path)
    if not path.exists():
        raise InputError(f"connection file not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            document = json.load(f)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON in {path.name}: {e.msg} (line {e.lineno}, column {e.colno})", "/")
    return parse_connection(document)


# ----------------------------------------------------------------------------- one-form grammar

def parse_one_form(text: str, n: int, pointer: str = "/params/alpha") -> OneFormField:
    """
    Parse a one-form such as ``x1dx1 + 2*x2^2dx2 - 0.5dx1``.

    Terms are ``[±][coef*]monomial dx<k>``; monomials are ``x<i>[^p]`` factors
    joined by ``*`` or juxtaposed. Indices are 1-based.
    """
    if not isinstance(text, str) or not text.strip():
        raise ParseError("one-form must be a non-empty string", pointer)
    components: List[List[PolyField]] = [[] for _ in range(n)]
    position = 0
    first = True
    while position < len(text):
        match = _FORM_TERM.match(text, position)
        if match is None or match.end() == position:
            raise ParseError(f"cannot parse one-form near {text[position:]!r}", pointer)
        if not first and match.group("sign") is None:
            raise ParseError(f"missing '+' or '-' before {text[position:match.end()].strip()!r}", pointer)
        axis = int(match.group("axis"))
        if not 1 <= axis <= n:
            raise ParseError(f"dx{axis} out of range for n={n}", pointer)
        coeff = float(match.group("coeff")) if match.group("coeff") else 1.0
        if match.group("sign") == "-":
            coeff = -coeff
        exp = [0] * n
        for var, power in _FACTOR.findall(match.group("mono")):
            var = int(var)
            if not 1 <= var <= n:
                raise ParseError(f"x{var} out of range for n={n}", pointer)
            exp[var - 1] += int(power) if power else 1
        components[axis - 1].append(PolyField.monomial(exp, coeff))
        position = match.end()
        first = False
    alpha = tuple(poly_sum(parts, n) for parts in components)
    if any(a.degree() > MAX_DEGREE for a in alpha):
        raise ParseError(f"one-form degree exceeds {MAX_DEGREE}", pointer)
    return OneFormField(n, alpha)


# ----------------------------------------------------------------------------- builtins

def _int_param(params: Dict[str, Any], name: str, default: int, minimum: int) -> int:
    raw = params.get(name, default)
    try:
        value = int(raw)
    except (TypeError, ValueError):
        raise ParseError(f"{name} must be an integer, got {raw!r}", f"/params/{name}")
    if isinstance(raw, float) and raw != value:
        raise ParseError(f"{name} must be an integer, got {raw!r}", f"/params/{name}")
    if value < minimum:
        raise ParseError(f"{name} must be >= {minimum}, got {value}", f"/params/{name}")
    return value


def _reject_unknown(params: Dict[str, Any], allowed: Tuple[str, ...]) -> None:
    for name in params:
        if name not in allowed:
            raise ParseError(f"unknown parameter {name!r}; allowed: {', '.join(allowed) or 'none'}",
                             f"/params/{name}")


def _build_flat(params: Dict[str, Any]) -> ChartConnection:
    _reject_unknown(params, ("n",))
    return ChartConnection.zero(_int_param(params, "n", 2, 2))


def _build_alpha_shift(params: Dict[str, Any]) -> ChartConnection:
    _reject_unknown(params, ("n", "alpha"))
    n = _int_param(params, "n", 2, 2)
    alpha = params.get("alpha", "x1dx1")
    if isinstance(alpha, list):
        if len(alpha) != n:
            raise ParseError(f"alpha must have {n} components", "/params/alpha")
        form = OneFormField(n, tuple(
            PolyField.from_json(n, terms, f"/params/alpha/{axis}") for axis, terms in enumerate(alpha)
        ))
    else:
        form = parse_one_form(alpha, n)
    return projective_shift(ChartConnection.zero(n), form)


def nonflat_demo() -> ChartConnection:
    """n = 2, Γ^1_{22} = x1² on [−1, 1]²."""
    return ChartConnection.from_entries(2, [((0, 1, 1), PolyField.monomial((2, 0)))])


def _build_nonflat_demo(params: Dict[str, Any]) -> ChartConnection:
    _reject_unknown(params, ())
    return nonflat_demo()


BUILTINS: Dict[str, Tuple[str, Callable[[Dict[str, Any]], ChartConnection]]] = {
    "flat": ("Γ = 0 on [-1, 1]^n (params: n, default 2)", _build_flat),
    "alpha_shift": ("projective shift of Γ = 0 by a polynomial one-form "
                    "(params: n, default 2; alpha, default x1dx1)", _build_alpha_shift),
    "nonflat_demo": ("n = 2, Γ^1_{22} = x1^2 on [-1, 1]^2", _build_nonflat_demo),
}


def build_builtin(name: str, params: Optional[Dict[str, Any]] = None) -> ChartConnection:
    if name not in BUILTINS:
        raise ParseError(f"unknown builtin {name!r}; choose from {sorted(BUILTINS)}", "/builtin")
    return BUILTINS[name][1](dict(params or {}))


def parse_builtin_spec(text: str) -> Tuple[str, Dict[str, str]]:
    """Split ``NAME[:key=value;key=value]`` into the name and its raw parameters."""
    name, _, rest = text.strip().partition(":")
    params: Dict[str, str] = {}
    if rest.strip():
        for item in rest.split(";"):
            if not item.strip():
                continue
            key, sep, value = item.partition("=")
            if not sep or not key.strip():
                raise ParseError(f"builtin parameter must be key=value, got {item!r}", "/params")
            if key.strip() in params:
                raise ParseError(f"parameter {key.strip()!r} given twice", f"/params/{key.strip()}")
            params[key.strip()] = value.strip()
    return name.strip(), params


def load_builtin(text: str) -> ChartConnection:
    name, params = parse_builtin_spec(text)
    return build_builtin(name, params)


def list_builtins() -> Dict[str, str]:
    return {name: description for name, (description, _) in BUILTINS.items()}
