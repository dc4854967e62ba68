import itertools

import numpy as np
import pytest

from projcone.algebra.polyfields import PolyField, poly_sum
from projcone.config import RunConfig
from projcone.data.connection_loader import build_builtin, nonflat_demo
from projcone.geometry.chartconn import ChartConnection, OneFormField


def exponents_up_to(n, degree):
    return [e for e in itertools.product(range(degree + 1), repeat=n) if sum(e) <= degree]


def random_poly(rng, n, degree=2, n_terms=3, scale=1.0, integer=False):
    exps = exponents_up_to(n, degree)
    picks = rng.choice(len(exps), size=min(n_terms, len(exps)), replace=False)
    terms = []
    for idx in picks:
        coeff = float(rng.integers(-3, 4)) if integer else float(rng.uniform(-scale, scale))
        terms.append(PolyField.monomial(exps[idx], coeff))
    return poly_sum(terms, n)


def random_connection(rng, n, degree=2, scale=1.0, density=0.6):
    entries = []
    for i in range(n):
        for j in range(n):
            for k in range(j, n):
                if rng.random() < density:
                    entries.append(((i, j, k), random_poly(rng, n, degree, scale=scale)))
    return ChartConnection.from_entries(n, entries)


def random_one_form(rng, n, degree=2, scale=1.0):
    return OneFormField(n, tuple(random_poly(rng, n, degree, scale=scale) for _ in range(n)))


@pytest.fixture
def rng():
    """Seeded from PROJCONE_SEED (RunConfig.seed) so a failing draw can be replayed."""
    return RunConfig.from_env().rng()


@pytest.fixture
def flat2():
    return ChartConnection.zero(2)


@pytest.fixture
def flat3():
    return ChartConnection.zero(3)


@pytest.fixture
def alpha_shift():
    return build_builtin("alpha_shift", {})


@pytest.fixture
def nonflat():
    return nonflat_demo()


@pytest.fixture
def make_connection():
    return random_connection


@pytest.fixture
def make_one_form():
    return random_one_form


@pytest.fixture
def make_poly():
    return random_poly
