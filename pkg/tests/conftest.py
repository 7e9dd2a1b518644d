"""Shared builders for randomized tests.

Hypothesis draws a seed and a field; the builders below turn them into exact
objects with :class:`random.Random` so shrinking stays cheap.
"""

from __future__ import annotations

import random

import pytest
from hypothesis import strategies as st

from extshift.exterior import KForm, Operator, monomials
from extshift.subspace import Subspace, from_generators
from extshift.tfield import QQ, get_field

FIELDS = [QQ, get_field("GF(2)"), get_field("GF(3)"), get_field("GF(5)"), get_field("GF(101)")]

fields = st.sampled_from(FIELDS)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def random_form(F, n: int, k: int, rng: random.Random, density: float = 0.5) -> KForm:
    terms = {S: F.random(rng, 3) for S in monomials(n, k) if rng.random() < density}
    return KForm(F, n, k, terms)


def random_nonzero_form(F, n: int, k: int, rng: random.Random) -> KForm:
    while True:
        x = random_form(F, n, k, rng)
        if not x.is_zero():
            return x


def random_subspace(F, n: int, k: int, rng: random.Random, dim: int | None = None) -> Subspace:
    total = len(monomials(n, k))
    r = rng.randint(1, total) if dim is None else dim
    gens = [random_form(F, n, k, rng, density=rng.choice([0.2, 0.5, 1.0])) for _ in range(r)]
    return from_generators(F, n, k, gens)


def random_operator(F, n: int, rng: random.Random, invertible: bool = True) -> Operator:
    while True:
        P = Operator.from_columns(F, [[F.random(rng, 2) for _ in range(n)] for _ in range(n)])
        if not invertible or P.is_invertible():
            return P


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240601)


# Filled by the acceptance suite and echoed once at the end of the session.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
