from __future__ import annotations

import random
from fractions import Fraction

import pytest

from superlie.core import JetContext, SuperMonomial, SuperPolynomial
from superlie.fields import SuperVectorField
from superlie.forms import x_exponents, xi_monomials


def random_poly(rng: random.Random, ctx: JetContext, degmax: int, terms: int = 3,
                parity: int | None = None) -> SuperPolynomial:
    keys = [SuperMonomial(e, mask) for d in range(degmax + 1) for e in x_exponents(ctx.m, d)
            for mask in xi_monomials(ctx.n)]
    if parity is not None:
        keys = [k for k in keys if k.parity == parity]
    out = {}
    for _ in range(terms):
        if keys:
            out[rng.choice(keys)] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    return SuperPolynomial(ctx, out)


def random_field(rng: random.Random, ctx: JetContext, degmax: int, parity: int = 0) -> SuperVectorField:
    px = [random_poly(rng, ctx, degmax, 2, parity) for _ in range(ctx.m)]
    qxi = [random_poly(rng, ctx, degmax, 2, 1 - parity) for _ in range(ctx.n)]
    return SuperVectorField(ctx, px, qxi)


@pytest.fixture
def rng():
    return random.Random(20240601)
