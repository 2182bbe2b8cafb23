from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from superlie.core import (
    JetContext,
    LaurentContext,
    SuperMonomial,
    SuperPolynomial,
    format_poly,
    mono_mul,
    parity,
    parse_poly,
    partial_x,
    partial_xi,
    poly_mul,
)
from superlie.errors import ContextMismatchError, InconclusiveError
from superlie.linalg import kernel_basis, nullspace, rank, solve_linear

C = JetContext(2, 3, 4)


def P(text, ctx=C):
    return parse_poly(ctx, text)


def test_mono_mul_signs():
    xi1, xi2 = SuperMonomial((0, 0), 0b001), SuperMonomial((0, 0), 0b010)
    assert mono_mul(C, xi1, xi2) == (1, SuperMonomial((0, 0), 0b011))
    assert mono_mul(C, xi2, xi1) == (-1, SuperMonomial((0, 0), 0b011))
    assert mono_mul(C, xi1, xi1) is None


def test_poly_mul_examples():
    assert poly_mul(P("x1 + xi1"), P("x1 - xi1")) == P("x1^2")
    p = P("3/2 x1^2 x2 xi1 xi3 - xi2")
    assert poly_mul(SuperPolynomial.const(C), p) == p
    assert poly_mul(P("xi1 xi2"), P("xi2")).is_zero()


def test_truncation_drops_overflow():
    small = JetContext(1, 0, 2)
    x = SuperPolynomial.x(small, 1)
    assert poly_mul(x, poly_mul(x, x)).is_zero()


def test_partials():
    assert partial_x(P("x1^2 xi1"), 1) == P("2 x1 xi1")
    assert partial_x(P("xi1 xi2"), 1).is_zero()
    assert partial_x(P("x1 x2"), 2) == P("x1")
    assert partial_xi(P("xi1 xi2"), 2) == P("-xi1")
    assert partial_xi(P("xi1 xi2"), 1) == P("xi2")


def test_parity_labels():
    assert parity(P("x1 xi1 xi2")) == "even"
    assert parity(P("xi1")) == "odd"
    assert parity(P("x1 + xi1")) == "mixed"


def test_context_mismatch():
    with pytest.raises(ContextMismatchError):
        SuperPolynomial.x(C, 1) + SuperPolynomial.x(JetContext(2, 3, 3), 1)


def test_text_roundtrip():
    text = "3/2 x1^2 x2 xi1 xi3"
    assert format_poly(P(text)) == text
    assert P("xi2 xi1") == P("-xi1 xi2")


def test_laurent_window():
    L = LaurentContext(2, -4, 4)
    p = parse_poly(L, "x1^-2 xi1")
    assert partial_x(p, 1) == parse_poly(L, "-2 x1^-3 xi1")
    with pytest.raises(InconclusiveError):
        partial_x(parse_poly(L, "x1^-4"), 1)


def test_kernel_basis_examples():
    assert kernel_basis([[1, 0], [0, 1]]) == []
    assert kernel_basis([[0, 0], [0, 0]]) == [[1, 0], [0, 1]]
    (v,) = kernel_basis([[1, 1]])
    assert v[0] + v[1] == 0 and v != [0, 0]


def test_linear_solve():
    cols = [{0: 1, 1: 1}, {1: 1}]
    assert solve_linear(cols, {0: 2, 1: 5}) == {0: 2, 1: 3}
    assert solve_linear(cols, {2: 1}) is None
    assert rank([{0: 1}, {0: 2}, {1: 1}]) == 2


# property tests -----------------------------------------------------------------------

coef = st.fractions(min_value=-3, max_value=3, max_denominator=3)
mono = st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 7))


@st.composite
def polys(draw, par=None):
    terms = {}
    for e1, e2, mask in draw(st.lists(mono, max_size=4)):
        if par is not None and bin(mask).count("1") % 2 != par:
            continue
        terms[SuperMonomial((e1, e2), mask)] = draw(coef)
    return SuperPolynomial(C, terms)


@settings(max_examples=60, deadline=None)
@given(polys(0), polys(1), st.integers(0, 1))
def test_supercommutativity(a, b, flip):
    if flip:
        a, b = b, a
    pa = 1 if a.terms and next(iter(a.terms)).parity else 0
    pb = 1 if b.terms and next(iter(b.terms)).parity else 0
    sign = -1 if pa and pb else 1
    assert poly_mul(a, b) == poly_mul(b, a).scale(sign)


@settings(max_examples=60, deadline=None)
@given(polys(1), polys(1))
def test_odd_odd_anticommute(a, b):
    assert poly_mul(a, b) == poly_mul(b, a).scale(-1)


@settings(max_examples=40, deadline=None)
@given(polys(), polys(), polys())
def test_associativity(a, b, c):
    assert poly_mul(poly_mul(a, b), c) == poly_mul(a, poly_mul(b, c))


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), st.integers(1, 3))
def test_leibniz_xi(a, b, j):
    for par, ah in a.homogeneous_parts().items():
        lhs = partial_xi(poly_mul(ah, b), j)
        rhs = poly_mul(partial_xi(ah, j), b) + poly_mul(ah, partial_xi(b, j)).scale(-1 if par else 1)
        assert lhs == rhs


@settings(max_examples=60, deadline=None)
@given(polys(), st.integers(1, 3), st.integers(1, 3), st.integers(1, 2))
def test_derivations_commute_rules(p, j, k, i):
    assert partial_xi(partial_xi(p, j), j).is_zero()
    assert partial_xi(partial_xi(p, j), k) == partial_xi(partial_xi(p, k), j).scale(-1)
    assert partial_x(partial_xi(p, j), i) == partial_xi(partial_x(p, i), j)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=4))
def test_kernel_annihilates(rows):
    ker = kernel_basis(rows)
    for v in ker:
        for r in rows:
            assert sum(Fraction(a) * b for a, b in zip(r, v)) == 0
    assert len(ker) == 4 - rank([{j: x for j, x in enumerate(r) if x} for r in rows])


def test_nullspace_sparse():
    assert nullspace([{0: 1}, {0: 1}]) == [{1: 1, 0: -1}]
