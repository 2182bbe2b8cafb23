from __future__ import annotations

from fractions import Fraction

import pytest

from superlie.core import JetContext, LaurentContext, SuperPolynomial
from superlie.errors import InconclusiveError, SeriesSpecError
from superlie.fields import bracket, divergence, parse_field
from superlie.series import (
    SeriesSpec,
    deformed_membership_S,
    filtration_dims,
    growth_estimate,
    in_span,
    laurent_divfree_basis,
    membership,
    series_basis,
    series_slices,
    span_closure,
    tilde_twist,
)


def test_parse_specs():
    assert SeriesSpec.parse("K(1|3)") == SeriesSpec("K", 1, 3)
    assert SeriesSpec.parse("S~(0|4)").tag == "Stilde"
    assert str(SeriesSpec.parse("SHO~(2|2)")) == "SHO~(2|2)"
    for bad in ("H(3|1)", "K(2|1)", "HO(2|3)", "KO(2|2)", "S~(0|3)", "Q(1|1)", "W(1)"):
        with pytest.raises(SeriesSpecError):
            SeriesSpec.parse(bad)


def test_membership_examples():
    two = JetContext(2, 0, 3)
    assert membership(parse_field(two, "d/dx1"), SeriesSpec("S", 2, 0))
    one = JetContext(1, 0, 3)
    v = membership(parse_field(one, "x1 d/dx1"), SeriesSpec("K", 1, 0))
    assert v and v.witness == SuperPolynomial.const(one)
    v = membership(parse_field(one, "x1 d/dx1"), SeriesSpec("S", 1, 0))
    assert not v and v.defect == SuperPolynomial.const(one)


def test_membership_dimension_mismatch():
    with pytest.raises(SeriesSpecError):
        membership(parse_field(JetContext(2, 0, 2), "d/dx1"), SeriesSpec("S", 3, 0))


def test_basis_examples():
    W1 = series_basis(SeriesSpec("W", 1, 0), 1)
    assert {str(X) for X in W1} == {"d/dx1", "x1 d/dx1"}
    S2 = [b.field for b in series_slices(SeriesSpec("S", 2, 0), 1) if b.degree == -1]
    assert {str(X) for X in S2} == {"d/dx1", "d/dx2"}
    assert len(series_basis(SeriesSpec("W", 0, 2), 2)) == 8


def test_slices_too_deep_for_context():
    with pytest.raises(InconclusiveError):
        series_slices(SeriesSpec("W", 1, 0), 4, JetContext(1, 0, 2))


@pytest.mark.parametrize("name", ["S(2|1)", "CS(2|1)", "H(2|1)", "CH(2|1)", "K(3|1)", "HO(1|1)", "KO(1|2)"])
def test_basis_members_pass_membership(name):
    spec = SeriesSpec.parse(name)
    for X in series_basis(spec, 2):
        assert membership(X, spec)


def test_S_closed_under_bracket():
    spec = SeriesSpec("S", 2, 1)
    B = series_basis(spec, 2, JetContext(2, 1, 3))
    for X in B:
        for Y in B:
            if X.xdeg() + Y.xdeg() <= 3:
                assert divergence(bracket(X, Y)).is_zero()


def test_tilde_examples():
    ctx = JetContext(0, 2, 0)
    (X,) = tilde_twist([parse_field(ctx, "d/dxi1")], 2)
    assert X == parse_field(ctx, "d/dxi1 + xi1 xi2 d/dxi1")
    assert span_closure(series_basis(SeriesSpec.parse("S~(0|2)"), 2))[0]
    plain = series_basis(SeriesSpec("S", 0, 4), 4)
    twisted = series_basis(SeriesSpec.parse("S~(0|4)"), 4)
    assert not all(in_span(plain, X) for X in twisted)
    with pytest.raises(SeriesSpecError):
        tilde_twist([], 3)


def test_tilde_S04_closed():
    ok, bad = span_closure(series_basis(SeriesSpec.parse("S~(0|4)"), 4))
    assert ok, bad


def test_deformed_examples():
    L = LaurentContext(2, -4, 4)
    dx = parse_field(L, "d/dx1")
    v = deformed_membership_S(dx, 0, 1)
    assert not v and v.defect == SuperPolynomial.const(L)
    assert deformed_membership_S(dx, 0, 0)
    X = parse_field(L, "xi1 d/dxi2")
    for a in (0, 1, Fraction(-3, 2)):
        assert deformed_membership_S(X, 0, a)
    with pytest.raises(SeriesSpecError):
        deformed_membership_S(X, 2, 0)
    with pytest.raises(SeriesSpecError):
        deformed_membership_S(parse_field(JetContext(1, 2, 2), "d/dx1"), 0, 0)


def test_laurent_divfree_basis_members():
    L = LaurentContext(1, -3, 3)
    for X in laurent_divfree_basis(L):
        assert divergence(X).is_zero()
        assert deformed_membership_S(X, 0, 0)


def test_growth_examples():
    rep = filtration_dims(SeriesSpec("W", 1, 0), 4)
    assert rep.dims == [2, 3, 4, 5, 6] and rep.growth == 1
    rep = filtration_dims(SeriesSpec("W", 0, 2), 4)
    assert rep.dims[-1] == 2 * 4 and rep.growth == 0
    assert "truncation" in rep.note
    assert growth_estimate([1, 4, 9, 16, 25, 36]) == 2
    assert growth_estimate([1, 2, 4, 8, 16, 32]) is None
