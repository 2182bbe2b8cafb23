from __future__ import annotations

from fractions import Fraction as Q

import pytest

from superlie.multiplets import (
    MultipletLabel,
    charges,
    degenerate_families,
    family_matches,
    fundamental_filter,
    is_degenerate,
    is_fundamental,
    load_table1,
    sl3_dim,
    table1_verify,
)

L = MultipletLabel.parse


def test_family_examples():
    assert (2, 1, 1) in family_matches(L("(01,1,1/3)"))
    assert (1, 0, 0) in family_matches(L("(00,0,-2)"))
    assert (3, 0, 1) in family_matches(L("(00,1,-1)"))


def test_degeneracy_examples():
    assert is_degenerate(L("(01,1,1/3)"))
    assert not is_degenerate(L("(10,0,-4/3)"))
    assert {f for f, _, _ in family_matches(L("(00,0,0)"))} == {2, 3}


def test_charges_examples():
    assert charges(L("(01,1,1/3)")) == [Q(2, 3), Q(-1, 3)]
    assert charges(L("(00,2,0)")) == [1, 0, -1]
    assert charges(L("(00,0,0)")) == [0]
    assert charges(L("(11,0,2)")) == [1]
    assert sorted(charges(L("(10,1,-1/3)"))) == [Q(-2, 3), Q(1, 3)]


def test_filter_examples():
    assert is_fundamental(L("(01,1,1/3)"))
    assert not is_fundamental(L("(02,0,2/3)"))
    assert not is_fundamental(L("(00,3,0)"))
    assert charges(L("(00,3,0)")) == [Q(3, 2), Q(1, 2), Q(-1, 2), Q(-3, 2)]
    assert is_fundamental(L("(11,0,0)"))
    assert fundamental_filter([L("(11,0,-2)"), L("(00,3,0)")]) == [L("(11,0,-2)")]


def test_label_validation():
    with pytest.raises(ValueError):
        MultipletLabel(0, 0, 0, Q(1, 2))
    with pytest.raises(ValueError):
        MultipletLabel(-1, 0, 0, 0)
    assert str(L("(01,1,1/3)")) == "(01,1,1/3)"


def test_sl3_dims():
    assert [sl3_dim(*mn) for mn in [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (3, 0)]] == [1, 3, 3, 8, 6, 10]


def test_enumeration_sorted_and_deduplicated():
    labels = degenerate_families(2, 2)
    assert labels == sorted(set(labels))
    assert L("(00,0,0)") in labels


def test_table1():
    rows = load_table1()
    assert len(rows) == 14
    rep = table1_verify(rows)
    assert rep["ok"]
    assert rep["fermion_rows"] == 10 and rep["boson_rows"] == 4
