from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest

from superlie.conformal import (
    ConformalAlgebra,
    LieStructure,
    abelian,
    check_axioms,
    check_skew,
    current_algebra,
    format_lambda_poly,
    lambda_bracket,
    mode_bracket,
    mode_jacobi,
    named_algebra,
    parse_lambda_poly,
    parse_table,
    sl2,
    sl3,
    table_to_json,
    virasoro,
    virasoro_mode,
)

ONE = Fraction(1)


def gen(g, p=0, c=ONE):
    return {(g, p): Fraction(c)}


def corrupted():
    return parse_table({"generators": ["L"], "brackets": ["[L,L] = dL + 3 lambda L"]})


def test_virasoro_table():
    V = virasoro()
    assert lambda_bracket(gen("L"), gen("L"), V) == {0: gen("L", 1), 1: gen("L", 0, 2)}
    assert format_lambda_poly(V.table[("L", "L")]) == "dL + 2 lambda L"


def test_sesquilinearity_example():
    # [dL_l L] = -l (d + 2l) L
    got = lambda_bracket(gen("L", 1), gen("L"), virasoro())
    assert got == {1: gen("L", 1, -1), 2: gen("L", 0, -2)}


def test_current_sl2_entry():
    A = current_algebra(sl2())
    assert lambda_bracket(gen("e"), gen("f"), A) == {0: gen("h")}


@pytest.mark.parametrize("A", [virasoro(), current_algebra(sl2()), current_algebra(sl3()),
                               current_algebra(abelian())], ids=["vir", "sl2", "sl3", "abelian"])
def test_axioms_hold(A):
    rep = check_axioms(A)
    assert rep.ok, rep.as_dict()


def test_corrupted_skew_defect():
    A = corrupted()
    rep = check_axioms(A)
    assert not rep.ok and rep.skew
    # [L_l L] + [L_{-l-d} L] leaves -dL
    assert check_skew(A, "L", "L") == {0: gen("L", 1, -1)}


def test_witt_relations():
    V = virasoro()
    for m in range(-3, 4):
        for n in range(-3, 4):
            a, i = virasoro_mode(m)
            b, j = virasoro_mode(n)
            want = {virasoro_mode(m + n): Fraction(m - n)} if m != n else {}
            assert mode_bracket(a, i, b, j, V) == want


def test_current_modes():
    lie = sl2()
    A = current_algebra(lie)
    for a in lie.names:
        for b in lie.names:
            for m in range(-3, 4):
                for n in range(-3, 4):
                    want = {(g, m + n): Fraction(c) for g, c in lie.bracket(a, b).items() if c}
                    assert mode_bracket(a, m, b, n, A) == want


def test_abelian_modes_vanish():
    A = current_algebra(abelian())
    assert mode_bracket("a", 2, "a", -1, A) == {}


def test_mode_jacobi_virasoro():
    assert mode_jacobi(virasoro(), 2) == []


def test_mode_jacobi_corrupted_fails():
    assert mode_jacobi(corrupted(), 1)


def test_invalid_lie_structure_rejected():
    bad = LieStructure(["x", "y"], {"x": 0, "y": 0}, {("x", "y"): {"x": 1}, ("y", "x"): {"x": 1}})
    with pytest.raises(ValueError):
        current_algebra(bad)


def test_parse_and_json_roundtrip():
    poly = parse_lambda_poly("dL + 2 lambda L", ["L"])
    assert poly == virasoro().table[("L", "L")]
    A = parse_table(json.dumps(table_to_json(virasoro())))
    assert A.table == virasoro().table
    assert named_algebra("sl2").generators == current_algebra(sl2()).generators
    with pytest.raises(ValueError):
        named_algebra("nope")


def test_skew_is_involution():
    # completing a table from one ordered entry and then re-deriving that entry gives it back
    A = current_algebra(sl3())
    for (a, b), poly in A.table.items():
        B = ConformalAlgebra(A.generators, A.parities, {(b, a): A.table[(b, a)]}, "half")
        assert B.table[(a, b)] == poly


def test_sesquilinearity_random():
    rng = random.Random(5)
    A = current_algebra(sl2())
    gens = A.generators
    for _ in range(30):
        a = {(rng.choice(gens), rng.randint(0, 2)): Fraction(rng.randint(1, 3))}
        b = {(rng.choice(gens), rng.randint(0, 2)): Fraction(rng.randint(1, 3))}
        base = lambda_bracket(a, b, A)
        (g, p), c = next(iter(a.items()))
        shifted = lambda_bracket({(g, p + 1): c}, b, A)
        assert shifted == {k + 1: {key: -v for key, v in el.items()} for k, el in base.items()}
