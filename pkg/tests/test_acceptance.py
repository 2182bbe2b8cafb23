"""The twelve acceptance criteria, one test each.  Every test prints a PASS/FAIL line."""
from __future__ import annotations

import random
import time
from fractions import Fraction
from itertools import product

import pytest

from conftest import random_field, random_poly
from superlie.conformal import (
    abelian,
    check_axioms,
    current_algebra,
    mode_bracket,
    parse_table,
    sl2,
    sl3,
    virasoro,
    virasoro_mode,
)
from superlie.core import JetContext, LaurentContext, SuperPolynomial
from superlie.exceptional import (
    build_table,
    build_W_table,
    center,
    check_graded_properties,
    grade_by_weights,
    raw_bracket,
    sl_matrices,
    sp_matrices,
    strong_transitivity_check,
    torus_matrices,
)
from superlie.fields import apply, bracket, divergence, monomial_field, parse_field
from superlie.forms import DifferentialForm, ext_d, form_monomials, lie_derivative, twisted_action
from superlie.linalg import nullspace, rank, vec_iadd
from superlie.multiplets import MultipletLabel, charges, degenerate_families, table1_verify
from superlie.series import (
    SeriesSpec,
    deformed_membership_S,
    filtration_dims,
    laurent_divfree_basis,
    laurent_window_fields,
    membership,
    series_basis,
)


@pytest.fixture
def report(capsys):
    def emit(n: int, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\n[criterion {n:2d}] {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return emit


def test_01_w_jacobi(report):
    lines, ok = [], True
    for m, n in [(1, 1), (2, 1), (1, 2), (2, 2)]:
        t0 = time.perf_counter()
        table = build_W_table(m, n, 3)
        rep = table.jacobi()
        dt = time.perf_counter() - t0
        good = rep.ok and rep.tested > 0 and not table.failures and dt < 120
        ok &= good
        lines.append(f"W({m}|{n}) {rep.passed}/{rep.tested} ({dt:.1f}s)")
    report(1, ok, "super Jacobi at D=3: " + ", ".join(lines))


def test_02_series_closure(report):
    lines, ok = [], True
    for name in ["S(2|1)", "H(2|2)", "K(1|3)", "HO(2|2)", "SHO(3|3)", "KO(2|3)"]:
        spec = SeriesSpec.parse(name)
        ctx = JetContext(spec.m, spec.n, 3)
        # the odd contact weight 2 on the last xi leaves room only for coefficient degree 2
        basis = series_basis(spec, 2 if spec.tag == "KO" else 3, ctx)
        tested = bad = 0
        for i, X in enumerate(basis):
            for Y in basis[i:]:
                # d/dxi keeps x-degree, so the bracket is exact when x-degrees sum to <= D
                if X.xdeg() + Y.xdeg() > ctx.D:
                    continue
                tested += 1
                v = membership(bracket(X, Y), spec)
                if not v or (spec.tag in ("K", "KO") and not isinstance(v.witness, SuperPolynomial)):
                    bad += 1
        ok &= tested > 0 and bad == 0
        lines.append(f"{name} {tested - bad}/{tested}")
    report(2, ok, "closure at D=3: " + ", ".join(lines))


def test_03_forms_calculus(report):
    checked = 0
    ok = True
    for m in range(5):
        for n in range(3):
            ctx = JetContext(m, n, 3)
            for k in range(4):
                for key in form_monomials(ctx, k, 3):
                    checked += 1
                    if not ext_d(ext_d(DifferentialForm(ctx, {key: 1}))).is_zero():
                        ok = False
    rng = random.Random(20240601)
    cases = 0
    for _ in range(120):
        m, n = rng.randint(1, 3), rng.randint(0, 2)
        ctx = JetContext(m, n, 5)
        p = rng.randint(0, 1) if n else 0
        X = random_field(rng, ctx, 1, p)
        f = random_poly(rng, ctx, 2, 3)
        if lie_derivative(X, DifferentialForm.function(f)) != DifferentialForm.function(apply(X, f)):
            ok = False
        alpha = DifferentialForm.function(f)
        for j in range(1, m + 1):
            alpha = alpha + DifferentialForm.dx(ctx, j).scale(rng.randint(-2, 2))
        alpha = alpha + ext_d(DifferentialForm.function(random_poly(rng, ctx, 2, 2)))
        lhs = lie_derivative(X, ext_d(alpha))
        rhs = ext_d(lie_derivative(X, alpha))
        # [L_X, d] = L_X d - (-1)^{p(X)} d L_X
        if lhs != (rhs.scale(-1) if p else rhs):
            ok = False
        cases += 2
    report(3, ok and cases >= 200, f"d^2=0 on {checked} basis forms; {cases} seeded Cartan cases")


def _twisted_check(m: int, lam) -> tuple[int, int]:
    ctx = JetContext(m, 0, 5)
    fields = series_basis(SeriesSpec("W", m, 0), 2, ctx)
    forms = [{key: Fraction(1)} for key in form_monomials(ctx, 1, 1)]
    cache: dict = {}

    def act(zvec, avec):
        # the action is bilinear in (field, form): evaluate on monomial pairs and cache
        out: dict = {}
        for (s, k), cz in zvec.items():
            for fk, ca in avec.items():
                key = (s, k, fk)
                if key not in cache:
                    X = monomial_field(ctx, s, k)
                    cache[key] = dict(twisted_action(X, DifferentialForm(ctx, {fk: 1}), lam).terms)
                vec_iadd(out, cache[key], cz * ca)
        return out

    tested = bad = 0
    vecs = [X.vector() for X in fields]
    for X, xv in zip(fields, vecs):
        for Y, yv in zip(fields, vecs):
            zv = bracket(X, Y).vector()
            for a in forms:
                tested += 1
                lhs = act(zv, a)
                rhs = act(xv, act(yv, a))
                vec_iadd(rhs, act(yv, act(xv, a)), -1)
                if lhs != rhs:
                    bad += 1
    return tested, bad


def test_04_twisted_representation(report):
    lines, ok = [], True
    for m in (3, 4):
        for lam in (Fraction(0), Fraction(-1, 2), Fraction(-1), Fraction(1)):
            tested, bad = _twisted_check(m, lam)
            ok &= bad == 0 and tested > 0
            lines.append(f"m={m} lam={lam}: {tested - bad}/{tested}")
    report(4, ok, "Omega^1(lam) bracket compatibility: " + "; ".join(lines))


def test_05_e510_gradation(report):
    t0 = time.perf_counter()
    table = build_table("E(5|10)", 2)
    view = grade_by_weights(table, (2, 2, 2, 2, 2))
    dims = view.dims()
    props = check_graded_properties(view)
    dt = time.perf_counter() - t0
    odd_ok = all(view.parity_of(d) == ("odd" if d % 2 else "even") for d in dims)
    ok = (view.depth == 2 and (dims[-2], dims[-1], dims[0]) == (5, 10, 24) and view.consistent and odd_ok
          and props["G1"]["status"] == "pass" and props["G1"]["detail"][-2]["rank"] == 5 and dt < 300)
    report(5, ok, f"E(5|10) dims {dims[-2]}/{dims[-1]}/{dims[0]}, depth {view.depth}, "
                  f"consistent={view.consistent}, G1={props['G1']['status']} ({dt:.1f}s)")


def test_06_e36_gradation(report):
    table = build_table("E(3|6)", 2)
    view = grade_by_weights(table, (2, 2, 2))
    dims = view.dims()
    z = center(table, view.component(0))
    ok = view.consistent and (dims[-2], dims[-1], dims[0]) == (3, 6, 12) and z is not None and len(z) == 1
    report(6, ok, f"E(3|6) dims {dims[-2]}/{dims[-1]}/{dims[0]}, consistent={view.consistent}, "
                  f"center dim {None if z is None else len(z)}")


def test_07_odd_odd_brackets(report):
    lines, ok = [], True
    for name in ("E(4|4)", "E(3|6)"):
        table = build_table(name, 2)
        odd = [k for k in range(len(table)) if table.parity(k)]
        pairs = asym = 0
        for i in odd:
            for j in odd:
                if i < j and table.is_valid(i, j):
                    pairs += 1
                    if raw_bracket(table, i, j) != raw_bracket(table, j, i):
                        asym += 1
        rep = table.jacobi()
        good = asym == 0 and rep.ok and rep.tested > 0 and not table.failures
        ok &= good
        lines.append(f"{name}: {pairs} odd pairs symmetric={asym == 0}, Jacobi {rep.passed}/{rep.tested}, "
                     f"identification failures {len(table.failures)}")
    report(7, ok, "; ".join(lines))


def test_08_conformal(report):
    algebras = {"virasoro": virasoro(), "cur sl2": current_algebra(sl2()), "cur sl3": current_algebra(sl3())}
    axioms = {k: check_axioms(A).ok for k, A in algebras.items()}
    V = virasoro()
    witt = True
    for m, n in product(range(-3, 4), repeat=2):
        a, i = virasoro_mode(m)
        b, j = virasoro_mode(n)
        want = {virasoro_mode(m + n): Fraction(m - n)} if m != n else {}
        witt &= mode_bracket(a, i, b, j, V) == want
    currents = True
    for lie in (sl2(), sl3(), abelian()):
        A = current_algebra(lie)
        for a, b in product(lie.names, repeat=2):
            for m, n in product(range(-3, 4), repeat=2):
                want = {(g, m + n): Fraction(c) for g, c in lie.bracket(a, b).items() if c}
                currents &= mode_bracket(a, m, b, n, A) == want
    bad = check_axioms(parse_table({"generators": ["L"], "brackets": ["[L,L] = dL + 3 lambda L"]}))
    defect = bad.skew[0][1] if bad.skew else {}
    ok = all(axioms.values()) and witt and currents and not bad.ok and bool(defect)
    report(8, ok, f"axioms {axioms}, Witt={witt}, current modes={currents}, corrupted defect nonzero={bool(defect)}")


def test_09_deformed_family(report):
    L = LaurentContext(2, -4, 4)
    window = laurent_window_fields(L)
    divfree = laurent_divfree_basis(L)
    # reduced condition as a linear map on the window: its kernel must be the divergence-free span
    verdicts = [deformed_membership_S(X, 0, 0) for X in window]
    cols = [{} if v else dict(v.defect.terms) for v in verdicts]
    kernel_dim = len(nullspace(cols))
    span_ok = kernel_dim == len(divfree) == rank([X.vector() for X in divfree])
    members_ok = all(deformed_membership_S(X, 0, 0) for X in divfree)
    exact_ok = all(bool(v) == divergence(X).is_zero() for v, X in zip(verdicts, window))
    dx = parse_field(L, "d/dx1")
    v = deformed_membership_S(dx, 0, 1)
    ex1 = not v and v.defect == SuperPolynomial.const(L)
    ex2 = all(deformed_membership_S(parse_field(L, "xi1 d/dxi2"), eps, a) for eps in (0, 1) for a in (0, 1, -2))
    dxi = parse_field(L, "d/dxi1")
    ex3 = bool(deformed_membership_S(dxi, 0, 1)) and not deformed_membership_S(dxi, 1, 0)
    ok = span_ok and members_ok and exact_ok and ex1 and ex2 and ex3
    report(9, ok, f"window [-4,4], n=2: div-free basis {len(divfree)} = kernel {kernel_dim}; "
                  f"eps/a examples {ex1 and ex2 and ex3}")


def _brute_force_families(m_max: int, b_max: int) -> set:
    out = set()
    for mm, b in product(range(m_max + 1), range(b_max + 1)):
        tt = Fraction(2, 3) * mm
        out.add((0, mm, b, -b - tt - 2))
        out.add((0, mm, b, b - tt))
        out.add((mm, 0, b, -b + tt))
        out.add((mm, 0, b, b + tt + 2))
    return out


def test_10_multiplets(report):
    t0 = time.perf_counter()
    got = {(x.m, x.n, x.b, x.Y) for x in degenerate_families(3, 3)}
    want = _brute_force_families(3, 3)
    rep = table1_verify()
    printed = [
        ("(01,1,1/3)", {Fraction(2, 3), Fraction(-1, 3)}),
        ("(00,1,-1)", {Fraction(0), Fraction(-1)}),
        ("(00,2,0)", {Fraction(1), Fraction(0), Fraction(-1)}),
    ]
    charge_ok = all(set(charges(MultipletLabel.parse(lab))) == qs for lab, qs in printed)
    pm = set(charges(MultipletLabel.parse("(11,0,2)"))) | set(charges(MultipletLabel.parse("(11,0,-2)")))
    charge_ok &= pm == {Fraction(1), Fraction(-1)}
    dt = time.perf_counter() - t0
    ok = (got == want and rep["ok"] and len(rep["rows"]) == 14 and rep["fermion_rows"] == 10
          and rep["boson_rows"] == 4 and charge_ok and dt < 1)
    report(10, ok, f"{len(got)} degenerate labels match brute force; table1 rows {len(rep['rows'])} "
                   f"({rep['fermion_rows']} fermion, {rep['boson_rows']} boson), charges={charge_ok} ({dt:.3f}s)")


def test_11_strong_transitivity(report):
    passes = {}
    for label, mats, dim in [("sl2", sl_matrices(2), 2), ("sl3", sl_matrices(3), 3), ("sl4", sl_matrices(4), 4),
                             ("sp2", sp_matrices(2), 2), ("sp4", sp_matrices(4), 4), ("sp6", sp_matrices(6), 6)]:
        passes[label] = strong_transitivity_check(mats, dim, trials=50, seed=0).status == "pass"
    torus = strong_transitivity_check(torus_matrices(2), 2, trials=50, seed=0)
    witness_ok = False
    if torus.status == "fail" and torus.witness:
        x = [Fraction(w) for w in torus.witness]
        images = [{r: sum(M[r][c] * x[c] for c in range(2)) for r in range(2)} for M in torus_matrices(2)]
        witness_ok = any(x) and rank([{k: v for k, v in im.items() if v} for im in images]) < 2
    ok = all(passes.values()) and witness_ok
    report(11, ok, f"{passes}; torus fails with witness {torus.witness} (span {torus.span})")


def test_12_growth(report):
    expected = {"W(1|0)": 1, "K(1|1)": 1, "W(1|2)": 1, "W(0|3)": 0}
    got = {}
    labeled = True
    for name in expected:
        rep = filtration_dims(SeriesSpec.parse(name), 6)
        got[name] = rep.growth
        labeled &= "truncation" in rep.note
    report(12, got == expected and labeled, f"growth estimates {got} (estimate at truncation)")
