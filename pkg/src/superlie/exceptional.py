"""Truncated structure tables of E(5|10), E(3|6), E(4|4) (and W(m|n) for testing),
weighted gradings and the graded verification predicates.

An element of a table is stored as a sparse dict ``{slot: object}`` where the
object is a vector field, a function or a differential form.  Each basis
element lives in a single slot and is homogeneous in the multidegree, so any
weight tuple grades the whole table.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable

from .core import JetContext, SuperMonomial, SuperPolynomial, format_poly, poly_mul
from .errors import NotInImageError
from .fields import SuperVectorField, bracket as vf_bracket, format_field, monomial_field
from .forms import (
    DifferentialForm,
    FormKey,
    closed_basis,
    closedform_to_vf,
    ext_d,
    form_multidegree,
    format_form,
    lie_derivative,
    twisted_action,
    wedge,
    x_exponents,
    xi_monomials,
)
from .linalg import RowReducer, SpanSolver, nullspace, rank, vec_iadd
from .series import SeriesSpec, series_slices

HALF = Fraction(1, 2)


@dataclass
class TableElement:
    label: str
    parity: int
    slot: str
    obj: object
    multidegree: tuple          # exponents over the graded variables
    twist: Fraction = Fraction(0)  # degree picks up twist * sum(weights)
    coef_degree: int = 0

    def degree(self, weights) -> Fraction:
        d = sum(Fraction(w) * e for w, e in zip(weights, self.multidegree))
        return d + self.twist * sum(weights)


@dataclass
class JacobiReport:
    tested: int = 0
    passed: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.tested == self.passed

    def as_dict(self):
        return {"tested": self.tested, "passed": self.passed, "skipped": self.skipped}


@dataclass
class StructureTable:
    """Basis plus structure constants on the pairs inside the exactness window.

    ``constants[(i, j)]`` (i <= j) is the coordinate dict of [e_i, e_j]; pairs
    missing from ``valid`` fall outside the truncation and are never guessed.
    """
    name: str
    basis: list
    degmax: int
    constants: dict = field(default_factory=dict)
    valid: set = field(default_factory=set)
    shapes: list = field(default_factory=list)   # (frame multidegree, twist) per element kind
    default_weights: tuple | None = None
    failures: list = field(default_factory=list)
    conventions: dict = field(default_factory=dict)
    rule: Callable | None = field(default=None, repr=False)

    def __len__(self):
        return len(self.basis)

    def parity(self, i) -> int:
        return self.basis[i].parity

    def is_valid(self, i, j) -> bool:
        return (i, j) in self.valid if i <= j else (j, i) in self.valid

    def bracket_basis(self, i, j) -> dict | None:
        if i <= j:
            return self.constants.get((i, j), {}) if (i, j) in self.valid else None
        if (j, i) not in self.valid:
            return None
        c = self.constants.get((j, i), {})
        s = 1 if self.basis[i].parity & self.basis[j].parity else -1
        return {k: s * v for k, v in c.items()}

    def bracket(self, u: dict, v: dict) -> dict | None:
        """Bracket of coordinate vectors; None if any needed pair is outside the window."""
        out: dict = {}
        for i, a in u.items():
            for j, b in v.items():
                c = self.bracket_basis(i, j)
                if c is None:
                    return None
                vec_iadd(out, c, a * b)
        return out

    def jacobi(self, max_failures: int = 10) -> JacobiReport:
        return check_jacobi(self, max_failures)


# assembly --------------------------------------------------------------------

def _objdeg(obj) -> int:
    return obj.xdeg()


def _vectorize(parts) -> dict:
    out: dict = {}
    for slot, obj in parts:
        if isinstance(obj, SuperPolynomial):
            items = obj.terms.items()
        else:
            items = obj.vector().items()
        for k, c in items:
            key = (slot, k)
            v = out.get(key, 0) + c
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return out


def _assemble(table: StructureTable, rule: Callable, pair_bound: Callable | None = None) -> StructureTable:
    """Fill structure constants from a slotwise bracket rule.

    ``rule(a, b)`` takes two TableElements and returns a list of (slot, object)
    pieces; ``pair_bound`` predicts the coefficient degree of the result so
    pairs that cannot land inside the window are skipped without computing.
    """
    table.rule = rule
    solver = SpanSolver([_vectorize([(e.slot, e.obj)]) for e in table.basis])
    for i, j in combinations_with_replacement(range(len(table.basis)), 2):
        a, b = table.basis[i], table.basis[j]
        bound = pair_bound(a, b) if pair_bound else a.coef_degree + b.coef_degree - 1
        if bound > table.degmax:
            continue
        try:
            parts = rule(a, b)
        except NotInImageError as exc:
            table.failures.append((i, j, str(exc)))
            continue
        if any(_objdeg(obj) > table.degmax for _, obj in parts):
            continue
        coords = solver.solve(_vectorize(parts))
        if coords is None:
            table.failures.append((i, j, "bracket not in the span of the truncated basis"))
            continue
        table.valid.add((i, j))
        if coords:
            table.constants[(i, j)] = coords
    return table


def raw_bracket(table: StructureTable, i: int, j: int) -> dict:
    """The bracket of e_i and e_j as computed by the table's rule, before solving."""
    return _vectorize(table.rule(table.basis[i], table.basis[j]))


def _neg(parts):
    return [(s, o.scale(-1)) for s, o in parts]


def _field_elements(ctx: JetContext, degmax: int, slot="W") -> list[TableElement]:
    out = []
    m, n = ctx.m, ctx.n
    for d in range(degmax + 1):
        for xexp in x_exponents(m, d):
            for mask in xi_monomials(n):
                key = SuperMonomial(xexp, mask)
                for s in range(m + n):
                    X = monomial_field(ctx, s, key)
                    md = list(xexp) + [(mask >> j) & 1 for j in range(n)]
                    md[s] -= 1
                    par = key.parity if s < m else 1 - key.parity
                    out.append(TableElement(format_field(X), par, slot, X, tuple(md), Fraction(0), d))
    return out


def _shape_fields(m, n=0):
    return [(tuple(-1 if k == s else 0 for k in range(m + n)), Fraction(0)) for s in range(m)]


def _shape_forms(m, k, twist):
    out = []
    for combo in _subsets(m, k):
        out.append((tuple(1 if i in combo else 0 for i in range(m)), Fraction(twist)))
    return out


def _subsets(m, k):
    from itertools import combinations
    return list(combinations(range(m), k))


def _form_elements(ctx: JetContext, k: int, degmax: int, twist, slot="w", closed=False,
                   parity: int = 1) -> list[TableElement]:
    """Forms placed in the odd part of an algebra (parity 1 by default)."""
    out = []
    if closed:
        for f in closed_basis(k, degmax, ctx):
            key = next(iter(f.terms))
            out.append(TableElement(format_form(f), parity, slot, f, form_multidegree(key)[:ctx.m],
                                    Fraction(twist), f.xdeg()))
        return out
    for d in range(degmax + 1):
        for xexp in x_exponents(ctx.m, d):
            for combo in _subsets(ctx.m, k):
                dx = sum(1 << i for i in combo)
                f = DifferentialForm._raw(ctx, {FormKey(xexp, 0, dx, (0,) * ctx.n): Fraction(1)})
                md = tuple(e + (1 if i in combo else 0) for i, e in enumerate(xexp))
                out.append(TableElement(format_form(f), parity, slot, f, md, Fraction(twist), d))
    return out


def _order(elements: list[TableElement]) -> list[TableElement]:
    # even before odd, then by coefficient degree; stable inside each group
    return sorted(elements, key=lambda e: (e.coef_degree, e.parity))


# W(m|n) ----------------------------------------------------------------------------

def build_W_table(m: int, n: int, D: int) -> StructureTable:
    """Monomial basis of W(m|n) with x-degree <= D; brackets computed exactly."""
    ctx = JetContext(m, n, 2 * D + 1)
    basis = _field_elements(ctx, D)
    table = StructureTable(f"W({m}|{n})", basis, D, shapes=_shape_fields(m, n),
                           default_weights=(1,) * (m + n))

    def rule(a, b):
        return [("W", vf_bracket(a.obj, b.obj))]

    return _assemble(table, rule)


# E(5|10) --------------------------------------------------------------------------

def build_E510(degmax: int) -> StructureTable:
    """Even part S_5, odd part closed 2-forms; [X,w] = L_X w, [w,w'] = w^w' read in S_5."""
    ctx = JetContext(5, 0, 2 * degmax + 1)
    spec = SeriesSpec("S", 5, 0)
    evens = [TableElement(format_field(b.field), 0, "S", b.field, b.multidegree[:5], Fraction(0),
                          b.field.xdeg())
             for b in series_slices(spec, degmax, ctx)]
    odds = _form_elements(ctx, 2, degmax, -HALF, closed=True)
    table = StructureTable("E(5|10)", _order(evens + odds), degmax,
                           shapes=_shape_fields(5) + _shape_forms(5, 2, -HALF),
                           default_weights=(2, 2, 2, 2, 2),
                           conventions={"odd-odd": "w ^ w' mapped to S5 by inverting X -> iota_X vol"})

    def rule(a, b):
        if a.slot == "S" and b.slot == "S":
            return [("S", vf_bracket(a.obj, b.obj))]
        if a.slot == "S":
            return [("w", lie_derivative(a.obj, b.obj))]
        if b.slot == "S":
            return _neg([("w", lie_derivative(b.obj, a.obj))])
        return [("S", closedform_to_vf(wedge(a.obj, b.obj)))]

    def bound(a, b):
        extra = 0 if a.slot == b.slot == "w" else -1
        return a.coef_degree + b.coef_degree + extra

    return _assemble(table, rule, bound)


# E(4|4) ---------------------------------------------------------------------------

def _dsym(w1, w2):
    return wedge(ext_d(w1), w2) + wedge(w1, ext_d(w2))


def build_E44(degmax: int, c=1) -> StructureTable:
    """Even part W_4, odd part Omega^1_4(-1/2); [w,w'] = dw^w' + w^dw' read in W_4."""
    ctx = JetContext(4, 0, 2 * degmax + 1)
    evens = _field_elements(ctx, degmax)
    odds = _form_elements(ctx, 1, degmax, -HALF)
    c = Fraction(c)
    table = StructureTable("E(4|4)", _order(evens + odds), degmax,
                           shapes=_shape_fields(4) + _shape_forms(4, 1, -HALF),
                           default_weights=(1, 1, 1, 1),
                           conventions={"odd-odd scale": str(c)})

    def rule(a, b):
        if a.slot == "W" and b.slot == "W":
            return [("W", vf_bracket(a.obj, b.obj))]
        if a.slot == "W":
            return [("w", twisted_action(a.obj, b.obj, -HALF))]
        if b.slot == "W":
            return _neg([("w", twisted_action(b.obj, a.obj, -HALF))])
        X = closedform_to_vf(_dsym(a.obj, b.obj), require_closed=False)
        return [("W", X.scale(c))]

    return _assemble(table, rule)


# E(3|6) ---------------------------------------------------------------------------

SL2 = ("e", "h", "f")
SL2_BRACKET = {("e", "f"): {"h": 1}, ("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}}
# action on C^2 with basis u+, u-
SL2_ACTION = {("e", "u-"): {"u+": 1}, ("f", "u+"): {"u-": 1},
              ("h", "u+"): {"u+": 1}, ("h", "u-"): {"u-": -1}}
# S^2 C^2 -> sl2, the equivariant map uv |-> (w |-> eps(u,w) v + eps(v,w) u)
SYM_TO_SL2 = {("u+", "u+"): {"e": 2}, ("u-", "u-"): {"f": -2},
              ("u+", "u-"): {"h": -1}, ("u-", "u+"): {"h": -1}}
WEDGE_U = {("u+", "u-"): 1, ("u-", "u+"): -1}

# normalizations fixed by the Jacobi identity on the truncated table
E36_WEDGE_SCALE = Fraction(1)
E36_SYM_SCALE = Fraction(1, 2)


def _sl2_bracket(a, b) -> dict:
    if (a, b) in SL2_BRACKET:
        return SL2_BRACKET[(a, b)]
    if (b, a) in SL2_BRACKET:
        return {k: -v for k, v in SL2_BRACKET[(b, a)].items()}
    return {}


def build_E36(degmax: int, c1=None, c2=None) -> StructureTable:
    """Even part W_3 + Omega^0_3 (x) sl2, odd part Omega^1_3(-1/2) (x) C^2."""
    c1 = E36_WEDGE_SCALE if c1 is None else Fraction(c1)
    c2 = E36_SYM_SCALE if c2 is None else Fraction(c2)
    ctx = JetContext(3, 0, 2 * degmax + 1)
    evens = _field_elements(ctx, degmax)
    for d in range(degmax + 1):
        for xexp in x_exponents(3, d):
            f = SuperPolynomial.monomial(ctx, xexp)
            for g in SL2:
                evens.append(TableElement(f"({format_poly(f)}) {g}", 0, g, f, xexp, Fraction(0), d))
    odds = []
    for u in ("u+", "u-"):
        for el in _form_elements(ctx, 1, degmax, -HALF, slot=u):
            el.label = f"({el.label}) {u}"
            odds.append(el)
    table = StructureTable("E(3|6)", _order(evens + odds), degmax,
                           shapes=_shape_fields(3) + [((0, 0, 0), Fraction(0))] + _shape_forms(3, 1, -HALF),
                           default_weights=(2, 2, 2),
                           conventions={"u+ ^ u-": str(c1), "S^2 -> sl2 scale": str(c2)})
    full = 0b111

    def rule(a, b):
        sa, sb = a.slot, b.slot
        if sa == "W" and sb == "W":
            return [("W", vf_bracket(a.obj, b.obj))]
        if sa == "W" and sb in SL2:
            return [(sb, a.obj(b.obj))]
        if sa == "W":
            return [(sb, twisted_action(a.obj, b.obj, -HALF))]
        if sb == "W":
            return _neg(rule(b, a))
        if sa in SL2 and sb in SL2:
            prod = poly_mul(a.obj, b.obj)
            return [(g, prod.scale(c)) for g, c in _sl2_bracket(sa, sb).items()]
        if sa in SL2:
            fw = wedge(DifferentialForm.function(a.obj), b.obj)
            return [(u, fw.scale(c)) for u, c in SL2_ACTION.get((sa, sb), {}).items()]
        if sb in SL2:
            return _neg(rule(b, a))
        out = []
        w = WEDGE_U.get((sa, sb), 0)
        if w:
            X = closedform_to_vf(wedge(a.obj, b.obj), require_closed=False)
            out.append(("W", X.scale(c1 * w)))
        top = _dsym(a.obj, b.obj).component(full, ())
        if top.terms:
            for g, c in SYM_TO_SL2[(sa, sb)].items():
                out.append((g, top.scale(c2 * c)))
        return out

    def bound(a, b):
        both_forms = a.slot not in SL2 and a.slot != "W" and b.slot not in SL2 and b.slot != "W"
        if both_forms or (a.slot in SL2 and b.slot != "W") or (b.slot in SL2 and a.slot != "W"):
            return a.coef_degree + b.coef_degree
        return a.coef_degree + b.coef_degree - 1

    return _assemble(table, rule, bound)


ALGEBRAS = {"E(5|10)": build_E510, "E(3|6)": build_E36, "E(4|4)": build_E44}


def build_table(name: str, degmax: int) -> StructureTable:
    key = name.replace(" ", "")
    if key in ALGEBRAS:
        return ALGEBRAS[key](degmax)
    spec = SeriesSpec.parse(key)
    if spec.tag != "W":
        raise ValueError(f"no structure table builder for {name}")
    return build_W_table(spec.m, spec.n, degmax)


# Jacobi ----------------------------------------------------------------------------

def _jacobi_defect(table, i, j, k):
    """[a,[b,c]] - [[a,b],c] - (-1)^{p(a)p(b)} [b,[a,c]], or None if outside the window."""
    bc = table.bracket_basis(j, k)
    ab = table.bracket_basis(i, j)
    ac = table.bracket_basis(i, k)
    if bc is None or ab is None or ac is None:
        return None
    t1 = table.bracket({i: 1}, bc)
    t2 = table.bracket(ab, {k: 1})
    t3 = table.bracket({j: 1}, ac)
    if t1 is None or t2 is None or t3 is None:
        return None
    sign = -1 if table.parity(i) & table.parity(j) else 1
    out = dict(t1)
    vec_iadd(out, t2, -1)
    vec_iadd(out, t3, -sign)
    return out


def check_jacobi(table: StructureTable, max_failures: int = 10) -> JacobiReport:
    """Super Jacobi on unordered basis triples whose brackets all stay in the window.

    Triples whose degrees already force a result above the truncation are
    counted as skipped without being expanded.
    """
    N = len(table.basis)
    total = N * (N + 1) * (N + 2) // 6
    report = JacobiReport()
    deg = [e.coef_degree for e in table.basis]
    order = sorted(range(N), key=lambda i: deg[i])
    cap = table.degmax + 2
    for a in range(N):
        i = order[a]
        if 3 * deg[i] > cap:
            break
        for b in range(a, N):
            j = order[b]
            if deg[i] + 2 * deg[j] > cap:
                break
            for c in range(b, N):
                k = order[c]
                if deg[i] + deg[j] + deg[k] > cap:
                    break
                defect = _jacobi_defect(table, i, j, k)
                if defect is None:
                    continue
                report.tested += 1
                if defect:
                    if len(report.failures) < max_failures:
                        report.failures.append(((i, j, k), defect))
                else:
                    report.passed += 1
    report.skipped = total - report.tested
    return report


# gradings --------------------------------------------------------------------------

@dataclass
class GradedView:
    table: StructureTable
    weights: tuple
    degrees: list
    components: dict
    depth: int
    complete_below: Fraction | None   # components of degree < this are complete
    consistent: bool

    def dims(self) -> dict:
        return {d: len(ix) for d, ix in sorted(self.components.items())}

    def is_complete(self, d) -> bool:
        return self.complete_below is not None and d < self.complete_below

    def component(self, d) -> list:
        return self.components.get(d, [])

    def parity_of(self, d) -> str:
        ps = {self.table.basis[i].parity for i in self.component(d)}
        return "mixed" if len(ps) > 1 else ("odd" if ps == {1} else "even")


def _monomial_degrees(el: TableElement, weights) -> set:
    """Degrees of the individual monomials of an element, read from its object."""
    out = set()
    tw = el.twist * sum(weights)
    w = [Fraction(x) for x in weights]
    obj = el.obj
    if isinstance(obj, SuperVectorField):
        for s, poly in enumerate(obj.coeffs):
            for key in poly.terms:
                md = list(key.xexp) + [(key.mask >> j) & 1 for j in range(obj.ctx.n)]
                md[s] -= 1
                out.add(sum(a * b for a, b in zip(w, md)) + tw)
        return out
    if isinstance(obj, DifferentialForm):
        for key in obj.terms:
            md = form_multidegree(key)[:len(w)]
            out.add(sum(a * b for a, b in zip(w, md)) + tw)
        return out
    for key in obj.terms:
        out.add(sum(a * b for a, b in zip(w, key.xexp)) + tw)
    return out


def grade_by_weights(table: StructureTable, weights) -> GradedView:
    weights = tuple(int(w) for w in weights)
    nvar = len(table.basis[0].multidegree) if table.basis else len(weights)
    if len(weights) != nvar:
        raise ValueError(f"{table.name} needs {nvar} weights, got {len(weights)}")
    degrees = []
    for el in table.basis:
        ds = _monomial_degrees(el, weights)
        if len(ds) > 1:
            raise ValueError(f"basis element {el.label} is not homogeneous for weights {weights}")
        d = ds.pop() if ds else el.degree(weights)
        if d.denominator != 1:
            raise ValueError(f"basis element {el.label} gets fractional degree {d} under {weights}")
        degrees.append(int(d))
    components: dict = {}
    for i, d in enumerate(degrees):
        components.setdefault(d, []).append(i)
    components = dict(sorted(components.items()))
    depth = max(0, -min(components)) if components else 0
    consistent = all(d % 2 == table.basis[i].parity for i, d in enumerate(degrees))
    wmin = min(weights[:len(table.shapes[0][0])]) if table.shapes else min(weights)
    complete = None
    if wmin > 0 and table.shapes:
        offs = [sum(Fraction(w) * e for w, e in zip(weights, frame)) + tw * sum(weights)
                for frame, tw in table.shapes]
        complete = (table.degmax + 1) * wmin + min(offs)
    return GradedView(table, weights, degrees, components, depth, complete, consistent)


# graded properties -----------------------------------------------------------------

def _status(ok, inconclusive=False):
    return "inconclusive" if inconclusive else ("pass" if ok else "fail")


def check_G1(view: GradedView) -> dict:
    """g_{-j} = [g_{-1}, g_{-j+1}] for 2 <= j <= depth."""
    t = view.table
    detail = {}
    status = "pass"
    g1 = view.component(-1)
    for j in range(2, view.depth + 1):
        target = view.component(-j)
        prev = view.component(-j + 1)
        vecs = []
        bad = False
        for a in g1:
            for b in prev:
                v = t.bracket_basis(a, b)
                if v is None:
                    bad = True
                    break
                if v:
                    vecs.append(v)
            if bad:
                break
        if bad or not view.is_complete(-j):
            detail[-j] = "inconclusive"
            status = "inconclusive" if status == "pass" else status
            continue
        r = rank(vecs)
        inside = all(k in set(target) for v in vecs for k in v)
        ok = r == len(target) and inside
        detail[-j] = {"rank": r, "dim": len(target), "ok": ok}
        if not ok:
            status = "fail"
    return {"status": status, "detail": detail}


def check_transitivity(view: GradedView, jmax: int | None = None) -> dict:
    """For x in g_j (j >= 0): [x, g_{-1}] = 0 implies x = 0."""
    t = view.table
    g1 = view.component(-1)
    detail = {}
    status = "pass"
    degs = [d for d in view.components if d >= 0 and view.is_complete(d)]
    if jmax is not None:
        degs = [d for d in degs if d <= jmax]
    if not degs:
        return {"status": "inconclusive", "detail": {}}
    for d in degs:
        cols = []
        bad = False
        for x in view.component(d):
            col = {}
            for e in g1:
                v = t.bracket_basis(x, e)
                if v is None:
                    bad = True
                    break
                for k, c in v.items():
                    col[(e, k)] = c
            if bad:
                break
            cols.append(col)
        if bad:
            detail[d] = "inconclusive"
            if status == "pass":
                status = "inconclusive"
            continue
        ker = len(nullspace(cols))
        detail[d] = {"kernel": ker, "dim": len(cols)}
        if ker:
            status = "fail"
    return {"status": status, "detail": detail}


def action_matrices(table: StructureTable, acting: list, module: list) -> list | None:
    """Matrices of ad(x), x in ``acting``, restricted to the span of ``module``."""
    pos = {k: r for r, k in enumerate(module)}
    mats = []
    for x in acting:
        M = [[Fraction(0)] * len(module) for _ in module]
        for c, e in enumerate(module):
            v = table.bracket_basis(x, e)
            if v is None:
                return None
            for k, val in v.items():
                if k not in pos:
                    raise ValueError(f"{table.basis[x].label} does not preserve the module")
                M[pos[k]][c] = val
        mats.append(M)
    return mats


def _flat(M):
    return {(r, c): v for r, row in enumerate(M) for c, v in enumerate(row) if v}


def _matmul(A, B):
    n = len(A)
    out = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        Ai, Oi = A[i], out[i]
        for k in range(n):
            a = Ai[k]
            if a:
                Bk = B[k]
                for j in range(n):
                    if Bk[j]:
                        Oi[j] += a * Bk[j]
    return out


def enveloping_dimension(mats: list, n: int) -> int:
    """Dimension of the unital associative algebra generated by ``mats``."""
    ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    red = RowReducer()
    basis = []
    frontier = []
    for M in [ident] + list(mats):
        if red.add(_flat(M)):
            basis.append(M)
            frontier.append(M)
    while frontier:
        new = []
        for A in frontier:
            for G in mats:
                P = _matmul(G, A)
                if red.add(_flat(P)):
                    basis.append(P)
                    new.append(P)
        frontier = new
    return red.rank


def cyclic_span(mats: list, v: list) -> int:
    red = RowReducer()
    n = len(v)
    vecs = [v]
    red.add({i: x for i, x in enumerate(v) if x})
    while vecs:
        new = []
        for u in vecs:
            for M in mats:
                w = [sum(M[r][c] * u[c] for c in range(n) if u[c]) for r in range(n)]
                if red.add({i: x for i, x in enumerate(w) if x}):
                    new.append(w)
        vecs = new
    return red.rank


def irreducibility(mats: list, n: int, seed: int = 0, probes: int = 3) -> dict:
    """Exact irreducibility over C.

    A random vector with a proper cyclic span is an explicit invariant subspace;
    otherwise Burnside's theorem decides: irreducible iff the generated
    associative algebra is all of End(V).
    """
    if n == 0:
        return {"status": "fail", "reason": "zero module"}
    rng = random.Random(seed)
    for _ in range(probes):
        v = [Fraction(rng.randint(-5, 5)) for _ in range(n)]
        if not any(v):
            continue
        s = cyclic_span(mats, v)
        if s < n:
            return {"status": "fail", "reason": "proper cyclic submodule", "witness": [str(x) for x in v],
                    "span": s}
    dim = enveloping_dimension(mats, n)
    return {"status": "pass" if dim == n * n else "fail", "algebra_dim": dim, "full": n * n}


def check_irreducibility(view: GradedView, seed: int = 0) -> dict:
    g0, g1 = view.component(0), view.component(-1)
    if not (view.is_complete(0) and view.is_complete(-1)):
        return {"status": "inconclusive"}
    mats = action_matrices(view.table, g0, g1)
    if mats is None:
        return {"status": "inconclusive"}
    return irreducibility(mats, len(g1), seed)


def check_graded_properties(view: GradedView, seed: int = 0) -> dict:
    dims = view.dims()
    return {
        "G0": {"status": "pass", "dims": dims},
        "G1": check_G1(view),
        "transitivity": check_transitivity(view),
        "irreducibility": check_irreducibility(view, seed),
    }


def center(table: StructureTable, indices: list) -> list[dict] | None:
    """Basis of {x in span(indices) : [x, y] = 0 for all y in span(indices)}."""
    cols = []
    for x in indices:
        col = {}
        for y in indices:
            v = table.bracket_basis(x, y)
            if v is None:
                return None
            for k, c in v.items():
                col[(y, k)] = c
        cols.append(col)
    return [{indices[j]: c for j, c in v.items()} for v in nullspace(cols)]


def derived_rank(table: StructureTable, indices: list) -> int | None:
    vecs = []
    for a in indices:
        for b in indices:
            v = table.bracket_basis(a, b)
            if v is None:
                return None
            if v:
                vecs.append(v)
    return rank(vecs)


# strong transitivity ---------------------------------------------------------------

def _unit(n, i, j):
    M = [[Fraction(0)] * n for _ in range(n)]
    M[i][j] = Fraction(1)
    return M


def gl_matrices(n: int) -> list:
    return [_unit(n, i, j) for i in range(n) for j in range(n)]


def sl_matrices(n: int) -> list:
    out = [_unit(n, i, j) for i in range(n) for j in range(n) if i != j]
    for i in range(n - 1):
        M = _unit(n, i, i)
        M[i + 1][i + 1] = Fraction(-1)
        out.append(M)
    return out


def sp_matrices(n: int) -> list:
    """sp(n) for n = 2k, preserving J = [[0, I], [-I, 0]]: matrices [[A, B], [C, -A^T]], B, C symmetric."""
    if n % 2:
        raise ValueError("sp needs an even dimension")
    k = n // 2
    out = []
    for i in range(k):
        for j in range(k):
            M = _unit(n, i, j)
            M[k + j][k + i] = Fraction(-1)
            out.append(M)
    for i in range(k):
        for j in range(i, k):
            B = _unit(n, i, k + j)
            B[j][k + i] = Fraction(1)
            C = _unit(n, k + i, j)
            C[k + j][i] = Fraction(1)
            out.extend([B, C])
    return out


def csp_matrices(n: int) -> list:
    ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    return sp_matrices(n) + [ident]


def torus_matrices(n: int) -> list:
    return [_unit(n, i, i) for i in range(n)]


@dataclass
class TransitivityVerdict:
    status: str                  # pass | fail | inconclusive
    witness: list | None = None
    span: int | None = None
    trials: int = 0
    note: str = "pass is probabilistic evidence from seeded samples"


def strong_transitivity_check(mats: list, dim: int, trials: int = 50, seed: int = 0,
                              even: list | None = None) -> TransitivityVerdict:
    """Test p.x = V for non-zero even x.

    Coordinate vectors are probed first (they expose degenerate orbits such as
    those of a torus), then ``trials`` seeded random even vectors.
    """
    even_idx = list(range(dim)) if even is None else [i for i in range(dim) if even[i]]
    if not even_idx:
        return TransitivityVerdict("inconclusive", note="no even coordinates")
    rng = random.Random(seed)
    probes = []
    for i in even_idx:
        v = [Fraction(0)] * dim
        v[i] = Fraction(1)
        probes.append(v)
    for _ in range(trials):
        v = [Fraction(0)] * dim
        while not any(v):
            for i in even_idx:
                v[i] = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        probes.append(v)
    for v in probes:
        images = []
        for M in mats:
            w = {r: sum(M[r][c] * v[c] for c in range(dim)) for r in range(dim)}
            images.append({r: x for r, x in w.items() if x})
        r = rank(images)
        if r < dim:
            return TransitivityVerdict("fail", [str(x) for x in v], r, len(probes))
    return TransitivityVerdict("pass", None, dim, len(probes))


__all__ = [
    "TableElement", "StructureTable", "JacobiReport", "GradedView", "TransitivityVerdict",
    "build_W_table", "build_E510", "build_E36", "build_E44", "build_table",
    "check_jacobi", "grade_by_weights", "check_graded_properties", "check_G1",
    "check_transitivity", "check_irreducibility", "irreducibility", "action_matrices",
    "center", "derived_rank", "raw_bracket", "strong_transitivity_check",
    "gl_matrices", "sl_matrices", "sp_matrices", "csp_matrices", "torus_matrices",
]
