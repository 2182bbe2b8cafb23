"""Subalgebra series of W(m|n): membership tests and truncated bases.

Every series is cut out of W(m|n) by a linear condition on the field, so the
same constraint map serves both the membership predicate and the basis
generator (a kernel computation per graded slice).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .core import (
    JetContext,
    LaurentContext,
    SuperMonomial,
    SuperPolynomial,
    as_scalar,
)
from .errors import InconclusiveError, SeriesSpecError
from .fields import SuperVectorField, bracket, divergence, monomial_field
from .forms import DifferentialForm, lie_derivative, wedge, x_exponents, xi_monomials
from .linalg import SpanSolver, nullspace

TAGS = ("W", "S", "CS", "H", "CH", "K", "HO", "SHO", "KO", "Stilde", "SHOtilde")
_DISPLAY = {"Stilde": "S~", "SHOtilde": "SHO~"}


@dataclass(frozen=True)
class SeriesSpec:
    tag: str
    m: int
    n: int

    def __post_init__(self):
        t, m, n = self.tag, self.m, self.n
        if t not in TAGS:
            raise SeriesSpecError(f"unknown series {t!r}")
        if m < 0 or n < 0:
            raise SeriesSpecError(f"negative dimension in {self}")
        if t in ("H", "CH") and m % 2:
            raise SeriesSpecError(f"{self}: H needs m = 2k")
        if t == "K" and m % 2 == 0:
            raise SeriesSpecError(f"{self}: K needs m = 2k+1")
        if t in ("HO", "SHO") and n != m:
            raise SeriesSpecError(f"{self}: HO/SHO need n = m")
        if t == "KO" and n != m + 1:
            raise SeriesSpecError(f"{self}: KO needs n = m+1")
        if t == "Stilde" and (m != 0 or n % 2):
            raise SeriesSpecError(f"{self}: S~ is defined for (0|n), n even")
        if t == "SHOtilde" and (n != m or m % 2):
            raise SeriesSpecError(f"{self}: SHO~ needs n = m, m even")

    @classmethod
    def parse(cls, text: str) -> SeriesSpec:
        mt = re.fullmatch(r"\s*([A-Z]+)(~?)\((\d+)\|(\d+)\)\s*", text)
        if not mt:
            raise SeriesSpecError(f"cannot parse series {text!r}")
        tag = mt.group(1) + ("tilde" if mt.group(2) else "")
        return cls(tag, int(mt.group(3)), int(mt.group(4)))

    @property
    def base_tag(self) -> str:
        return {"Stilde": "S", "SHOtilde": "SHO"}.get(self.tag, self.tag)

    def weights(self, contact: bool = True) -> tuple[tuple, tuple]:
        """Degrees of (x_1..x_m) and (xi_1..xi_n)."""
        xw = [1] * self.m
        xiw = [1] * self.n
        if contact and self.tag == "K":
            xw[-1] = 2
        if contact and self.tag == "KO":
            xiw[-1] = 2
        return tuple(xw), tuple(xiw)

    def __str__(self):
        return f"{_DISPLAY.get(self.tag, self.tag)}({self.m}|{self.n})"


# canonical forms ---------------------------------------------------------------

def omega_s(ctx) -> DifferentialForm:
    k = ctx.m // 2
    out = DifferentialForm.zero(ctx)
    for i in range(1, k + 1):
        out = out + DifferentialForm.dx(ctx, i, k + i)
    for j in range(1, ctx.n + 1):
        out = out + DifferentialForm.dxi(ctx, j, 2)
    return out


def omega_c(ctx) -> DifferentialForm:
    m = ctx.m
    k = (m - 1) // 2
    out = DifferentialForm.dx(ctx, m)
    for i in range(1, k + 1):
        out = out + wedge(DifferentialForm.function(SuperPolynomial.x(ctx, i)),
                          DifferentialForm.dx(ctx, k + i))
    for j in range(1, ctx.n + 1):
        out = out + wedge(DifferentialForm.function(SuperPolynomial.xi(ctx, j)),
                          DifferentialForm.dxi(ctx, j))
    return out


def omega_os(ctx) -> DifferentialForm:
    out = DifferentialForm.zero(ctx)
    for i in range(1, ctx.m + 1):
        out = out + wedge(DifferentialForm.dx(ctx, i), DifferentialForm.dxi(ctx, i))
    return out


def omega_oc(ctx) -> DifferentialForm:
    m = ctx.m
    out = DifferentialForm.dxi(ctx, m + 1)
    for i in range(1, m + 1):
        out = out + wedge(DifferentialForm.function(SuperPolynomial.xi(ctx, i)),
                          DifferentialForm.dx(ctx, i))
        out = out + wedge(DifferentialForm.function(SuperPolynomial.x(ctx, i)),
                          DifferentialForm.dxi(ctx, i))
    return out


def canonical_form(tag: str, ctx) -> DifferentialForm:
    return {"H": omega_s, "CH": omega_s, "K": omega_c, "HO": omega_os,
            "SHO": omega_os, "KO": omega_oc}[tag](ctx)


def _unit_dxi(n, j):
    e = [0] * n
    e[j - 1] = 1
    return tuple(e)


def _multiplier_slot(tag: str, ctx) -> tuple[int, tuple]:
    """Pure form part whose coefficient in omega is 1 (reads off the multiplier)."""
    zeros = (0,) * ctx.n
    if tag == "K":
        return 1 << (ctx.m - 1), zeros
    if tag == "KO":
        return 0, _unit_dxi(ctx.n, ctx.m + 1)
    # CH: first symplectic pair, or (dxi_1)^2 when m = 0
    k = ctx.m // 2
    if k:
        return (1 << 0) | (1 << k), zeros
    e = [0] * ctx.n
    e[0] = 2
    return 0, tuple(e)


# membership ------------------------------------------------------------------------

@dataclass
class Verdict:
    member: bool
    witness: Any = None
    defect: Any = None

    def __bool__(self):
        return self.member


def _work_context(ctx):
    # coefficients are exact polynomials; widen so f*omega never truncates
    return ctx.widened(2) if isinstance(ctx, JetContext) else ctx


def tilde_factor(ctx, sign=1) -> SuperPolynomial:
    top = SuperPolynomial.monomial(ctx, None, range(1, ctx.n + 1))
    return SuperPolynomial.const(ctx) + top.scale(sign)


def _check_dims(spec: SeriesSpec, ctx):
    if (ctx.m, ctx.n) != (spec.m, spec.n):
        raise SeriesSpecError(f"{spec} does not match context {ctx}")


def constraint(spec: SeriesSpec, X: SuperVectorField) -> tuple[dict, Any]:
    """Linear defect map of the series, and the witness it extracts.

    The defect dict is empty exactly when X belongs to the series.
    """
    tag = spec.base_tag
    if spec.tag in ("Stilde", "SHOtilde"):
        X = X.mul_function(tilde_factor(X.ctx, -1))
    if tag == "W":
        return {}, None
    if tag in ("S", "CS"):
        div = divergence(X)
        if tag == "S":
            return dict(div.terms), div
        c = div.constant_term()
        rest = div - SuperPolynomial.const(X.ctx, c)
        return dict(rest.terms), c
    if isinstance(X.ctx, LaurentContext):
        raise SeriesSpecError(f"{spec} needs differential forms, unavailable over {X.ctx}")
    omega = canonical_form(tag, X.ctx)
    lx = lie_derivative(X, omega)
    if tag in ("H", "HO"):
        return dict(lx.terms), None
    if tag == "SHO":
        div = divergence(X)
        out = {("L", k): v for k, v in lx.terms.items()}
        out.update({("div", k): v for k, v in div.terms.items()})
        return out, None
    dx, dxi = _multiplier_slot(tag, X.ctx)
    f = lx.component(dx, dxi)
    if tag == "CH":
        f = SuperPolynomial.const(X.ctx, f.constant_term())
    residual = lx - wedge(DifferentialForm.function(f), omega)
    witness = f.constant_term() if tag == "CH" else f
    return dict(residual.terms), witness


def membership(X: SuperVectorField, spec: SeriesSpec) -> Verdict:
    _check_dims(spec, X.ctx)
    ctx = X.ctx
    work = _work_context(ctx)
    Xw = X.recontext(work) if work != ctx else X
    defect, witness = constraint(spec, Xw)
    if isinstance(witness, SuperPolynomial) and work != ctx and witness.xdeg() <= ctx.D:
        witness = witness.recontext(ctx)
    if defect:
        obj = _defect_object(spec, Xw, defect)
        if isinstance(obj, SuperPolynomial) and work != ctx and obj.xdeg() <= ctx.D:
            obj = obj.recontext(ctx)
        return Verdict(False, None, obj)
    return Verdict(True, witness, None)


def _defect_object(spec, X, defect: dict):
    tag = spec.base_tag
    if tag in ("S", "CS"):
        return SuperPolynomial._raw(X.ctx, defect)
    if tag == "SHO":
        return {"lie": DifferentialForm._raw(X.ctx, {k[1]: v for k, v in defect.items() if k[0] == "L"}),
                "div": SuperPolynomial._raw(X.ctx, {k[1]: v for k, v in defect.items() if k[0] == "div"})}
    return DifferentialForm._raw(X.ctx, defect)


# bases -------------------------------------------------------------------------------

def _field_degree(key: SuperMonomial, slot: int, xw, xiw) -> int:
    m = len(xw)
    d = sum(w * e for w, e in zip(xw, key.xexp))
    d += sum(xiw[j - 1] for j in key.xi)
    return d - (xw[slot] if slot < m else xiw[slot - m])


def _multidegree(key: SuperMonomial, slot: int, m: int, n: int) -> tuple:
    v = list(key.xexp) + [(key.mask >> j) & 1 for j in range(n)]
    v[slot] -= 1
    return tuple(v)


def candidate_fields(m: int, n: int, degmax: int, xw, xiw):
    """Monomial fields (slot, key) of weighted field degree <= degmax - 1."""
    out = []
    top = degmax - 1
    for slot in range(m + n):
        wv = xw[slot] if slot < m else xiw[slot - m]
        bound = top + wv
        for d in range(max(bound, -1) + 1):
            for xexp in x_exponents(m, d):
                xd = sum(w * e for w, e in zip(xw, xexp))
                if xd > bound:
                    continue
                for mask in xi_monomials(n):
                    key = SuperMonomial(xexp, mask)
                    if _field_degree(key, slot, xw, xiw) <= top:
                        out.append((slot, key))
    return out


@dataclass
class BasisElement:
    field: SuperVectorField
    degree: int
    parity: int
    multidegree: tuple | None = None
    support: list = field(default_factory=list)


def series_slices(spec: SeriesSpec, degmax: int, ctx: JetContext | None = None,
                  contact_weights: bool = True) -> list[BasisElement]:
    """Basis of the slice of the series with coefficient degree <= degmax.

    Under the default weights a field of degree j has coefficients of degree
    j+1, so ``degmax`` bounds field degrees by degmax-1.  Elements come grouped
    by (degree, parity[, multidegree]) in a fixed order.
    """
    base = SeriesSpec(spec.base_tag, spec.m, spec.n)
    xw, xiw = base.weights(contact_weights)
    cands = candidate_fields(spec.m, spec.n, degmax, xw, xiw)
    need = max((sum(k.xexp) for _, k in cands), default=0)
    if ctx is None:
        ctx = JetContext(spec.m, spec.n, max(need, 0))
    else:
        _check_dims(spec, ctx)
        if need > ctx.D:
            raise InconclusiveError(
                f"{spec} slice of degree {degmax} needs x-degree {need} > D = {ctx.D}")
    multi = base.tag in ("W", "S", "CS")
    groups: dict = {}
    for slot, key in cands:
        deg = _field_degree(key, slot, xw, xiw)
        par = key.parity if slot < spec.m else 1 - key.parity
        md = _multidegree(key, slot, spec.m, spec.n) if multi else None
        groups.setdefault((deg, par, md), []).append((slot, key))
    work = _work_context(ctx)
    out = []
    for gkey in sorted(groups, key=lambda g: (g[0], g[1], g[2] or ())):
        members = groups[gkey]
        if base.tag == "W":
            kernel = [{j: Fraction(1)} for j in range(len(members))]
        else:
            cols = [constraint(base, monomial_field(work, slot, key))[0] for slot, key in members]
            kernel = nullspace(cols)
        for vec in kernel:
            X = SuperVectorField.zero(ctx)
            for j, c in sorted(vec.items()):
                slot, key = members[j]
                X = X + monomial_field(ctx, slot, key, c)
            out.append(BasisElement(X, gkey[0], gkey[1], gkey[2], sorted(vec)))
    if spec.tag in ("Stilde", "SHOtilde"):
        twisted = tilde_twist([b.field for b in out], spec.n)
        out = [BasisElement(t, b.degree, b.parity, b.multidegree, b.support)
               for t, b in zip(twisted, out)]
    return out


def series_basis(spec: SeriesSpec, degmax: int, ctx: JetContext | None = None,
                 contact_weights: bool = True) -> list[SuperVectorField]:
    return [b.field for b in series_slices(spec, degmax, ctx, contact_weights)]


def tilde_twist(fields: list[SuperVectorField], n: int) -> list[SuperVectorField]:
    """Multiply each field by the even function 1 + xi_1...xi_n (n even)."""
    if n % 2:
        raise SeriesSpecError(f"the tilde construction needs an even number of odd variables, got {n}")
    out = []
    for X in fields:
        if X.ctx.n != n:
            raise SeriesSpecError(f"field lives in {X.ctx}, expected n = {n}")
        out.append(X.mul_function(tilde_factor(X.ctx)))
    return out


def span_closure(fields: list[SuperVectorField]) -> tuple[bool, list]:
    """Whether all pairwise brackets lie in the span; returns offending pairs."""
    solver = SpanSolver([X.vector() for X in fields])
    bad = []
    for i, X in enumerate(fields):
        for j in range(i, len(fields)):
            if solver.solve(bracket(X, fields[j]).vector()) is None:
                bad.append((i, j))
    return not bad, bad


def in_span(fields: list[SuperVectorField], X: SuperVectorField) -> bool:
    return SpanSolver([Y.vector() for Y in fields]).solve(X.vector()) is not None


# the deformed divergence family over Laurent windows -----------------------------------

def deformed_membership_S(X: SuperVectorField, epsilon: int, a) -> Verdict:
    """X in S_(n),eps,a  iff  div(gX) + a * (d/dx-coefficient of gX) = 0, g = 1 + eps*xi_1...xi_n.

    The factor e^{ax} is invertible, so it is divided out of the defining
    condition.  Raises InconclusiveError when d/dx leaves the exponent window.
    """
    ctx = X.ctx
    if not isinstance(ctx, LaurentContext):
        raise SeriesSpecError("the deformed family is defined over a Laurent context")
    if epsilon not in (0, 1):
        raise SeriesSpecError(f"epsilon must be 0 or 1, got {epsilon}")
    a = as_scalar(a)
    g = tilde_factor(ctx) if epsilon else SuperPolynomial.const(ctx)
    gX = X.mul_function(g)
    defect = divergence(gX) + gX.px[0].scale(a)
    if defect.is_zero():
        return Verdict(True, None, None)
    return Verdict(False, None, defect)


def laurent_window_fields(ctx: LaurentContext, certifiable: bool = True) -> list[SuperVectorField]:
    """Monomial fields x^k xi^B d/dx, x^k xi^B d/dxi_j with k in the window.

    With ``certifiable`` the d/dx-coefficients stay one step inside the lower
    edge (k = lo is kept only when lo = 0) so their divergence is computable.
    """
    out = []
    for slot in range(1 + ctx.n):
        for k in range(ctx.lo, ctx.hi + 1):
            if certifiable and slot == 0 and k == ctx.lo and k != 0:
                continue
            for mask in xi_monomials(ctx.n):
                out.append(monomial_field(ctx, slot, SuperMonomial((k,), mask)))
    return out


def laurent_divfree_basis(ctx: LaurentContext) -> list[SuperVectorField]:
    """Kernel of div on the certifiable window fields."""
    fields = laurent_window_fields(ctx)
    cols = [dict(divergence(X).terms) for X in fields]
    out = []
    for vec in nullspace(cols):
        X = SuperVectorField.zero(ctx)
        for j, c in sorted(vec.items()):
            X = X + fields[j].scale(c)
        out.append(X)
    return out


# filtration and growth ------------------------------------------------------------------

@dataclass
class FiltrationReport:
    spec: SeriesSpec
    dims: list
    growth: int | None
    note: str = "estimate at truncation"


def growth_estimate(dims: list) -> int | None:
    """Smallest polynomial degree fitting the tail of ``dims`` (finite differences)."""
    tail = dims[len(dims) // 2:]
    if len(tail) < 4:
        tail = dims[-4:]
    seq = list(tail)
    for k in range(len(tail) - 1):
        seq = [b - a for a, b in zip(seq, seq[1:])]
        if all(v == 0 for v in seq):
            return k
    return None


def filtration_dims(spec: SeriesSpec, jmax: int, ctx: JetContext | None = None) -> FiltrationReport:
    """d_j = dim L / L_j for j = 0..jmax, where L_j holds fields of degree > j."""
    elems = series_slices(spec, jmax + 1, ctx)
    dims = [sum(1 for b in elems if b.degree <= j) for j in range(jmax + 1)]
    return FiltrationReport(spec, dims, growth_estimate(dims))


__all__ = [
    "SeriesSpec", "Verdict", "membership", "constraint", "series_basis", "series_slices",
    "tilde_twist", "deformed_membership_S", "filtration_dims", "growth_estimate",
    "omega_s", "omega_c", "omega_os", "omega_oc", "span_closure", "in_span",
    "laurent_window_fields", "laurent_divfree_basis",
]
