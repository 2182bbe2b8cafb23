"""Super vector fields: the Lie superalgebra W(m|n) acting on O_m<n>."""
from __future__ import annotations

import re
from typing import Sequence

from .core import (
    Context,
    SuperMonomial,
    SuperPolynomial,
    as_scalar,
    check_same,
    format_monomial,
    join_terms,
    monomial_sort_key,
    parse_factors,
    partial_x,
    partial_xi,
    poly_mul,
    split_signed_terms,
)


class SuperVectorField:
    """sum_i px[i] d/dx_{i+1} + sum_j qxi[j] d/dxi_{j+1}."""

    __slots__ = ("ctx", "px", "qxi")

    def __init__(self, ctx: Context, px: Sequence[SuperPolynomial] | None = None,
                 qxi: Sequence[SuperPolynomial] | None = None):
        zero = SuperPolynomial.zero(ctx)
        px = tuple(px) if px is not None else (zero,) * ctx.m
        qxi = tuple(qxi) if qxi is not None else (zero,) * ctx.n
        if len(px) != ctx.m or len(qxi) != ctx.n:
            raise ValueError(f"field needs {ctx.m} x- and {ctx.n} xi-coefficients")
        for c in px + qxi:
            check_same(ctx, c.ctx)
        self.ctx = ctx
        self.px = px
        self.qxi = qxi

    @classmethod
    def zero(cls, ctx):
        return cls(ctx)

    @classmethod
    def d_x(cls, ctx, i, coeff: SuperPolynomial | None = None):
        """coeff * d/dx_i (coeff defaults to 1)."""
        px = [SuperPolynomial.zero(ctx)] * ctx.m
        if not 1 <= i <= ctx.m:
            raise IndexError(f"d/dx{i} not in {ctx}")
        px[i - 1] = coeff if coeff is not None else SuperPolynomial.const(ctx)
        return cls(ctx, px, None)

    @classmethod
    def d_xi(cls, ctx, j, coeff: SuperPolynomial | None = None):
        qxi = [SuperPolynomial.zero(ctx)] * ctx.n
        if not 1 <= j <= ctx.n:
            raise IndexError(f"d/dxi{j} not in {ctx}")
        qxi[j - 1] = coeff if coeff is not None else SuperPolynomial.const(ctx)
        return cls(ctx, None, qxi)

    @property
    def coeffs(self) -> tuple:
        return self.px + self.qxi

    def __add__(self, other):
        check_same(self.ctx, other.ctx)
        return SuperVectorField(self.ctx, [a + b for a, b in zip(self.px, other.px)],
                                [a + b for a, b in zip(self.qxi, other.qxi)])

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return SuperVectorField(self.ctx, [a.scale(c) for a in self.px],
                                [a.scale(c) for a in self.qxi])

    def __rmul__(self, c):
        return self.scale(c)

    def mul_function(self, f: SuperPolynomial) -> SuperVectorField:
        """Left multiplication f * X (coefficientwise)."""
        return SuperVectorField(self.ctx, [poly_mul(f, a) for a in self.px],
                                [poly_mul(f, a) for a in self.qxi])

    def __eq__(self, other):
        if not isinstance(other, SuperVectorField):
            return NotImplemented
        return self.ctx == other.ctx and self.px == other.px and self.qxi == other.qxi

    def __hash__(self):
        return hash((self.ctx, self.px, self.qxi))

    def is_zero(self) -> bool:
        return not any(c.terms for c in self.coeffs)

    def parities(self) -> set:
        out = set()
        for c in self.px:
            out.update(k.parity for k in c.terms)
        for c in self.qxi:
            out.update(1 - k.parity for k in c.terms)
        return out

    def parity(self) -> int:
        """0 or 1; raises for mixed fields.  The zero field counts as even."""
        ps = self.parities()
        if len(ps) > 1:
            raise ValueError(f"field {self} is not homogeneous")
        return ps.pop() if ps else 0

    def homogeneous_parts(self) -> dict:
        out = {}
        for p in (0, 1):
            px = [SuperPolynomial._raw(self.ctx, {k: c for k, c in a.terms.items() if k.parity == p})
                  for a in self.px]
            qxi = [SuperPolynomial._raw(self.ctx, {k: c for k, c in a.terms.items() if k.parity != p})
                   for a in self.qxi]
            part = SuperVectorField(self.ctx, px, qxi)
            if not part.is_zero():
                out[p] = part
        return out

    def xdeg(self) -> int:
        return max((c.xdeg() for c in self.coeffs), default=-1)

    def recontext(self, ctx) -> SuperVectorField:
        return SuperVectorField(ctx, [a.recontext(ctx) for a in self.px],
                                [a.recontext(ctx) for a in self.qxi])

    def vector(self) -> dict:
        """Flat coordinates {(slot, monomial): c}; slots 0..m-1 are x, m.. are xi."""
        out = {}
        for s, c in enumerate(self.coeffs):
            for k, v in c.terms.items():
                out[(s, k)] = v
        return out

    @classmethod
    def from_vector(cls, ctx, vec: dict) -> SuperVectorField:
        buckets = [dict() for _ in range(ctx.m + ctx.n)]
        for (s, k), v in vec.items():
            buckets[s][k] = v
        polys = [SuperPolynomial(ctx, b) for b in buckets]
        return cls(ctx, polys[:ctx.m], polys[ctx.m:])

    def __call__(self, f: SuperPolynomial) -> SuperPolynomial:
        return apply(self, f)

    def __str__(self):
        return format_field(self)

    def __repr__(self):
        return f"SuperVectorField({self.ctx}, {format_field(self)!r})"


def apply(X: SuperVectorField, f: SuperPolynomial) -> SuperPolynomial:
    check_same(X.ctx, f.ctx)
    out = SuperPolynomial.zero(X.ctx)
    for i, P in enumerate(X.px, 1):
        if P.terms:
            df = partial_x(f, i)
            if df.terms:
                out = out + poly_mul(P, df)
    for j, Qj in enumerate(X.qxi, 1):
        if Qj.terms:
            df = partial_xi(f, j)
            if df.terms:
                out = out + poly_mul(Qj, df)
    return out


def _bracket_homogeneous(X, px, Y, py):
    sign = -1 if px & py else 1
    cx, cy = X.coeffs, Y.coeffs
    out = []
    for a, b in zip(cx, cy):
        c = apply(X, b)
        t = apply(Y, a)
        out.append(c + t if sign < 0 else c - t)
    m = X.ctx.m
    return SuperVectorField(X.ctx, out[:m], out[m:])


def bracket(X: SuperVectorField, Y: SuperVectorField) -> SuperVectorField:
    """[X, Y] = XY - (-1)^{p(X)p(Y)} YX, extended bilinearly to mixed fields."""
    check_same(X.ctx, Y.ctx)
    total = SuperVectorField.zero(X.ctx)
    for px, Xh in X.homogeneous_parts().items():
        for py, Yh in Y.homogeneous_parts().items():
            total = total + _bracket_homogeneous(Xh, px, Yh, py)
    return total


def divergence(X: SuperVectorField) -> SuperPolynomial:
    """sum_i dP_i/dx_i + sum_j (-1)^{p(Q_j)} dQ_j/dxi_j, signs applied termwise."""
    out = SuperPolynomial.zero(X.ctx)
    for i, P in enumerate(X.px, 1):
        out = out + partial_x(P, i)
    for j, Qj in enumerate(X.qxi, 1):
        for par, part in Qj.homogeneous_parts().items():
            d = partial_xi(part, j)
            out = out - d if par else out + d
    return out


# text form -------------------------------------------------------------------

def format_field(X: SuperVectorField) -> str:
    pieces = []
    names = [f"d/dx{i}" for i in range(1, X.ctx.m + 1)] + [f"d/dxi{j}" for j in range(1, X.ctx.n + 1)]
    for name, c in zip(names, X.coeffs):
        for k in sorted(c.terms, key=monomial_sort_key):
            body = format_monomial(k)
            pieces.append((c.terms[k], f"{body} {name}" if body else name))
    return join_terms(pieces)


_DERIV = re.compile(r"^d/d(xi|x)(\d+)$")


def parse_field(ctx: Context, text: str) -> SuperVectorField:
    """Parse ``x1^2 d/dx1 + xi1 xi2 d/dxi2``."""
    total = SuperVectorField.zero(ctx)
    for sign, body in split_signed_terms(text):
        tokens = body.split()
        if not tokens:
            raise ValueError(f"dangling sign in {text!r}")
        mt = _DERIV.match(tokens[-1])
        if not mt:
            raise ValueError(f"term {body!r} does not end with a derivation")
        coeff = parse_factors(ctx, tokens[:-1]).scale(sign)
        idx = int(mt.group(2))
        if mt.group(1) == "x":
            total = total + SuperVectorField.d_x(ctx, idx, coeff)
        else:
            total = total + SuperVectorField.d_xi(ctx, idx, coeff)
    return total


def monomial_field(ctx, slot: int, key: SuperMonomial, c=1) -> SuperVectorField:
    """c * x^a xi^B * d/d(slot) with slot < m an x-index, else xi-index m+j-1."""
    poly = SuperPolynomial._raw(ctx, {key: as_scalar(c)})
    if slot < ctx.m:
        return SuperVectorField.d_x(ctx, slot + 1, poly)
    return SuperVectorField.d_xi(ctx, slot - ctx.m + 1, poly)


def euler_field(ctx) -> SuperVectorField:
    return SuperVectorField(ctx, [SuperPolynomial.x(ctx, i) for i in range(1, ctx.m + 1)],
                            [SuperPolynomial.xi(ctx, j) for j in range(1, ctx.n + 1)])
