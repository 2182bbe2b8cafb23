"""Super differential forms Omega(m|n) over a jet context.

A term is ``c * x^a xi_A dx_B (dxi)^e``: the function part first, then the dx
factors in ascending order, then the (commuting) dxi powers.  Parities: xi and
dx are odd, x and dxi are even, so moving xi_C left past dx_B costs
(-1)^{|B||C|}.
"""
from __future__ import annotations

from itertools import combinations
from typing import Iterable, NamedTuple

from .core import (
    JetContext,
    SuperMonomial,
    SuperPolynomial,
    as_scalar,
    check_same,
    format_monomial,
    indices_mask,
    join_terms,
    mask_indices,
    merge_sign,
    monomial_sort_key,
    popcount,
)
from .errors import InconclusiveError, NotInImageError
from .fields import SuperVectorField, divergence
from .linalg import nullspace, vec_iadd


class FormKey(NamedTuple):
    xexp: tuple
    mask: int
    dx: int
    dxi: tuple

    @property
    def base(self) -> SuperMonomial:
        return SuperMonomial(self.xexp, self.mask)

    @property
    def degree(self) -> int:
        return popcount(self.dx) + sum(self.dxi)

    @property
    def parity(self) -> int:
        return (popcount(self.mask) + popcount(self.dx)) & 1


class DifferentialForm:
    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: JetContext, terms: dict | None = None):
        self.ctx = ctx
        self.terms = {}
        for key, c in (terms or {}).items():
            key = FormKey(tuple(key[0]), key[1], key[2], tuple(key[3]))
            if c and _fits(ctx, key):
                self.terms[key] = as_scalar(c)

    @classmethod
    def _raw(cls, ctx, terms):
        f = cls.__new__(cls)
        f.ctx = ctx
        f.terms = terms
        return f

    @classmethod
    def zero(cls, ctx):
        return cls._raw(ctx, {})

    @classmethod
    def function(cls, f: SuperPolynomial):
        zeros = (0,) * f.ctx.n
        return cls._raw(f.ctx, {FormKey(k.xexp, k.mask, 0, zeros): c for k, c in f.terms.items()})

    @classmethod
    def dx(cls, ctx, *indices):
        """dx_{i1} ^ dx_{i2} ^ ... in the given order (sign-normalized)."""
        from .core import sort_sign
        ordered = sort_sign(indices)
        if ordered is None:
            return cls.zero(ctx)
        sign, mask = ordered
        return cls._raw(ctx, {FormKey((0,) * ctx.m, 0, mask, (0,) * ctx.n): as_scalar(sign)})

    @classmethod
    def dxi(cls, ctx, j, power=1):
        e = [0] * ctx.n
        e[j - 1] = power
        return cls._raw(ctx, {FormKey((0,) * ctx.m, 0, 0, tuple(e)): as_scalar(1)})

    @classmethod
    def volume(cls, ctx):
        return cls.dx(ctx, *range(1, ctx.m + 1))

    def __add__(self, other):
        check_same(self.ctx, other.ctx)
        out = dict(self.terms)
        vec_iadd(out, other.terms)
        return DifferentialForm._raw(self.ctx, out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        check_same(self.ctx, other.ctx)
        out = dict(self.terms)
        vec_iadd(out, other.terms, -1)
        return DifferentialForm._raw(self.ctx, out)

    def scale(self, c):
        c = as_scalar(c)
        if not c:
            return DifferentialForm.zero(self.ctx)
        return DifferentialForm._raw(self.ctx, {k: c * v for k, v in self.terms.items()})

    def __rmul__(self, c):
        if isinstance(c, SuperPolynomial):
            return wedge(DifferentialForm.function(c), self)
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set:
        return {k.degree for k in self.terms}

    def parity(self) -> int:
        ps = {k.parity for k in self.terms}
        if len(ps) > 1:
            raise ValueError("mixed-parity form")
        return ps.pop() if ps else 0

    def xdeg(self) -> int:
        return max((sum(k.xexp) for k in self.terms), default=-1)

    def recontext(self, ctx) -> DifferentialForm:
        if (ctx.m, ctx.n) != (self.ctx.m, self.ctx.n):
            raise ValueError(f"{self.ctx} -> {ctx}")
        return DifferentialForm(ctx, self.terms)

    def component(self, dx: int, dxi: tuple) -> SuperPolynomial:
        """Function coefficient of the pure form part dx_B (dxi)^e."""
        return SuperPolynomial._raw(self.ctx, {
            k.base: c for k, c in self.terms.items() if k.dx == dx and k.dxi == dxi})

    def vector(self) -> dict:
        return dict(self.terms)

    def __str__(self):
        return format_form(self)

    def __repr__(self):
        return f"DifferentialForm({self.ctx}, {format_form(self)!r})"


def _fits(ctx, key: FormKey) -> bool:
    return ctx.admits(key.xexp) and sum(key.dxi) <= ctx.form_cap


def _add_term(out: dict, ctx, key: FormKey, c) -> None:
    if not _fits(ctx, key):
        return
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        del out[key]


def wedge(alpha: DifferentialForm, beta: DifferentialForm) -> DifferentialForm:
    check_same(alpha.ctx, beta.ctx)
    ctx = alpha.ctx
    out: dict = {}
    for a, ca in alpha.terms.items():
        for b, cb in beta.terms.items():
            if a.mask & b.mask or a.dx & b.dx:
                continue
            sign = merge_sign(a.mask, b.mask) * merge_sign(a.dx, b.dx)
            if popcount(a.dx) * popcount(b.mask) & 1:
                sign = -sign
            key = FormKey(tuple(i + j for i, j in zip(a.xexp, b.xexp)), a.mask | b.mask,
                          a.dx | b.dx, tuple(i + j for i, j in zip(a.dxi, b.dxi)))
            _add_term(out, ctx, key, ca * cb if sign > 0 else -(ca * cb))
    return DifferentialForm._raw(ctx, out)


def ext_d(alpha: DifferentialForm) -> DifferentialForm:
    """Exterior derivative: d(f w) = df ^ w with
    df = (-1)^{p(f)} sum (df/dx_i) dx_i + sum (df/dxi_j) dxi_j."""
    ctx = alpha.ctx
    out: dict = {}
    for k, c in alpha.terms.items():
        fpar = popcount(k.mask) & 1
        for i in range(ctx.m):
            e = k.xexp[i]
            bit = 1 << i
            if not e or k.dx & bit:
                continue
            xexp = k.xexp[:i] + (e - 1,) + k.xexp[i + 1:]
            coeff = c * e * merge_sign(bit, k.dx)
            if fpar:
                coeff = -coeff
            _add_term(out, ctx, FormKey(xexp, k.mask, k.dx | bit, k.dxi), coeff)
        for j in range(ctx.n):
            bit = 1 << j
            if not k.mask & bit:
                continue
            before = popcount(k.mask & (bit - 1))
            dxi = k.dxi[:j] + (k.dxi[j] + 1,) + k.dxi[j + 1:]
            _add_term(out, ctx, FormKey(k.xexp, k.mask ^ bit, k.dx, dxi), -c if before & 1 else c)
    return DifferentialForm._raw(ctx, out)


def _attach(out: dict, ctx, f: SuperPolynomial, h: SuperPolynomial, sign: int, dx: int, dxi: tuple, c):
    """out += sign * c * (f h) dx dxi, with f a monomial times c."""
    for a, ca in f.terms.items():
        for b, cb in h.terms.items():
            if a.mask & b.mask:
                continue
            s = sign * merge_sign(a.mask, b.mask)
            key = FormKey(tuple(i + j for i, j in zip(a.xexp, b.xexp)), a.mask | b.mask, dx, dxi)
            v = c * ca * cb
            _add_term(out, ctx, key, v if s > 0 else -v)


def contract(X: SuperVectorField, alpha: DifferentialForm) -> DifferentialForm:
    """iota_X: derivation of parity p(X)+1 with iota_X(dx_j) = (-1)^{p(X)} X(x_j)."""
    check_same(X.ctx, alpha.ctx)
    pX = X.parity()
    p_iota = (pX + 1) & 1
    ctx = alpha.ctx
    gen_sign = -1 if pX else 1
    out: dict = {}
    for k, c in alpha.terms.items():
        f = SuperPolynomial._raw(ctx, {k.base: 1})
        fpar = popcount(k.mask) & 1
        dx_idx = mask_indices(k.dx)
        r = len(dx_idx)
        for pos, i in enumerate(dx_idx):
            h = X.px[i - 1]
            if not h.terms:
                continue
            # iota passes f and pos earlier dx's, then h moves left past them
            sign = gen_sign
            if p_iota * (fpar + pos) & 1:
                sign = -sign
            if pX * pos & 1:
                sign = -sign
            _attach(out, ctx, f, h, sign, k.dx ^ (1 << (i - 1)), k.dxi, c)
        for j, e in enumerate(k.dxi):
            if not e:
                continue
            h = X.qxi[j]
            if not h.terms:
                continue
            sign = gen_sign
            if p_iota * (fpar + r) & 1:
                sign = -sign
            if (pX + 1) * r & 1:
                sign = -sign
            dxi = k.dxi[:j] + (e - 1,) + k.dxi[j + 1:]
            _attach(out, ctx, f, h, sign, k.dx, dxi, c * e)
    return DifferentialForm._raw(ctx, out)


def lie_derivative(X: SuperVectorField, alpha: DifferentialForm) -> DifferentialForm:
    """L_X = [d, iota_X] = d iota_X + (-1)^{p(X)} iota_X d, linear in X."""
    total = DifferentialForm.zero(alpha.ctx)
    for p, Xh in X.homogeneous_parts().items():
        first = ext_d(contract(Xh, alpha))
        second = contract(Xh, ext_d(alpha))
        total = total + first + (second.scale(-1) if p else second)
    return total


def twisted_action(X: SuperVectorField, alpha: DifferentialForm, lam, k: int | None = None) -> DifferentialForm:
    """Action of X on Omega^k(lam): L_X alpha + lam * div(X) * alpha."""
    if k is not None and alpha.terms and alpha.degrees() != {k}:
        raise ValueError(f"form of degree {sorted(alpha.degrees())} is not in Omega^{k}")
    out = lie_derivative(X, alpha)
    lam = as_scalar(lam)
    if lam:
        out = out + wedge(DifferentialForm.function(divergence(X)), alpha).scale(lam)
    return out


def vf_to_topform(X: SuperVectorField) -> DifferentialForm:
    """X -> iota_X(dx_1 ^ ... ^ dx_m), defined for n = 0."""
    if X.ctx.n:
        raise ValueError("the volume-form isomorphism needs n = 0")
    return contract(X, DifferentialForm.volume(X.ctx))


def closedform_to_vf(alpha: DifferentialForm, require_closed: bool = True) -> SuperVectorField:
    """Inverse of vf_to_topform on (m-1)-forms.

    With ``require_closed`` the form must be closed, so the field lands in S_m.
    Raises NotInImageError when alpha is not an image at this truncation.
    """
    ctx = alpha.ctx
    if ctx.n:
        raise ValueError("the volume-form isomorphism needs n = 0")
    m = ctx.m
    full = (1 << m) - 1
    px = []
    for i in range(1, m + 1):
        comp = alpha.component(full ^ (1 << (i - 1)), ())
        px.append(comp if i % 2 else -comp)
    X = SuperVectorField(ctx, px, [])
    if vf_to_topform(X) != alpha:
        raise NotInImageError(f"{alpha} is not an (m-1)-form image of a vector field")
    if require_closed and not ext_d(alpha).is_zero():
        raise NotInImageError(f"{alpha} is not closed")
    return X


# bases -----------------------------------------------------------------------

def xi_monomials(n: int, max_size: int | None = None) -> list[int]:
    masks = sorted(range(1 << n), key=lambda b: (popcount(b), mask_indices(b)))
    if max_size is not None:
        masks = [b for b in masks if popcount(b) <= max_size]
    return masks


def x_exponents(m: int, degree: int) -> list[tuple]:
    """Exponent vectors of total degree ``degree``, in graded-lex order."""
    if m == 0:
        return [()] if degree == 0 else []
    out = []
    for first in range(degree, -1, -1):
        for rest in x_exponents(m - 1, degree - first):
            out.append((first,) + rest)
    return out


def dxi_exponents(n: int, total: int) -> list[tuple]:
    return x_exponents(n, total)


def form_monomials(ctx: JetContext, k: int, degmax: int, weighted_xi: bool = False) -> list[FormKey]:
    """Monomial k-forms whose function part has x-degree <= degmax.

    With ``weighted_xi`` the xi factors also count toward degmax.
    """
    out = []
    for ndx in range(min(k, ctx.m), -1, -1):
        ndxi = k - ndx
        if ndxi and not ctx.n:
            continue
        dx_masks = [indices_mask(c) for c in combinations(range(1, ctx.m + 1), ndx)]
        for d in range(degmax + 1):
            for xexp in x_exponents(ctx.m, d):
                for mask in xi_monomials(ctx.n):
                    if weighted_xi and d + popcount(mask) > degmax:
                        continue
                    for dx in dx_masks:
                        for dxi in dxi_exponents(ctx.n, ndxi):
                            key = FormKey(xexp, mask, dx, dxi)
                            if _fits(ctx, key):
                                out.append(key)
    return out


def form_multidegree(key: FormKey) -> tuple:
    xs = tuple(e + ((key.dx >> i) & 1) for i, e in enumerate(key.xexp))
    xis = tuple(((key.mask >> j) & 1) + e for j, e in enumerate(key.dxi))
    return xs + xis


def closed_basis(k: int, degmax: int, ctx: JetContext) -> list[DifferentialForm]:
    """Basis of closed k-forms with coefficients of degree <= degmax.

    Built per multidegree (x_i and dx_i both count e_i), so every basis form is
    homogeneous for any weighting of the variables.
    """
    if degmax > ctx.D:
        raise InconclusiveError(f"degree {degmax} exceeds the jet order of {ctx}")
    groups: dict = {}
    for key in form_monomials(ctx, k, degmax):
        groups.setdefault(form_multidegree(key), []).append(key)
    out = []
    for md in sorted(groups, key=lambda t: (sum(t), tuple(-v for v in t))):
        keys = groups[md]
        cols = [ext_d(DifferentialForm._raw(ctx, {key: as_scalar(1)})).terms for key in keys]
        for vec in nullspace(cols):
            out.append(DifferentialForm._raw(ctx, {keys[j]: c for j, c in vec.items()}))
    return out


# text form -------------------------------------------------------------------

def format_form_part(key: FormKey) -> str:
    parts = []
    dxs = mask_indices(key.dx)
    if dxs:
        parts.append("^".join(f"dx{i}" for i in dxs))
    for j, e in enumerate(key.dxi, 1):
        if e == 1:
            parts.append(f"dxi{j}")
        elif e:
            parts.append(f"(dxi{j})^{e}")
    return " ".join(parts)


def format_form(alpha: DifferentialForm) -> str:
    keys = sorted(alpha.terms, key=lambda k: (k.degree, -k.dx, tuple(-e for e in k.dxi),
                                              monomial_sort_key(k.base)))
    pieces = []
    for k in keys:
        body = " ".join(s for s in (format_monomial(k.base), format_form_part(k)) if s)
        pieces.append((alpha.terms[k], body))
    return join_terms(pieces)


def functions_of(keys: Iterable[FormKey]):
    return sorted({k.base for k in keys}, key=monomial_sort_key)
