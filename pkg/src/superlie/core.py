"""Truncated supercommutative polynomial rings.

Elements live in O_m<n> cut off at total x-degree ``D`` (a jet), or in the
one-variable Laurent variant with an exponent window.  Odd indeterminates are
stored as a bitmask: bit ``j-1`` set means xi_j is a factor.  Monomials keep
their xi factors in ascending order, and every reordering contributes the sign
of the permutation.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, NamedTuple, Union

from .errors import ContextMismatchError, InconclusiveError

Q = Fraction
Scalar = Union[int, Fraction]


def as_scalar(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, str)):
        return Fraction(c)
    raise TypeError(f"not an exact rational: {c!r}")


@dataclass(frozen=True)
class JetContext:
    """m even and n odd indeterminates, terms of x-degree above ``D`` dropped.

    ``form_cap`` bounds the total dxi-degree kept in differential forms.
    """

    m: int
    n: int
    D: int
    form_cap: int = 4

    def __post_init__(self):
        if self.m < 0 or self.n < 0 or self.D < 0:
            raise ValueError(f"invalid jet context {self}")

    def admits(self, xexp: tuple) -> bool:
        return sum(xexp) <= self.D

    def widened(self, extra: int) -> JetContext:
        return JetContext(self.m, self.n, self.D + extra, self.form_cap)

    def __str__(self):
        return f"J({self.m}|{self.n}; D={self.D})"


@dataclass(frozen=True)
class LaurentContext:
    """One even indeterminate with exponents in ``[lo, hi]``, n odd ones."""

    n: int
    lo: int
    hi: int
    form_cap: int = 4

    def __post_init__(self):
        if not self.lo <= 0 <= self.hi or self.n < 0:
            raise ValueError(f"invalid Laurent window {self}")

    @property
    def m(self) -> int:
        return 1

    def admits(self, xexp: tuple) -> bool:
        return self.lo <= xexp[0] <= self.hi

    def __str__(self):
        return f"L(1|{self.n}; [{self.lo},{self.hi}])"


Context = Union[JetContext, LaurentContext]


class SuperMonomial(NamedTuple):
    xexp: tuple
    mask: int

    @property
    def xi(self) -> tuple:
        return mask_indices(self.mask)

    @property
    def parity(self) -> int:
        return popcount(self.mask) & 1

    @property
    def xdeg(self) -> int:
        return sum(self.xexp)


def popcount(v: int) -> int:
    return bin(v).count("1")


def mask_indices(mask: int) -> tuple:
    """1-based indices of the set bits, ascending."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def indices_mask(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << (i - 1)
    return mask


@lru_cache(maxsize=None)
def merge_sign(a: int, b: int) -> int:
    """Sign from sorting the odd product g_A * g_B (A, B disjoint masks)."""
    inversions = 0
    bb = b
    pos = 0
    while bb:
        if bb & 1:
            inversions += popcount(a >> (pos + 1))
        bb >>= 1
        pos += 1
    return -1 if inversions & 1 else 1


def sort_sign(indices: Iterable[int]) -> tuple[int, int] | None:
    """Sign and mask of the ordered product of odd generators; None if repeated."""
    mask = 0
    sign = 1
    for i in indices:
        bit = 1 << (i - 1)
        if mask & bit:
            return None
        sign *= merge_sign(mask, bit)
        mask |= bit
    return sign, mask


def check_same(ctx_a, ctx_b):
    if ctx_a != ctx_b:
        raise ContextMismatchError(f"{ctx_a} vs {ctx_b}")


def mono_mul(ctx: Context, a: SuperMonomial, b: SuperMonomial):
    """Product of two monomials as ``(sign, monomial)``, or None when it is zero."""
    if a.mask & b.mask:
        return None
    xexp = tuple(i + j for i, j in zip(a.xexp, b.xexp))
    if not ctx.admits(xexp):
        return None
    return merge_sign(a.mask, b.mask), SuperMonomial(xexp, a.mask | b.mask)


class SuperPolynomial:
    """Element of the truncated ring; ``terms`` maps (xexp, mask) to a nonzero rational."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: Context, terms: dict | None = None):
        self.ctx = ctx
        self.terms = {}
        if terms:
            for key, c in terms.items():
                if c:
                    key = SuperMonomial(tuple(key[0]), key[1])
                    if len(key.xexp) != ctx.m or key.mask >> ctx.n:
                        raise ValueError(f"monomial {key} does not fit {ctx}")
                    if ctx.admits(key.xexp):
                        self.terms[key] = as_scalar(c)

    @classmethod
    def _raw(cls, ctx, terms):
        p = cls.__new__(cls)
        p.ctx = ctx
        p.terms = terms
        return p

    # constructors
    @classmethod
    def zero(cls, ctx):
        return cls._raw(ctx, {})

    @classmethod
    def const(cls, ctx, c=1):
        return cls(ctx, {SuperMonomial((0,) * ctx.m, 0): c})

    @classmethod
    def monomial(cls, ctx, xexp=None, xi=(), c=1):
        xexp = tuple(xexp) if xexp is not None else (0,) * ctx.m
        ordered = sort_sign(xi)
        if ordered is None:
            return cls.zero(ctx)
        sign, mask = ordered
        return cls(ctx, {SuperMonomial(xexp, mask): sign * as_scalar(c)})

    @classmethod
    def x(cls, ctx, i, power=1):
        if not 1 <= i <= ctx.m:
            raise IndexError(f"x{i} not in {ctx}")
        e = [0] * ctx.m
        e[i - 1] = power
        return cls.monomial(ctx, e)

    @classmethod
    def xi(cls, ctx, j):
        if not 1 <= j <= ctx.n:
            raise IndexError(f"xi{j} not in {ctx}")
        return cls.monomial(ctx, None, (j,))

    # arithmetic
    def __add__(self, other):
        if not isinstance(other, SuperPolynomial):
            other = SuperPolynomial.const(self.ctx, other)
        check_same(self.ctx, other.ctx)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return SuperPolynomial._raw(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return SuperPolynomial._raw(self.ctx, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = as_scalar(c)
        if not c:
            return SuperPolynomial.zero(self.ctx)
        return SuperPolynomial._raw(self.ctx, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, SuperPolynomial):
            return self.scale(other)
        return poly_mul(self, other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if isinstance(other, SuperPolynomial):
            return self.ctx == other.ctx and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == SuperPolynomial.const(self.ctx, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # structure
    def parity(self) -> str:
        return parity(self)

    def homogeneous_parts(self) -> dict:
        parts: dict = {}
        for k, c in self.terms.items():
            parts.setdefault(k.parity, {})[k] = c
        return {p: SuperPolynomial._raw(self.ctx, t) for p, t in parts.items()}

    def xdeg(self) -> int:
        """Largest x-degree present (-1 for zero)."""
        return max((k.xdeg for k in self.terms), default=-1)

    def weighted_degrees(self, xweights, xiweights) -> set:
        out = set()
        for k in self.terms:
            d = sum(w * e for w, e in zip(xweights, k.xexp))
            d += sum(xiweights[j - 1] for j in k.xi)
            out.add(d)
        return out

    def constant_term(self) -> Fraction:
        return self.terms.get(SuperMonomial((0,) * self.ctx.m, 0), Fraction(0))

    def recontext(self, ctx: Context) -> SuperPolynomial:
        """Same polynomial in another context with the same (m, n)."""
        if (ctx.m, ctx.n) != (self.ctx.m, self.ctx.n):
            raise ContextMismatchError(f"{self.ctx} -> {ctx}")
        return SuperPolynomial(ctx, self.terms)

    def partial_x(self, i):
        return partial_x(self, i)

    def partial_xi(self, j):
        return partial_xi(self, j)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"SuperPolynomial({self.ctx}, {format_poly(self)!r})"


def poly_mul(p: SuperPolynomial, q: SuperPolynomial) -> SuperPolynomial:
    check_same(p.ctx, q.ctx)
    ctx = p.ctx
    out: dict = {}
    for a, ca in p.terms.items():
        for b, cb in q.terms.items():
            if a.mask & b.mask:
                continue
            xexp = tuple(i + j for i, j in zip(a.xexp, b.xexp))
            if not ctx.admits(xexp):
                continue
            key = SuperMonomial(xexp, a.mask | b.mask)
            c = ca * cb
            if merge_sign(a.mask, b.mask) < 0:
                c = -c
            v = out.get(key, 0) + c
            if v:
                out[key] = v
            else:
                del out[key]
    return SuperPolynomial._raw(ctx, out)


def partial_x(p: SuperPolynomial, i: int) -> SuperPolynomial:
    ctx = p.ctx
    if not 1 <= i <= ctx.m:
        raise IndexError(f"d/dx{i} not defined in {ctx}")
    out: dict = {}
    for k, c in p.terms.items():
        e = k.xexp[i - 1]
        if e == 0:
            continue
        xexp = list(k.xexp)
        xexp[i - 1] = e - 1
        xexp = tuple(xexp)
        if not ctx.admits(xexp):
            raise InconclusiveError(
                f"d/dx{i} of x^{k.xexp} leaves the window of {ctx}")
        out[SuperMonomial(xexp, k.mask)] = c * e
    return SuperPolynomial._raw(ctx, out)


def partial_xi(p: SuperPolynomial, j: int) -> SuperPolynomial:
    """Left derivative in xi_j: sign (-1)^(number of xi factors before xi_j)."""
    ctx = p.ctx
    if not 1 <= j <= ctx.n:
        raise IndexError(f"d/dxi{j} not defined in {ctx}")
    bit = 1 << (j - 1)
    out: dict = {}
    for k, c in p.terms.items():
        if not k.mask & bit:
            continue
        before = popcount(k.mask & (bit - 1))
        out[SuperMonomial(k.xexp, k.mask ^ bit)] = -c if before & 1 else c
    return SuperPolynomial._raw(ctx, out)


def parity(p: SuperPolynomial) -> str:
    ps = {k.parity for k in p.terms}
    if ps == {1}:
        return "odd"
    if len(ps) > 1:
        return "mixed"
    return "even"


def parity_bit(p: SuperPolynomial) -> int:
    par = parity(p)
    if par == "mixed":
        raise ValueError(f"{p} is not homogeneous")
    return 1 if par == "odd" else 0


# text form -------------------------------------------------------------------

def monomial_sort_key(key: SuperMonomial):
    return (sum(key.xexp), tuple(-e for e in key.xexp), popcount(key.mask), key.xi)


def format_coeff(c: Fraction, has_vars: bool) -> str:
    c = abs(c)
    if has_vars and c == 1:
        return ""
    return str(c)


def format_monomial(key: SuperMonomial) -> str:
    parts = []
    for i, e in enumerate(key.xexp, 1):
        if e == 1:
            parts.append(f"x{i}")
        elif e:
            parts.append(f"x{i}^{e}")
    parts.extend(f"xi{j}" for j in key.xi)
    return " ".join(parts)


def join_terms(pieces: list[tuple[Fraction, str]]) -> str:
    """pieces: (coefficient, body) pairs; body may be empty for constants."""
    if not pieces:
        return "0"
    out = []
    for idx, (c, body) in enumerate(pieces):
        coeff = format_coeff(c, bool(body))
        text = " ".join(s for s in (coeff, body) if s)
        if idx == 0:
            out.append(("-" if c < 0 else "") + text)
        else:
            out.append(("- " if c < 0 else "+ ") + text)
    return " ".join(out)


def format_poly(p: SuperPolynomial) -> str:
    keys = sorted(p.terms, key=monomial_sort_key)
    return join_terms([(p.terms[k], format_monomial(k)) for k in keys])


_TERM_SPLIT = re.compile(r"\s*([+-])\s*")
_FACTOR = re.compile(r"^(xi|x)(\d+)(?:\^(-?\d+))?$")
_COEFF = re.compile(r"^-?\d+(?:/\d+)?$")


def split_signed_terms(text: str) -> list[tuple[int, str]]:
    text = text.strip()
    if not text:
        raise ValueError("empty expression")
    if text[0] not in "+-":
        text = "+" + text
    pieces = _TERM_SPLIT.split(text)
    out = []
    # pieces: ['', sign, body, sign, body, ...]; exponents like ^-2 are kept
    # together by re-joining bodies that end with '^'
    i = 1
    while i < len(pieces):
        sign, body = pieces[i], pieces[i + 1]
        i += 2
        while body.endswith("^") and i < len(pieces):
            body += pieces[i] + pieces[i + 1]
            i += 2
        out.append((-1 if sign == "-" else 1, body.strip()))
    return out


def parse_factors(ctx: Context, tokens: list[str]) -> SuperPolynomial:
    coeff = Fraction(1)
    xexp = [0] * ctx.m
    xis = []
    for tok in tokens:
        if _COEFF.match(tok):
            coeff *= Fraction(tok)
            continue
        mt = _FACTOR.match(tok)
        if not mt:
            raise ValueError(f"cannot parse factor {tok!r}")
        kind, idx, power = mt.group(1), int(mt.group(2)), mt.group(3)
        if kind == "x":
            if not 1 <= idx <= ctx.m:
                raise IndexError(f"x{idx} not in {ctx}")
            xexp[idx - 1] += int(power) if power else 1
        else:
            if power not in (None, "1"):
                raise ValueError(f"odd factor {tok!r} cannot carry a power")
            if not 1 <= idx <= ctx.n:
                raise IndexError(f"xi{idx} not in {ctx}")
            xis.append(idx)
    return SuperPolynomial.monomial(ctx, xexp, xis, coeff)


def parse_poly(ctx: Context, text: str) -> SuperPolynomial:
    """Parse ``3/2 x1^2 x3 xi1 xi4 - xi2 + 1``; xi factors may appear in any order."""
    total = SuperPolynomial.zero(ctx)
    for sign, body in split_signed_terms(text):
        tokens = body.split()
        if not tokens:
            raise ValueError(f"dangling sign in {text!r}")
        total = total + parse_factors(ctx, tokens).scale(sign)
    return total
