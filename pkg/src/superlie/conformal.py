"""Lambda-bracket calculus for conformal (super)algebras.

Elements of a conformal algebra are finite combinations of d^p(g) for
generators g, stored as ``{(g, p): c}``.  A lambda-polynomial is a dict
``{k: element}`` standing for sum_k lambda^k element_k.  Checking the
Jacobi axiom needs two formal variables; those expressions are stored as
``{(exponents, g, p): c}``.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb

from .core import as_scalar
from .linalg import SpanSolver, vec_iadd


def _binom(m: int, j: int) -> Fraction:
    """Generalized binomial coefficient, valid for negative m."""
    out = Fraction(1)
    for t in range(j):
        out = out * (m - t) / (t + 1)
    return out


@dataclass
class ConformalAlgebra:
    generators: list
    parities: dict
    table: dict                     # (a, b) -> {k: element}
    name: str = ""

    def __post_init__(self):
        for (a, b), poly in self.table.items():
            if a not in self.parities or b not in self.parities:
                raise ValueError(f"table entry [{a},{b}] uses an unknown generator")
            want = (self.parities[a] + self.parities[b]) % 2
            for k, el in poly.items():
                if k < 0:
                    raise ValueError(f"negative lambda power in [{a},{b}]")
                for (g, p) in el:
                    if g not in self.parities:
                        raise ValueError(f"[{a},{b}] mentions unknown generator {g}")
                    if self.parities[g] != want:
                        raise ValueError(f"[{a},{b}] is not parity additive (term {g})")
        self._complete_by_skew()

    def _complete_by_skew(self):
        # missing ordered pairs follow from [b_l a] = -(-1)^{p(a)p(b)} [a_{-l-d} b]
        for a, b in product(self.generators, repeat=2):
            if (a, b) in self.table or (b, a) not in self.table:
                continue
            self.table[(a, b)] = skew_partner(self, b, a)
        for a, b in product(self.generators, repeat=2):
            self.table.setdefault((a, b), {})

    def sign(self, a, b) -> int:
        return -1 if self.parities[a] & self.parities[b] else 1

    def element(self, g, p=0, c=1) -> dict:
        return {(g, p): as_scalar(c)}


# elements ---------------------------------------------------------------------------

def _d(el: dict, times: int = 1) -> dict:
    return {(g, p + times): c for (g, p), c in el.items()}


def _add_into(out: dict, key, c):
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def _poly_add(out: dict, k: int, el: dict, c=1):
    cur = out.setdefault(k, {})
    vec_iadd(cur, el, c)
    if not cur:
        del out[k]


def _generator_poly(A: ConformalAlgebra, g, h) -> dict:
    return A.table.get((g, h), {})


def lambda_bracket(a: dict, b: dict, A: ConformalAlgebra) -> dict:
    """[a_lambda b] for d-polynomial elements, by sesquilinearity:
    [d^r g _l d^s h] = (-l)^r (d + l)^s [g_l h]."""
    out: dict = {}
    for (g, r), ca in a.items():
        for (h, s), cb in b.items():
            base = _generator_poly(A, g, h)
            if not base:
                continue
            c0 = ca * cb * (-1) ** r
            for k, el in base.items():
                for t in range(s + 1):
                    # (d + l)^s = sum_t C(s,t) l^(s-t) d^t
                    _poly_add(out, k + r + s - t, _d(el, t), c0 * comb(s, t))
    return out


# multi-variable expressions -----------------------------------------------------------

def _substitute(poly: dict, lin: tuple, dcoef, nvars: int) -> dict:
    """Replace the bracket variable by sum_i lin[i] v_i + dcoef * d (d acting on the coefficient)."""
    out: dict = {}
    zero = (0,) * nvars
    for k, el in poly.items():
        # expand (linear form)^k by repeated multiplication
        terms = {(zero, 0): Fraction(1)}
        for _ in range(k):
            nxt: dict = {}
            for (ex, dp), c in terms.items():
                for i, a in enumerate(lin):
                    if a:
                        e2 = ex[:i] + (ex[i] + 1,) + ex[i + 1:]
                        _add_into(nxt, (e2, dp), c * a)
                if dcoef:
                    _add_into(nxt, (ex, dp + 1), c * dcoef)
            terms = nxt
        for (ex, dp), c in terms.items():
            for (g, p), v in el.items():
                _add_into(out, (ex, g, p + dp), c * v)
    return out


def _shift(expr: dict, ex: tuple, c) -> dict:
    return {(tuple(a + b for a, b in zip(e, ex)), g, p): v * c for (e, g, p), v in expr.items()}


def _bracket_left_expr(A, x: dict, expr: dict, lin: tuple, nvars: int) -> dict:
    """[x_nu E] with E a multi-variable expression whose variables are scalars."""
    out: dict = {}
    for (ex, g, p), c in expr.items():
        inner = _substitute(lambda_bracket(x, {(g, p): Fraction(1)}, A), lin, 0, nvars)
        for key, v in _shift(inner, ex, c).items():
            _add_into(out, key, v)
    return out


def _bracket_right_expr(A, expr: dict, y: dict, lin: tuple, nvars: int) -> dict:
    """[E_nu y] with E a multi-variable expression."""
    out: dict = {}
    for (ex, g, p), c in expr.items():
        inner = _substitute(lambda_bracket({(g, p): Fraction(1)}, y, A), lin, 0, nvars)
        for key, v in _shift(inner, ex, c).items():
            _add_into(out, key, v)
    return out


def skew_partner(A: ConformalAlgebra, b, a) -> dict:
    """-(-1)^{p(a)p(b)} [b_{-l-d} a] as a lambda-polynomial."""
    poly = lambda_bracket({(b, 0): Fraction(1)}, {(a, 0): Fraction(1)}, A)
    expr = _substitute(poly, (Fraction(-1),), Fraction(-1), 1)
    s = -A.sign(a, b)
    out: dict = {}
    for ((k,), g, p), c in expr.items():
        _poly_add(out, k, {(g, p): c}, s)
    return out


# axioms --------------------------------------------------------------------------------

@dataclass
class AxiomReport:
    sesquilinearity: list = field(default_factory=list)
    skew: list = field(default_factory=list)
    jacobi: list = field(default_factory=list)
    tested: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not (self.sesquilinearity or self.skew or self.jacobi)

    def as_dict(self):
        return {
            "ok": self.ok,
            "tested": self.tested,
            "failures": {
                "sesquilinearity": [list(k) for k, _ in self.sesquilinearity],
                "skew": [{"pair": list(k), "defect": format_lambda_poly(d)} for k, d in self.skew],
                "jacobi": [{"triple": list(k), "defect": format_expr(d)} for k, d in self.jacobi],
            },
        }


def check_skew(A: ConformalAlgebra, a, b) -> dict:
    """Defect [a_l b] + (-1)^{p(a)p(b)} [b_{-l-d} a]; empty when axiom (ii) holds."""
    lhs = lambda_bracket({(a, 0): Fraction(1)}, {(b, 0): Fraction(1)}, A)
    rhs = skew_partner(A, b, a)
    out = {k: dict(v) for k, v in lhs.items()}
    for k, el in rhs.items():
        _poly_add(out, k, el, -1)
    return out


def check_jacobi_triple(A: ConformalAlgebra, a, b, c) -> dict:
    """Defect of [a_l[b_m c]] = [[a_l b]_{l+m} c] + (-1)^{p(a)p(b)} [b_m[a_l c]]."""
    one = Fraction(1)
    ea, eb, ec = {(a, 0): one}, {(b, 0): one}, {(c, 0): one}
    lam, mu, both = (one, 0), (0, one), (one, one)
    inner_bc = _substitute(lambda_bracket(eb, ec, A), mu, 0, 2)
    lhs = _bracket_left_expr(A, ea, inner_bc, lam, 2)
    inner_ab = _substitute(lambda_bracket(ea, eb, A), lam, 0, 2)
    t1 = _bracket_right_expr(A, inner_ab, ec, both, 2)
    inner_ac = _substitute(lambda_bracket(ea, ec, A), lam, 0, 2)
    t2 = _bracket_left_expr(A, eb, inner_ac, mu, 2)
    out = dict(lhs)
    for k, v in t1.items():
        _add_into(out, k, -v)
    s = A.sign(a, b)
    for k, v in t2.items():
        _add_into(out, k, -s * v)
    return out


def check_sesquilinearity(A: ConformalAlgebra, a, b) -> bool:
    ea, eb = {(a, 0): Fraction(1)}, {(b, 0): Fraction(1)}
    base = lambda_bracket(ea, eb, A)
    left = lambda_bracket(_d(ea), eb, A)
    want_left = {k + 1: {key: -v for key, v in el.items()} for k, el in base.items()}
    right = lambda_bracket(ea, _d(eb), A)
    want_right: dict = {}
    for k, el in base.items():
        _poly_add(want_right, k, _d(el))
        _poly_add(want_right, k + 1, el)
    return left == want_left and right == want_right


def check_axioms(A: ConformalAlgebra, nmax_lambda: int | None = None) -> AxiomReport:
    """Verify (i)-(iii) symbolically on all generator pairs and triples."""
    rep = AxiomReport()
    gens = A.generators
    pairs = list(product(gens, repeat=2))
    for a, b in pairs:
        if nmax_lambda is not None and max(A.table.get((a, b), {0: 0}), default=0) > nmax_lambda:
            raise ValueError(f"[{a},{b}] exceeds lambda degree {nmax_lambda}")
        if not check_sesquilinearity(A, a, b):
            rep.sesquilinearity.append(((a, b), None))
        d = check_skew(A, a, b)
        if d:
            rep.skew.append(((a, b), d))
    triples = list(product(gens, repeat=3))
    for a, b, c in triples:
        d = check_jacobi_triple(A, a, b, c)
        if d:
            rep.jacobi.append(((a, b, c), d))
    rep.tested = {"pairs": len(pairs), "triples": len(triples)}
    return rep


# constructors ---------------------------------------------------------------------------

def virasoro() -> ConformalAlgebra:
    """[L_l L] = dL + 2 l L (centerless)."""
    table = {("L", "L"): {0: {("L", 1): Fraction(1)}, 1: {("L", 0): Fraction(2)}}}
    return ConformalAlgebra(["L"], {"L": 0}, table, "Virasoro")


@dataclass
class LieStructure:
    """Finite-dimensional Lie (super)algebra by structure constants [a, b] = {c: coeff}."""
    names: list
    parities: dict
    brackets: dict

    def bracket(self, a, b) -> dict:
        if (a, b) in self.brackets:
            return self.brackets[(a, b)]
        if (b, a) in self.brackets:
            s = 1 if self.parities[a] & self.parities[b] else -1
            return {k: s * v for k, v in self.brackets[(b, a)].items()}
        return {}

    def validate(self):
        """Super antisymmetry, parity additivity and the super Jacobi identity."""
        for a, b in product(self.names, repeat=2):
            s = 1 if self.parities[a] & self.parities[b] else -1
            ab, ba = self.bracket(a, b), self.bracket(b, a)
            if ab != {k: s * v for k, v in ba.items()}:
                raise ValueError(f"[{a},{b}] and [{b},{a}] violate super antisymmetry")
            for k in ab:
                if self.parities[k] != (self.parities[a] + self.parities[b]) % 2:
                    raise ValueError(f"[{a},{b}] is not parity additive")
        for a, b, c in product(self.names, repeat=3):
            out: dict = {}
            for k, v in self.bracket(b, c).items():
                vec_iadd(out, self.bracket(a, k), v)
            for k, v in self.bracket(a, b).items():
                vec_iadd(out, self.bracket(k, c), -v)
            s = -1 if self.parities[a] & self.parities[b] else 1
            for k, v in self.bracket(a, c).items():
                vec_iadd(out, self.bracket(b, k), -s * v)
            if out:
                raise ValueError(f"Jacobi identity fails on ({a}, {b}, {c})")


def current_algebra(lie: LieStructure, validate: bool = True) -> ConformalAlgebra:
    """[a_l b] = [a, b] with no lambda or d terms."""
    if validate:
        lie.validate()
    table = {}
    for a, b in product(lie.names, repeat=2):
        br = lie.bracket(a, b)
        table[(a, b)] = {0: {(k, 0): as_scalar(v) for k, v in br.items()}} if br else {}
    return ConformalAlgebra(list(lie.names), dict(lie.parities), table, f"Cur({','.join(lie.names)})")


def lie_from_matrices(names: list, mats: list) -> LieStructure:
    """Structure constants of a matrix Lie algebra, read by solving in the given basis."""
    n = len(mats[0])

    def flat(M):
        return {(i, j): Fraction(M[i][j]) for i in range(n) for j in range(n) if M[i][j]}

    solver = SpanSolver([flat(M) for M in mats])
    brackets = {}
    for (i, a), (j, b) in product(enumerate(names), repeat=2):
        A, B = mats[i], mats[j]
        comm = [[sum(Fraction(A[r][k]) * B[k][c] - Fraction(B[r][k]) * A[k][c] for k in range(n))
                 for c in range(n)] for r in range(n)]
        coords = solver.solve(flat(comm))
        if coords is None:
            raise ValueError(f"[{a},{b}] leaves the span of the given matrices")
        if coords:
            brackets[(a, b)] = {names[k]: v for k, v in sorted(coords.items())}
    return LieStructure(list(names), {a: 0 for a in names}, brackets)


def sl_matrices_named(n: int) -> tuple[list, list]:
    names, mats = [], []

    def unit(i, j):
        M = [[0] * n for _ in range(n)]
        M[i][j] = 1
        return M

    for i in range(n):
        for j in range(n):
            if i != j:
                names.append(f"E{i + 1}{j + 1}")
                mats.append(unit(i, j))
    for i in range(n - 1):
        M = unit(i, i)
        M[i + 1][i + 1] = -1
        names.append(f"H{i + 1}")
        mats.append(M)
    return names, mats


def sl2() -> LieStructure:
    return lie_from_matrices(["e", "h", "f"], [[[0, 1], [0, 0]], [[1, 0], [0, -1]], [[0, 0], [1, 0]]])


def sl3() -> LieStructure:
    return lie_from_matrices(*sl_matrices_named(3))


def abelian(names=("a",)) -> LieStructure:
    return LieStructure(list(names), {a: 0 for a in names}, {})


# modes -------------------------------------------------------------------------------

def element_mode(el: dict, m: int) -> dict:
    """Modes of a d-polynomial element: (d c)_(k) = -k c_(k-1)."""
    out: dict = {}
    for (g, p), c in el.items():
        coeff, k = Fraction(c), m
        for _ in range(p):
            coeff *= -k
            k -= 1
        if coeff:
            _add_into(out, (g, k), coeff)
    return out


def mode_bracket(a, m: int, b, n: int, A: ConformalAlgebra) -> dict:
    """[a_(m), b_(n)] = sum_j C(m, j) (a_(j) b)_(m+n-j), with a_(j) b = j! c_j."""
    out: dict = {}
    poly = _generator_poly(A, a, b)
    for j, cj in poly.items():
        f = _binom(m, j)
        if not f:
            continue
        fact = Fraction(1)
        for t in range(2, j + 1):
            fact *= t
        for key, v in element_mode(cj, m + n - j).items():
            _add_into(out, key, f * fact * v)
    return out


def mode_bracket_vec(A, u: dict, v: dict) -> dict:
    out: dict = {}
    for (a, m), x in u.items():
        for (b, n), y in v.items():
            for key, c in mode_bracket(a, m, b, n, A).items():
                _add_into(out, key, x * y * c)
    return out


def mode_jacobi(A: ConformalAlgebra, bound: int = 3) -> list:
    """Super Jacobi on all generator-mode triples with |modes| <= bound; returns failures."""
    bad = []
    rng = range(-bound, bound + 1)
    one = Fraction(1)
    for a, b, c in product(A.generators, repeat=3):
        s = A.sign(a, b)
        for m, n, k in product(rng, repeat=3):
            ua, ub, uc = {(a, m): one}, {(b, n): one}, {(c, k): one}
            lhs = mode_bracket_vec(A, ua, mode_bracket_vec(A, ub, uc))
            r1 = mode_bracket_vec(A, mode_bracket_vec(A, ua, ub), uc)
            r2 = mode_bracket_vec(A, ub, mode_bracket_vec(A, ua, uc))
            d = dict(lhs)
            vec_iadd(d, r1, -1)
            vec_iadd(d, r2, -s)
            if d:
                bad.append(((a, m), (b, n), (c, k), d))
    return bad


def virasoro_mode(m: int) -> tuple:
    """The artifact's convention L_m := L_(m+1)."""
    return ("L", m + 1)


# text and JSON --------------------------------------------------------------------------

def _format_term(g, p):
    if p == 0:
        return g
    return f"d{g}" if p == 1 else f"d^{p} {g}"


def _format_coeff(c: Fraction, body: str) -> tuple[int, str]:
    sign = -1 if c < 0 else 1
    a = abs(c)
    if a == 1:
        return sign, body
    return sign, f"{a} {body}"


def _join(pieces) -> str:
    if not pieces:
        return "0"
    out = []
    for idx, (sign, body) in enumerate(pieces):
        if idx == 0:
            out.append(f"-{body}" if sign < 0 else body)
        else:
            out.append(f"{'-' if sign < 0 else '+'} {body}")
    return " ".join(out)


def _lam(k, name="lambda"):
    return "" if k == 0 else (name if k == 1 else f"{name}^{k}")


def format_lambda_poly(poly: dict) -> str:
    pieces = []
    for k in sorted(poly):
        for (g, p), c in sorted(poly[k].items(), key=lambda t: (t[0][0], -t[0][1])):
            body = " ".join(x for x in (_lam(k), _format_term(g, p)) if x)
            pieces.append(_format_coeff(c, body))
    return _join(pieces)


def format_expr(expr: dict) -> str:
    pieces = []
    for (ex, g, p), c in sorted(expr.items(), key=lambda t: (t[0][0], t[0][1], t[0][2])):
        lams = [_lam(e, v) for e, v in zip(ex, ("lambda", "mu"))]
        body = " ".join(x for x in lams + [_format_term(g, p)] if x)
        pieces.append(_format_coeff(c, body))
    return _join(pieces)


def format_modes(vec: dict) -> str:
    pieces = [_format_coeff(c, f"{g}_({m})") for (g, m), c in sorted(vec.items())]
    return _join(pieces)


_ENTRY = re.compile(r"^\s*\[\s*([^,\]\s]+)\s*,\s*([^\]\s]+)\s*\]\s*=\s*(.*)$")
_POW = re.compile(r"^(lambda|l|d)(?:\^(\d+))?$")


def parse_lambda_poly(text: str, generators) -> dict:
    """Parse ``dL + 2 lambda L``; ``d`` prefixes apply d, ``lambda^k`` powers."""
    gens = set(generators)
    text = text.strip()
    if text in ("", "0"):
        return {}
    out: dict = {}
    for sign, body in _split_terms(text):
        coeff = Fraction(sign)
        k = p = 0
        gen = None
        for tok in body.split():
            mt = _POW.match(tok)
            if tok in gens:
                gen = tok
            elif mt:
                e = int(mt.group(2) or 1)
                if mt.group(1) == "d":
                    p += e
                else:
                    k += e
            elif tok.startswith("d") and tok.lstrip("d") in gens:
                p += len(tok) - len(tok.lstrip("d"))
                gen = tok.lstrip("d")
            else:
                try:
                    coeff *= Fraction(tok)
                except ValueError:
                    raise ValueError(f"cannot read token {tok!r} in {text!r}") from None
        if gen is None:
            raise ValueError(f"term {body!r} names no generator")
        _poly_add(out, k, {(gen, p): coeff})
    return out


def _split_terms(text: str):
    out = []
    sign, buf = 1, ""
    for ch in text:
        if ch in "+-" and buf.strip() and not buf.rstrip().endswith("/"):
            out.append((sign, buf.strip()))
            sign, buf = (1 if ch == "+" else -1), ""
        elif ch in "+-" and not buf.strip():
            sign = sign * (1 if ch == "+" else -1)
        else:
            buf += ch
    if buf.strip():
        out.append((sign, buf.strip()))
    return out


def parse_table(spec: dict | str) -> ConformalAlgebra:
    """Build an algebra from JSON: {"generators": [{"name", "parity"}], "brackets": [...]}.

    Each bracket is either a string ``[a,b] = ...`` or a pair key ``"a,b"``
    mapped to the right-hand side.
    """
    data = json.loads(spec) if isinstance(spec, str) else spec
    gens, parities = [], {}
    for g in data["generators"]:
        name, par = (g["name"], int(g.get("parity", 0))) if isinstance(g, dict) else (g, 0)
        gens.append(name)
        parities[name] = par
    entries = data.get("brackets", [])
    if isinstance(entries, dict):
        entries = [f"[{k}] = {v}" for k, v in entries.items()]
    table = {}
    for line in entries:
        mt = _ENTRY.match(line)
        if not mt:
            raise ValueError(f"bad bracket entry {line!r}")
        a, b, rhs = mt.groups()
        table[(a, b)] = parse_lambda_poly(rhs, gens)
    return ConformalAlgebra(gens, parities, table, data.get("name", ""))


def table_to_json(A: ConformalAlgebra) -> dict:
    return {
        "name": A.name,
        "generators": [{"name": g, "parity": A.parities[g]} for g in A.generators],
        "brackets": [f"[{a},{b}] = {format_lambda_poly(A.table[(a, b)])}"
                     for a, b in product(A.generators, repeat=2)],
    }


NAMED = {
    "virasoro": virasoro,
    "sl2": lambda: current_algebra(sl2()),
    "sl3": lambda: current_algebra(sl3()),
    "abelian": lambda: current_algebra(abelian()),
}


def named_algebra(name: str) -> ConformalAlgebra:
    key = name.lower().replace("current:", "").replace("cur(", "").rstrip(")")
    if key not in NAMED:
        raise ValueError(f"unknown conformal algebra {name!r}; known: {', '.join(NAMED)}")
    return NAMED[key]()
