"""Exact rational linear algebra on sparse vectors.

Vectors are dicts ``{coordinate: Fraction}`` with no zero entries; matrices
are given either densely (list of rows) or as a list of sparse columns.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Sequence


def vec_add(u: dict, v: dict, c=1) -> dict:
    """u + c*v as a new dict."""
    out = dict(u)
    for k, x in v.items():
        y = out.get(k, 0) + c * x
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


def vec_iadd(u: dict, v: dict, c=1) -> None:
    for k, x in v.items():
        y = u.get(k, 0) + c * x
        if y:
            u[k] = y
        else:
            u.pop(k, None)


def vec_scale(v: dict, c) -> dict:
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


class RowReducer:
    """Incremental Gauss-Jordan elimination over Q.

    Rows are sparse dicts.  ``add`` reduces a new row against the stored ones
    and keeps it if independent; stored rows stay in fully reduced echelon
    form, so reducing a row is a single pass over its pivot entries.

    Pivots are the lowest-ranked column when ``column_order`` is given,
    otherwise the first column in insertion order that is not a tag column.
    """

    def __init__(self, column_order: Sequence[Hashable] | None = None):
        self.rows: dict = {}  # pivot column -> row (pivot entry 1)
        self._rank = {c: i for i, c in enumerate(column_order)} if column_order is not None else None

    def _pivot_of(self, row: dict):
        if self._rank is not None:
            return min(row, key=self._rank.__getitem__)
        for k in row:
            if not _is_tag(k):
                return k
        return None

    def reduce(self, row: dict) -> dict:
        row = dict(row)
        for col in [c for c in row if c in self.rows]:
            c = row.get(col)
            if c:
                vec_iadd(row, self.rows[col], -c)
        return row

    def add(self, row: dict) -> bool:
        row = self.reduce(row)
        piv = self._pivot_of(row) if row else None
        if piv is None:
            return False
        inv = 1 / Fraction(row[piv])
        row = {k: v * inv for k, v in row.items()}
        for other in self.rows.values():
            c = other.get(piv)
            if c:
                vec_iadd(other, row, -c)
        self.rows[piv] = row
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


def _is_tag(key) -> bool:
    return type(key) is tuple and len(key) == 2 and key[0] == "__coef"


def nullspace(columns: Sequence[dict]) -> list[dict]:
    """Kernel of the linear map whose j-th column is ``columns[j]``.

    Returns sparse vectors over column indices.  Each vector has a 1 at its own
    free column and 0 at every other free column, so the result is the
    reduced-echelon kernel basis ordered by free column.
    """
    # transpose to rows keyed by image coordinate
    rows: dict = {}
    for j, col in enumerate(columns):
        for r, v in col.items():
            if v:
                rows.setdefault(r, {})[j] = Fraction(v)
    red = RowReducer(range(len(columns)))
    for r in rows:
        red.add(rows[r])
    pivots = red.rows
    out = []
    for f in range(len(columns)):
        if f in pivots:
            continue
        vec = {f: Fraction(1)}
        for p, row in pivots.items():
            c = row.get(f)
            if c:
                vec[p] = -c
        out.append(vec)
    return out


def kernel_basis(matrix: Sequence[Sequence]) -> list[list[Fraction]]:
    """Null space basis of a dense rational matrix (list of rows)."""
    if not matrix:
        return []
    ncols = len(matrix[0])
    columns = [{i: Fraction(row[j]) for i, row in enumerate(matrix) if row[j]}
               for j in range(ncols)]
    return [[v.get(j, Fraction(0)) for j in range(ncols)] for v in nullspace(columns)]


def rank(vectors: Sequence[dict]) -> int:
    red = RowReducer()
    for v in vectors:
        red.add(v)
    return red.rank


class SpanSolver:
    """Coordinates of vectors in the span of a fixed list of vectors."""

    def __init__(self, basis: Sequence[dict]):
        self.basis = list(basis)
        self._red = RowReducer()
        for i, b in enumerate(self.basis):
            aug = dict(b)
            aug[("__coef", i)] = Fraction(-1)
            self._red.add(aug)

    def solve(self, target: dict) -> dict | None:
        """Return {i: c} with sum c_i basis_i == target, or None."""
        row = self._red.reduce(target)
        coeffs = {}
        for k, v in row.items():
            if not _is_tag(k):
                return None
            coeffs[k[1]] = v
        return coeffs


def solve_linear(columns: Sequence[dict], target: dict) -> dict | None:
    """One solution {j: c} of sum_j c_j columns[j] == target, or None."""
    return SpanSolver(columns).solve(target)


def mat_mul(a: list[list], b: list[list]) -> list[list]:
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
            for i in range(len(a))]


def mat_vec(a: list[list], v: list) -> list:
    return [sum(r[k] * v[k] for k in range(len(v))) for r in a]


def dense_rank(rows: list[list]) -> int:
    return rank([{j: Fraction(x) for j, x in enumerate(r) if x} for r in rows])
