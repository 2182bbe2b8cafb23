"""Degenerate E(3|6)-module labels, charges and the fundamental multiplet table."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources


@dataclass(frozen=True, order=True)
class MultipletLabel:
    m: int      # sl3 highest weight (m, n); m0 is S^m C^3, 0n is S^n C^3*
    n: int
    b: int      # sl2 label, S^b C^2
    Y: Fraction

    def __post_init__(self):
        if min(self.m, self.n, self.b) < 0:
            raise ValueError(f"labels must be nonnegative: {self}")
        object.__setattr__(self, "Y", Fraction(self.Y))
        if (3 * self.Y).denominator != 1:
            raise ValueError(f"hypercharge {self.Y} is not in (1/3)Z")

    def __str__(self):
        return f"({self.m}{self.n},{self.b},{_fmt(self.Y)})"

    @classmethod
    def parse(cls, text: str) -> MultipletLabel:
        """Read ``(01,1,1/3)``."""
        body = text.strip().strip("()")
        sl3, b, y = (t.strip() for t in body.split(","))
        if len(sl3) != 2:
            raise ValueError(f"sl3 label {sl3!r} must be two digits")
        return cls(int(sl3[0]), int(sl3[1]), int(b), Fraction(y))


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


TWO_THIRDS = Fraction(2, 3)

# the four families, as functions of (m, b)
FAMILIES = (
    lambda m, b: MultipletLabel(0, m, b, -b - TWO_THIRDS * m - 2),
    lambda m, b: MultipletLabel(0, m, b, b - TWO_THIRDS * m),
    lambda m, b: MultipletLabel(m, 0, b, -b + TWO_THIRDS * m),
    lambda m, b: MultipletLabel(m, 0, b, b + TWO_THIRDS * m + 2),
)


def degenerate_families(m_max: int, b_max: int) -> list[MultipletLabel]:
    out = set()
    for fam in FAMILIES:
        for m in range(m_max + 1):
            for b in range(b_max + 1):
                out.add(fam(m, b))
    return sorted(out)


def family_matches(label: MultipletLabel) -> list[tuple[int, int, int]]:
    """All (family, m, b) producing the label; each family equation is solved for Y."""
    out = []
    if label.m == 0:
        m = label.n
        for k in (0, 1):
            if FAMILIES[k](m, label.b) == label:
                out.append((k + 1, m, label.b))
    if label.n == 0:
        m = label.m
        for k in (2, 3):
            if FAMILIES[k](m, label.b) == label:
                out.append((k + 1, m, label.b))
    return out


def is_degenerate(label: MultipletLabel) -> bool:
    return bool(family_matches(label))


def charges(label: MultipletLabel) -> list[Fraction]:
    """Q = I3 + Y/2 over the I3 spectrum b/2, b/2 - 1, ..., -b/2 (descending)."""
    half = Fraction(label.b, 2)
    return [half - k + label.Y / 2 for k in range(label.b + 1)]


def sl3_dim(m: int, n: int) -> int:
    return (m + 1) * (n + 1) * (m + n + 2) // 2


ALLOWED_SL3 = {(0, 0), (1, 0), (0, 1), (1, 1)}


def is_fundamental(label: MultipletLabel) -> bool:
    return (label.m, label.n) in ALLOWED_SL3 and max(abs(q) for q in charges(label)) <= 1


def fundamental_filter(candidates) -> list[MultipletLabel]:
    return [c for c in candidates if is_fundamental(c)]


# fundamental multiplet table ----------------------------------------------------------------------------

@dataclass
class Row:
    labels: list
    charges: list
    particles: str
    kind: str
    degenerate: bool | None = None


def load_table1(path=None) -> list[Row]:
    if path is None:
        text = resources.files("superlie.data").joinpath("table1.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    rows = []
    for r in json.loads(text)["rows"]:
        rows.append(Row([MultipletLabel.parse(x) for x in r["labels"]],
                        [Fraction(q) for q in r["charges"]], r["particles"], r["kind"],
                        r.get("degenerate")))
    return rows


def table1_verify(rows: list[Row] | None = None) -> dict:
    """Check every row: charges, the fundamental filter and the stored degeneracy pattern."""
    rows = load_table1() if rows is None else rows
    out = []
    ok = True
    for r in rows:
        computed = sorted({q for lab in r.labels for q in charges(lab)})
        charge_ok = computed == sorted(set(r.charges))
        kept = all(is_fundamental(lab) for lab in r.labels)
        degen = [is_degenerate(lab) for lab in r.labels]
        degen_ok = r.degenerate is None or all(d == r.degenerate for d in degen)
        row_ok = charge_ok and kept and degen_ok
        ok &= row_ok
        out.append({
            "label": " ".join(str(lab) for lab in r.labels),
            "charges": [_fmt(q) for q in computed],
            "printed": [_fmt(q) for q in r.charges],
            "sl3_dim": sl3_dim(r.labels[0].m, r.labels[0].n),
            "kept": kept,
            "degenerate": degen[0] if len(set(degen)) == 1 else degen,
            "particles": r.particles,
            "kind": r.kind,
            "ok": row_ok,
        })
    return {"ok": ok, "rows": out,
            "fermion_rows": sum(r.kind == "fermion" for r in rows),
            "boson_rows": sum(r.kind == "boson" for r in rows)}
