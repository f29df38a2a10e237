"""Result containers: bigraded homology tables and two-variable Laurent polynomials."""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field

INF = float("inf")


@dataclass
class Group:
    free: int = 0
    torsion: tuple = ()

    def is_zero(self):
        return self.free == 0 and not self.torsion


@dataclass
class BigradedTable:
    """Homology by bidegree: free rank plus invariant factors (over Z) or dimension.

    Over a field ``torsion`` is always empty and ``free`` is the dimension.
    ``degraded`` is set when an integral computation fell back to field ranks.
    """

    ring: str
    groups: dict = field(default_factory=dict)  # (h, q) -> Group
    degraded: bool = False

    def __post_init__(self):
        self.groups = {k: g for k, g in self.groups.items() if not g.is_zero()}

    @property
    def is_field(self):
        return self.ring != "Z"

    def dim(self, h, q):
        g = self.groups.get((h, q))
        return g.free if g else 0

    def group(self, h, q):
        return self.groups.get((h, q), Group())

    def total_rank(self):
        return sum(g.free for g in self.groups.values())

    def rank_by_h(self):
        out = defaultdict(int)
        for (h, _), g in self.groups.items():
            out[h] += g.free
        return dict(sorted(out.items()))

    def support(self):
        return sorted(self.groups)

    def shifted(self, dh, dq):
        return BigradedTable(self.ring, {(h + dh, q + dq): g for (h, q), g in self.groups.items()},
                             self.degraded)

    def to_json(self):
        groups = [{"h": h, "q": q, "free": g.free, "torsion": list(g.torsion)}
                  for (h, q), g in sorted(self.groups.items())]
        out = {"ring": self.ring, "groups": groups}
        if self.degraded:
            out["degraded"] = True
        return out

    def dumps(self):
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        groups = {(g["h"], g["q"]): Group(g["free"], tuple(g.get("torsion", ())))
                  for g in data["groups"]}
        return cls(data["ring"], groups, data.get("degraded", False))

    def __eq__(self, other):
        return (isinstance(other, BigradedTable) and self.ring == other.ring
                and self.groups == other.groups)

    def to_csv(self):
        lines = ["h,q,free,torsion"]
        for (h, q), g in sorted(self.groups.items()):
            lines.append(f"{h},{q},{g.free},{' '.join(map(str, g.torsion))}")
        return "\n".join(lines) + "\n"

    def render(self):
        """Grid with h across and q down (highest q first)."""
        if not self.groups:
            return "(zero)\n"
        hs = sorted({h for h, _ in self.groups})
        qs = sorted({q for _, q in self.groups}, reverse=True)
        hs = list(range(hs[0], hs[-1] + 1))

        def cell(h, q):
            g = self.groups.get((h, q))
            if g is None:
                return ""
            if self.is_field:
                return str(g.free)
            parts = []
            if g.free:
                parts.append("Z" if g.free == 1 else f"Z^{g.free}")
            tors = defaultdict(int)
            for t in g.torsion:
                tors[t] += 1
            for t, k in sorted(tors.items()):
                parts.append(f"Z{t}" if k == 1 else f"Z{t}^{k}")
            return "+".join(parts)

        width = max([len(cell(h, q)) for h in hs for q in qs] + [len(str(h)) for h in hs] + [3])
        out = ["q\\h".rjust(5) + " " + " ".join(str(h).rjust(width) for h in hs)]
        for q in qs:
            out.append(str(q).rjust(5) + " " + " ".join(cell(h, q).rjust(width) for h in hs))
        return "\n".join(out) + "\n"


def field_table(ring_name, dims):
    """Table from a mapping ``(h, q) -> dimension``."""
    return BigradedTable(ring_name, {k: Group(v) for k, v in dims.items() if v})


def min_q_profile(table, hs=None):
    """``h -> smallest q`` with a nonzero group (``INF`` where the column is empty)."""
    prof = {}
    for (h, q), g in table.groups.items():
        if not g.is_zero():
            prof[h] = min(prof.get(h, INF), q)
    if hs is None:
        return dict(sorted(prof.items()))
    return {h: prof.get(h, INF) for h in hs}


class LaurentPoly2:
    """Integer Laurent polynomial in t and q, stored as ``{(i, j): c}`` for t^i q^j."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def monomial(cls, i, j, c=1):
        return cls({(i, j): c})

    @classmethod
    def one(cls):
        return cls({(0, 0): 1})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return LaurentPoly2(out)

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPoly2({k: v * other for k, v in self.terms.items()})
        out = defaultdict(int)
        for (a, b), u in self.terms.items():
            for (c, d), v in other.terms.items():
                out[a + c, b + d] += u * v
        return LaurentPoly2(out)

    __rmul__ = __mul__

    def shift(self, dt, dq):
        return LaurentPoly2({(i + dt, j + dq): v for (i, j), v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, LaurentPoly2) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def evaluate_t(self, t):
        """Substitute an integer for t; returns a q-only polynomial (t-exponent 0)."""
        out = defaultdict(int)
        for (i, j), v in self.terms.items():
            out[0, j] += v * t ** i
        return LaurentPoly2(out)

    def __call__(self, t, q):
        from fractions import Fraction
        total = Fraction(0)
        for (i, j), v in self.terms.items():
            total += v * Fraction(t) ** i * Fraction(q) ** j
        return total

    def coefficients_nonnegative(self):
        return all(v >= 0 for v in self.terms.values())

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (i, j), v in sorted(self.terms.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            mono = []
            if i:
                mono.append("t" if i == 1 else f"t^{i}")
            if j:
                mono.append("q" if j == 1 else f"q^{j}")
            body = "*".join(mono)
            if not body:
                parts.append(str(v))
            elif v == 1:
                parts.append(body)
            elif v == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{v}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self):
        return [{"t": i, "q": j, "c": v} for (i, j), v in sorted(self.terms.items())]


def poincare(table):
    """Sum of dim * t^h q^q over a field-coefficient table."""
    if not table.is_field:
        raise ValueError("Poincare polynomials need field coefficients")
    return LaurentPoly2({k: g.free for k, g in table.groups.items()})


def euler_characteristic(table):
    """Sum of (-1)^h dim q^j as a q-only polynomial."""
    out = defaultdict(int)
    for (h, q), g in table.groups.items():
        out[0, q] += (-1) ** (h % 2) * g.free
    return LaurentPoly2(out)
