"""Filtered Lee and Bar-Natan theory: canonical cycles, filtrations, s-invariants.

Homology of a deformed complex carries the quantum filtration
``F_j H = classes represented by chains of q-degree >= j``.  Everything here
is computed by exact ranks on the scan-reduced complex.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

from .engine import QQ, BigradedTable, Group, PrimeField, make_theory, scan_complex
from .engine.cube import _vertex_circles, khovanov_cube
from .engine.filtered import INF, filtration_dims
from .engine.filtered import class_filtration_degree as _class_degree
from .engine.rings import Ring
from .links import InvalidParameter, LinkDiagram, components_and_linking, orientation_shift, reorient

__all__ = [
    "CanonicalCycle", "FiltrationTable", "canonical_cycle", "lee_complex", "barnatan_complex",
    "deformed_complex", "filtration_table", "class_filtration_degree", "s_invariant",
    "s_invariants", "gr_dimensions", "cube_chain", "dot_operator", "INF",
]


def _theory_for(field_ring: Ring):
    return "BarNatan" if field_ring.characteristic == 2 else "Lee"


@dataclass
class CanonicalCycle:
    """Canonical Lee (or Bar-Natan) cycle of an orientation.

    ``reversed`` lists the reversed components (1-based labels), ``vertex``
    is the oriented resolution and ``colors`` gives ``"a"`` or ``"b"`` per
    circle, keyed by the smallest edge id on the circle.  ``h`` is the
    homological degree in the grading of the unmodified diagram.
    """

    reversed: tuple
    vertex: tuple
    colors: dict
    h: int
    labels: dict = field(default_factory=dict)

    def chain(self):
        """Chain in cube coordinates as accepted by ``scan_complex``."""
        return [(self.vertex, self.labels)]


def _seifert_coloring(diag: LinkDiagram, vertex):
    """Proper 2-coloring of the circles at ``vertex`` (adjacent at a crossing differ)."""
    where, ncirc = _vertex_circles(diag, vertex)
    root_of = {}
    for e, i in where.items():
        root_of[i] = min(root_of.get(i, e), e)
    adj = {i: set() for i in range(ncirc)}
    for x, choice in zip(diag.crossings, vertex):
        (u, _), (v, _) = x.smoothing(choice)
        cu, cv = where[u], where[v]
        if cu == cv:
            raise ValueError("oriented resolution has a crossing touching one circle twice")
        adj[cu].add(cv)
        adj[cv].add(cu)
    color = {}
    for start in sorted(range(ncirc), key=lambda i: root_of[i]):
        if start in color:
            continue
        color[start] = "a"
        stack = [start]
        while stack:
            i = stack.pop()
            for j in adj[i]:
                want = "b" if color[i] == "a" else "a"
                if j not in color:
                    color[j] = want
                    stack.append(j)
                elif color[j] != want:
                    raise ValueError("Seifert graph is not bipartite")
    return {root_of[i]: c for i, c in color.items()}


def canonical_cycle(diag: LinkDiagram, orientation=(), theory="Lee", ring: Ring = QQ) -> CanonicalCycle:
    """Canonical cycle for the orientation obtained by reversing ``orientation``."""
    rev = tuple(sorted(set(orientation)))
    oriented = reorient(diag, rev)
    vertex = tuple(0 if x.sign > 0 else 1 for x in oriented.crossings)
    colors = _seifert_coloring(diag, vertex)
    th = theory if not isinstance(theory, str) else make_theory(theory, ring)
    a, b = th.idempotents()
    labels = {root: (a if c == "a" else b) for root, c in colors.items()}
    return CanonicalCycle(rev, vertex, colors, sum(vertex) - diag.n_minus, labels)


def deformed_complex(diag: LinkDiagram, ring: Ring = QQ, cycles=(), max_generators=None):
    """Scan-reduced Lee complex (Bar-Natan in characteristic 2) with pushed cycles."""
    th = make_theory(_theory_for(ring), ring)
    chains = [c.chain() for c in cycles]
    return scan_complex(diag, th, ring, tracked=chains, max_generators=max_generators)


def lee_complex(diag: LinkDiagram, field_ring: Ring = QQ, max_generators=None):
    """Scan-reduced filtered Lee complex; needs characteristic other than 2."""
    if field_ring.characteristic == 2:
        raise InvalidParameter("Lee theory needs characteristic other than 2; use barnatan_complex")
    if not field_ring.is_field:
        raise InvalidParameter("Lee theory is computed over a field")
    cx, _ = deformed_complex(diag, field_ring, max_generators=max_generators)
    return cx


def barnatan_complex(diag: LinkDiagram, field_ring: Ring = None, max_generators=None):
    """Scan-reduced filtered Bar-Natan complex over a field of characteristic 2."""
    if field_ring is None:
        field_ring = PrimeField(2)
    if field_ring.characteristic != 2:
        raise InvalidParameter("Bar-Natan theory is the characteristic 2 deformation")
    cx, _ = deformed_complex(diag, field_ring, max_generators=max_generators)
    return cx


@dataclass
class FiltrationTable:
    """``levels[h][j] = dim F_j H^h`` at every level j where generators sit."""

    ring: str
    levels: dict

    def dim(self, h, j):
        row = self.levels.get(h, {})
        above = [k for k in row if k >= j]
        return row[min(above)] if above else 0

    def gr(self):
        out = {}
        for h, row in self.levels.items():
            js = sorted(row)
            for k, j in enumerate(js):
                g = row[j] - (row[js[k + 1]] if k + 1 < len(js) else 0)
                if g:
                    out[h, j] = g
        return out

    def is_monotone(self):
        return all(row[j] >= row[k] for row in self.levels.values()
                   for j in row for k in row if j < k)

    def total(self, h):
        row = self.levels.get(h, {})
        return row[min(row)] if row else 0

    def to_json(self):
        return [{"h": h, "levels": [{"q": j, "dim_F": row[j]} for j in sorted(row)]}
                for h, row in sorted(self.levels.items())]

    def dumps(self):
        return json.dumps({"ring": self.ring, "filtration": self.to_json()}, sort_keys=True)

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        ring = data.get("ring", "Q") if isinstance(data, dict) else "Q"
        rows = data["filtration"] if isinstance(data, dict) else data
        levels = {r["h"]: {lv["q"]: lv["dim_F"] for lv in r["levels"]} for r in rows}
        return cls(ring, levels)

    def __eq__(self, other):
        return isinstance(other, FiltrationTable) and self.ring == other.ring \
            and self.levels == other.levels


def filtration_table(cx) -> FiltrationTable:
    dims = filtration_dims(cx)
    levels = {h: {j: v for j, v in row.items()} for h, row in dims.items()}
    levels = {h: row for h, row in levels.items() if any(row.values())}
    return FiltrationTable(cx.ring.name, levels)


def gr_dimensions(ft: FiltrationTable) -> BigradedTable:
    return BigradedTable(ft.ring, {k: Group(v) for k, v in ft.gr().items()})


def class_filtration_degree(cx, cycle):
    """Filtration degree of the class of ``cycle`` (a chain ``{index: coeff}``)."""
    hs = {cx.gens[i][0] for i, c in cycle.items() if c != 0}
    if len(hs) > 1:
        raise InvalidParameter("chain spans several homological degrees")
    if not hs:
        warnings.warn("zero chain; returning infinite filtration degree", stacklevel=2)
        return INF
    deg = _class_degree(cx, hs.pop(), cycle)
    if deg == INF:
        warnings.warn("cycle is a boundary; returning infinite filtration degree", stacklevel=2)
    return deg


def s_invariants(diag: LinkDiagram, orientations, field_ring: Ring = QQ, max_generators=None):
    """s for several orientations of ``diag`` from a single scan."""
    orientations = [tuple(sorted(set(o))) for o in orientations]
    th = make_theory(_theory_for(field_ring), field_ring)
    cycles = [canonical_cycle(diag, o, th) for o in orientations]
    cx, vectors = deformed_complex(diag, field_ring, cycles, max_generators)
    _, linking = components_and_linking(diag)
    out = {}
    for o, vec in zip(orientations, vectors):
        _, qshift = orientation_shift(linking, o)
        j = class_filtration_degree(cx, vec)
        if j == INF:
            raise ArithmeticError(f"canonical class of orientation {o} vanished")
        out[o] = j - qshift + 1
    return out


def s_invariant(diag: LinkDiagram, orientation=(), field_ring: Ring = QQ, max_generators=None) -> int:
    """s-invariant of ``diag`` with the components in ``orientation`` reversed.

    Over characteristic 2 the Bar-Natan deformation is used; that case is
    reported but has no independent reference value.
    """
    return s_invariants(diag, [orientation], field_ring, max_generators)[tuple(sorted(set(orientation)))]


# ---------------------------------------------------------------- cube side

def cube_chain(diag: LinkDiagram, cycle: CanonicalCycle, theory):
    """Full cube complex for ``theory`` and ``cycle`` expanded in its basis."""
    cx = khovanov_cube(diag, theory.ring, theory)
    offset = 0
    target = sum(v << k for k, v in enumerate(cycle.vertex))
    for v in range(target):
        _, n = _vertex_circles(diag, tuple(v >> k & 1 for k in range(len(diag.crossings))))
        offset += 1 << n
    where, n = _vertex_circles(diag, cycle.vertex)
    roots = sorted({min(e for e, i in where.items() if i == c) for c in range(n)})
    vec = {0: theory.ring.norm(1)}
    for pos, root in enumerate(roots):
        c0, c1 = cycle.labels[root]
        nxt = {}
        for lab, c in vec.items():
            for bit, coef in ((0, c0), (1, c1)):
                if coef != 0:
                    k = lab | bit << pos
                    nxt[k] = theory.ring.norm(nxt.get(k, 0) + c * coef)
        vec = {k: v for k, v in nxt.items() if v != 0}
    return cx, {offset + k: v for k, v in vec.items()}


def dot_operator(diag: LinkDiagram, edge: int, theory):
    """Multiplication by X on the circle through ``edge``, as a cube matrix.

    It is a chain map lowering the quantum filtration by at most 2.
    Returns ``{source index: {target index: coeff}}``.
    """
    ring = theory.ring
    c = len(diag.crossings)
    out = {}
    offset = 0
    for v in range(1 << c):
        where, n = _vertex_circles(diag, tuple(v >> k & 1 for k in range(c)))
        pos = where[edge]
        for lab in range(1 << n):
            row = {}
            if lab >> pos & 1:
                if theory.h != 0:
                    row[offset + lab] = ring.norm(theory.h)
                if theory.t != 0:
                    row[offset + (lab & ~(1 << pos))] = ring.norm(theory.t)
            else:
                row[offset + (lab | 1 << pos)] = ring.norm(1)
            out[offset + lab] = {k: x for k, x in row.items() if x != 0}
        offset += 1 << n
    return out
