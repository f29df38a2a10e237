"""Bigraded chain complexes of free modules and their homology."""

from __future__ import annotations

import heapq
from collections import defaultdict
from dataclasses import dataclass, field

from . import linalg
from .cobordism import EMPTY
from .rings import Ring, ZZ, QQ
from .tables import BigradedTable, Group


@dataclass
class BigradedComplex:
    """Free generators at bidegrees ``(h, q)`` with a sparse differential.

    ``diff[i]`` maps target generator indices to coefficients.  ``step`` is
    the q-degree carried by the deformation parameter (0 for the graded
    theory, 4 for Lee, 2 for Bar-Natan); in the deformed case entries only
    raise q, so q defines a filtration rather than a grading.
    """

    ring: Ring
    gens: list  # (h, q)
    diff: dict = field(default_factory=dict)
    theory: str = "Khovanov"
    step: int = 0

    @property
    def graded(self):
        return self.step == 0

    def __len__(self):
        return len(self.gens)

    def by_degree(self):
        out = defaultdict(list)
        for i, (h, _) in enumerate(self.gens):
            out[h].append(i)
        return dict(sorted(out.items()))

    def matrix(self, sources, targets=None):
        """Rows of the differential restricted to ``sources`` (and ``targets``)."""
        tset = None if targets is None else set(targets)
        rows = {}
        for i in sources:
            row = self.diff.get(i)
            if not row:
                continue
            if tset is not None:
                row = {j: v for j, v in row.items() if j in tset}
            if row:
                rows[i] = row
        return rows

    def apply(self, vec):
        """Differential of a chain given as ``{index: coeff}``."""
        ring = self.ring
        out = {}
        for i, c in vec.items():
            for j, v in self.diff.get(i, {}).items():
                out[j] = ring.norm(out.get(j, 0) + c * v)
        return {j: v for j, v in out.items() if v != 0}

    def d_squared_zero(self):
        ring = self.ring
        for i in range(len(self.gens)):
            acc = {}
            for j, v in self.diff.get(i, {}).items():
                for k, w in self.diff.get(j, {}).items():
                    acc[k] = ring.norm(acc.get(k, 0) + v * w)
            if any(val != 0 for val in acc.values()):
                return False
        return True

    def q_slices(self):
        out = defaultdict(list)
        for i, (_, q) in enumerate(self.gens):
            out[q].append(i)
        return dict(sorted(out.items()))


def _reduce_mod(rows, p):
    out = {}
    for r, row in rows.items():
        red = {c: int(v) % p for c, v in row.items() if int(v) % p}
        if red:
            out[r] = red
    return out


def _field_rank(rows, ring):
    if ring.name == "Q":
        return linalg.rank(rows, ring)
    return linalg.rank(_reduce_mod(rows, ring.characteristic), ring)


def homology(cx: BigradedComplex, ring: Ring = None, bit_bound=4096):
    """Bigraded homology of a graded complex.

    The complex's own coefficients must map to ``ring``: an integral complex
    can be read over any ring, a field complex only over itself.  Integral
    results come from Smith normal forms; if the coefficients blow up past
    ``bit_bound`` bits the table is marked degraded and carries ranks over
    Q only.
    """
    if ring is None:
        ring = cx.ring
    if cx.ring != ring and cx.ring != ZZ:
        raise ValueError(f"cannot read a complex over {cx.ring.name} as {ring.name}")
    if not cx.graded:
        from .filtered import associated_graded
        return associated_graded(cx)
    groups = {}
    degraded = False
    for q, idx in cx.q_slices().items():
        by_h = defaultdict(list)
        for i in idx:
            by_h[cx.gens[i][0]].append(i)
        ranks = {}
        tors = {}
        for h, src in by_h.items():
            tgt = by_h.get(h + 1, [])
            rows = cx.matrix(src, tgt) if tgt else {}
            if ring == ZZ:
                try:
                    rk, inv = linalg.smith_invariants(rows, bit_bound)
                except linalg.CoefficientBlowup:
                    degraded = True
                    rk, inv = linalg.rank(rows, QQ), []
                ranks[h] = rk
                tors[h + 1] = inv
            else:
                ranks[h] = _field_rank(rows, ring) if rows else 0
        for h, src in by_h.items():
            free = len(src) - ranks.get(h, 0) - ranks.get(h - 1, 0)
            torsion = tuple(tors.get(h, ())) if ring == ZZ else ()
            if free or torsion:
                groups[h, q] = Group(free, torsion)
    return BigradedTable(ring.name, groups, degraded)


def from_scan(result, theory):
    """Convert a fully closed scanned complex into a :class:`BigradedComplex`.

    Returns the complex and a map from scan object ids to generator indices.
    """
    order = sorted(result.objs, key=lambda i: (result.objs[i][0], result.objs[i][1], i))
    index = {o: k for k, o in enumerate(order)}
    gens = []
    for o in order:
        h, q, m = result.objs[o]
        if m != EMPTY:
            raise ValueError("complex still has open boundary")
        gens.append((h, q))
    diff = {}
    for i, row in result.out.items():
        if row:
            diff[index[i]] = {index[j]: mor.get(0, 0) for j, mor in row.items() if mor.get(0, 0) != 0}
    cx = BigradedComplex(theory.ring, gens, diff, theory.name, theory.deformation_step)
    return cx, index


def cancel_units(cx: BigradedComplex):
    """Gaussian elimination of every unit entry of an integral or field complex.

    Returns a smaller homotopy-equivalent complex (same ring).  For the
    graded theory any unit may go; for deformed complexes only entries that
    keep q are cancelled, which preserves the filtered homotopy type.
    """
    ring = cx.ring
    out = {i: dict(row) for i, row in cx.diff.items() if row}
    inn = defaultdict(dict)
    for i, row in out.items():
        for j, v in row.items():
            inn[j][i] = v
    for i in range(len(cx.gens)):
        out.setdefault(i, {})
    gens = cx.gens

    def ok(i, j, v):
        return ring.is_unit(v) and gens[i][1] == gens[j][1]

    heap = []

    def push(i):
        for j, v in out[i].items():
            if ok(i, j, v):
                heapq.heappush(heap, ((len(out[i]) - 1) * (len(inn[j]) - 1), i, j))

    alive = set(range(len(gens)))
    for i in list(out):
        push(i)
    while heap:
        cost, i, j = heapq.heappop(heap)
        if i not in alive or j not in alive:
            continue
        v = out[i].get(j)
        if v is None or not ok(i, j, v):
            continue
        cur = (len(out[i]) - 1) * (len(inn[j]) - 1)
        if cur != cost:
            heapq.heappush(heap, (cur, i, j))
            continue
        uinv = ring.inv(v)
        xs = [(x, w) for x, w in inn[j].items() if x != i]
        ys = [(y, w) for y, w in out[i].items() if y != j]
        for x, dxj in xs:
            row = out[x]
            f = ring.norm(dxj * uinv)
            for y, diy in ys:
                nv = ring.norm(row.get(y, 0) - f * diy)
                if nv != 0:
                    row[y] = nv
                    inn[y][x] = nv
                elif y in row:
                    del row[y]
                    del inn[y][x]
        for k in (i, j):
            for y in out.pop(k):
                inn[y].pop(k, None)
            for x in list(inn.pop(k, {})):
                out[x].pop(k, None)
            alive.discard(k)
        for x, _ in xs:
            push(x)
    keep = sorted(alive)
    index = {o: n for n, o in enumerate(keep)}
    diff = {}
    for i in keep:
        row = {index[j]: v for j, v in out[i].items()}
        if row:
            diff[index[i]] = row
    return BigradedComplex(ring, [gens[i] for i in keep], diff, cx.theory, cx.step)
