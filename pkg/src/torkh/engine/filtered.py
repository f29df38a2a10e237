"""Quantum filtration on the homology of a deformed (Lee or Bar-Natan) complex.

``F_j C`` is spanned by generators of q-degree at least ``j``; the
differential never lowers q.  All numbers come from exact ranks:

* ``dim(Z^h & F_j) = dim F_j C^h - rank(d^h restricted to F_j)``
* ``dim(B^h & F_j) = rank d^(h-1) - rank(pi_{<j} d^(h-1))``

where ``pi_{<j}`` keeps the components of q-degree below ``j``.
"""

from __future__ import annotations

from collections import defaultdict

from . import linalg
from .tables import BigradedTable, Group

INF = float("inf")


def _rank(rows, ring):
    return linalg.rank(rows, ring) if rows else 0


def _levels(cx, idx):
    return sorted({cx.gens[i][1] for i in idx})


def filtration_dims(cx):
    """``h -> {j: dim F_j H^h}`` at every level j occurring in degree h."""
    ring = cx.ring
    deg = cx.by_degree()
    out = {}
    for h, src in deg.items():
        prev = deg.get(h - 1, [])
        tgt = deg.get(h + 1, [])
        d_in = cx.matrix(prev, src) if prev else {}
        rank_in = _rank(d_in, ring)
        dims = {}
        for j in _levels(cx, src):
            top = [i for i in src if cx.gens[i][1] >= j]
            z = len(top) - (_rank(cx.matrix(top, tgt), ring) if tgt else 0)
            low = {i: {k: v for k, v in row.items() if cx.gens[k][1] < j}
                   for i, row in d_in.items()}
            low = {i: row for i, row in low.items() if row}
            b = rank_in - _rank(low, ring)
            dims[j] = z - b
        out[h] = dims
    return out


def associated_graded(cx):
    """Associated graded dimensions of the filtered homology as a table."""
    dims = filtration_dims(cx)
    groups = {}
    for h, levels in dims.items():
        js = sorted(levels)
        for k, j in enumerate(js):
            above = levels[js[k + 1]] if k + 1 < len(js) else 0
            # levels differ by multiples of 2; any gap has equal F_j
            g = levels[j] - above
            if g:
                groups[h, j] = Group(g)
    return BigradedTable(cx.ring.name, groups)


def class_filtration_degree(cx, h, z):
    """Largest j with ``z`` in ``F_j C + im d``; ``INF`` if ``z`` is a boundary.

    ``z`` is a chain ``{index: coeff}`` supported in homological degree h;
    raises ``ValueError`` if it is not a cycle.
    """
    if cx.apply(z):
        raise ValueError("chain is not a cycle")
    ring = cx.ring
    deg = cx.by_degree()
    src = deg.get(h, [])
    prev = deg.get(h - 1, [])
    d_in = cx.matrix(prev, src) if prev else {}
    marker = ("z",)

    def low_rank(j, with_z):
        rows = {}
        for i, row in d_in.items():
            r = {k: v for k, v in row.items() if cx.gens[k][1] < j}
            if r:
                rows[i] = r
        if with_z:
            r = {k: v for k, v in z.items() if cx.gens[k][1] < j and v != 0}
            if r:
                rows[marker] = r
        return _rank(_keyed(rows), ring)

    levels = sorted({cx.gens[i][1] for i in src}, reverse=True)
    if not z:
        return INF
    top = (levels[0] + 2) if levels else 0
    if low_rank(top, True) == low_rank(top, False):
        return INF
    for j in levels:
        if low_rank(j, True) == low_rank(j, False):
            return j
    return levels[-1] if levels else INF


def _keyed(rows):
    """Re-key rows with integers so heap ordering never compares mixed types."""
    return {k: row for k, row in enumerate(rows.values())}


def chain_degree(cx, z):
    hs = {cx.gens[i][0] for i, c in z.items() if c != 0}
    if len(hs) > 1:
        raise ValueError("chain spans several homological degrees")
    return hs.pop() if hs else None


def lowest_q(cx, z):
    return min((cx.gens[i][1] for i, c in z.items() if c != 0), default=INF)


def grouped_by_h(table):
    out = defaultdict(dict)
    for (h, q), g in table.groups.items():
        out[h][q] = g.free
    return dict(out)
