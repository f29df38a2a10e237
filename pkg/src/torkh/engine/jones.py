"""Kauffman bracket state sum, evaluated crossing by crossing.

Partial states are crossingless matchings on the boundary of the processed
part, each weighted by a Laurent polynomial in A.  Closed loops are traded
for the factor ``-A^2 - A^-2`` as soon as they appear, so the sum never
enumerates all 2^c states explicitly.  This module shares no code with the
cobordism engine and serves as an independent check on Euler
characteristics.
"""

from __future__ import annotations

from collections import defaultdict

from .tables import LaurentPoly2

JONES_LIMIT = 22


class BracketTooLarge(ValueError):
    pass


def _pmul(p, q):
    out = defaultdict(int)
    for a, u in p.items():
        for b, v in q.items():
            out[a + b] += u * v
    return {k: v for k, v in out.items() if v}


def _padd(acc, p, scale_exp=0):
    for a, u in p.items():
        acc[a + scale_exp] += u


DELTA = {2: -1, -2: -1}


def _glue(state, arcs):
    """Glue a matching (tuple of pairs) with new arcs; return (matching, loops)."""
    adj = defaultdict(list)
    for eid, (x, y) in enumerate(list(state) + list(arcs)):
        adj[x].append((y, eid))
        adj[y].append((x, eid))
    used = set()
    pairs = []
    for start in sorted(adj):
        if len(adj[start]) != 1 or adj[start][0][1] in used:
            continue
        x = start
        while True:
            y, e = next((y, e) for y, e in adj[x] if e not in used)
            used.add(e)
            x = y
            if len(adj[x]) == 1:
                pairs.append((min(start, x), max(start, x)))
                break
    loops = 0
    for start in sorted(adj):
        free = [e for _, e in adj[start] if e not in used]
        if not free:
            continue
        x = start
        while True:
            nxt = [(y, e) for y, e in adj[x] if e not in used]
            if not nxt:
                break
            y, e = nxt[0]
            used.add(e)
            x = y
        loops += 1
    return tuple(sorted(pairs)), loops


def kauffman_bracket(diag, limit=None):
    """<D> as ``{exponent of A: coefficient}``, normalized so <empty> = 1.

    ``limit`` caps the crossing count (``JONES_LIMIT`` by default).
    """
    limit = JONES_LIMIT if limit is None else limit
    if len(diag.crossings) > limit:
        raise BracketTooLarge(f"{len(diag.crossings)} crossings exceed {limit}")
    fresh = max(diag.edges(), default=0) + 1
    states = {(): {0: 1}}
    for x in diag.crossings:
        slots = list(x.slots)
        extra = []
        seen = set()
        for s, e in enumerate(slots):
            if e in seen:
                slots[s] = fresh
                extra.append((e, fresh))
                fresh += 1
            seen.add(e)
        a, b, c, d = slots
        options = ((((a, b), (c, d)), 1), (((a, d), (b, c)), -1))
        nxt = defaultdict(lambda: defaultdict(int))
        for st, poly in states.items():
            for arcs, aexp in options:
                m, loops = _glue(st, list(arcs) + extra)
                p = poly
                for _ in range(loops):
                    p = _pmul(p, DELTA)
                _padd(nxt[m], p, aexp)
        states = {m: {k: v for k, v in p.items() if v} for m, p in nxt.items()}
    total = defaultdict(int)
    for m, p in states.items():
        if m:
            raise ValueError("diagram is not closed")
        _padd(total, p)
    result = {k: v for k, v in total.items() if v}
    for _ in diag.loops:
        result = _pmul(result, DELTA)
    return result


def jones_kauffman(diag, limit=None):
    """Unnormalized Jones polynomial in q (equal to the graded Euler characteristic).

    ``(-A^3)^(-w) <D>`` with ``A^(2j) -> (-1)^j q^(-j)``; the unknot gives
    ``q + q^-1``.
    """
    br = kauffman_bracket(diag, limit)
    w = diag.writhe
    f = _pmul(br, {-3 * w: (-1) ** (w % 2)})
    out = {}
    for k, v in f.items():
        if k % 2:
            raise ArithmeticError("odd power of A in the normalized bracket")
        j = k // 2
        out[(0, -j)] = out.get((0, -j), 0) + v * (-1) ** (j % 2)
    return LaurentPoly2(out)
