"""The full cube of resolutions, built generator by generator.

This is the slow reference construction: every vertex of {0,1}^c is
resolved, every circle labelled 1 or X, and edge maps are multiplication or
comultiplication of the Frobenius algebra with the usual sign
``(-1)^(number of 1s before the changed coordinate)``.
"""

from __future__ import annotations

from .complexes import BigradedComplex
from .frobenius import Theory, khovanov
from .rings import ZZ

NAIVE_LIMIT = 14


class TooManyCrossings(ValueError):
    pass


def _vertex_circles(diag, vertex):
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, choice in zip(diag.crossings, vertex):
        for u, v in x.smoothing(choice):
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)
    for e in diag.loops:
        find(e)
    roots = sorted({find(e) for e in list(parent)})
    index = {r: i for i, r in enumerate(roots)}
    return {e: index[find(e)] for e in list(parent)}, len(roots)


def khovanov_cube(diag, ring=ZZ, theory: Theory = None, limit=NAIVE_LIMIT):
    """Full cube complex of ``diag`` over ``ring`` (undeformed unless ``theory`` given)."""
    c = len(diag.crossings)
    if c > limit:
        raise TooManyCrossings(
            f"{c} crossings exceed the naive cube limit of {limit}; use scan_complex")
    if theory is None:
        theory = khovanov(ring)
    ring = theory.ring
    npos, nneg = diag.n_plus, diag.n_minus
    gens = []
    offsets = {}
    layout = {}
    for v in range(1 << c):
        vertex = tuple(v >> k & 1 for k in range(c))
        where, ncirc = _vertex_circles(diag, vertex)
        layout[v] = (where, ncirc)
        offsets[v] = len(gens)
        r = sum(vertex)
        for lab in range(1 << ncirc):
            xs = bin(lab).count("1")
            gens.append((r - nneg, (ncirc - 2 * xs) + r + npos - 2 * nneg))
    diff = {}
    h, t = theory.h, theory.t
    for v in range(1 << c):
        where, n0 = layout[v]
        for k in range(c):
            if v >> k & 1:
                continue
            w = v | 1 << k
            where1, n1 = layout[w]
            sign = -1 if bin(v & ((1 << k) - 1)).count("1") % 2 else 1
            x = diag.crossings[k]
            (a, b), (cc, d) = x.smoothing(0)
            (a1, d1), (b1, c1) = x.smoothing(1)
            # circles of v relabelled into w; the changed ones handled apart
            old = sorted({where[a], where[cc]})
            new = sorted({where1[a1], where1[b1]})
            keep = {}
            for e, i in where.items():
                if i not in old:
                    keep[i] = where1[e]
            for lab in range(1 << n0):
                base = 0
                for i, j in keep.items():
                    if lab >> i & 1:
                        base |= 1 << j
                src = offsets[v] + lab
                row = diff.setdefault(src, {})
                if len(old) == 2 and len(new) == 1:
                    xa, xb = lab >> old[0] & 1, lab >> old[1] & 1
                    tgt = new[0]
                    if xa and xb:
                        terms = ((1, h), (0, t))
                    elif xa or xb:
                        terms = ((1, 1),)
                    else:
                        terms = ((0, 1),)
                    for bit, coef in terms:
                        if coef != 0:
                            j = offsets[w] + (base | bit << tgt)
                            row[j] = ring.norm(row.get(j, 0) + sign * coef)
                else:
                    xa = lab >> old[0] & 1
                    p, q = new
                    if xa:
                        terms = ((1, 1, 1), (0, 0, t))
                    else:
                        terms = ((0, 1, 1), (1, 0, 1), (0, 0, -h))
                    for bp, bq, coef in terms:
                        if coef != 0:
                            j = offsets[w] + (base | bp << p | bq << q)
                            row[j] = ring.norm(row.get(j, 0) + sign * coef)
                for j in [j for j, val in row.items() if val == 0]:
                    del row[j]
    diff = {i: row for i, row in diff.items() if row}
    return BigradedComplex(ring, gens, diff, theory.name, theory.deformation_step)
