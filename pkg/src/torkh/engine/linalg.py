"""Exact sparse linear algebra: ranks over fields and Smith normal form over Z.

Matrices are dicts ``row -> {col: value}`` with nonzero integer (or field)
entries.  Every routine works on a private copy.
"""

from __future__ import annotations

import heapq
import math

import gmpy2

from .rings import Ring


class CoefficientBlowup(ArithmeticError):
    """An intermediate integer exceeded the configured bit bound."""


def _copy(rows):
    return {r: dict(v) for r, v in rows.items() if v}


def _columns(rows):
    cols = {}
    for r, row in rows.items():
        for c in row:
            cols.setdefault(c, set()).add(r)
    return cols


def _pivot_eliminate(rows, cols, pr, pc, factor_of, norm):
    """Clear column ``pc`` using row ``pr`` and drop both.

    ``factor_of(v)`` gives the multiplier for a row whose ``pc`` entry is v.
    """
    prow = rows.pop(pr)
    for c in prow:
        cols[c].discard(pr)
    targets = list(cols.pop(pc, ()))
    for r in targets:
        row = rows[r]
        f = factor_of(row[pc])
        for c, v in prow.items():
            if c == pc:
                continue
            nv = norm(row.get(c, 0) - f * v)
            if nv:
                if c not in row:
                    cols.setdefault(c, set()).add(r)
                row[c] = nv
            elif c in row:
                del row[c]
                cols[c].discard(r)
        row.pop(pc, None)
        if not row:
            del rows[r]


def _eliminate(rows, accept, pivot_factor, norm):
    """Sparse elimination with accepted pivots, cheapest (Markowitz) first.

    Priorities are refreshed lazily: a popped candidate whose cost changed
    is pushed back.  Returns the number of pivots; ``rows`` keeps the rest.
    """
    cols = _columns(rows)
    heap = []

    def push_row(r):
        row = rows[r]
        lr = len(row) - 1
        for c, v in row.items():
            if accept(v):
                heapq.heappush(heap, (lr * (len(cols[c]) - 1), r, c))

    for r in list(rows):
        push_row(r)
    rk = 0
    while heap:
        cost, r, c = heapq.heappop(heap)
        row = rows.get(r)
        if row is None or c not in row or not accept(row[c]):
            continue
        cur = (len(row) - 1) * (len(cols[c]) - 1)
        if cur != cost:
            heapq.heappush(heap, (cur, r, c))
            continue
        touched = [t for t in cols[c] if t != r]
        _pivot_eliminate(rows, cols, r, c, pivot_factor(row[c]), norm)
        rk += 1
        for t in touched:
            if t in rows:
                push_row(t)
    return rk


def _is_unit(v):
    return v == 1 or v == -1


def rank(rows, ring: Ring):
    """Rank over a field (``Q`` or ``F_p``) of an integer or field matrix."""
    if not ring.is_field:
        raise ValueError("rank is computed over a field")
    if ring.name == "Q":
        return _rank_rational(rows)
    p = ring.characteristic
    work = {}
    for r, row in rows.items():
        red = {c: int(v) % p for c, v in row.items() if int(v) % p}
        if red:
            work[r] = red
    return _eliminate(work, bool, lambda u: (lambda v, i=pow(u, -1, p): v * i % p),
                      lambda x: x % p)


def _rank_rational(rows):
    # unit pivots keep integers small; the remainder uses exact rationals
    work = _copy(rows)
    rk = _eliminate(work, _is_unit, lambda u: (lambda v: v * u), lambda x: x)
    if not work:
        return rk
    qrows = {r: {c: gmpy2.mpq(v) for c, v in row.items()} for r, row in work.items()}
    return rk + _eliminate(qrows, bool, lambda u: (lambda v, i=1 / u: v * i), lambda x: x)


def smith_invariants(rows, bit_bound=4096):
    """Rank and nontrivial invariant factors of an integer matrix.

    Unit pivots are eliminated sparsely first; the leftover block is
    diagonalized densely with gcd steps and the diagonal normalized into a
    divisibility chain.  Raises :class:`CoefficientBlowup` when an entry
    exceeds ``bit_bound`` bits.
    """
    work = _copy(rows)
    rk = _eliminate(work, _is_unit, lambda u: (lambda v: v * u), lambda x: x)
    if not work:
        return rk, []
    diag = _dense_diagonal(work, bit_bound)
    rk += len(diag)
    return rk, _divisor_chain(diag)


def _dense_diagonal(rows, bit_bound):
    col_ids = sorted({c for row in rows.values() for c in row})
    cindex = {c: i for i, c in enumerate(col_ids)}
    mat = []
    for row in rows.values():
        line = [0] * len(col_ids)
        for c, v in row.items():
            line[cindex[c]] = int(v)
        mat.append(line)
    diag = []
    limit = 1 << bit_bound
    while mat:
        # smallest nonzero entry as pivot
        best = None
        for i, line in enumerate(mat):
            for j, v in enumerate(line):
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        mat[0], mat[i] = mat[i], mat[0]
        for line in mat:
            line[0], line[j] = line[j], line[0]
        while True:
            p = mat[0][0]
            done = True
            for r in range(1, len(mat)):
                v = mat[r][0]
                if v:
                    q = v // p
                    line, top = mat[r], mat[0]
                    for c in range(len(line)):
                        if top[c]:
                            line[c] -= q * top[c]
                    if line[0]:
                        done = False
            top = mat[0]
            for c in range(1, len(top)):
                v = top[c]
                if v:
                    q = v // p
                    for line in mat:
                        if line[0]:
                            line[c] -= q * line[0]
                    if top[c]:
                        done = False
            if done:
                break
            best = None
            for r, line in enumerate(mat):
                if line[0] and (best is None or abs(line[0]) < best[0]):
                    best = (abs(line[0]), r, 0)
            for c, v in enumerate(mat[0]):
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), 0, c)
            _, r, c = best
            if r:
                mat[0], mat[r] = mat[r], mat[0]
            if c:
                for line in mat:
                    line[0], line[c] = line[c], line[0]
            if abs(mat[0][0]) > limit:
                raise CoefficientBlowup("Smith normal form entries too large")
        diag.append(abs(mat[0][0]))
        mat = [line[1:] for line in mat[1:]]
        mat = [line for line in mat if any(line)]
        if mat:
            width = len(mat[0])
            keep = [c for c in range(width) if any(line[c] for line in mat)]
            mat = [[line[c] for c in keep] for line in mat]
    return diag


def _divisor_chain(diag):
    d = sorted(diag)
    n = len(d)
    for i in range(n):
        for j in range(i + 1, n):
            g = math.gcd(d[i], d[j])
            if g != d[i]:
                d[i], d[j] = g, d[i] * d[j] // g
    return sorted(v for v in d if v > 1)


def restrict_rows(rows, keep_row=None, keep_col=None):
    """Submatrix on the rows/columns satisfying the predicates."""
    out = {}
    for r, row in rows.items():
        if keep_row is not None and not keep_row(r):
            continue
        sub = {c: v for c, v in row.items() if keep_col is None or keep_col(c)}
        if sub:
            out[r] = sub
    return out
