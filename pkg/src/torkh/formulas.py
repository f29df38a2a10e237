"""Closed formulas, staircase bounds and recursions for torus links.

Pure arithmetic on Python integers; the staircase relation checker uses
numpy arrays with a large sentinel standing in for +infinity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, gcd

import numpy as np

from .engine.tables import BigradedTable, Group, LaurentPoly2
from .links import InvalidParameter

INF = float("inf")
SENTINEL = np.int64(1) << 40


# ------------------------------------------------------------ s and Lee ranks

def _torus_parts(n, m):
    if n < 1 or m == 0:
        raise InvalidParameter("need n >= 1 and m != 0")
    d = gcd(n, abs(m))
    return d, n // d, abs(m) // d


def s_torus(n: int, m: int, p: int, q: int) -> int:
    """s of T(n,m) with p components oriented against the other q."""
    if m == 0:
        if p < 0 or q < 0 or p + q != n:
            raise InvalidParameter("the unlink T(n,0) has n components")
        return 1 - n
    d, n1, m1 = _torus_parts(n, m)
    if p < 0 or q < 0 or p + q != d:
        raise InvalidParameter(f"p + q must equal gcd(n, m) = {d}")
    k = abs(p - q)
    core = (n1 * k - 1) * (m1 * k - 1)
    if m > 0:
        return core - 2 * min(p, q)
    return 1 if p == q else -core


def lee_rank_torus(n: int, m: int) -> dict:
    """Lee homology dimension per homological degree of the positive T(n,m)."""
    d, n1, m1 = _torus_parts(n, m)
    out = {}
    for q in range(d // 2 + 1):
        p = d - q
        out[2 * n1 * m1 * p * q] = comb(d, q) if p == q else 2 * comb(d, q)
    return out


def rep_dim(d: int, r: int) -> int:
    """Dimension of the two-row irreducible representation (d - r, r)."""
    if r < 0 or 2 * r > d:
        raise InvalidParameter("need 0 <= r <= d/2")
    return comb(d, r) - (comb(d, r - 1) if r else 0)


def gr_lee_torus(n: int, m: int) -> BigradedTable:
    """Predicted associated graded of Lee homology of the positive T(n,m), over Q."""
    d, n1, m1 = _torus_parts(n, m)
    groups = {}
    for q in range(d // 2 + 1):
        p = d - q
        h = 2 * n1 * m1 * p * q
        s = s_torus(n, m, p, q)
        base = 6 * n1 * m1 * p * q + s - 1
        mn = min(p, q)
        for r in range(mn + 2):
            if p != q:
                if r == 0:
                    dim = rep_dim(d, 0)
                elif r <= mn:
                    dim = rep_dim(d, r) + rep_dim(d, r - 1)
                else:
                    dim = rep_dim(d, r - 1)
            else:
                if r > mn:
                    continue
                dim = rep_dim(d, r)
            if dim:
                key = (h, base + 2 * r)
                groups[key] = Group(groups.get(key, Group()).free + dim)
    return BigradedTable("Q", groups)


# ----------------------------------------------------------- staircase bounds

def h_max(n: int, family: str) -> int:
    if family == "nn":
        return n * n // 2
    if family == "n1n":
        return n * n // 2 + n // 2
    raise InvalidParameter(f"unknown family {family!r}")


def q_nn(n: int, h: int):
    """Quantum lower bound for Kh of T(n,n) in homological degree h."""
    if h < 0 or h > h_max(n, "nn"):
        return INF
    if h == 0:
        return n * n - 2 * n
    for q in range(1, n // 2 + 1):
        p = n - q
        if 2 * (p + 1) * (q - 1) < h <= 2 * p * q:
            return n * n + 2 * (-(-h // 2)) - 2 * p
    raise AssertionError("unreachable: the ranges cover (0, h_max]")


def q_n1n(n: int, h: int):
    """Quantum lower bound for Kh of T(n+1,n) in homological degree h."""
    top = h_max(n, "nn")
    if h < 0 or h > h_max(n, "n1n"):
        return INF
    if h >= top:
        return n * n // 2 + 2 * h - 1
    for q in range(1, n // 2 + 1):
        if h == 2 * (n - q) * q + 1:
            return q_nn(n, h) + n - 3
    return q_nn(n, h) + n - 1


def q_n1n_clauses_agree(n: int) -> bool:
    """The two expressions for the bound at h_max(T(n,n)) coincide."""
    top = h_max(n, "nn")
    return q_nn(n, top) + n - 1 == n * n // 2 + 2 * top - 1


@lru_cache(maxsize=None)
def nn_table(n: int) -> np.ndarray:
    """q_nn on 0..h_max as an int64 array."""
    top = h_max(n, "nn")
    arr = np.empty(top + 1, dtype=np.int64)
    arr[0] = n * n - 2 * n
    for q in range(1, n // 2 + 1):
        p = n - q
        lo, hi = 2 * (p + 1) * (q - 1) + 1, 2 * p * q
        h = np.arange(lo, hi + 1, dtype=np.int64)
        arr[lo:hi + 1] = n * n + 2 * ((h + 1) // 2) - 2 * p
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=None)
def n1n_table(n: int) -> np.ndarray:
    """q_n1n on 0..h_max(T(n+1,n)) as an int64 array."""
    top, end = h_max(n, "nn"), h_max(n, "n1n")
    arr = np.empty(end + 1, dtype=np.int64)
    arr[:top + 1] = nn_table(n) + (n - 1)
    for q in range(1, n // 2 + 1):
        h = 2 * (n - q) * q + 1
        if h < top:
            arr[h] = nn_table(n)[h] + n - 3
    h = np.arange(top, end + 1, dtype=np.int64)
    arr[top:] = n * n // 2 + 2 * h - 1
    arr.setflags(write=False)
    return arr


# ---------------------------------------------------- staircase relation check

@dataclass
class Violation:
    relation: str
    h: int
    lhs: object
    rhs: object

    def to_json(self):
        return {"relation": self.relation, "h": self.h, "lhs": self.lhs, "rhs": self.rhs}


@dataclass
class RelationReport:
    ns: list
    violations: list = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self):
        return not self.violations

    def to_json(self):
        return {"n": self.ns, "checked": self.checked, "ok": self.ok,
                "violations": [v.to_json() for v in self.violations[:50]]}


def _on_grid(arr, size):
    out = np.full(size, SENTINEL, dtype=np.int64)
    k = min(len(arr), size)
    out[:k] = arr[:k]
    return out


def _shift(f, dh, dq):
    """``f[dh]{dq}``: h' -> f(h' - dh) + dq, for dh >= 0."""
    out = np.full_like(f, SENTINEL)
    if dh < len(f):
        src = f[:len(f) - dh]
        out[dh:] = np.where(src >= SENTINEL, SENTINEL, src + dq)
    return out


def _restrict(f, keep):
    return np.where(keep, f, SENTINEL)


def _show(v):
    return "inf" if v >= SENTINEL else int(v)


def check_q_relations(ns, nn=nn_table, n1n=n1n_table) -> RelationReport:
    """Evaluate the six staircase relations and the strictness addenda.

    ``ns`` is an int or an iterable of n >= 3.  ``nn(n)`` and ``n1n(n)``
    return arrays of the finite values on 0..h_max; they are parameters so
    a test can feed in perturbed tables.  ``f >= g`` is tested only where
    f is finite.
    """
    ns = [ns] if isinstance(ns, int) else list(ns)
    report = RelationReport(ns)
    for n in ns:
        if n < 3:
            raise InvalidParameter("relations are stated for n >= 3")
        size = h_max(n, "n1n") + 2 * n + 4
        hs = np.arange(size)
        Q = {key: _on_grid(tab, size) for key, tab in (
            ("nn", nn(n)), ("nn-2", nn(n - 2)), ("n1n", n1n(n)),
            ("n1n-1", n1n(n - 1)), ("n1n-2", n1n(n - 2)))}
        hm_n1n = h_max(n, "n1n")
        hm_n1n_1 = h_max(n - 1, "n1n")

        def ge(name, f, g, strict=False):
            finite = f < SENTINEL
            bad = finite & ((f <= g) if strict else (f < g))
            report.checked += int(finite.sum())
            for h in np.nonzero(bad)[0]:
                report.violations.append(Violation(name, int(h), _show(f[h]), _show(g[h])))

        def eq(name, f, g):
            report.checked += size
            for h in np.nonzero(f != g)[0]:
                report.violations.append(Violation(name, int(h), _show(f[h]), _show(g[h])))

        def strict_at(name, f, g, h):
            report.checked += 1
            if not (f[h] > g[h]):
                report.violations.append(Violation(name, int(h), _show(f[h]), _show(g[h])))

        tail = _restrict(Q["nn"], hs >= 2 * n - 2)
        eq(f"n={n} shift_nn_equality", _shift(Q["nn-2"], 2 * n - 2, 6 * n - 8), tail)
        ge(f"n={n} truncated_nn", tail, Q["nn"])
        ge(f"n={n} shift_n1n", _shift(Q["n1n-2"], 2 * n - 2, 6 * n - 6),
           _restrict(Q["n1n"], hs <= hm_n1n - 1))
        lhs3 = _shift(Q["nn"], 0, n - 1)
        ge(f"n={n} nn_vs_n1n", lhs3, Q["n1n"])
        lhs4 = _shift(Q["n1n-1"], 0, n - 1)
        ge(f"n={n} n1n_vs_nn", lhs4, Q["nn"])
        ge(f"n={n} step_1_2",
           _restrict(_shift(Q["n1n-1"], 1, 2), (hs != 1) & (hs <= hm_n1n_1)), Q["n1n-1"])
        ge(f"n={n} step_2_4", _restrict(_shift(Q["n1n-1"], 2, 4), hs <= hm_n1n_1), Q["n1n-1"])
        strict_at(f"n={n} nn_vs_n1n strict", lhs3, Q["n1n"], 2 * n - 1)
        for q in range(1, n // 2 + 1):
            p = n - q
            strict_at(f"n={n} n1n_vs_nn strict at 2pq", lhs4, Q["nn"], 2 * p * q)
            if q > 1:
                strict_at(f"n={n} n1n_vs_nn strict at 2pq-1", lhs4, Q["nn"], 2 * p * q - 1)
        report.checked += 1
        if not q_n1n_clauses_agree(n):
            report.violations.append(Violation(f"n={n} clauses_agree", h_max(n, "nn"), None, None))
    return report


# ------------------------------------------------------------- twist bounds

def twist_bound_check(n: int, m: int, m2: int, p: int, q: int) -> dict:
    """Check the full-twist bound on the family T(n, m + k n).

    The twisting disk meets every strand; its positive and negative
    intersections are ``n1*p`` and ``n1*q`` up to order.  The normalized
    difference ``s(m2) - s(m) - k*|e|(|e|-1)`` with ``e = n1*(p - q)`` and
    ``k = (m2 - m)/n`` must lie in ``[-2P+2, 0]`` (``P > Q``) or ``[-2P, 0]``.
    """
    if m2 <= m or (m2 - m) % n:
        raise InvalidParameter("need m2 > m with m2 - m a multiple of n")
    d = gcd(n, abs(m)) if m else n
    n1 = n // d
    big, small = n1 * max(p, q), n1 * min(p, q)
    e = big - small
    k = (m2 - m) // n
    diff = s_torus(n, m2, p, q) - s_torus(n, m, p, q) - k * e * (e - 1)
    low = -2 * big + 2 if big > small else -2 * big
    return {"n": n, "m": m, "m2": m2, "p": p, "q": q, "difference": diff,
            "interval": [low, 0], "ok": low <= diff <= 0,
            "sharp_low": diff == low, "sharp_high": diff == 0}


# -------------------------------------------------------------- recursions

def catalan(k: int) -> int:
    if k < 0:
        raise InvalidParameter("k >= 0")
    return comb(2 * k, k) // (k + 1)


def _m(t, q):
    return LaurentPoly2.monomial(t, q)


@lru_cache(maxsize=None)
def K_poly(n: int) -> LaurentPoly2:
    """Conjectured rational Poincare polynomial of Kh(T(n+1,n))."""
    if n < 0:
        raise InvalidParameter("n >= 0")
    if n <= 1:
        return _m(0, -1) + _m(0, 1)
    if n == 2:
        return _m(0, 1) + _m(0, 3) + _m(2, 5) + _m(3, 9)
    return (_m(0, 2 * n - 2) * K_poly(n - 1) + _m(2 * n - 2, 6 * n - 6) * K_poly(n - 2)
            + _m(2 * n - 1, 8 * n - 8) * K_poly(n - 3))


@lru_cache(maxsize=None)
def L_poly(n: int) -> LaurentPoly2:
    """Conjectured rational Poincare polynomial of Kh(T(n,n))."""
    if n < 0:
        raise InvalidParameter("n >= 0")
    if n == 0:
        return LaurentPoly2.one()
    if n == 1:
        return _m(0, -1) + _m(0, 1)
    out = (_m(2 * n - 2, 6 * n - 8) + _m(2 * n - 2, 6 * n - 6)) * L_poly(n - 2)
    for i in range(1, (n - 1) // 2 + 1):
        e = i * (n - i)
        out = out + LaurentPoly2.monomial(2 * e, 6 * e, catalan(i - 1)) * L_poly(n - 2 * i)
    for i in range(0, (n - 2) // 2 + 1):
        e = i * (n - i)
        c = comb(n - 2, i) - (comb(n - 2, i - 1) if i else 0)
        if c:
            out = out + LaurentPoly2.monomial(2 * e, 6 * e + n - 2 * i - 1, c) * K_poly(n - 2 * i - 1)
    return out
