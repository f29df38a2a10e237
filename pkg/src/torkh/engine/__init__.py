"""Khovanov-type chain complexes of link diagrams and their homology."""

from __future__ import annotations

from .complexes import BigradedComplex, cancel_units, from_scan
from .complexes import homology as _homology
from .cube import NAIVE_LIMIT, TooManyCrossings, khovanov_cube
from .frobenius import Theory, make_theory
from .jones import JONES_LIMIT, BracketTooLarge, jones_kauffman, kauffman_bracket
from .rings import QQ, ZZ, PrimeField, Ring, parse_ring
from .scan import ResourceLimit, Scanner, TrackedChain, resolution_circles
from .tables import (INF, BigradedTable, Group, LaurentPoly2, euler_characteristic,
                     field_table, min_q_profile, poincare)

__all__ = [
    "BigradedComplex", "BigradedTable", "Group", "LaurentPoly2", "Ring", "Theory",
    "ZZ", "QQ", "PrimeField", "parse_ring", "INF",
    "khovanov_cube", "scan_complex", "homology", "poincare", "jones_kauffman",
    "kauffman_bracket", "min_q_profile", "euler_characteristic", "field_table",
    "khovanov_homology", "ResourceLimit", "TooManyCrossings", "BracketTooLarge",
    "NAIVE_LIMIT", "JONES_LIMIT", "make_theory", "cancel_units",
]


def homology(cx: BigradedComplex, ring: Ring = None, bit_bound=4096):
    """Homology table; unit entries are cancelled first, then ranks or Smith forms."""
    if ring is None:
        ring = cx.ring
    if cx.graded:
        cx = cancel_units(cx)
    return _homology(cx, ring, bit_bound)


def scan_complex(diag, theory="Khovanov", ring=QQ, tracked=(), max_generators=None,
                 order=None):
    """Scanning reduction of the complex of ``diag``.

    ``tracked`` is a list of chains in cube coordinates; each chain is a list
    of ``(vertex, labels)`` terms where ``vertex`` is a 0/1 tuple (one entry
    per crossing) and ``labels`` maps each circle of that resolution, keyed by
    its smallest edge id, to an algebra element ``(c0, c1)`` meaning
    ``c0 + c1*X``.  A term stands for the tensor product of its labels.

    Returns the reduced complex and, for each tracked chain, its image as
    ``{generator index: coefficient}``.
    """
    th = theory if isinstance(theory, Theory) else make_theory(theory, ring)
    scanner = Scanner(diag, th, max_generators=max_generators, order=order)
    flat = []
    for n, chain in enumerate(tracked):
        for vertex, labels in chain:
            choices = {k: int(v) for k, v in enumerate(vertex)}
            circle_of = resolution_circles(scanner.pieces, choices)
            roots = set(circle_of.values())
            conv = {}
            for root in roots:
                if root not in labels:
                    raise ValueError(f"no label for the circle through edge {root}")
                c0, c1 = labels[root]
                conv[root] = (th.ring.coerce(c0), th.ring.coerce(c1))
            flat.append((n, TrackedChain(choices, conv, circle_of, th)))
    result = scanner.run([tc for _, tc in flat])
    cx, index = from_scan(result, th)
    vectors = [dict() for _ in tracked]
    for n, tc in flat:
        vec = vectors[n]
        for o, mor in tc.comps.items():
            c = mor.get(0, 0)
            if c != 0:
                k = index[o]
                v = th.ring.norm(vec.get(k, 0) + c)
                if v != 0:
                    vec[k] = v
                else:
                    vec.pop(k, None)
    scan_complex.last_peak = scanner.peak
    return cx, vectors


scan_complex.last_peak = 0


def khovanov_homology(diag, ring=QQ, method="scan", max_generators=None, order=None):
    """Khovanov homology table of ``diag`` over ``ring`` (``scan`` or ``cube``)."""
    if method == "cube":
        return homology(khovanov_cube(diag, ZZ), ring)
    cx, _ = scan_complex(diag, "Khovanov", ring, max_generators=max_generators, order=order)
    return homology(cx, ring)
