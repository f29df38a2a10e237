"""Dotted cobordisms between crossingless matchings.

A crossingless matching on a finite set of boundary points (PD edge ids) is
interned as a small integer.  A morphism ``A -> B`` is a dict mapping a dot
mask over the circles of ``A u B`` to a coefficient: after neck-cutting every
cobordism is a sum of disjoint disks, one per circle, each dotted or not.
Circles are ordered by their smallest boundary point.

Gluing and composition evaluate the glued surface component by component:
Euler characteristic, boundary count and genus determine it, and the
Frobenius algebra neck-cuts it back into disks.  Plans depend only on the
matchings involved and are cached.
"""

from __future__ import annotations

from .frobenius import Theory


class _Matchings:
    """Global intern table for crossingless matchings."""

    def __init__(self):
        self.index = {}
        self.pairs = []
        self.partner = []
        self.points = []

    def intern(self, pairs):
        key = tuple(sorted((min(a, b), max(a, b)) for a, b in pairs))
        mid = self.index.get(key)
        if mid is None:
            mid = len(self.pairs)
            self.index[key] = mid
            self.pairs.append(key)
            part = {}
            for a, b in key:
                part[a] = b
                part[b] = a
            self.partner.append(part)
            self.points.append(frozenset(part))
        return mid


MATCHINGS = _Matchings()
EMPTY = MATCHINGS.intern(())


def intern(pairs):
    return MATCHINGS.intern(pairs)


class _UF:
    __slots__ = ("p",)

    def __init__(self, n):
        self.p = list(range(n))

    def find(self, x):
        p = self.p
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            if rx < ry:
                self.p[ry] = rx
            else:
                self.p[rx] = ry


def _popcount(x):
    return bin(x).count("1")


def _trace(arcs_by_node, nodes):
    """Connected components of a graph given as node -> neighbours."""
    seen = set()
    comps = []
    for start in nodes:
        if start in seen:
            continue
        stack = [start]
        seen.add(start)
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in arcs_by_node.get(v, ()):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(comp)
    return comps


_circle_cache = {}


def circles(m1, m2):
    """Circles of ``m1 u m2`` (same point set): (list of point tuples, point -> index)."""
    key = (m1, m2)
    hit = _circle_cache.get(key)
    if hit is not None:
        return hit
    p1 = MATCHINGS.partner[m1]
    p2 = MATCHINGS.partner[m2]
    seen = set()
    circs = []
    for start in sorted(p1):
        if start in seen:
            continue
        circ = []
        x = start
        use_first = True
        while True:
            seen.add(x)
            circ.append(x)
            x = p1[x] if use_first else p2[x]
            use_first = not use_first
            if x == start and use_first:
                break
        circs.append(tuple(sorted(set(circ))))
    circs.sort()
    where = {}
    for i, c in enumerate(circs):
        for x in c:
            where[x] = i
    hit = (circs, where)
    _circle_cache[key] = hit
    return hit


def circle_count(m1, m2):
    return len(circles(m1, m2)[0])


_glue_obj_cache = {}


def glue_objects(a, b):
    """Glue two matchings along their common points.

    Returns ``(matching, loops)``; loops are sorted tuples of glued points,
    ordered by smallest point.
    """
    key = (a, b)
    hit = _glue_obj_cache.get(key)
    if hit is not None:
        return hit
    pa = MATCHINGS.partner[a]
    pb = MATCHINGS.partner[b]
    common = pa.keys() & pb.keys()
    free = (pa.keys() | pb.keys()) - common
    pairs = []
    seen = set()
    for start in sorted(free):
        if start in seen:
            continue
        x = start
        side = pa if start in pa else pb
        while True:
            seen.add(x)
            y = side[x]
            seen.add(y)
            if y not in common:
                pairs.append((start, y))
                break
            side = pb if side is pa else pa
            x = y
    loops = []
    for start in sorted(common):
        if start in seen:
            continue
        loop = []
        x = start
        side = pa
        while True:
            seen.add(x)
            loop.append(x)
            x = side[x]
            side = pb if side is pa else pa
            if x == start:
                break
        loops.append(tuple(sorted(set(loop))))
    loops.sort()
    hit = (intern(pairs), tuple(loops))
    _glue_obj_cache[key] = hit
    return hit


class Cobordisms:
    """Composition and gluing of dotted cobordisms for one Frobenius theory."""

    def __init__(self, theory: Theory):
        self.theory = theory
        self.ring = theory.ring
        self._compose_plans = {}
        self._compose_vals = {}
        self._glue_plans = {}
        self._glue_vals = {}

    # -- surface evaluation -------------------------------------------------

    def _evaluate(self, comps, pf, pg, extra=1):
        """Multiply out the component values for dot masks ``pf`` and ``pg``."""
        ring = self.ring
        surface = self.theory.surface
        acc = {0: ring.norm(extra)}
        for fmask, gmask, targets, genus in comps:
            dots = _popcount(pf & fmask) + _popcount(pg & gmask)
            vals = surface(dots, genus, len(targets))
            if not vals:
                return {}
            if len(acc) == 1 and not targets:
                (m0, c0), = acc.items()
                acc = {m0: ring.norm(c0 * vals[0][1])}
                if acc[m0] == 0:
                    return {}
                continue
            nxt = {}
            for m, c in acc.items():
                for local, v in vals:
                    g = m
                    k = 0
                    while local:
                        if local & 1:
                            g |= 1 << targets[k]
                        local >>= 1
                        k += 1
                    val = ring.norm(c * v)
                    if val != 0:
                        nxt[g] = ring.norm(nxt.get(g, 0) + val)
            acc = {m: c for m, c in nxt.items() if c != 0}
            if not acc:
                return {}
        return acc

    @staticmethod
    def _components(ndisks, seams, boundary_disk, nf):
        uf = _UF(ndisks)
        for i, j in seams:
            uf.union(i, j)
        info = {}
        for d in range(ndisks):
            r = uf.find(d)
            ent = info.setdefault(r, [0, 0, [], 0, 0])
            if d < nf:
                ent[0] |= 1 << d
            else:
                ent[1] |= 1 << (d - nf)
            ent[3] += 1
        for i, j in seams:
            info[uf.find(i)][4] += 1
        for idx, d in enumerate(boundary_disk):
            info[uf.find(d)][2].append(idx)
        comps = []
        for fmask, gmask, targets, nd, ns in info.values():
            chi = nd - ns
            twice_g = 2 - chi - len(targets)
            if twice_g < 0 or twice_g % 2:
                raise AssertionError("inconsistent surface topology")
            comps.append((fmask, gmask, tuple(targets), twice_g // 2))
        # closed components first keeps the accumulator small
        comps.sort(key=lambda c: len(c[2]))
        return tuple(comps)

    # -- composition --------------------------------------------------------

    def _compose_plan(self, a, b, c):
        key = (a, b, c)
        plan = self._compose_plans.get(key)
        if plan is not None:
            return plan
        cf, wf = circles(a, b)
        cg, wg = circles(b, c)
        cr, _ = circles(a, c)
        nf = len(cf)
        seams = [(wf[x], nf + wg[x]) for x, y in MATCHINGS.pairs[b]]
        boundary = [wf[circ[0]] for circ in cr]
        plan = self._components(nf + len(cg), seams, boundary, nf)
        self._compose_plans[key] = plan
        return plan

    def compose_terms(self, a, b, c, pf, pg):
        """``g o f`` for basis cobordisms ``f: a -> b`` (mask pf), ``g: b -> c`` (mask pg)."""
        key = (a, b, c, pf, pg)
        val = self._compose_vals.get(key)
        if val is None:
            val = tuple(self._evaluate(self._compose_plan(a, b, c), pf, pg).items())
            self._compose_vals[key] = val
        return val

    def compose(self, a, b, c, f, g):
        """Compose morphisms ``f: a -> b`` and ``g: b -> c`` given as dicts."""
        ring = self.ring
        out = {}
        for pf, cf in f.items():
            for pg, cg in g.items():
                k = ring.norm(cf * cg)
                for m, v in self.compose_terms(a, b, c, pf, pg):
                    out[m] = ring.norm(out.get(m, 0) + k * v)
        return {m: v for m, v in out.items() if v != 0}

    # -- gluing side by side ------------------------------------------------

    def _glue_plan(self, a, a2, b, b2):
        key = (a, a2, b, b2)
        plan = self._glue_plans.get(key)
        if plan is not None:
            return plan
        cf, wf = circles(a, a2)
        cg, wg = circles(b, b2)
        nf = len(cf)
        P = MATCHINGS.points[a]
        Q = MATCHINGS.points[b]
        G = P & Q
        seams = [(wf[x], nf + wg[x]) for x in sorted(G)]

        # result circles on nodes (point, side)
        nbr = {}

        def link(u, v):
            nbr.setdefault(u, []).append(v)
            nbr.setdefault(v, []).append(u)

        for m, side in ((a, 0), (b, 0), (a2, 1), (b2, 1)):
            for x, y in MATCHINGS.pairs[m]:
                link((x, side), (y, side))
        for x in P ^ Q:
            link((x, 0), (x, 1))
        nodes = sorted(nbr)
        comps = _trace(nbr, nodes)
        through, src_loops, tgt_loops = [], [], []
        for comp in comps:
            pts = sorted({x for x, _ in comp})
            sides = {s for _, s in comp}
            outer = [x for x in pts if x not in G]
            x0, s0 = comp[0]
            disk = wf[x0] if x0 in P else nf + wg[x0]
            if outer:
                through.append((min(outer), disk))
            elif sides == {0}:
                src_loops.append((pts[0], disk))
            else:
                tgt_loops.append((pts[0], disk))
        through.sort()
        src_loops.sort()
        tgt_loops.sort()
        order = through + src_loops + tgt_loops
        boundary = [d for _, d in order]
        plan = (self._components(nf + len(cg), seams, boundary, nf),
                len(through), len(src_loops), len(tgt_loops))
        self._glue_plans[key] = plan
        return plan

    def glue_deloop(self, a, a2, b, b2, pf, pg):
        """Glue ``f: a -> a2`` with ``g: b -> b2`` and deloop both ends.

        Returns tuples ``(src_copy, tgt_copy, mask, coeff)``.  A copy index
        is a bitmask over the loops of the glued object, bit set for the
        copy carrying ``X`` (shift -1), clear for the ``1`` copy (shift +1).
        """
        key = (a, a2, b, b2, pf, pg)
        val = self._glue_vals.get(key)
        if val is not None:
            return val
        comps, nthrough, ns, nt = self._glue_plan(a, a2, b, b2)
        raw = self._evaluate(comps, pf, pg)
        ring = self.ring
        h = self.theory.h
        core_mask = (1 << nthrough) - 1
        acc = {}
        for m, c in raw.items():
            core = m & core_mask
            sbits = (m >> nthrough) & ((1 << ns) - 1)
            tcopy = m >> (nthrough + ns)
            # a loop in the source: the 1-copy sees only dotted caps, the
            # X-copy sees undotted caps with weight 1 and dotted ones with h
            choices = [(0, c)]
            for i in range(ns):
                bit = sbits >> i & 1
                nxt = []
                for sc, w in choices:
                    if bit:
                        nxt.append((sc, w))
                        if h != 0:
                            nxt.append((sc | 1 << i, ring.norm(w * h)))
                    else:
                        nxt.append((sc | 1 << i, w))
                choices = nxt
            for sc, w in choices:
                k = (sc, tcopy, core)
                acc[k] = ring.norm(acc.get(k, 0) + w)
        val = tuple((sc, tc, core, w) for (sc, tc, core), w in acc.items() if w != 0)
        self._glue_vals[key] = val
        return val

    def degree(self, m1, m2, mask, s1=0, s2=0):
        """q-degree of a basis cobordism between shifted objects."""
        npts = len(MATCHINGS.points[m1])
        return circle_count(m1, m2) - npts // 2 - 2 * _popcount(mask) + s2 - s1
