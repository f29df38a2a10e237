"""Scanning reduction of the Khovanov complex.

The diagram is cut into pieces (crossings and plain arcs) which are tensored
onto a running tangle complex one at a time.  After each step every closed
loop is delooped and every invertible identity entry of filtration degree 0
is cancelled by Gaussian elimination, so the running complex stays close to
the size of the homology of the partial tangle.

Chains can be tracked through the reduction: each tracked chain is kept as
a family of cobordisms from a fixed source matching (the arcs that the
unprocessed part of the diagram contributes at the chain's cube vertex)
into the objects of the running complex, plus the still-detached circles
with their algebra labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import cobordism as cob
from .cobordism import MATCHINGS, Cobordisms, glue_objects, intern
from .frobenius import Theory


class ResourceLimit(RuntimeError):
    """The running complex outgrew the configured generator budget."""

    def __init__(self, message, max_generators=0):
        super().__init__(message)
        self.max_generators = max_generators


@dataclass
class Piece:
    """A small tangle complex: objects ``(h, q, matching)`` and morphisms."""

    points: tuple
    objects: list
    morphisms: dict  # (i, j) -> {mask: coeff}
    smoothings: list = field(default_factory=list)  # per object, arc list
    crossing: int = -1  # index of the diagram crossing, -1 for arcs


def diagram_pieces(diag):
    """Cut a diagram into crossing and arc pieces with distinct point labels.

    An edge running from a crossing back into itself is split with a fresh
    point and an arc piece; a crossing-free loop becomes two arc pieces.
    """
    fresh = max(diag.edges(), default=0) + 1
    pieces = []
    for k, x in enumerate(diag.crossings):
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
        s0 = ((a, b), (c, d))
        s1 = ((a, d), (b, c))
        if x.sign > 0:
            grades = ((0, 1), (1, 2))
        else:
            grades = ((-1, -2), (0, -1))
        objects = [(grades[0][0], grades[0][1], intern(s0)),
                   (grades[1][0], grades[1][1], intern(s1))]
        pieces.append(Piece(tuple(slots), objects, {(0, 1): {0: 1}}, [s0, s1], k))
        for e, f in extra:
            pieces.append(Piece((e, f), [(0, 0, intern([(e, f)]))], {}, [((e, f),)]))
    for e in diag.loops:
        f = fresh
        fresh += 1
        for _ in range(2):
            pieces.append(Piece((e, f), [(0, 0, intern([(e, f)]))], {}, [((e, f),)]))
    return pieces


class TrackedChain:
    """A chain carried through the reduction.

    ``choices`` fixes the cube vertex (one smoothing per crossing index);
    ``labels`` maps a circle id of the full resolution at that vertex to an
    algebra element ``(c0, c1)``; ``circle_of`` maps every point to its
    circle id.  ``comps`` maps object ids to morphisms from ``source``.
    """

    def __init__(self, choices, labels, circle_of, theory):
        self.choices = dict(choices)
        self.labels = dict(labels)
        self.circle_of = dict(circle_of)
        self.pending = set(labels)
        self.source = cob.EMPTY
        self.comps = {}
        self.theory = theory


class Complex:
    """A complex over the cobordism category with sparse differential."""

    def __init__(self, cobs: Cobordisms):
        self.cobs = cobs
        self.ring = cobs.ring
        self.objs = {}
        self.out = {}
        self.inn = {}
        self.next_id = 0
        self.chains = []

    def add_object(self, h, q, m):
        i = self.next_id
        self.next_id += 1
        self.objs[i] = (h, q, m)
        self.out[i] = {}
        self.inn[i] = {}
        return i

    def add_to_entry(self, i, j, mask, c):
        if c == 0:
            return
        row = self.out[i]
        mor = row.get(j)
        if mor is None:
            mor = {}
            row[j] = mor
            self.inn[j][i] = mor
        v = self.ring.norm(mor.get(mask, 0) + c)
        if v == 0:
            mor.pop(mask, None)
            if not mor:
                del row[j]
                del self.inn[j][i]
        else:
            mor[mask] = v

    def remove_object(self, i):
        for j in self.out.pop(i):
            del self.inn[j][i]
        for j in self.inn.pop(i):
            del self.out[j][i]
        del self.objs[i]

    def __len__(self):
        return len(self.objs)

    def entries(self):
        for i, row in self.out.items():
            for j, mor in row.items():
                yield i, j, mor

    # -- Gaussian elimination ----------------------------------------------

    def _is_iso(self, i, j, mor):
        if len(mor) != 1:
            return False
        (mask, c), = mor.items()
        if mask != 0:
            return False
        hi, qi, mi = self.objs[i]
        hj, qj, mj = self.objs[j]
        return mi == mj and qi == qj and self.ring.is_unit(c)

    def eliminate(self, b1, b2):
        """Cancel the isomorphism ``b1 -> b2``."""
        ring = self.ring
        cobs = self.cobs
        phi = self.out[b1][b2]
        cinv = ring.inv(phi[0])
        mb = self.objs[b1][2]
        ins = [(x, mor) for x, mor in self.inn[b2].items() if x != b1]
        outs = [(y, mor) for y, mor in self.out[b1].items() if y != b2]
        objs = self.objs
        for x, dx in ins:
            mx = objs[x][2]
            for y, gy in outs:
                my = objs[y][2]
                for pf, cf in dx.items():
                    for pg, cg in gy.items():
                        k = ring.norm(-cinv * cf * cg)
                        for m, v in cobs.compose_terms(mx, mb, my, pf, pg):
                            self.add_to_entry(x, y, m, ring.norm(k * v))
        for ch in self.chains:
            comps = ch.comps
            ch_b2 = comps.pop(b2, None)
            comps.pop(b1, None)
            if ch_b2:
                for y, gy in outs:
                    add = cobs.compose(ch.source, mb, objs[y][2], ch_b2, gy)
                    if not add:
                        continue
                    tgt = comps.setdefault(y, {})
                    for m, v in add.items():
                        nv = ring.norm(tgt.get(m, 0) - cinv * v)
                        if nv == 0:
                            tgt.pop(m, None)
                        else:
                            tgt[m] = nv
                    if not tgt:
                        del comps[y]
        self.remove_object(b1)
        self.remove_object(b2)

    def reduce(self):
        """Cancel invertible degree-0 identity entries until none remain."""
        while True:
            cands = []
            for i, row in self.out.items():
                for j, mor in row.items():
                    if self._is_iso(i, j, mor):
                        cands.append((len(self.inn[j]) * len(row), i, j))
            if not cands:
                return
            cands.sort()
            for _, i, j in cands:
                if i in self.objs and j in self.objs:
                    mor = self.out[i].get(j)
                    if mor is not None and self._is_iso(i, j, mor):
                        self.eliminate(i, j)


def _piece_arcs(pc, choices):
    return pc.smoothings[choices[pc.crossing]] if pc.crossing >= 0 else pc.smoothings[0]


def _source_matching(pieces, done, chain, boundary):
    """Arcs induced on the current boundary by the unprocessed pieces."""
    nbr = {}
    eid = 0
    for idx, pc in enumerate(pieces):
        if idx in done:
            continue
        for x, y in _piece_arcs(pc, chain.choices):
            nbr.setdefault(x, []).append((y, eid))
            nbr.setdefault(y, []).append((x, eid))
            eid += 1
    pairs = []
    seen = set()
    for start in sorted(boundary):
        if start in seen:
            continue
        x, used = start, None
        while True:
            seen.add(x)
            y, e = next((y, e) for y, e in nbr[x] if e != used)
            x, used = y, e
            if x in boundary:
                seen.add(x)
                pairs.append((start, x))
                break
    return intern(pairs)


def resolution_circles(pieces, choices):
    """Circles of the full resolution at a cube vertex: point -> circle id."""
    uf = {}

    def find(x):
        while uf.setdefault(x, x) != x:
            uf[x] = uf[uf[x]]
            x = uf[x]
        return x

    for pc in pieces:
        for x, y in _piece_arcs(pc, choices):
            rx, ry = find(x), find(y)
            if rx != ry:
                uf[max(rx, ry)] = min(rx, ry)
    return {x: find(x) for x in list(uf)}


class Scanner:
    """Drives the piece-by-piece reduction of one diagram."""

    def __init__(self, diag, theory: Theory, max_generators=None, order=None):
        self.diag = diag
        self.theory = theory
        self.cobs = Cobordisms(theory)
        self.pieces = diagram_pieces(diag)
        if order is not None:
            self.pieces = _reorder(self.pieces, order)
        self.max_generators = max_generators
        self.peak = 1

    def run(self, chains=()):
        ring = self.theory.ring
        cx = Complex(self.cobs)
        root = cx.add_object(0, 0, cob.EMPTY)
        cx.chains = list(chains)
        for ch in cx.chains:
            ch.source = cob.EMPTY
            ch.comps = {root: {0: ring.norm(1)}}
        boundary = frozenset()
        done = set()
        for idx, pc in enumerate(self.pieces):
            done.add(idx)
            new_boundary = boundary ^ frozenset(pc.points)
            cx = self._tensor(cx, pc, boundary, new_boundary, done)
            boundary = new_boundary
            self.peak = max(self.peak, len(cx))
            if self.max_generators and len(cx) > self.max_generators:
                raise ResourceLimit(
                    f"running complex reached {len(cx)} objects "
                    f"(budget {self.max_generators})", len(cx))
            cx.reduce()
        return cx

    def _tensor(self, cx, pc, old_boundary, new_boundary, done):
        cobs = self.cobs
        new = Complex(cobs)
        copies = {}
        for o, (h, q, m) in cx.objs.items():
            for xi, (hx, qx, mx) in enumerate(pc.objects):
                gm, loops = glue_objects(m, mx)
                ids = []
                for cm in range(1 << len(loops)):
                    shift = len(loops) - 2 * bin(cm).count("1")
                    ids.append(new.add_object(h + hx, q + qx + shift, gm))
                copies[o, xi] = ids
        for o, row in cx.out.items():
            ma = cx.objs[o][2]
            for o2, f in row.items():
                ma2 = cx.objs[o2][2]
                for xi, (_, _, mx) in enumerate(pc.objects):
                    self._glue_into(new, copies[o, xi], copies[o2, xi],
                                    ma, ma2, mx, mx, f, {0: 1}, 1)
        for o, (h, q, m) in cx.objs.items():
            sign = -1 if h % 2 else 1
            for (xi, xj), g in pc.morphisms.items():
                self._glue_into(new, copies[o, xi], copies[o, xj],
                                m, m, pc.objects[xi][2], pc.objects[xj][2], {0: 1}, g, sign)
        for ch in cx.chains:
            self._push_chain(ch, cx, new, pc, copies, new_boundary, done)
        new.chains = cx.chains
        return new

    def _glue_into(self, new, src_ids, tgt_ids, a, a2, b, b2, f, g, sign):
        ring = self.theory.ring
        cobs = self.cobs
        for pf, cf in f.items():
            for pg, cg in g.items():
                k = ring.norm(sign * cf * cg)
                for sc, tc, mask, v in cobs.glue_deloop(a, a2, b, b2, pf, pg):
                    new.add_to_entry(src_ids[sc], tgt_ids[tc], mask, ring.norm(k * v))

    def _push_chain(self, ch, cx, new, pc, copies, new_boundary, done):
        """Re-express a tracked chain after tensoring with piece ``pc``."""
        ring = self.theory.ring
        xi = ch.choices[pc.crossing] if pc.crossing >= 0 else 0
        m_piece = pc.objects[xi][2]
        new_source = _source_matching(self.pieces, done, ch, new_boundary)
        old_source = ch.source
        comps = {}
        for o, mor in ch.comps.items():
            m_obj = cx.objs[o][2]
            plan = _chain_plan(old_source, m_obj, m_piece, new_source)
            circle_map, nthrough, nloops = plan
            for mask, c in mor.items():
                terms = [(0, c)]
                for newbit, (kind, ref) in enumerate(circle_map):
                    if kind == "c":
                        bit = mask >> ref & 1
                        if bit:
                            terms = [(m | 1 << newbit, w) for m, w in terms]
                        continue
                    cid = ch.circle_of[ref]
                    c0, c1 = ch.labels[cid]
                    nxt = []
                    for m, w in terms:
                        if c0 != 0:
                            nxt.append((m, ring.norm(w * c0)))
                        if c1 != 0:
                            nxt.append((m | 1 << newbit, ring.norm(w * c1)))
                    terms = nxt
                ids = copies[o, xi]
                core_mask = (1 << nthrough) - 1
                for m, w in terms:
                    target = ids[m >> nthrough]
                    core = m & core_mask
                    row = comps.setdefault(target, {})
                    v = ring.norm(row.get(core, 0) + w)
                    if v == 0:
                        row.pop(core, None)
                    else:
                        row[core] = v
        ch.comps = {k: v for k, v in comps.items() if v}
        ch.source = new_source
        # circles now touching the processed part are no longer pending
        for x in pc.points:
            ch.pending.discard(ch.circle_of[x])


_chain_plan_cache = {}


def _chain_plan(old_source, m_obj, m_piece, new_source):
    """Match circles after adding a piece with circles (or loops) before.

    Returns ``(circle_map, nthrough, nloops)``: ``circle_map[i]`` is
    ``("c", old_index)`` for a circle that already met the processed part,
    or ``("w", point)`` for a detached circle now being attached.  Indices
    ``i < nthrough`` are circles of ``new_source u glued_object``; the rest
    are loops of the glued object, in the delooping order.
    """
    key = (old_source, m_obj, m_piece, new_source)
    hit = _chain_plan_cache.get(key)
    if hit is not None:
        return hit
    _, old_where = cob.circles(old_source, m_obj)
    po = MATCHINGS.partner[m_obj]
    pp = MATCHINGS.partner[m_piece]
    ps = MATCHINGS.partner[new_source]
    nbr = {}
    for part in (po, pp, ps):
        for x, y in part.items():
            nbr.setdefault(x, []).append(y)
    comps = cob._trace(nbr, sorted(nbr))
    through, loops = [], []
    for comp in comps:
        pts = sorted(comp)
        outer = [x for x in pts if x in ps]
        ref = next((x for x in pts if x in po), None)
        entry = ("c", old_where[ref]) if ref is not None else ("w", pts[0])
        if outer:
            through.append((outer[0], entry))
        else:
            loops.append((pts[0], entry))
    through.sort()
    loops.sort()
    hit = ([e for _, e in through] + [e for _, e in loops], len(through), len(loops))
    _chain_plan_cache[key] = hit
    return hit


def _reorder(pieces, order):
    """Reorder crossing pieces; arc pieces stay attached to their crossing."""
    groups = []
    for pc in pieces:
        if pc.crossing >= 0 or not groups:
            groups.append([pc])
        else:
            groups[-1].append(pc)
    keyed = {g[0].crossing: g for g in groups if g[0].crossing >= 0}
    rest = [g for g in groups if g[0].crossing < 0]
    out = []
    for k in order:
        out.extend(keyed.pop(k))
    for g in keyed.values():
        out.extend(g)
    for g in rest:
        out.extend(g)
    return out
