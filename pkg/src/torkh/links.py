"""Link presentations: braid words, PD-style diagrams, torus links and the
D/E interpolating families.

Crossings follow the usual PD convention: ``(a, b, c, d)`` lists the four
incident edges counterclockwise, starting from the incoming under-strand.
The under-strand runs ``a -> c``; the over-strand runs ``d -> b`` for a
positive crossing and ``b -> d`` for a negative one.  The 0-smoothing joins
``a-b`` and ``c-d``, the 1-smoothing joins ``a-d`` and ``b-c``; these are
the A/B smoothings and do not depend on orientation.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
import re
from dataclasses import dataclass, field


class InvalidParameter(ValueError):
    """Raised when a link family parameter or a diagram is out of range."""


@dataclass(frozen=True)
class Crossing:
    a: int
    b: int
    c: int
    d: int
    sign: int

    @property
    def slots(self):
        return (self.a, self.b, self.c, self.d)

    def smoothing(self, choice):
        """The two arcs (as edge pairs) of the 0- or 1-smoothing."""
        a, b, c, d = self.slots
        if choice == 0:
            return ((a, b), (c, d))
        return ((a, d), (b, c))

    def oriented_choice(self):
        return 0 if self.sign > 0 else 1

    def over_in(self):
        return self.d if self.sign > 0 else self.b

    def over_out(self):
        return self.b if self.sign > 0 else self.d


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple = ()

    def __post_init__(self):
        if self.strands < 1:
            raise InvalidParameter("a braid needs at least one strand")
        object.__setattr__(self, "letters", tuple(int(w) for w in self.letters))
        for w in self.letters:
            if w == 0 or abs(w) >= self.strands:
                raise InvalidParameter(f"letter {w} invalid on {self.strands} strands")

    def __len__(self):
        return len(self.letters)

    def permutation(self):
        perm = list(range(self.strands))
        for w in self.letters:
            k = abs(w)
            perm[k - 1], perm[k] = perm[k], perm[k - 1]
        return perm


@dataclass(frozen=True)
class TorusLinkParams:
    n: int
    m: int
    p: int = -1
    q: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise InvalidParameter("n must be positive")
        if self.p < 0:
            object.__setattr__(self, "p", self.d)
        if self.q < 0 or self.p + self.q != self.d:
            raise InvalidParameter(f"p + q must equal gcd(n, |m|) = {self.d}")

    @property
    def d(self):
        return math.gcd(self.n, abs(self.m))

    @property
    def n1(self):
        return self.n // self.d

    @property
    def m1(self):
        return abs(self.m) // self.d


@dataclass(frozen=True)
class LinkDiagram:
    """An oriented link diagram in PD form.

    ``loops`` holds the edge ids of crossing-free unknotted components.
    Components are labelled 1..l in order of their smallest edge id.
    """

    crossings: tuple = ()
    loops: tuple = ()
    _components: tuple = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "crossings", tuple(self.crossings))
        object.__setattr__(self, "loops", tuple(self.loops))
        object.__setattr__(self, "_components", _trace_components(self))

    @property
    def components(self):
        """Tuple of components, each a tuple of edge ids in traversal order."""
        return self._components

    @property
    def n_plus(self):
        return sum(1 for x in self.crossings if x.sign > 0)

    @property
    def n_minus(self):
        return sum(1 for x in self.crossings if x.sign < 0)

    @property
    def writhe(self):
        return self.n_plus - self.n_minus

    def __len__(self):
        return len(self.crossings)

    def edges(self):
        out = set(self.loops)
        for x in self.crossings:
            out.update(x.slots)
        return sorted(out)

    def component_of_edge(self):
        lookup = {}
        for label, comp in enumerate(self.components, start=1):
            for e in comp:
                lookup[e] = label
        return lookup

    def pd_code(self):
        return [list(x.slots) + [x.sign] for x in self.crossings]


def _trace_components(diag):
    """Follow the orientation through every crossing and return components.

    Validates that each edge has exactly one head and one tail.
    """
    tail_at = {}  # edge -> (crossing, slot) where it starts
    head_at = {}  # edge -> (crossing, slot) where it ends
    for k, x in enumerate(diag.crossings):
        if x.sign not in (1, -1):
            raise InvalidParameter(f"crossing {k} has sign {x.sign}")
        s = x.slots
        ins = (0, 3) if x.sign > 0 else (0, 1)
        outs = (2, 1) if x.sign > 0 else (2, 3)
        for slot in ins:
            if s[slot] in head_at:
                raise InvalidParameter(f"edge {s[slot]} enters two crossings")
            head_at[s[slot]] = (k, slot)
        for slot in outs:
            if s[slot] in tail_at:
                raise InvalidParameter(f"edge {s[slot]} leaves two crossings")
            tail_at[s[slot]] = (k, slot)
    if set(head_at) != set(tail_at):
        bad = sorted(set(head_at) ^ set(tail_at))
        raise InvalidParameter(f"inconsistent orientation on edges {bad}")
    overlap = set(diag.loops) & set(head_at)
    if overlap or len(set(diag.loops)) != len(diag.loops):
        raise InvalidParameter("loop edge ids must be unique and crossing-free")

    partner = {0: 2, 1: 3, 2: 0, 3: 1}
    comps = []
    seen = set()
    for start in sorted(head_at):
        if start in seen:
            continue
        comp = []
        e = start
        while e not in seen:
            seen.add(e)
            comp.append(e)
            k, slot = head_at[e]
            e = diag.crossings[k].slots[partner[slot]]
        comps.append(tuple(comp))
    comps.extend((e,) for e in diag.loops)
    comps.sort(key=min)
    return tuple(comps)


# ---------------------------------------------------------------------------
# construction


def torus_braid(n, m):
    if n < 1 or m < 0:
        raise InvalidParameter(f"torus_braid needs n >= 1, m >= 0 (got {n}, {m})")
    return BraidWord(n, tuple(range(1, n)) * m)


def dlink_braid(n, m, i):
    if n < 1 or m < 0:
        raise InvalidParameter(f"dlink_braid needs n >= 1, m >= 0 (got {n}, {m})")
    if not 0 <= i <= n - 1:
        raise InvalidParameter(f"i = {i} outside [0, {n - 1}]")
    return BraidWord(n, tuple(range(1, n)) * m + tuple(range(1, i + 1)))


def braid_closure(b):
    """Trace closure of a braid, as a PD diagram with upward orientation.

    Edge ids 1..n are the strands at the bottom of the braid, so component
    labels follow the smallest strand index in each permutation cycle.
    """
    n = b.strands
    L = len(b.letters)
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    for t, w in enumerate(b.letters):
        k = abs(w)
        for j in range(n):
            if j not in (k - 1, k):
                union((t, j), (t + 1, j))
    for j in range(n):
        union((L, j), (0, j))

    ids = {}
    for j in range(n):
        ids.setdefault(find((0, j)), len(ids) + 1)
    for t in range(L + 1):
        for j in range(n):
            ids.setdefault(find((t, j)), len(ids) + 1)

    def seg(t, j):
        return ids[find((t, j))]

    crossings = []
    touched = set()
    for t, w in enumerate(b.letters):
        k = abs(w)
        bl, br = seg(t, k - 1), seg(t, k)
        tl, tr = seg(t + 1, k - 1), seg(t + 1, k)
        if w > 0:
            crossings.append(Crossing(br, tr, tl, bl, 1))
        else:
            crossings.append(Crossing(bl, br, tr, tl, -1))
        touched.update((k - 1, k))
    loops = tuple(seg(0, j) for j in range(n) if j not in touched)
    return LinkDiagram(tuple(crossings), loops)


def torus_diagram(n, m):
    """Diagram of T(n, m); negative m gives the mirror of T(n, |m|)."""
    d = braid_closure(torus_braid(n, abs(m)))
    return mirror(d) if m < 0 else d


def disjoint_union(d1, d2):
    offset = max(d1.edges(), default=0)
    shifted = [Crossing(x.a + offset, x.b + offset, x.c + offset, x.d + offset, x.sign)
               for x in d2.crossings]
    return LinkDiagram(d1.crossings + tuple(shifted),
                       d1.loops + tuple(e + offset for e in d2.loops))


def unknot():
    return LinkDiagram((), (1,))


def unlink(k):
    return LinkDiagram((), tuple(range(1, k + 1)))


# ---------------------------------------------------------------------------
# operations


def mirror(diag):
    out = []
    for x in diag.crossings:
        a, b, c, d = x.slots
        if x.sign > 0:
            out.append(Crossing(d, a, b, c, -1))
        else:
            out.append(Crossing(b, c, d, a, 1))
    return LinkDiagram(tuple(out), diag.loops)


def reorient(diag, reversed_components):
    """Reverse the orientation of the given component labels (1-based)."""
    rev = set(reversed_components)
    labels = diag.component_of_edge()
    if not rev <= set(range(1, len(diag.components) + 1)):
        raise InvalidParameter(f"unknown component labels {sorted(rev)}")
    out = []
    for x in diag.crossings:
        a, b, c, d = x.slots
        under_rev = labels[a] in rev
        over_rev = labels[b] in rev
        sign = -x.sign if under_rev != over_rev else x.sign
        if under_rev:
            out.append(Crossing(c, d, a, b, sign))
        else:
            out.append(Crossing(a, b, c, d, sign))
    return LinkDiagram(tuple(out), diag.loops)


def _rebuild(unoriented, loops, edge_direction):
    """Orient a list of unoriented crossings.

    ``unoriented`` holds ccw 4-tuples whose under-strand is slots 0-2.
    ``edge_direction`` maps an edge to the slot occurrence ``(k, slot)`` it
    should point *into*, for one edge per component; the rest is propagated.
    """
    occ = {}
    for k, s in enumerate(unoriented):
        for slot, e in enumerate(s):
            occ.setdefault(e, []).append((k, slot))
    partner = {0: 2, 1: 3, 2: 0, 3: 1}
    head = {}
    for e, target in sorted(edge_direction.items()):
        if e in head:
            continue
        cur_e, cur_head = e, target
        while cur_e not in head:
            head[cur_e] = cur_head
            k, slot = cur_head
            nxt_slot = partner[slot]
            nxt_e = unoriented[k][nxt_slot]
            ends = occ[nxt_e]
            # the far end of nxt_e is the occurrence other than (k, nxt_slot)
            far = ends[1] if ends[0] == (k, nxt_slot) else ends[0]
            cur_e, cur_head = nxt_e, far
    out = []
    for k, s in enumerate(unoriented):
        a, b, c, d = s
        under_in = 0 if head[a] == (k, 0) else 2
        over_in = 1 if head[b] == (k, 1) else 3
        rot = s[under_in:] + s[:under_in]
        sign = 1 if (over_in - under_in) % 4 == 3 else -1
        out.append(Crossing(*rot, sign))
    return LinkDiagram(tuple(out), loops)


def resolve_crossing(diag, idx, choice):
    """Replace crossing ``idx`` by its 0- or 1-smoothing.

    Where the smoothing is not orientation-compatible, the component keeps
    the direction of its smallest original edge and the rest is reversed as
    needed.
    """
    if not 0 <= idx < len(diag.crossings):
        raise InvalidParameter(f"no crossing {idx}")
    if choice not in (0, 1):
        raise InvalidParameter("choice must be 0 or 1")
    x = diag.crossings[idx]
    parent = {}

    def find(e):
        while parent.setdefault(e, e) != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    for u, v in x.smoothing(choice):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)

    rest = [y for k, y in enumerate(diag.crossings) if k != idx]
    used = set()
    unoriented = []
    for y in rest:
        s = tuple(find(e) for e in y.slots)
        unoriented.append(s)
        used.update(s)
    loops = set(diag.loops)
    for e in x.slots:
        if find(e) not in used:
            loops.add(find(e))

    # orientation hint: each merged edge follows its smallest original edge
    old_head = {}
    for k, y in enumerate(diag.crossings):
        old_head[y.a] = (k, 0)
        old_head[y.over_in()] = (k, 1 if y.sign < 0 else 3)
    new_index = {}
    j = 0
    for k, y in enumerate(diag.crossings):
        if k != idx:
            new_index[k] = j
            j += 1
    hint = {}
    for e in sorted(old_head):
        r = find(e)
        if r in loops or r in hint:
            continue
        k, slot = old_head[e]
        if k == idx:
            continue
        # e still enters crossing k; it is now edge r
        hint[r] = (new_index[k], slot)
    # merged edges whose every original head was the removed crossing
    for r in sorted(used):
        if r not in hint:
            k, slot = next((k, slot) for k, s in enumerate(unoriented)
                           for slot, e in enumerate(s) if e == r)
            hint[r] = (k, slot)
    # components might still lack a hint only if all their edges were merged
    return _rebuild(unoriented, tuple(sorted(loops)), hint)


def components_and_linking(diag):
    labels = diag.component_of_edge()
    k = len(diag.components)
    twice = [[0] * k for _ in range(k)]
    for x in diag.crossings:
        i, j = labels[x.a] - 1, labels[x.b] - 1
        if i != j:
            twice[i][j] += x.sign
            twice[j][i] += x.sign
    return k, [[v // 2 for v in row] for row in twice]


def orientation_shift(linking, reversed_components):
    """Bidegree bookkeeping for reversing a set of components.

    With lambda = sum of lk(i, j) over i reversed, j kept (computed in the
    original orientation) the result is ``(2*lambda, 6*lambda)``.  Reversal
    moves every Khovanov or Lee generator from (h, q) to (h - 2*lambda,
    q - 6*lambda); equivalently the original is the reoriented link shifted
    by ``[2*lambda]{6*lambda}``.
    """
    rev = {r - 1 for r in reversed_components}
    lam = 0
    for i in rev:
        for j in range(len(linking)):
            if j not in rev:
                lam += linking[i][j]
    return 2 * lam, 6 * lam


def e_link_diagram(n, m, i):
    """E^i_{n,m}: the 1-resolution of the last crossing of D^{i+1}_{n,m}.

    The diagram is not simplified.  It is oriented so that the number of
    negative crossings is minimal, which for these families is the
    orientation transported from the positive braid closures they are
    isotopic to.
    """
    if m not in (n - 1, n) or n < 2:
        raise InvalidParameter(f"E-links need m in (n-1, n), got n={n}, m={m}")
    if not 0 <= i <= n - 2:
        raise InvalidParameter(f"i = {i} outside [0, {n - 2}]")
    d = braid_closure(dlink_braid(n, m, i + 1))
    e = resolve_crossing(d, len(d.crossings) - 1, 1)
    return min_negative_orientation(e)


def min_negative_orientation(diag):
    k = len(diag.components)
    best = None
    for r in range(k):
        for subset in itertools.combinations(range(2, k + 1), r):
            cand = reorient(diag, subset)
            key = (cand.n_minus, subset)
            if best is None or key < best[0]:
                best = (key, cand)
    return best[1] if best else diag


def canonical_hash(diag):
    """SHA-256 of the diagram after relabelling edges by first appearance."""
    relabel = {}
    for x in diag.crossings:
        for e in x.slots:
            relabel.setdefault(e, len(relabel) + 1)
    payload = {
        "crossings": [[relabel[e] for e in x.slots] + [x.sign] for x in diag.crossings],
        "loops": len(diag.loops),
    }
    blob = json.dumps(payload, separators=(",", ":"), sort_keys=True).encode()
    return hashlib.sha256(blob).digest()


# ---------------------------------------------------------------------------
# text formats

_PD_CROSSING = re.compile(r"\[\s*([^\[\];]+?)\s*;\s*([+\-−])\s*\]")


def parse_link(text):
    """Parse ``braid:``, ``torus:``, ``dlink:``, ``elink:`` or ``pd:`` descriptions."""
    text = text.strip()
    kind, _, body = text.partition(":")
    kind = kind.lower()
    try:
        if kind == "braid":
            n_txt, _, word = body.partition(":")
            letters = [int(w) for w in word.split(",") if w.strip()]
            return braid_closure(BraidWord(int(n_txt), letters))
        if kind == "torus":
            n, m = (int(v) for v in body.split(","))
            return torus_diagram(n, m)
        if kind == "dlink":
            n, m, i = (int(v) for v in body.split(","))
            return braid_closure(dlink_braid(n, m, i))
        if kind == "elink":
            n, m, i = (int(v) for v in body.split(","))
            return e_link_diagram(n, m, i)
        if kind == "pd":
            crossings = []
            for slots, sign in _PD_CROSSING.findall(body):
                a, b, c, d = (int(v) for v in slots.split(","))
                crossings.append(Crossing(a, b, c, d, 1 if sign == "+" else -1))
            if not crossings and body.strip() not in ("[]", ""):
                raise InvalidParameter(f"could not parse PD code {body!r}")
            return LinkDiagram(tuple(crossings))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InvalidParameter):
            raise
        raise InvalidParameter(f"malformed link {text!r}: {exc}") from exc
    raise InvalidParameter(f"unknown link kind {kind!r}")


def parse_orientation(text):
    """``rev=1,3`` -> (1, 3); empty or ``rev=`` -> ()."""
    if not text:
        return ()
    _, _, body = text.partition("=")
    return tuple(sorted(int(v) for v in body.split(",") if v.strip()))


def format_pd(diag):
    parts = ["[{},{},{},{};{}]".format(*x.slots, "+" if x.sign > 0 else "-")
             for x in diag.crossings]
    return "pd:[" + ",".join(parts) + "]"
