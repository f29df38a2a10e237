"""Rank-two Frobenius algebras R[X]/(X^2 - hX - t).

An element ``c0 + c1*X`` is stored as the pair ``(c0, c1)``.  The
comultiplication is ``D(1) = 1(x)X + X(x)1 - h 1(x)1``, ``D(X) = X(x)X + t 1(x)1``,
the counit is ``e(1) = 0``, ``e(X) = 1``, and the handle element is
``2X - h``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .rings import Ring, PrimeField


@dataclass(frozen=True)
class Theory:
    """A Frobenius algebra over a coefficient ring."""

    name: str
    ring: Ring
    h: object
    t: object

    @property
    def graded(self):
        return self.h == 0 and self.t == 0

    @property
    def deformation_step(self):
        """q-degree carried by h and t (0 for the undeformed theory)."""
        if self.t != 0:
            return 4
        if self.h != 0:
            return 2
        return 0

    def mul(self, x, y):
        r = self.ring
        a0, a1 = x
        b0, b1 = y
        return (r.norm(a0 * b0 + self.t * a1 * b1),
                r.norm(a0 * b1 + a1 * b0 + self.h * a1 * b1))

    def handle(self):
        return (self.ring.norm(-self.h), self.ring.norm(2))

    def counit(self, x):
        return x[1]

    def roots(self):
        """The two roots of X^2 - hX - t, for the deformed theories."""
        r = self.ring
        if self.name == "Lee":
            return (r.norm(-1), r.norm(1))
        if self.name == "BarNatan":
            return (r.norm(0), r.norm(1))
        raise ValueError("the undeformed theory has no separated roots")

    def idempotents(self):
        """Labels ``a`` and ``b`` of canonical generators as algebra elements.

        ``a = (X - r1)/(r2 - r1)`` and ``b = (X - r2)/(r2 - r1)``; for Lee this
        is ``(X+1)/2`` and ``(X-1)/2``.
        """
        r = self.ring
        r1, r2 = self.roots()
        s = r.inv(r.norm(r2 - r1))
        return ((r.norm(-r1 * s), s), (r.norm(-r2 * s), s))

    @lru_cache(maxsize=None)
    def surface(self, dots, genus, nbound):
        """Neck-cut a connected surface into dotted disks.

        Returns a tuple of ``(mask, coeff)`` over ``nbound`` boundary circles
        (bit set = dotted disk).  With no boundary the single entry is the
        closed-surface evaluation under mask 0.
        """
        r = self.ring
        x = (r.norm(1), r.norm(0))
        for _ in range(dots):
            x = self.mul(x, (0, 1))
        for _ in range(genus):
            x = self.mul(x, self.handle())
        if nbound == 0:
            c = self.counit(x)
            return ((0, c),) if c != 0 else ()
        terms = {0: x[0], 1: x[1]}
        for k in range(1, nbound):
            nxt = {}
            for mask, c in terms.items():
                if c == 0:
                    continue
                top = mask >> (k - 1) & 1
                rest = mask & ~(1 << (k - 1))
                # comultiply the last factor into slots k-1 and k
                if top == 0:
                    pieces = ((0, 1, 1), (1, 0, 1), (0, 0, -self.h))
                else:
                    pieces = ((1, 1, 1), (0, 0, self.t))
                for u, v, w in pieces:
                    if w == 0:
                        continue
                    m2 = rest | (u << (k - 1)) | (v << k)
                    nxt[m2] = r.norm(nxt.get(m2, 0) + c * w)
            terms = nxt
        return tuple((m, c) for m, c in sorted(terms.items()) if c != 0)


def khovanov(ring):
    return Theory("Khovanov", ring, ring.norm(ring.coerce(0)), ring.norm(ring.coerce(0)))


def lee(ring):
    if ring.characteristic == 2:
        raise ValueError("the Lee theory needs characteristic other than 2; use barnatan")
    if not ring.is_field:
        raise ValueError("Lee homology is computed over a field")
    return Theory("Lee", ring, ring.coerce(0), ring.coerce(1))


def barnatan(ring):
    if not (isinstance(ring, PrimeField) and ring.p == 2):
        raise ValueError("the Bar-Natan theory is used in characteristic 2 only")
    return Theory("BarNatan", ring, ring.coerce(1), ring.coerce(0))


def make_theory(name, ring):
    key = name.lower().replace("-", "").replace("_", "")
    if key in ("khovanov", "kh"):
        return khovanov(ring)
    if key == "lee":
        return lee(ring)
    if key in ("barnatan", "bn"):
        return barnatan(ring)
    raise ValueError(f"unknown theory {name!r}")
