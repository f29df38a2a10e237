"""Coefficient rings: the integers, the rationals and prime fields.

Elements are plain Python ints (integers, prime fields) or ``gmpy2.mpq``
(rationals).  Callers combine elements with the usual operators and pass
results through :meth:`Ring.norm`, which reduces modulo p when needed.
"""

from __future__ import annotations

import re

import gmpy2


class Ring:
    name = "?"
    characteristic = 0
    is_field = False

    def norm(self, x):
        return x

    def coerce(self, x):
        return self.norm(x)

    def is_unit(self, x):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def __repr__(self):
        return f"<ring {self.name}>"

    def __eq__(self, other):
        return isinstance(other, Ring) and other.name == self.name

    def __hash__(self):
        return hash(self.name)


class Integers(Ring):
    name = "Z"

    def coerce(self, x):
        return int(x)

    def is_unit(self, x):
        return x == 1 or x == -1

    def inv(self, x):
        if x == 1 or x == -1:
            return x
        raise ZeroDivisionError(f"{x} is not a unit in Z")


class Rationals(Ring):
    name = "Q"
    is_field = True

    def coerce(self, x):
        return gmpy2.mpq(x)

    def is_unit(self, x):
        return x != 0

    def inv(self, x):
        return 1 / gmpy2.mpq(x)


class PrimeField(Ring):
    is_field = True

    def __init__(self, p):
        p = int(p)
        if p < 2 or not gmpy2.is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"F{p}"

    def norm(self, x):
        return x % self.p

    def coerce(self, x):
        return int(x) % self.p

    def is_unit(self, x):
        return x % self.p != 0

    def inv(self, x):
        return pow(int(x), -1, self.p)


ZZ = Integers()
QQ = Rationals()


def parse_ring(text):
    """``Z``, ``Q``, ``F2``, ``F3``, ``GF(5)`` ... -> Ring."""
    t = text.strip().upper()
    if t in ("Z", "ZZ", "INTEGERS"):
        return ZZ
    if t in ("Q", "QQ", "RATIONALS"):
        return QQ
    m = re.fullmatch(r"(?:F|GF|F_)\(?(\d+)\)?", t)
    if m:
        return PrimeField(int(m.group(1)))
    raise ValueError(f"unknown ring {text!r}")
