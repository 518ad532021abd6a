"""Exact coefficients: Laurent polynomials in u over polynomial rings in z.

Every scalar produced by the chain-level machinery lives in Q[z1..zk][u, u^-1].
A coefficient is stored as a map (u_power, z_exponents) -> Fraction with no
zero values; z_exponents is a tuple with trailing zeros trimmed, so plain
rationals use the key (0, ()).
"""
from __future__ import annotations

from fractions import Fraction


def _trim(zexp):
    zexp = tuple(zexp)
    while zexp and zexp[-1] == 0:
        zexp = zexp[:-1]
    return zexp


class UZ:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for key, val in terms.items():
                val = Fraction(val)
                if val:
                    upow, zexp = key
                    self.terms[(upow, _trim(zexp))] = val

    @staticmethod
    def rational(value) -> "UZ":
        return UZ({(0, ()): Fraction(value)})

    @staticmethod
    def u_power(power: int, value=1) -> "UZ":
        return UZ({(power, ()): Fraction(value)})

    @staticmethod
    def z_var(index: int, value=1) -> "UZ":
        zexp = (0,) * index + (1,)
        return UZ({(0, zexp): Fraction(value)})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, UZ):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == UZ.rational(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = UZ.rational(other)
        out = dict(self.terms)
        for key, val in other.terms.items():
            acc = out.get(key, 0) + val
            if acc:
                out[key] = acc
            else:
                out.pop(key, None)
        res = UZ()
        res.terms = out
        return res

    __radd__ = __add__

    def __neg__(self):
        res = UZ()
        res.terms = {k: -v for k, v in self.terms.items()}
        return res

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = UZ.rational(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if not other:
                return UZ()
            res = UZ()
            res.terms = {k: v * other for k, v in self.terms.items()}
            return res
        out = {}
        for (p1, z1), v1 in self.terms.items():
            for (p2, z2), v2 in other.terms.items():
                if len(z1) < len(z2):
                    z1, z2 = z2, z1
                zexp = tuple(a + b for a, b in zip(z1, z2)) + z1[len(z2):]
                key = (p1 + p2, zexp)
                acc = out.get(key, 0) + v1 * v2
                if acc:
                    out[key] = acc
                else:
                    out.pop(key, None)
        res = UZ()
        res.terms = out
        return res

    __rmul__ = __mul__

    def du(self) -> "UZ":
        """Formal derivative in u."""
        res = UZ()
        for (p, z), v in self.terms.items():
            if p != 0:
                res.terms[(p - 1, z)] = v * p
        return res

    def dz(self, index: int) -> "UZ":
        """Formal derivative in the z-variable with the given index."""
        out = {}
        for (p, z), v in self.terms.items():
            if index < len(z) and z[index]:
                newz = _trim(z[:index] + (z[index] - 1,) + z[index + 1:])
                out[(p, newz)] = v * z[index]
        res = UZ()
        res.terms = out
        return res

    def star(self) -> "UZ":
        """The substitution u -> -u."""
        res = UZ()
        res.terms = {k: (-v if k[0] % 2 else v) for k, v in self.terms.items()}
        return res

    def u_coefficient(self, power: int) -> "UZ":
        res = UZ()
        res.terms = {(0, z): v for (p, z), v in self.terms.items() if p == power}
        return res

    def z_truncate(self, order: int) -> "UZ":
        """Drop terms of total z-degree >= order."""
        res = UZ()
        res.terms = {k: v for k, v in self.terms.items() if sum(k[1]) < order}
        return res

    def constant(self) -> Fraction:
        """The (u^0, z-free) part as a Fraction."""
        return self.terms.get((0, ()), Fraction(0))

    def as_fraction(self) -> Fraction:
        """The value as a plain rational; raises if u or z actually occur."""
        if not self.terms:
            return Fraction(0)
        if set(self.terms) != {(0, ())}:
            raise ValueError("coefficient is not a plain rational: %s" % self)
        return self.terms[(0, ())]

    def min_u_power(self):
        return min((p for p, _ in self.terms), default=0)

    def max_u_power(self):
        return max((p for p, _ in self.terms), default=0)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for (p, z), v in sorted(self.terms.items()):
            part = str(v)
            if p:
                part += "*u^%d" % p
            for i, e in enumerate(z):
                if e:
                    part += "*z%d^%d" % (i + 1, e)
            bits.append(part)
        return " + ".join(bits)


ZERO = UZ()
ONE = UZ.rational(1)
