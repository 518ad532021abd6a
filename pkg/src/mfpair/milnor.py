"""Weighted-homogeneous polynomials, Milnor algebras and the residue pairing.

Everything is exact over Q.  A polynomial is a map exponent-tuple -> Fraction.
The Milnor algebra of a quasi-homogeneous polynomial with an isolated critical
point is computed weight by weight through deterministic normal forms modulo
the Jacobian ideal; the residue functional is normalized so that the class of
the Hessian determinant evaluates to the Milnor number.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

from .exact import _Echelon, _row_reduce


class NotQuasiHomogeneous(Exception):
    pass


class NonIsolatedSingularity(Exception):
    pass


# ----------------------------------------------------------------------------
# polynomials


def poly(terms) -> dict:
    """Build a polynomial from {exps: coeff}, dropping zeros."""
    out = {}
    for exps, coeff in terms.items():
        coeff = Fraction(coeff)
        if coeff:
            out[tuple(exps)] = out.get(tuple(exps), Fraction(0)) + coeff
            if not out[tuple(exps)]:
                del out[tuple(exps)]
    return out


def poly_add(p, q):
    out = dict(p)
    for e, c in q.items():
        acc = out.get(e, Fraction(0)) + c
        if acc:
            out[e] = acc
        else:
            out.pop(e, None)
    return out


def poly_scale(p, c):
    c = Fraction(c)
    if not c:
        return {}
    return {e: v * c for e, v in p.items()}


def poly_mul(p, q):
    out = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            acc = out.get(e, Fraction(0)) + c1 * c2
            if acc:
                out[e] = acc
            else:
                out.pop(e, None)
    return out


def poly_diff(p, i):
    out = {}
    for e, c in p.items():
        if e[i]:
            ne = e[:i] + (e[i] - 1,) + e[i + 1:]
            out[ne] = out.get(ne, Fraction(0)) + c * e[i]
    return {e: c for e, c in out.items() if c}


def monomial(n, i, power=1):
    e = [0] * n
    e[i] = power
    return tuple(e)


class WeightSystem:
    """Positive integer variable weights with an even total weight."""

    def __init__(self, weights, total):
        self.weights = tuple(int(w) for w in weights)
        self.n = len(self.weights)
        self.total = int(total)
        if any(w <= 0 for w in self.weights):
            raise ValueError("variable weights must be positive")
        if self.total % 2:
            raise ValueError("total weight must be even (rescale the weights)")
        if any(w >= self.total for w in self.weights):
            raise NotQuasiHomogeneous("variable weight >= total weight")

    def monomial_weight(self, exps):
        return sum(e * w for e, w in zip(exps, self.weights))

    def check_homogeneous(self, p, weight=None):
        """Weight of p; raises unless all monomials share one weight."""
        if not p:
            return weight
        found = {self.monomial_weight(e) for e in p}
        if len(found) != 1:
            raise NotQuasiHomogeneous("mixed weights %s" % sorted(found))
        got = found.pop()
        if weight is not None and got != weight:
            raise NotQuasiHomogeneous("weight %d, expected %d" % (got, weight))
        return got

    def monomials_of_weight(self, w):
        """All exponent tuples of the given weight, lexicographically sorted."""
        out = []

        def rec(i, remaining, prefix):
            if i == self.n:
                if remaining == 0:
                    out.append(tuple(prefix))
                return
            step = self.weights[i]
            for e in range(remaining // step + 1):
                rec(i + 1, remaining - e * step, prefix + [e])

        if w >= 0:
            rec(0, w, [])
        return sorted(out)

    @staticmethod
    def infer(f, weights):
        """Weight system for f with the given weights, doubled if W is odd."""
        weights = tuple(int(w) for w in weights)
        totals = {sum(e * w for e, w in zip(exps, weights)) for exps in f}
        if len(totals) != 1:
            raise NotQuasiHomogeneous("f is not quasi-homogeneous for %s" % (weights,))
        total = totals.pop()
        if total % 2:
            weights = tuple(2 * w for w in weights)
            total *= 2
        return WeightSystem(weights, total)


def hessian(f, n):
    """Determinant of the matrix of second partials, exact."""
    second = [[poly_diff(poly_diff(f, i), j) for j in range(n)] for i in range(n)]
    det = {}
    for perm in itertools.permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = {(0,) * n: Fraction(sign)}
        for i in range(n):
            term = poly_mul(term, second[i][perm[i]])
        det = poly_add(det, term)
    return det


def poincare_coefficients(ws: WeightSystem):
    """Coefficients of prod (t^(W-w_i) - 1)/(t^(w_i) - 1), or None if not a polynomial."""
    num = {0: Fraction(1)}
    for w in ws.weights:
        factor = {ws.total - w: Fraction(1), 0: Fraction(-1)}
        out = {}
        for a, ca in num.items():
            for b, cb in factor.items():
                out[a + b] = out.get(a + b, Fraction(0)) + ca * cb
        num = {k: v for k, v in out.items() if v}
    for w in ws.weights:
        # divide by t^w - 1
        quot = {}
        num = dict(num)
        while num:
            d = max(num)
            if d < w:
                return None
            c = num[d]
            quot[d - w] = c
            num.pop(d)
            acc = num.get(d - w, Fraction(0)) + c
            if acc:
                num[d - w] = acc
            else:
                num.pop(d - w, None)
        num = quot
    return num


class MilnorData:
    """Monomial basis of the Milnor algebra plus socle normalization data."""

    def __init__(self, f, ws: WeightSystem):
        self.f = dict(f)
        self.ws = ws
        ws.check_homogeneous(f, ws.total)
        self.jacobian = [poly_diff(f, i) for i in range(ws.n)]
        self.socle_weight = ws.n * ws.total - 2 * sum(ws.weights)
        self._tables = {}

        bound = self.socle_weight + max(ws.weights)
        for w in range(self.socle_weight + 1, bound + 1):
            if self._quotient_basis(w):
                raise NonIsolatedSingularity(
                    "Jacobian quotient does not vanish at weight %d" % w)
        self.basis = []
        for w in range(0, self.socle_weight + 1):
            self.basis.extend(self._quotient_basis(w))
        self.mu = len(self.basis)
        socle_basis = self._quotient_basis(self.socle_weight)
        if len(socle_basis) != 1:
            raise NonIsolatedSingularity(
                "socle dimension %d != 1" % len(socle_basis))
        self.socle_monomial = socle_basis[0]
        self.hessian_poly = hessian(f, ws.n)
        hess_nf = self.normal_form(self.hessian_poly)
        self.hessian_coord = hess_nf.get(self.socle_monomial, Fraction(0))
        if not self.hessian_coord:
            raise NonIsolatedSingularity("Hessian class vanishes")

    def _table(self, w):
        """RREF rows of the weight-w ideal slice over lex-ordered monomials."""
        if w not in self._tables:
            mons = self.ws.monomials_of_weight(w)
            index = {m: i for i, m in enumerate(mons)}
            rows = []
            for i, gen in enumerate(self.jacobian):
                gw = self.ws.total - self.ws.weights[i]
                for m in self.ws.monomials_of_weight(w - gw):
                    prod = poly_mul({m: Fraction(1)}, gen)
                    rows.append({index[e]: c for e, c in prod.items()})
            pivots, pivot_rows = _row_reduce(rows, len(mons))
            table = {pc: rows[pr] for pc, pr in zip(pivots, pivot_rows)}
            self._tables[w] = (mons, table)
        return self._tables[w]

    def _quotient_basis(self, w):
        mons, table = self._table(w)
        return [m for i, m in enumerate(mons) if i not in table]

    def normal_form(self, g) -> dict:
        """Coordinates of g modulo the Jacobian ideal in the monomial basis."""
        by_weight = {}
        for e, c in g.items():
            by_weight.setdefault(self.ws.monomial_weight(e), {})[e] = c
        out = {}
        for w, piece in by_weight.items():
            if w > self.socle_weight:
                continue
            mons, table = self._table(w)
            index = {m: i for i, m in enumerate(mons)}
            vec = {index[e]: c for e, c in piece.items()}
            for pc in sorted(table):
                coeff = vec.get(pc)
                if coeff:
                    for c2, v2 in table[pc].items():
                        acc = vec.get(c2, Fraction(0)) - coeff * v2
                        if acc:
                            vec[c2] = acc
                        else:
                            vec.pop(c2, None)
            for i, c in vec.items():
                if c:
                    out[mons[i]] = out.get(mons[i], Fraction(0)) + c
        return {m: c for m, c in out.items() if c}


def milnor_data(f, ws: WeightSystem) -> MilnorData:
    return MilnorData(f, ws)


def residue_pairing(xi1, xi2, md: MilnorData) -> Fraction:
    """Residue pairing of two polynomial classes.

    The product is reduced modulo the Jacobian ideal, its socle component is
    written as c * [hessian], and c * mu is returned.
    """
    nf = md.normal_form(poly_mul(xi1, xi2))
    socle = nf.get(md.socle_monomial, Fraction(0))
    return socle / md.hessian_coord * md.mu


def residue_gram(md: MilnorData):
    """Gram matrix of the residue pairing on the Milnor monomial basis."""
    return [
        [residue_pairing({m1: Fraction(1)}, {m2: Fraction(1)}, md) for m2 in md.basis]
        for m1 in md.basis
    ]


def one_variable_contour_residue(a: int, b: int, N: int) -> Fraction:
    """Independent oracle for f = x^N: the contour integral of x^(a+b)/(N x^(N-1)).

    Extracts the formal residue of the integrand, which is 1/N exactly when
    a + b = N - 2 and zero otherwise.
    """
    power = a + b - (N - 1)
    return Fraction(1, N) if power == -1 else Fraction(0)


def brute_force_quotient_dims(f, ws: WeightSystem, max_weight: int):
    """Per-weight Milnor quotient dimensions by direct elimination.

    Reimplements the reduction from scratch (dense elimination over all
    monomials of each weight) as an oracle for milnor_data.
    """
    jac = [poly_diff(f, i) for i in range(ws.n)]
    dims = []
    for w in range(max_weight + 1):
        mons = ws.monomials_of_weight(w)
        index = {m: i for i, m in enumerate(mons)}
        ech = _Echelon(len(mons))
        for i, gen in enumerate(jac):
            gw = ws.total - ws.weights[i]
            for m in ws.monomials_of_weight(w - gw):
                prod = poly_mul({m: Fraction(1)}, gen)
                vec = [Fraction(0)] * len(mons)
                for e, c in prod.items():
                    vec[index[e]] = c
                ech.insert(vec)
        dims.append(len(mons) - len(ech.by_lead))
    return dims
