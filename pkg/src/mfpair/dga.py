"""Z/2- and weight-graded dg algebras with exact structure constants.

Algebras expose a small uniform surface used by the chain operators:

    unit          distinguished basis label of 1
    parity(l)     0 or 1
    weight(l)     integer weight
    mul(l1, l2)   product of two basis labels as {label: Fraction}
    diff(l)       differential of a basis label as {label: Fraction}

Finite algebras carry explicit tables and can be validated exhaustively;
the matrix-factorization algebra is infinite-dimensional and generates its
weight pieces lazily.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction

from . import milnor
from .exact import GradedSpace
from .milnor import WeightSystem


class AlgebraAxiomError(Exception):
    pass


# ----------------------------------------------------------------------------
# element helpers (elements are {label: Fraction} maps)


def el(pairs) -> dict:
    out = {}
    for label, coeff in (pairs.items() if isinstance(pairs, dict) else pairs):
        coeff = Fraction(coeff)
        if coeff:
            out[label] = out.get(label, Fraction(0)) + coeff
            if not out[label]:
                del out[label]
    return out


def el_add(e1, e2):
    out = dict(e1)
    for lbl, c in e2.items():
        acc = out.get(lbl, Fraction(0)) + c
        if acc:
            out[lbl] = acc
        else:
            out.pop(lbl, None)
    return out


def el_scale(e, c):
    c = Fraction(c)
    return {lbl: v * c for lbl, v in e.items()} if c else {}


def el_mul(A, e1, e2):
    out = {}
    for l1, c1 in e1.items():
        for l2, c2 in e2.items():
            for lbl, c in A.mul(l1, l2).items():
                acc = out.get(lbl, Fraction(0)) + c1 * c2 * c
                if acc:
                    out[lbl] = acc
                else:
                    out.pop(lbl, None)
    return out


def el_diff(A, e):
    out = {}
    for l1, c1 in e.items():
        for lbl, c in A.diff(l1).items():
            acc = out.get(lbl, Fraction(0)) + c1 * c
            if acc:
                out[lbl] = acc
            else:
                out.pop(lbl, None)
    return out


def el_parity(A, e):
    parities = {A.parity(lbl) for lbl in e}
    if len(parities) > 1:
        raise ValueError("element is not parity-homogeneous")
    return parities.pop() if parities else 0


# ----------------------------------------------------------------------------
# finite structure-constant algebras


class TableAlgebra:
    """Finite dg algebra given by explicit product and differential tables."""

    is_finite = True

    def __init__(self, name, labels, parities, weights, unit, mul_table,
                 diff_table=None, d_weight=0, centrals=None, label_names=None):
        self.name = name
        self.labels = list(labels)
        self._parity = dict(parities)
        self._weight = dict(weights)
        self.unit = unit
        self._mul = {k: el(v) for k, v in mul_table.items()}
        self._diff = {k: el(v) for k, v in (diff_table or {}).items()}
        self.d_weight = d_weight
        self.centrals = list(centrals or [])
        self.label_names = label_names or {}

    def parity(self, label):
        return self._parity[label]

    def weight(self, label):
        return self._weight[label]

    def mul(self, l1, l2):
        return self._mul.get((l1, l2), {})

    def diff(self, label):
        return self._diff.get(label, {})

    def weight_basis(self, w):
        return [lbl for lbl in self.labels if self._weight[lbl] == w]

    def min_label_weight(self):
        return min(self._weight.values())

    def graded_space(self) -> GradedSpace:
        space = GradedSpace()
        for lbl in self.labels:
            space.add(self._weight[lbl], lbl, self._parity[lbl])
        return space

    def opposite(self):
        return OppositeAlgebra(self)

    def describe(self, label):
        return self.label_names.get(label, repr(label))

    # -- axiom checks -------------------------------------------------------

    def validate(self):
        uni = {self.unit: Fraction(1)}
        if self._parity[self.unit] or self._weight[self.unit]:
            raise AlgebraAxiomError("unit must be even of weight 0")
        for a in self.labels:
            ea = {a: Fraction(1)}
            if el_mul(self, uni, ea) != ea or el_mul(self, ea, uni) != ea:
                raise AlgebraAxiomError("unit law fails at %r" % (a,))
        for a, b in itertools.product(self.labels, repeat=2):
            prod = self.mul(a, b)
            pab = (self._parity[a] + self._parity[b]) % 2
            wab = self._weight[a] + self._weight[b]
            for lbl in prod:
                if self._parity[lbl] != pab or self._weight[lbl] != wab:
                    raise AlgebraAxiomError("grading broken at %r*%r" % (a, b))
            # Leibniz: d(ab) = da*b + (-1)^|a| a*db
            lhs = el_diff(self, prod)
            rhs = el_add(
                el_mul(self, self.diff(a), {b: Fraction(1)}),
                el_scale(el_mul(self, {a: Fraction(1)}, self.diff(b)),
                         -1 if self._parity[a] else 1))
            if lhs != rhs:
                raise AlgebraAxiomError("Leibniz fails at %r,%r" % (a, b))
        for a in self.labels:
            if el_diff(self, self.diff(a)):
                raise AlgebraAxiomError("d^2 != 0 at %r" % (a,))
            da = self.diff(a)
            for lbl in da:
                if self._parity[lbl] != (self._parity[a] + 1) % 2:
                    raise AlgebraAxiomError("d not odd at %r" % (a,))
                if self._weight[lbl] != self._weight[a] + self.d_weight:
                    raise AlgebraAxiomError("d weight wrong at %r" % (a,))
        for a, b, c in itertools.product(self.labels, repeat=3):
            left = el_mul(self, self.mul(a, b), {c: Fraction(1)})
            right = el_mul(self, {a: Fraction(1)}, self.mul(b, c))
            if left != right:
                raise AlgebraAxiomError("associativity fails at %r,%r,%r" % (a, b, c))
        for name, c in self.centrals:
            check_central_closed_even(self, c, name)
        return True


def check_central_closed_even(A, element, name="c"):
    """Verify that an element is central, closed and even; raises otherwise."""
    if el_parity(A, element) != 0:
        raise AlgebraAxiomError("%s is not even" % name)
    if el_diff(A, element):
        raise AlgebraAxiomError("%s is not closed" % name)
    if getattr(A, "is_finite", False):
        for b in A.labels:
            eb = {b: Fraction(1)}
            if el_mul(A, element, eb) != el_mul(A, eb, element):
                raise AlgebraAxiomError("%s is not central" % name)
    return True


class OppositeAlgebra:
    """Same space with the Koszul-twisted reversed product."""

    def __init__(self, base):
        self.base = base
        self.name = base.name + "^op"
        self.unit = base.unit
        self.d_weight = base.d_weight
        self.is_finite = getattr(base, "is_finite", False)
        if self.is_finite:
            self.labels = base.labels
        self.centrals = list(getattr(base, "centrals", ()))

    def parity(self, label):
        return self.base.parity(label)

    def weight(self, label):
        return self.base.weight(label)

    def mul(self, l1, l2):
        prod = self.base.mul(l2, l1)
        if self.base.parity(l1) and self.base.parity(l2):
            return {lbl: -c for lbl, c in prod.items()}
        return prod

    def diff(self, label):
        return self.base.diff(label)

    def weight_basis(self, w):
        return self.base.weight_basis(w)

    def graded_space(self):
        return self.base.graded_space()

    def describe(self, label):
        return self.base.describe(label)

    def opposite(self):
        return self.base


class TensorAlgebra:
    """Super tensor product; labels are pairs of factor labels."""

    def __init__(self, left, right):
        self.left = left
        self.right = right
        self.name = "%s(x)%s" % (left.name, right.name)
        self.unit = (left.unit, right.unit)
        self.d_weight = max(left.d_weight, right.d_weight)
        self.is_finite = getattr(left, "is_finite", False) and \
            getattr(right, "is_finite", False)
        if self.is_finite:
            self.labels = [(a, b) for a in left.labels for b in right.labels]
        self.centrals = []
        for nm, c in getattr(left, "centrals", ()):
            self.centrals.append((nm + "(x)1", {(lbl, right.unit): v for lbl, v in c.items()}))
        for nm, c in getattr(right, "centrals", ()):
            self.centrals.append(("1(x)" + nm, {(left.unit, lbl): v for lbl, v in c.items()}))

    def parity(self, label):
        return (self.left.parity(label[0]) + self.right.parity(label[1])) % 2

    def weight(self, label):
        return self.left.weight(label[0]) + self.right.weight(label[1])

    def mul(self, l1, l2):
        a1, b1 = l1
        a2, b2 = l2
        sign = -1 if (self.right.parity(b1) and self.left.parity(a2)) else 1
        out = {}
        for la, ca in self.left.mul(a1, a2).items():
            for lb, cb in self.right.mul(b1, b2).items():
                out[(la, lb)] = sign * ca * cb
        return out

    def diff(self, label):
        a, b = label
        out = {}
        for la, ca in self.left.diff(a).items():
            out[(la, b)] = out.get((la, b), Fraction(0)) + ca
        sign = -1 if self.left.parity(a) else 1
        for lb, cb in self.right.diff(b).items():
            key = (a, lb)
            acc = out.get(key, Fraction(0)) + sign * cb
            if acc:
                out[key] = acc
            else:
                out.pop(key, None)
        return out

    def describe(self, label):
        return "%s(x)%s" % (self.left.describe(label[0]), self.right.describe(label[1]))

    def opposite(self):
        return OppositeAlgebra(self)


# ----------------------------------------------------------------------------
# operators on polynomials in odd variables

_END_SINGLE_PARITY = {0: 0, 1: 1, 2: 1, 3: 0}
_END_SINGLE_TABLE = {
    (0, 0): {0: 1}, (0, 1): {1: 1}, (0, 2): {2: 1}, (0, 3): {3: 1},
    (1, 0): {1: 1}, (1, 1): {}, (1, 2): {3: 1}, (1, 3): {},
    (2, 0): {2: 1}, (2, 1): {0: 1, 3: -1}, (2, 2): {}, (2, 3): {2: 1},
    (3, 0): {3: 1}, (3, 1): {1: 1}, (3, 2): {}, (3, 3): {3: 1},
}
_END_SINGLE_NAME = {0: "1", 1: "t", 2: "dt", 3: "tdt"}


def end_digits(label: int, n: int):
    return tuple((label >> (2 * i)) & 3 for i in range(n))


def end_label(digits) -> int:
    out = 0
    for i, d in enumerate(digits):
        out |= d << (2 * i)
    return out


def end_parity(label: int, n: int) -> int:
    return sum(_END_SINGLE_PARITY[d] for d in end_digits(label, n)) % 2


def end_mul(l1: int, l2: int, n: int) -> dict:
    """Product of two monomial operators on polynomials in n odd variables."""
    d1 = end_digits(l1, n)
    d2 = end_digits(l2, n)
    sign = 1
    for i in range(n):
        for j in range(i + 1, n):
            if _END_SINGLE_PARITY[d2[i]] and _END_SINGLE_PARITY[d1[j]]:
                sign = -sign
    terms = [(0, Fraction(sign))]
    for i in range(n):
        factor = _END_SINGLE_TABLE[(d1[i], d2[i])]
        terms = [
            (acc | (dig << (2 * i)), c * Fraction(fc))
            for acc, c in terms for dig, fc in factor.items()
        ]
        if not terms:
            return {}
    out = {}
    for lbl, c in terms:
        out[lbl] = out.get(lbl, Fraction(0)) + c
    return {lbl: c for lbl, c in out.items() if c}


def end_apply(label: int, mask: int, n: int):
    """Apply a monomial operator to a subset monomial; returns (mask, sign) or None."""
    digits = end_digits(label, n)
    sign = 1
    out = mask
    for i in range(n):
        d = digits[i]
        present = (mask >> i) & 1
        if d == 1:
            if present:
                return None
            below = bin(mask & ((1 << i) - 1)).count("1")
            sign *= (-1) ** below
            out |= 1 << i
        elif d == 2:
            if not present:
                return None
            below = bin(mask & ((1 << i) - 1)).count("1")
            sign *= (-1) ** below
            out &= ~(1 << i)
        elif d == 3:
            if not present:
                return None
    return out, sign


def end_str(element: dict, n: int) -> Fraction:
    """Supertrace of an operator over the 2^n-dimensional module."""
    total = Fraction(0)
    for lbl, coeff in element.items():
        for mask in range(1 << n):
            res = end_apply(lbl, mask, n)
            if res and res[0] == mask:
                par = bin(mask).count("1") % 2
                total += coeff * res[1] * (-1 if par else 1)
    return total


def end_weight(label: int, n: int, ws: WeightSystem) -> int:
    half = ws.total // 2
    total = 0
    for i, d in enumerate(end_digits(label, n)):
        if d == 1:
            total += ws.weights[i] - half
        elif d == 2:
            total += half - ws.weights[i]
    return total


def end_name(label: int, n: int) -> str:
    digits = end_digits(label, n)
    bits = [
        _END_SINGLE_NAME[d] + str(i + 1)
        for i, d in enumerate(digits) if d
    ]
    return "*".join(bits) if bits else "1"


def build_end_p(n: int) -> TableAlgebra:
    """The 4^n-dimensional algebra of operators on n odd variables, zero differential."""
    if not 1 <= n <= 4:
        raise ValueError("n out of range (1..4)")
    labels = list(range(4 ** n))
    mul_table = {
        (a, b): end_mul(a, b, n) for a in labels for b in labels
    }
    return TableAlgebra(
        "EndP%d" % n,
        labels,
        {l: end_parity(l, n) for l in labels},
        {l: 0 for l in labels},
        0,
        mul_table,
        centrals=[("1", {0: Fraction(1)})],
        label_names={l: end_name(l, n) for l in labels},
    )


# ----------------------------------------------------------------------------
# the matrix-factorization dg algebra


class MFAlgebra:
    """Polynomial coefficients tensored with odd-variable operators.

    Labels are (exponent tuple, operator label); the differential is the
    super-commutator with D = sum_i (f_i (x) t_i + x_i (x) dt_i) for a chosen
    decomposition f = sum x_i f_i.
    """

    is_finite = False

    def __init__(self, f, ws: WeightSystem, decomposition=None):
        self.f = dict(f)
        self.ws = ws
        self.n = ws.n
        ws.check_homogeneous(f, ws.total)
        if decomposition is None:
            decomposition = []
            for i in range(self.n):
                decomposition.append(
                    milnor.poly_scale(milnor.poly_diff(f, i),
                                      Fraction(ws.weights[i], ws.total)))
        self.decomposition = [dict(fi) for fi in decomposition]
        recomposed = {}
        for i, fi in enumerate(self.decomposition):
            ws.check_homogeneous(fi, ws.total - ws.weights[i])
            recomposed = milnor.poly_add(
                recomposed, milnor.poly_mul({milnor.monomial(self.n, i): Fraction(1)}, fi))
        if recomposed != self.f:
            raise ValueError("decomposition invalid: sum x_i f_i != f")

        self.name = "A_f"
        self.unit = ((0,) * self.n, 0)
        self.d_weight = ws.total // 2
        theta = lambda i: end_label([1 if j == i else 0 for j in range(self.n)])
        dtheta = lambda i: end_label([2 if j == i else 0 for j in range(self.n)])
        D = {}
        for i in range(self.n):
            for e, c in self.decomposition[i].items():
                D[(e, theta(i))] = D.get((e, theta(i)), Fraction(0)) + c
            D[(milnor.monomial(self.n, i), dtheta(i))] = Fraction(1)
        self.D = el(D)
        self.centrals = [
            ("x%d" % (j + 1), {(milnor.monomial(self.n, j), 0): Fraction(1)})
            for j in range(self.n)
        ]
        self._diff_cache = {}
        self._mul_cache = {}
        self._wb_cache = {}

        dsq = el_mul(self, self.D, self.D)
        if dsq != {(e, 0): c for e, c in self.f.items()}:
            raise AlgebraAxiomError("D^2 != f*1")
        for lbl in [self.unit, (milnor.monomial(self.n, 0), 0),
                    ((0,) * self.n, theta(0)), ((0,) * self.n, dtheta(0))]:
            if el_diff(self, el_diff(self, {lbl: Fraction(1)})):
                raise AlgebraAxiomError("d^2 != 0 at %r" % (lbl,))

    def parity(self, label):
        return end_parity(label[1], self.n)

    def weight(self, label):
        return self.ws.monomial_weight(label[0]) + end_weight(label[1], self.n, self.ws)

    def mul(self, l1, l2):
        key = (l1, l2)
        cached = self._mul_cache.get(key)
        if cached is None:
            mono = tuple(a + b for a, b in zip(l1[0], l2[0]))
            cached = {
                (mono, lbl): c for lbl, c in end_mul(l1[1], l2[1], self.n).items()
            }
            self._mul_cache[key] = cached
        return cached

    def diff(self, label):
        cached = self._diff_cache.get(label)
        if cached is None:
            e = {label: Fraction(1)}
            sign = -1 if self.parity(label) else 1
            cached = el_add(el_mul(self, self.D, e),
                            el_scale(el_mul(self, e, self.D), -sign))
            self._diff_cache[label] = cached
        return cached

    def weight_basis(self, w):
        cached = self._wb_cache.get(w)
        if cached is None:
            out = []
            for endl in range(4 ** self.n):
                rem = w - end_weight(endl, self.n, self.ws)
                for mono in self.ws.monomials_of_weight(rem):
                    out.append((mono, endl))
            cached = self._wb_cache[w] = sorted(out)
        return cached

    def min_label_weight(self):
        return min(end_weight(e, self.n, self.ws) for e in range(4 ** self.n))

    def describe(self, label):
        mono, endl = label
        poly_part = "*".join(
            "x%d^%d" % (i + 1, e) for i, e in enumerate(mono) if e)
        end_part = end_name(endl, self.n)
        if poly_part:
            return poly_part + "*" + end_part
        return end_part

    def opposite(self):
        return OppositeAlgebra(self)

    def truncate(self, order: int, centrals="vars") -> TableAlgebra:
        """The x-adic quotient by monomials of total degree >= order."""
        labels = []
        for endl in range(4 ** self.n):
            for exps in itertools.product(range(order), repeat=self.n):
                if sum(exps) < order:
                    labels.append((tuple(exps), endl))
        labels.sort()
        keep = set(labels)

        def cut(element):
            return {lbl: c for lbl, c in element.items() if lbl in keep}

        mul_table = {
            (a, b): cut(self.mul(a, b)) for a in labels for b in labels
        }
        diff_table = {a: cut(self.diff(a)) for a in labels}
        cents = [("1", {self.unit: Fraction(1)})]
        if centrals == "vars":
            cents += [(nm, dict(c)) for nm, c in self.centrals]
        return TableAlgebra(
            "A_f/x^%d" % order, labels,
            {l: self.parity(l) for l in labels},
            {l: self.weight(l) for l in labels},
            self.unit, mul_table, diff_table, self.d_weight, cents,
            {l: self.describe(l) for l in labels})


def build_mf_dga(f, ws: WeightSystem, decomposition=None) -> MFAlgebra:
    return MFAlgebra(f, ws, decomposition)


class PolyAlgebra:
    """Commutative polynomial coefficients algebra; labels are exponent tuples."""

    is_finite = False

    def __init__(self, ws: WeightSystem):
        self.ws = ws
        self.n = ws.n
        self.name = "Q[x]"
        self.unit = (0,) * ws.n
        self.d_weight = 0
        self.centrals = []

    def parity(self, label):
        return 0

    def weight(self, label):
        return self.ws.monomial_weight(label)

    def mul(self, l1, l2):
        return {tuple(a + b for a, b in zip(l1, l2)): Fraction(1)}

    def diff(self, label):
        return {}

    def describe(self, label):
        return "*".join("x%d^%d" % (i + 1, e) for i, e in enumerate(label) if e) or "1"

    def opposite(self):
        return self


class EndAlgebra:
    """Endomorphisms of a finite algebra's underlying complex, as a matrix algebra.

    The basis contains the identity (replacing the corner matrix unit) so the
    normalized chain complex over it can discard genuine unit components.
    """

    is_finite = True

    def __init__(self, base: TableAlgebra):
        self.base = base
        self.name = "End(%s)" % base.name
        self.dim = len(base.labels)
        self.index = {lbl: i for i, lbl in enumerate(base.labels)}
        self.unit = "id"
        self.d_weight = base.d_weight
        self.labels = ["id"] + [
            (i, j) for i in range(self.dim) for j in range(self.dim)
            if (i, j) != (0, 0)
        ]
        self.centrals = [("1", {"id": Fraction(1)})]
        dmat = {}
        for j, lbl in enumerate(base.labels):
            for out, c in base.diff(lbl).items():
                dmat[(self.index[out], j)] = c
        self._dmat = dmat

    def _label_parity(self, i):
        return self.base.parity(self.base.labels[i])

    def parity(self, label):
        if label == "id":
            return 0
        i, j = label
        return (self._label_parity(i) + self._label_parity(j)) % 2

    def weight(self, label):
        if label == "id":
            return 0
        i, j = label
        return self.base.weight(self.base.labels[i]) - self.base.weight(self.base.labels[j])

    def to_matrix(self, label):
        if label == "id":
            return {(i, i): Fraction(1) for i in range(self.dim)}
        return {label: Fraction(1)}

    def from_matrix(self, mat):
        """Expand a matrix {(i,j): c} in the id-containing basis."""
        out = {}
        corner = mat.get((0, 0), Fraction(0))
        if corner:
            out["id"] = corner
        for (i, j), c in mat.items():
            if (i, j) == (0, 0):
                continue
            val = c - corner if i == j else c
            if val:
                out[(i, j)] = out.get((i, j), Fraction(0)) + val
        return {k: v for k, v in out.items() if v}

    @staticmethod
    def _matmul(m1, m2):
        out = {}
        cols = {}
        for (k, j), v in m2.items():
            cols.setdefault(k, []).append((j, v))
        for (i, k), w in m1.items():
            for j, v in cols.get(k, ()):
                key = (i, j)
                acc = out.get(key, Fraction(0)) + w * v
                if acc:
                    out[key] = acc
                else:
                    out.pop(key, None)
        return out

    def mul(self, l1, l2):
        return self.from_matrix(self._matmul(self.to_matrix(l1), self.to_matrix(l2)))

    def diff(self, label):
        mat = self.to_matrix(label)
        sign = -1 if self.parity(label) else 1
        left = self._matmul(self._dmat, mat)
        right = self._matmul(mat, self._dmat)
        total = dict(left)
        for key, v in right.items():
            acc = total.get(key, Fraction(0)) - sign * v
            if acc:
                total[key] = acc
            else:
                total.pop(key, None)
        return self.from_matrix(total)

    def rho(self, tensor_label):
        """Expansion of L_a R_b for a tensor-algebra label (a, b)."""
        a, b = tensor_label
        mat = {}
        pb = self.base.parity(b)
        for j, vj in enumerate(self.base.labels):
            sign = -1 if (pb and self.base.parity(vj)) else 1
            prod = el_mul(self.base, el_mul(self.base, {a: Fraction(1)},
                                            {vj: Fraction(1)}), {b: Fraction(1)})
            for lbl, c in prod.items():
                mat[(self.index[lbl], j)] = sign * c
        return self.from_matrix(mat)

    def describe(self, label):
        return "id" if label == "id" else "E[%d,%d]" % label

    def opposite(self):
        return OppositeAlgebra(self)


# ----------------------------------------------------------------------------
# the algebra zoo for randomized identity testing


def exterior_algebra(g: int) -> TableAlgebra:
    """Exterior algebra on g odd generators, zero differential."""
    labels = list(range(1 << g))

    def _mul(a, b):
        if a & b:
            return {}
        sign = 1
        for i in range(g):
            if (b >> i) & 1:
                above = bin(a >> (i + 1)).count("1")
                sign *= (-1) ** above
        return {a | b: Fraction(sign)}

    centrals = [("1", {0: Fraction(1)})]
    if g >= 2:
        centrals.append(("e1e2", {3: Fraction(1)}))
        centrals.append(("1+e1e2", {0: Fraction(1), 3: Fraction(1)}))
    return TableAlgebra(
        "Ext%d" % g, labels,
        {l: bin(l).count("1") % 2 for l in labels},
        {l: 0 for l in labels}, 0,
        {(a, b): _mul(a, b) for a in labels for b in labels},
        centrals=centrals)


def clifford_jet_algebra(order: int = 3) -> TableAlgebra:
    """Truncated polynomials with one odd generator squaring to x^2, d = 0."""
    labels = [(a, b) for a in range(order) for b in range(2)]

    def _mul(l1, l2):
        a1, b1 = l1
        a2, b2 = l2
        a = a1 + a2 + (2 if b1 and b2 else 0)
        b = (b1 + b2) % 2
        if a >= order:
            return {}
        return {(a, b): Fraction(1)}

    centrals = [("1", {(0, 0): Fraction(1)}), ("x", {(1, 0): Fraction(1)})]
    return TableAlgebra(
        "CliffJet%d" % order, labels,
        {l: l[1] for l in labels},
        {l: l[0] + l[1] for l in labels}, (0, 0),
        {(a, b): _mul(a, b) for a in labels for b in labels},
        centrals=centrals,
        label_names={l: "x^%d%s" % (l[0], "*s" if l[1] else "") for l in labels})


def end_p_with_differential(n: int, coeffs) -> TableAlgebra:
    """End P_n with d the super-commutator with D = sum lam_i t_i + mu_i dt_i."""
    base = build_end_p(n)
    D = {}
    for i, (lam, mu) in enumerate(coeffs):
        if lam:
            D[end_label([1 if j == i else 0 for j in range(n)])] = Fraction(lam)
        if mu:
            D[end_label([2 if j == i else 0 for j in range(n)])] = Fraction(mu)
    D = el(D)
    dsq = el_mul(base, D, D)
    if set(dsq) - {0}:
        raise AlgebraAxiomError("D^2 not central")
    diff_table = {}
    for lbl in base.labels:
        e = {lbl: Fraction(1)}
        sign = -1 if base.parity(lbl) else 1
        diff_table[lbl] = el_add(el_mul(base, D, e),
                                 el_scale(el_mul(base, e, D), -sign))
    return TableAlgebra(
        "EndP%d[D]" % n, base.labels, base._parity, base._weight, base.unit,
        base._mul, diff_table, 0,
        centrals=[("1", {0: Fraction(1)})],
        label_names=base.label_names)


def _example_mf(which: str) -> MFAlgebra:
    if which == "x2":
        ws = WeightSystem((1,), 2)
        return MFAlgebra({(2,): Fraction(1)}, ws)
    if which == "x3":
        ws = WeightSystem((2,), 6)
        return MFAlgebra({(3,): Fraction(1)}, ws)
    if which == "x2+y2":
        ws = WeightSystem((1, 1), 2)
        return MFAlgebra({(2, 0): Fraction(1), (0, 2): Fraction(1)}, ws)
    raise ValueError(which)


def random_test_dga(seed: int, kind: str | None = None, validate: bool = True):
    """A dg algebra from the test zoo, with verified axioms and centrals.

    Kinds: 'exterior', 'endp', 'truncation', 'tensor'.
    """
    rng = random.Random(seed)
    if kind is None:
        kind = rng.choice(["exterior", "endp", "truncation", "tensor"])
    if kind == "exterior":
        A = exterior_algebra(rng.choice([1, 2, 3]))
    elif kind == "endp":
        n = rng.choice([1, 2])
        coeffs = [(rng.randint(-2, 2), rng.randint(-2, 2)) for _ in range(n)]
        A = end_p_with_differential(n, coeffs)
    elif kind == "truncation":
        mf = _example_mf(rng.choice(["x2", "x3", "x2+y2"]))
        A = mf.truncate(rng.choice([2, 3]) if mf.n == 1 else 2)
    elif kind == "tensor":
        A = TensorAlgebra(exterior_algebra(1),
                          _example_mf("x2").truncate(2))
    else:
        raise ValueError("unknown zoo kind %r" % kind)
    if validate and isinstance(A, TableAlgebra):
        A.validate()
    elif validate and isinstance(A, TensorAlgebra):
        TableAlgebra(
            A.name, A.labels,
            {l: A.parity(l) for l in A.labels},
            {l: A.weight(l) for l in A.labels},
            A.unit,
            {(a, b): A.mul(a, b) for a in A.labels for b in A.labels},
            {l: A.diff(l) for l in A.labels},
            A.d_weight, A.centrals).validate()
    return A
