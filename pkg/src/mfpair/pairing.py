"""The supertrace functional on endomorphism chains and the canonical pairing.

Endomorphisms of the algebra are never materialized: chain entries are words
of lazy letters (left/right multiplications, the differential, homology
projectors) applied to vectors on demand.  The trace of a word chain is
computed through the retract data: each bar entry is sandwiched between
copies of the contracting homotopy and the whole composite is traced over the
finite homology basis.  The side conditions make the functional vanish on
words containing the identity, which is what lets everything stay lazy.
"""
from __future__ import annotations

from fractions import Fraction

from . import bar
from .dga import el_mul
from .retract import RetractData
from .uz import UZ


# ----------------------------------------------------------------------------
# operator words


def letter_l(label):
    return ("L", label)


def letter_r(label):
    return ("R", label)


LETTER_D = ("d",)


def letter_proj(index: int):
    return ("proj", index)


class WordAlgebra:
    """Free words of operator letters acting on a base algebra."""

    is_finite = False
    unit = ()

    def __init__(self, base):
        self.base = base
        self.name = "Words(%s)" % base.name
        self.d_weight = base.d_weight
        self.centrals = []

    def letter_parity(self, letter):
        kind = letter[0]
        if kind in ("L", "R"):
            return self.base.parity(letter[1])
        if kind == "d":
            return 1
        return 0

    def letter_weight(self, letter):
        kind = letter[0]
        if kind in ("L", "R"):
            return self.base.weight(letter[1])
        if kind == "d":
            return self.base.d_weight
        return 0

    def parity(self, word):
        return sum(self.letter_parity(x) for x in word) % 2

    def weight(self, word):
        return sum(self.letter_weight(x) for x in word)

    def mul(self, w1, w2):
        return {tuple(w1) + tuple(w2): Fraction(1)}

    def diff(self, word):
        sign = -1 if self.parity(word) else 1
        out = {(("d",),) + tuple(word): Fraction(1)}
        key = tuple(word) + (("d",),)
        out[key] = out.get(key, Fraction(0)) - sign
        return {k: v for k, v in out.items() if v}

    def describe(self, word):
        if not word:
            return "id"
        bits = []
        for letter in word:
            if letter[0] in ("L", "R"):
                bits.append("%s[%s]" % (letter[0], self.base.describe(letter[1])))
            else:
                bits.append(letter[0])
        return "*".join(bits)

    def opposite(self):
        raise NotImplementedError("word algebras are only used covariantly")


def apply_letter(rd: RetractData, letter, vec: dict, extra_proj=None) -> dict:
    A = rd.A
    kind = letter[0]
    if kind == "L":
        return el_mul(A, {letter[1]: Fraction(1)}, vec)
    if kind == "R":
        pb = A.parity(letter[1])
        out = {}
        for lbl, c in vec.items():
            sign = -1 if (pb and A.parity(lbl)) else 1
            for lbl2, v in A.mul(lbl, letter[1]).items():
                acc = out.get(lbl2, Fraction(0)) + sign * c * v
                if acc:
                    out[lbl2] = acc
                else:
                    out.pop(lbl2, None)
        return out
    if kind == "d":
        return rd.apply_d(vec)
    if kind == "proj":
        coords = rd.apply_p(vec)
        k = letter[1]
        if extra_proj is not None:
            k = extra_proj(k)
        coeff = coords.get(k, Fraction(0))
        return rd.apply_i({k: coeff}) if coeff else {}
    raise ValueError("unknown letter %r" % (letter,))


def apply_word(rd: RetractData, word, vec: dict) -> dict:
    for letter in reversed(word):
        if not vec:
            return {}
        vec = apply_letter(rd, letter, vec)
    return vec


def word_chain_supertrace(rd: RetractData, entries) -> Fraction:
    """Supertrace of p . T0 . h . T1 . h ... h . Tl . i over the homology basis."""
    WA = WordAlgebra(rd.A)
    total_weight = sum(WA.weight(w) for w in entries) - (len(entries) - 1) * rd.step
    if total_weight != 0:
        return Fraction(0)
    parity = (sum(WA.parity(w) for w in entries) + len(entries) - 1) % 2
    if parity:
        return Fraction(0)  # odd operators have vanishing supertrace
    total = Fraction(0)
    for g in range(rd.ha_dim):
        vec = rd.include_index(g)
        for pos in range(len(entries) - 1, -1, -1):
            vec = apply_word(rd, entries[pos], vec)
            if not vec:
                break
            if pos:
                vec = rd.apply_h(vec)
                if not vec:
                    break
        if not vec:
            continue
        diag = rd.apply_p(vec).get(g, Fraction(0))
        if diag:
            total += -diag if rd.ha_parity(g) else diag
    return total


def upsilon(rd: RetractData, word_chain) -> UZ:
    """The trace functional: supertrace of the retract word after symmetrizing."""
    WA = WordAlgebra(rd.A)
    total = UZ()
    for t, coeff in word_chain.items():
        words = (t[0],) + t[1]
        if sum(WA.weight(w) for w in words) != len(t[1]) * rd.step:
            continue  # rotation-invariant weight obstruction: trace is zero
        cur, sign = t, Fraction(1)
        for _ in range(len(t[1]) + 1):
            val = word_chain_supertrace(rd, (cur[0],) + cur[1])
            if val:
                total = total + coeff * (sign * val)
            cur, sign = bar._rotate_raw(WA, cur, sign)
    return total


# ----------------------------------------------------------------------------
# the canonical pairing


def _merged_word_tensor(merged):
    slots = tuple(((side, lbl),) for side, lbl in merged)
    return slots


def pair_tensors(rd: RetractData, A, Aop, tx, ty) -> Fraction:
    """Trace of the shuffle of two tensors through left/right multiplications.

    The trace vanishes unless the weights minus bar length times the
    differential's weight cancel between the two tensors, which prunes most
    pairs before any shuffling.
    """
    step = A.d_weight
    vx = bar.tensor_weight(A, tx) - len(tx[1]) * step
    vy = bar.tensor_weight(A, ty) - len(ty[1]) * step
    if vx + vy != 0:
        return Fraction(0)
    total = Fraction(0)
    for (a0, b0), merged, sign in bar.shuffle_merge_terms(A, Aop, tx, ty):
        head = (("L", a0), ("R", b0))
        t = (head, _merged_word_tensor(merged))
        val = upsilon(rd, {t: UZ.rational(1)})
        if val:
            total += sign * val.as_fraction()
    return total


def canonical_pairing(alpha, beta, A, rd: RetractData) -> UZ:
    """The chain-level pairing: trace . multiplication . shuffle . reversal.

    The second argument enters through the u -> -u substitution followed by
    bar reversal into the opposite algebra, so the result is sesquilinear
    over Laurent polynomials in u and linear over the z-variables.
    """
    Aop = A.opposite()
    twisted = bar.reversal(A, bar.star_chain(beta))
    total = UZ()
    cache = getattr(rd, "_pair_cache", None)
    if cache is None:
        cache = rd._pair_cache = {}
    for tx, cx in alpha.items():
        for ty, cy in twisted.items():
            key = (tx, ty)
            if key not in cache:
                cache[key] = pair_tensors(rd, A, Aop, tx, ty)
            val = cache[key]
            if val:
                total = total + cx * cy * val
    return total


def eta_hochschild(alpha, beta, A, rd: RetractData) -> Fraction:
    """The u-degree-zero pairing on u-free Hochschild cycles."""
    return canonical_pairing(alpha, beta, A, rd).as_fraction()


def pairing_z_extension(alpha, beta, A, rd: RetractData) -> UZ:
    """Coefficient-wise extension to chains with z-polynomial coefficients.

    canonical_pairing is already linear over the coefficient ring, so this is
    the same computation, kept as an explicit surface for deformed chains.
    """
    return canonical_pairing(alpha, beta, A, rd)


# ----------------------------------------------------------------------------
# the idempotent cocycle generating the trace normalization


def projector_algebra():
    """Two-dimensional algebra spanned by 1 and an even idempotent, d = 0."""
    from .dga import TableAlgebra
    labels = [0, 1]
    mul = {
        (0, 0): {0: Fraction(1)}, (0, 1): {1: Fraction(1)},
        (1, 0): {1: Fraction(1)}, (1, 1): {1: Fraction(1)},
    }
    return TableAlgebra("ProjAlg", labels, {0: 0, 1: 0}, {0: 0, 1: 0}, 0, mul,
                        centrals=[("1", {0: Fraction(1)})],
                        label_names={0: "1", 1: "pi"})


def _factorial(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def chern_character(rd: RetractData, basis_index: int, u_order: int):
    """The idempotent cocycle for the projector onto one homology basis vector.

    Returns (finite_chain, word_chain): the same chain over the two-element
    projector algebra (for the cocycle check) and over operator words (for
    the trace evaluation).
    """
    PA = projector_algebra()
    pi_word = (("proj", basis_index),)
    finite = {}
    words = {}

    def put(upow, coeff, head_pi, count):
        c = UZ.u_power(upow, coeff)
        tf = ((1 if head_pi else 0), (1,) * count)
        tw = ((pi_word if head_pi else ()), (pi_word,) * count)
        finite[tf] = finite.get(tf, UZ()) + c
        words[tw] = words.get(tw, UZ()) + c

    put(0, Fraction(1), True, 0)
    for l in range(1, u_order + 1):
        coeff = Fraction((-1) ** l * _factorial(2 * l), _factorial(l))
        put(l, coeff, True, 2 * l)
        put(l, -coeff / 2, False, 2 * l)
    return PA, finite, words


def chern_trace(rd: RetractData, basis_index: int, u_order: int = 1) -> Fraction:
    """Value of the trace functional on the idempotent cocycle; always +1 or -1."""
    _, _, words = chern_character(rd, basis_index, u_order)
    val = upsilon(rd, words)
    out = Fraction(0)
    for (p, z), c in val.terms.items():
        if z == ():
            out += c if p == 0 else 0
    # higher u-terms vanish through the side conditions; report the constant
    assert val == UZ.rational(out), "unexpected u-dependence in chern trace"
    return out
