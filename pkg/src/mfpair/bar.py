"""The normalized cyclic complex of a dg algebra and its chain operators.

A tensor a0[a1|...|al] is a pair (a0, slots) of basis labels; slot entries are
never the unit in a normalized chain.  A chain maps tensors to exact
coefficients (Laurent in u, polynomial in z).

Operator formulas are evaluated "raw": while a single named operator runs,
rotations may carry the unit through bar slots and products keep unit
components, because slot-wise differentials and multiplications are
conjugates of the length-zero ones by powers of the cyclic rotation and the
conjugation only gives the right operator when nothing is discarded midway.
The output of each named operator is then projected back to the normalized
complex by dropping tensors with a unit in a bar slot.
"""
from __future__ import annotations

import random
from contextlib import contextmanager
from fractions import Fraction

from .uz import UZ

_CORRUPTIONS = set()


@contextmanager
def corrupted(which: str):
    """Deliberately flip a sign convention; used to mutation-test the harness."""
    _CORRUPTIONS.add(which)
    try:
        yield
    finally:
        _CORRUPTIONS.discard(which)


# ----------------------------------------------------------------------------
# tensors and chains


def tensor(a0, slots=()) -> tuple:
    return (a0, tuple(slots))


def tensor_parity(A, t) -> int:
    a0, slots = t
    par = A.parity(a0) + len(slots)
    for s in slots:
        par += A.parity(s)
    return par % 2


def tensor_weight(A, t) -> int:
    a0, slots = t
    return A.weight(a0) + sum(A.weight(s) for s in slots)


def chain(pairs=None) -> dict:
    """Build a chain from {tensor: coefficient}; coefficients become UZ."""
    out = {}
    for t, c in (pairs or {}).items():
        if not isinstance(c, UZ):
            c = UZ.rational(c)
        if c:
            out[t] = out.get(t, UZ()) + c
            if not out[t]:
                del out[t]
    return out


def from_element(A, element) -> dict:
    """Length-zero chain from an algebra element {label: Fraction}."""
    return chain({tensor(lbl): c for lbl, c in element.items()})


def chain_add(*chains) -> dict:
    out = {}
    for ch in chains:
        for t, c in ch.items():
            acc = out.get(t, UZ()) + c
            if acc:
                out[t] = acc
            else:
                out.pop(t, None)
    return out


def chain_scale(ch, coeff) -> dict:
    if not isinstance(coeff, UZ):
        coeff = UZ.rational(coeff)
    if not coeff:
        return {}
    out = {}
    for t, c in ch.items():
        acc = c * coeff
        if acc:
            out[t] = acc
    return out


def chain_sub(ch1, ch2) -> dict:
    return chain_add(ch1, chain_scale(ch2, -1))


def chain_eq(ch1, ch2) -> bool:
    return chain_sub(ch1, ch2) == {}


def chain_map_coeff(ch, fn) -> dict:
    out = {}
    for t, c in ch.items():
        acc = fn(c)
        if acc:
            out[t] = acc
    return out


def du_chain(ch):
    return chain_map_coeff(ch, lambda c: c.du())


def dz_chain(ch, index):
    return chain_map_coeff(ch, lambda c: c.dz(index))


def star_chain(ch):
    """The involution substituting u -> -u in every coefficient."""
    return chain_map_coeff(ch, lambda c: c.star())


# ----------------------------------------------------------------------------
# raw per-tensor formulas (units may appear in slots, nothing is projected)


def _rotate_raw(A, t, sign):
    a0, slots = t
    if not slots:
        return t, sign
    exp = (A.parity(a0) + 1) * (len(slots) + sum(A.parity(s) for s in slots))
    if exp % 2:
        sign = -sign
    if "tau" in _CORRUPTIONS:
        sign = -sign
    return (slots[0], slots[1:] + (a0,)), sign


def _rotate_pow_raw(A, t, k):
    letters = len(t[1]) + 1
    k %= letters
    sign = Fraction(1)
    for _ in range(k):
        t, sign = _rotate_raw(A, t, sign)
    return t, sign


def _diff0_raw(A, t):
    a0, slots = t
    return [((lbl, slots), c) for lbl, c in A.diff(a0).items()]


def _mult0_raw(A, t):
    a0, slots = t
    if not slots:
        return []
    sign = Fraction(-1 if A.parity(a0) else 1)
    return [((lbl, slots[1:]), c * sign) for lbl, c in A.mul(a0, slots[0]).items()]


def _shift_raw(A, t):
    a0, slots = t
    return (A.unit, (a0,) + slots)


def _conjugated_raw(A, t, i, op0):
    """tau^{-i} . op0 . tau^i applied to one tensor, fully raw."""
    rotated, sign = _rotate_pow_raw(A, t, i)
    out = []
    for t2, c in op0(A, rotated):
        letters = len(t2[1]) + 1
        back, sign2 = _rotate_pow_raw(A, t2, (-i) % letters)
        out.append((back, sign * sign2 * c))
    return out


def _insert_raw(A, t, i, element):
    """Insert a central even element between entries i-1 and i (i = 0..l+1)."""
    a0, slots = t
    l = len(slots)
    if i < 0 or i > l + 1:
        return []
    if i == 0:
        return [((lbl, (a0,) + slots), c) for lbl, c in element.items()]
    exp = i + A.parity(a0) + sum(A.parity(s) for s in slots[:i - 1])
    sign = Fraction(-1 if exp % 2 else 1)
    out = []
    for lbl, c in element.items():
        out.append(((a0, slots[:i - 1] + (lbl,) + slots[i - 1:]), c * sign))
    return out


def _degenerate(A, t) -> bool:
    unit = A.unit
    return any(s == unit for s in t[1])


def _apply(A, ch, fn) -> dict:
    """Linear extension of a raw per-tensor formula, projected at the end."""
    out = {}
    for t, coeff in ch.items():
        for t2, c in fn(t):
            if c and not _degenerate(A, t2):
                acc = out.get(t2, UZ()) + coeff * c
                if acc:
                    out[t2] = acc
                else:
                    out.pop(t2, None)
    return out


# ----------------------------------------------------------------------------
# the named operators


def rotate(A, ch):
    """The signed cyclic rotation."""
    def fn(t):
        if not t[1]:
            raise ValueError("rotation undefined on length-0 tensors")
        return [_rotate_raw(A, t, Fraction(1))]
    return _apply(A, ch, fn)


def shift(A, ch):
    """Prepend a unit entry: a0[...] -> 1[a0|...]."""
    return _apply(A, ch, lambda t: [(_shift_raw(A, t), Fraction(1))])


def symmetrize(A, ch):
    """Sum of all rotation powers on each tensor."""
    def fn(t):
        out = []
        cur, sign = t, Fraction(1)
        for _ in range(len(t[1]) + 1):
            out.append((cur, sign))
            cur, sign = _rotate_raw(A, cur, sign)
        return out
    return _apply(A, ch, fn)


def weighted_symmetrize(A, ch):
    """Sum of i * (rotation^i) for i = 1..l+1."""
    def fn(t):
        out = []
        cur, sign = t, Fraction(1)
        for i in range(1, len(t[1]) + 2):
            cur, sign = _rotate_raw(A, cur, sign)
            out.append((cur, sign * i))
        return out
    return _apply(A, ch, fn)


def diff_slot(A, ch, i):
    """The differential acting in position i, by conjugation."""
    return _apply(A, ch, lambda t: _conjugated_raw(A, t, i, _diff0_raw))


def mult_slot(A, ch, i):
    """The product of adjacent entries at position i, by conjugation."""
    return _apply(A, ch, lambda t: _conjugated_raw(A, t, i, _mult0_raw))


def insert_slot(A, ch, element, i):
    """Signed insertion of a central closed even element at position i >= 1."""
    return _apply(A, ch, lambda t: _insert_raw(A, t, i, element))


def _hochschild_terms(A, t):
    out = []
    l = len(t[1])
    for i in range(l + 1):
        out.extend(_conjugated_raw(A, t, i, _diff0_raw))
        if l:
            out.extend(_conjugated_raw(A, t, i, _mult0_raw))
    return out


def hochschild(A, ch):
    """The Hochschild differential: all slot differentials plus all products."""
    return _apply(A, ch, lambda t: _hochschild_terms(A, t))


def hochschild_diff_part(A, ch):
    def fn(t):
        out = []
        for i in range(len(t[1]) + 1):
            out.extend(_conjugated_raw(A, t, i, _diff0_raw))
        return out
    return _apply(A, ch, fn)


def hochschild_mult_part(A, ch):
    def fn(t):
        out = []
        if t[1]:
            for i in range(len(t[1]) + 1):
                out.extend(_conjugated_raw(A, t, i, _mult0_raw))
        return out
    return _apply(A, ch, fn)


def _connes_terms(A, t):
    out = []
    cur, sign = t, Fraction(1)
    for _ in range(len(t[1]) + 1):
        out.append((_shift_raw(A, cur), sign))
        cur, sign = _rotate_raw(A, cur, sign)
    return out


def connes(A, ch):
    """The cyclic coboundary: shift composed with full symmetrization."""
    return _apply(A, ch, lambda t: _connes_terms(A, t))


def insertion_sum(A, ch, element):
    """Sum of the signed insertions over every interior position."""
    def fn(t):
        out = []
        for i in range(1, len(t[1]) + 2):
            out.extend(_insert_raw(A, t, i, element))
        return out
    return _apply(A, ch, fn)


def length_grading(A, ch):
    """Multiplication by the bar length."""
    out = {}
    for t, c in ch.items():
        l = len(t[1])
        if l:
            out[t] = c * l
    return out


# -- u-connection coefficient operators --------------------------------------


def e_diff(A, ch):
    """-mult0 . diff1 (length-lowering connection coefficient)."""
    def fn(t):
        out = []
        for t1, c1 in _conjugated_raw(A, t, 1, _diff0_raw):
            for t2, c2 in _mult0_raw(A, t1):
                out.append((t2, -c1 * c2))
        return out
    return _apply(A, ch, fn)


def big_e_diff(A, ch):
    """-sum_{i=1..l} sum_{j=i+1..l+1} shift . rotate^j . diff_i."""
    def fn(t):
        out = []
        l = len(t[1])
        for i in range(1, l + 1):
            for t1, c1 in _conjugated_raw(A, t, i, _diff0_raw):
                cur, sign = _rotate_pow_raw(A, t1, i + 1)
                for j in range(i + 1, l + 2):
                    out.append((_shift_raw(A, cur), -sign * c1))
                    if j < l + 1:
                        cur, sign = _rotate_raw(A, cur, sign)
        return out
    return _apply(A, ch, fn)


def e_diff_tilde(A, ch):
    """mult_l . diff_l."""
    def fn(t):
        l = len(t[1])
        out = []
        for t1, c1 in _conjugated_raw(A, t, l, _diff0_raw):
            for t2, c2 in _conjugated_raw(A, t1, l, _mult0_raw):
                out.append((t2, c1 * c2))
        return out
    return _apply(A, ch, fn)


def big_e_diff_tilde(A, ch):
    """sum_{i=1..l} sum_{j=1..i} shift . rotate^j . diff_i."""
    def fn(t):
        out = []
        l = len(t[1])
        for i in range(1, l + 1):
            for t1, c1 in _conjugated_raw(A, t, i, _diff0_raw):
                cur, sign = _rotate_pow_raw(A, t1, 1)
                for j in range(1, i + 1):
                    out.append((_shift_raw(A, cur), sign * c1))
                    if j < i:
                        cur, sign = _rotate_raw(A, cur, sign)
        return out
    return _apply(A, ch, fn)


def e_central(A, ch, element):
    """-mult0 . insert1: right multiplication of a0 by the central element."""
    def fn(t):
        out = []
        for t1, c1 in _insert_raw(A, t, 1, element):
            for t2, c2 in _mult0_raw(A, t1):
                out.append((t2, -c1 * c2))
        return out
    return _apply(A, ch, fn)


def big_e_central(A, ch, element):
    """-sum_{i=1..l+1} sum_{j=i+1..l+2} shift . rotate^j . insert_i."""
    def fn(t):
        out = []
        l = len(t[1])
        for i in range(1, l + 2):
            for t1, c1 in _insert_raw(A, t, i, element):
                cur, sign = _rotate_pow_raw(A, t1, i + 1)
                for j in range(i + 1, l + 3):
                    out.append((_shift_raw(A, cur), -sign * c1))
                    if j < l + 2:
                        cur, sign = _rotate_raw(A, cur, sign)
        return out
    return _apply(A, ch, fn)


def big_e_central_tilde(A, ch, element):
    """big_e_central plus connes . insertion_sum."""
    return chain_add(big_e_central(A, ch, element),
                     connes(A, insertion_sum(A, ch, element)))


# -- homotopies ---------------------------------------------------------------


def homotopy_pair(A, ch, c1, c2):
    """Odd homotopy between the two central connection coefficients."""
    def fn(t):
        out = []
        l = len(t[1])
        for i in range(1, l + 2):
            for j in range(i + 1, l + 3):
                terms = []
                for t1, cc1 in _insert_raw(A, t, i, c2):
                    terms.extend((t2, cc1 * cc2)
                                 for t2, cc2 in _insert_raw(A, t1, j, c1))
                for t1, cc1 in _insert_raw(A, t, i, c1):
                    terms.extend((t2, -cc1 * cc2)
                                 for t2, cc2 in _insert_raw(A, t1, j, c2))
                for t2, c in terms:
                    cur, sign = _rotate_pow_raw(A, t2, j + 1)
                    for m in range(j + 1, l + 4):
                        out.append((_shift_raw(A, cur), sign * c))
                        if m < l + 3:
                            cur, sign = _rotate_raw(A, cur, sign)
        return out
    return _apply(A, ch, fn)


def homotopy_mixed(A, ch, element):
    """Odd homotopy pairing the differential with a central insertion."""
    def fn(t):
        out = []
        l = len(t[1])
        for i in range(1, l + 1):
            for j in range(i + 1, l + 2):
                terms = []
                for t1, cc1 in _insert_raw(A, t, i, element):
                    terms.extend((t2, cc1 * cc2)
                                 for t2, cc2 in _conjugated_raw(A, t1, j, _diff0_raw))
                for t1, cc1 in _conjugated_raw(A, t, i, _diff0_raw):
                    terms.extend((t2, -cc1 * cc2)
                                 for t2, cc2 in _insert_raw(A, t1, j, element))
                for t2, c in terms:
                    cur, sign = _rotate_pow_raw(A, t2, j + 1)
                    for m in range(j + 1, l + 3):
                        out.append((_shift_raw(A, cur), sign * c))
                        if m < l + 2:
                            cur, sign = _rotate_raw(A, cur, sign)
        return out
    return _apply(A, ch, fn)


def homotopy_reversal(A, ch):
    """diff0 . (1 - symmetrize)."""
    def fn(t):
        out = list(_diff0_raw(A, t))
        cur, sign = t, Fraction(1)
        for _ in range(len(t[1]) + 1):
            for t2, c in _diff0_raw(A, cur):
                out.append((t2, -sign * c))
            cur, sign = _rotate_raw(A, cur, sign)
        return out
    return _apply(A, ch, fn)


# -- the reversal morphism to the opposite algebra ----------------------------


def reversal(A, ch):
    """Reverse the bar entries with the shifted-parity Koszul sign."""
    out = {}
    for (a0, slots), coeff in ch.items():
        l = len(slots)
        exp = l
        pars = [A.parity(s) + 1 for s in slots]
        for i in range(l):
            for j in range(i + 1, l):
                exp += pars[i] * pars[j]
        t2 = (a0, tuple(reversed(slots)))
        sign = -1 if exp % 2 else 1
        acc = out.get(t2, UZ()) + coeff * sign
        if acc:
            out[t2] = acc
        else:
            out.pop(t2, None)
    return out


# -- shuffles ------------------------------------------------------------------


def signed_shuffles(entries1, entries2):
    """All shuffles of two tagged sequences [(entry, parity), ...].

    Yields (merged entry tuple, sign) with the shifted-parity Koszul sign of
    each transposition; the relative order within each sequence is preserved.
    """
    l, m = len(entries1), len(entries2)
    results = []

    def rec(i, j, acc, sign):
        if i == l and j == m:
            results.append((tuple(e for e, _ in acc), sign))
            return
        if i < l:
            rec(i + 1, j, acc + [entries1[i]], sign)
        if j < m:
            ent, par = entries2[j]
            cross = sum((p + 1) for _, p in entries1[i:])
            newsign = sign * (-1 if ((par + 1) * cross) % 2 else 1)
            rec(i, j + 1, acc + [(ent, par)], newsign)

    rec(0, 0, [], Fraction(1))
    return results


def _koszul_reorder_sign(parities, order):
    """Koszul sign (shifted parities) of reordering 0..k-1 into `order`."""
    exp = 0
    for pos_j in range(len(order)):
        for pos_i in range(pos_j):
            if order[pos_i] > order[pos_j]:
                exp += (parities[order[pos_i]] + 1) * (parities[order[pos_j]] + 1)
    return -1 if exp % 2 else 1


def shuffle_merge_terms(AL, AR, tL, tR):
    """Raw terms of the Kunneth shuffle on a pair of tensors.

    Yields (a0_pair, merged, sign) where merged is a tuple of ('L', label) /
    ('R', label) tags in shuffle order.
    """
    (a0, slots), (b0, slotsR) = tL, tR
    pre = AR.parity(b0) * (len(slots) + sum(AL.parity(s) for s in slots))
    base = Fraction(-1 if pre % 2 else 1)
    left = [(("L", s), AL.parity(s)) for s in slots]
    right = [(("R", s), AR.parity(s)) for s in slotsR]
    for merged, sign in signed_shuffles(left, right):
        yield (a0, b0), merged, base * sign


def cyclic_shuffle_merge_terms(AL, AR, tL, tR):
    """Raw terms of the cyclic shuffle; all entries land in bar slots.

    Rotates each row cyclically, then shuffles so the original leading left
    entry stays to the left of the original leading right entry.
    """
    (a0, slots), (b0, slotsR) = tL, tR
    row_l = [("L", x) for x in (a0,) + slots]
    row_r = [("R", y) for y in (b0,) + slotsR]
    pars = [AL.parity(x) for x in (a0,) + slots] + \
        [AR.parity(y) for y in (b0,) + slotsR]
    nl, nr = len(row_l), len(row_r)
    pre = (nl - 1) + sum(AL.parity(x) for x in (a0,) + slots)
    base = Fraction(-1 if pre % 2 else 1)
    out = []
    for r in range(nl):
        idx_l = list(range(r, nl)) + list(range(r))
        for rp in range(nr):
            idx_r = [nl + k for k in list(range(rp, nr)) + list(range(rp))]
            tagged_l = [(idx, pars[idx]) for idx in idx_l]
            tagged_r = [(idx, pars[idx]) for idx in idx_r]
            for merged_idx, _ in signed_shuffles(tagged_l, tagged_r):
                order = list(merged_idx)
                if order.index(0) > order.index(nl):
                    continue
                sign = _koszul_reorder_sign(pars, order)
                merged = tuple((row_l + row_r)[i] for i in order)
                out.append((merged, base * sign))
    return out


def shuffle(AL, AR, AT, chL, chR):
    """The Kunneth shuffle into the chain complex of the tensor algebra."""
    out = {}
    for tL, cL in chL.items():
        for tR, cR in chR.items():
            coeff = cL * cR
            for (a0, b0), merged, sign in shuffle_merge_terms(AL, AR, tL, tR):
                slots = tuple(
                    (lbl, AR.unit) if side == "L" else (AL.unit, lbl)
                    for side, lbl in merged)
                t = ((a0, b0), slots)
                if _degenerate(AT, t):
                    continue
                acc = out.get(t, UZ()) + coeff * sign
                if acc:
                    out[t] = acc
                else:
                    out.pop(t, None)
    return out


def cyclic_shuffle(AL, AR, AT, chL, chR):
    """The degree-raising cyclic shuffle into the tensor algebra's complex."""
    out = {}
    for tL, cL in chL.items():
        for tR, cR in chR.items():
            coeff = cL * cR
            for merged, sign in cyclic_shuffle_merge_terms(AL, AR, tL, tR):
                slots = tuple(
                    (lbl, AR.unit) if side == "L" else (AL.unit, lbl)
                    for side, lbl in merged)
                t = ((AL.unit, AR.unit), slots)
                if _degenerate(AT, t):
                    continue
                acc = out.get(t, UZ()) + coeff * sign
                if acc:
                    out[t] = acc
                else:
                    out.pop(t, None)
    return out


# -- total differential and connections ----------------------------------------


def total_differential(A, ch, centrals=(), with_u=True):
    """hochschild + sum z_j insertion_sum(c_j) + u * connes."""
    out = hochschild(A, ch)
    for j, c in enumerate(centrals):
        out = chain_add(out, chain_scale(insertion_sum(A, ch, c), UZ.z_var(j)))
    if with_u:
        out = chain_add(out, chain_scale(connes(A, ch), UZ.u_power(1)))
    return out


def u_connection(A, ch, centrals=()):
    """d/du + e/2u^2 + (E - length)/2u plus the central deformation terms."""
    half = Fraction(1, 2)
    out = du_chain(ch)
    out = chain_add(out, chain_scale(e_diff(A, ch), UZ.u_power(-2, half)))
    out = chain_add(out, chain_scale(
        chain_sub(big_e_diff(A, ch), length_grading(A, ch)),
        UZ.u_power(-1, half)))
    for j, c in enumerate(centrals):
        zj = UZ.z_var(j)
        out = chain_add(out, chain_scale(e_central(A, ch, c),
                                         zj * UZ.u_power(-2)))
        out = chain_add(out, chain_scale(big_e_central(A, ch, c),
                                         zj * UZ.u_power(-1)))
    return out


def z_connection(A, ch, index, centrals):
    """d/dz_i - e(c_i)/u - E(c_i)."""
    c = centrals[index]
    out = dz_chain(ch, index)
    out = chain_sub(out, chain_scale(e_central(A, ch, c), UZ.u_power(-1)))
    out = chain_sub(out, big_e_central(A, ch, c))
    return out


# ----------------------------------------------------------------------------
# sampling helpers


def random_tensor(A, rng: random.Random, max_len=4, labels=None):
    labels = labels if labels is not None else list(A.labels)
    nonunit = [l for l in labels if l != A.unit]
    a0 = rng.choice(labels)
    l = rng.randint(0, max_len)
    slots = tuple(rng.choice(nonunit) for _ in range(l)) if nonunit else ()
    return tensor(a0, slots)


def random_chain(A, rng: random.Random, terms=1, max_len=4, u_powers=(0,),
                 labels=None):
    out = {}
    for _ in range(terms):
        t = random_tensor(A, rng, max_len, labels)
        coeff = UZ.u_power(rng.choice(u_powers), rng.randint(1, 3))
        acc = out.get(t, UZ()) + coeff
        if acc:
            out[t] = acc
    return out
