"""Randomized exact identity suite for the chain operators.

Every identity is evaluated on random basis tensors with random bar lengths
and u-powers; both sides are expanded exactly and compared coefficient by
coefficient.  A failure carries the witness tensor, so a broken sign is
immediately reproducible.  Anchors are stable machine-readable identifiers
for report consumers.
"""
from __future__ import annotations

import random
from fractions import Fraction

from . import bar, dga
from .uz import UZ


def _mixed(A, ch, cents):
    return bar.total_differential(A, ch, cents)


def _conn_diff(A, ch):
    return bar.chain_add(bar.e_diff(A, ch),
                         bar.chain_scale(bar.big_e_diff(A, ch), UZ.u_power(1)))


def _conn_central(A, ch, c):
    return bar.chain_add(bar.e_central(A, ch, c),
                         bar.chain_scale(bar.big_e_central(A, ch, c), UZ.u_power(1)))


def _plain(A, ch):
    return bar.chain_add(bar.hochschild(A, ch),
                         bar.chain_scale(bar.connes(A, ch), UZ.u_power(1)))


def _check(lhs, rhs):
    return bar.chain_eq(lhs, rhs)


# each runner: (A, rng, cents) -> witness string or None


def _sample(A, rng, max_len=5):
    t = bar.random_tensor(A, rng, max_len)
    return t, bar.chain({t: UZ.u_power(rng.choice([-1, 0, 1]))})


def run_hochschild_sq(A, rng, cents):
    t, ch = _sample(A, rng)
    return None if _check(bar.hochschild(A, bar.hochschild(A, ch)), {}) else t


def run_connes_sq(A, rng, cents):
    t, ch = _sample(A, rng)
    return None if _check(bar.connes(A, bar.connes(A, ch)), {}) else t


def run_anticommute(A, rng, cents):
    t, ch = _sample(A, rng)
    lhs = bar.chain_add(bar.hochschild(A, bar.connes(A, ch)),
                        bar.connes(A, bar.hochschild(A, ch)))
    return None if _check(lhs, {}) else t


def run_total_sq(A, rng, cents):
    t, ch = _sample(A, rng, 4)
    two = cents[:2]
    lhs = _mixed(A, _mixed(A, ch, two), two)
    return None if _check(lhs, {}) else t


def run_conn_comm_diff(A, rng, cents):
    t, ch = _sample(A, rng, 4)
    lhs = bar.chain_sub(_conn_diff(A, _plain(A, ch)), _plain(A, _conn_diff(A, ch)))
    rhs = bar.chain_scale(bar.hochschild_diff_part(A, ch), UZ.u_power(1))
    return None if _check(lhs, rhs) else t


def run_conn_comm_central(A, rng, cents):
    t, ch = _sample(A, rng, 4)
    c = cents[0]
    lhs = bar.chain_sub(_conn_central(A, _plain(A, ch), c),
                        _plain(A, _conn_central(A, ch, c)))
    rhs = bar.chain_scale(bar.insertion_sum(A, ch, c), UZ.u_power(1))
    return None if _check(lhs, rhs) else t


def run_diff_conn_vs_insertion(A, rng, cents):
    t, ch = _sample(A, rng, 4)
    c = cents[0]
    bc = lambda x: bar.insertion_sum(A, x, c)
    lhs = bar.chain_sub(_conn_diff(A, bc(ch)), bc(_conn_diff(A, ch)))
    return None if _check(lhs, {}) else t


def run_central_conn_vs_insertion(A, rng, cents):
    t, ch = _sample(A, rng, 4)
    c1, c2 = cents[0], cents[-1]
    bc = lambda x: bar.insertion_sum(A, x, c2)
    lhs = bar.chain_sub(_conn_central(A, bc(ch), c1), bc(_conn_central(A, ch, c1)))
    return None if _check(lhs, {}) else t


def run_u_connection(A, rng, cents):
    t, ch = _sample(A, rng, 4)
    cen = cents[:1]
    D = lambda x: _mixed(A, x, cen)
    lhs = bar.chain_sub(bar.u_connection(A, D(ch), cen), D(bar.u_connection(A, ch, cen)))
    rhs = bar.chain_scale(D(ch), UZ.u_power(-1, Fraction(1, 2)))
    return None if _check(lhs, rhs) else t


def run_z_connection(A, rng, cents):
    t, ch = _sample(A, rng, 4)
    cen = cents[:1]
    D = lambda x: _mixed(A, x, cen)
    lhs = bar.chain_sub(bar.z_connection(A, D(ch), 0, cen),
                        D(bar.z_connection(A, ch, 0, cen)))
    return None if _check(lhs, {}) else t


def run_homotopy_pair(A, rng, cents):
    t, ch = _sample(A, rng, 4)
    c1, c2 = cents[0], cents[-1]
    D = lambda x: _mixed(A, x, (c1, c2))
    ec = lambda x, c: bar.e_central(A, x, c)
    Ec = lambda x, c: bar.big_e_central(A, x, c)
    lhs = bar.chain_add(
        bar.chain_sub(ec(Ec(ch, c2), c1), Ec(ec(ch, c1), c2)),
        bar.chain_sub(Ec(ec(ch, c2), c1), ec(Ec(ch, c1), c2)),
        bar.insertion_sum(A, bar.insertion_sum(A, ch, c2), c1))
    rhs = bar.chain_add(D(bar.homotopy_pair(A, ch, c1, c2)),
                        bar.homotopy_pair(A, D(ch), c1, c2))
    return None if _check(lhs, rhs) else t


def run_homotopy_mixed(A, rng, cents):
    t, ch = _sample(A, rng, 4)
    c = cents[0]
    D = lambda x: _mixed(A, x, (c,))
    lhs = bar.chain_add(
        bar.chain_sub(bar.e_diff(A, bar.big_e_central(A, ch, c)),
                      bar.big_e_central(A, bar.e_diff(A, ch), c)),
        bar.chain_sub(bar.big_e_diff(A, bar.e_central(A, ch, c)),
                      bar.e_central(A, bar.big_e_diff(A, ch), c)),
        bar.hochschild_diff_part(A, bar.insertion_sum(A, ch, c)))
    rhs = bar.chain_add(D(bar.homotopy_mixed(A, ch, c)),
                        bar.homotopy_mixed(A, D(ch), c))
    return None if _check(lhs, rhs) else t


def run_homotopy_reversal(A, rng, cents):
    t, ch = _sample(A, rng, 4)
    cen = cents[:1]
    D = lambda x: _mixed(A, x, cen)
    lhs = bar.chain_add(
        bar.chain_sub(bar.e_diff(A, ch), bar.e_diff_tilde(A, ch)),
        bar.chain_scale(bar.chain_sub(bar.big_e_diff(A, ch),
                                      bar.big_e_diff_tilde(A, ch)), UZ.u_power(1)))
    rhs = bar.chain_add(D(bar.homotopy_reversal(A, ch)),
                        bar.homotopy_reversal(A, D(ch)))
    return None if _check(lhs, rhs) else t


def run_reversal_homotopy_insertion(A, rng, cents):
    t, ch = _sample(A, rng, 4)
    c = cents[0]
    lhs = bar.chain_add(
        bar.insertion_sum(A, bar.homotopy_reversal(A, ch), c),
        bar.homotopy_reversal(A, bar.insertion_sum(A, ch, c)))
    return None if _check(lhs, {}) else t


def run_reversal_relations(A, rng, cents):
    t, ch = _sample(A, rng, 4)
    Aop = A.opposite()
    ph = bar.reversal(A, ch)
    if not _check(bar.hochschild(Aop, ph), bar.reversal(A, bar.hochschild(A, ch))):
        return t
    if not _check(bar.connes(Aop, ph),
                  bar.chain_scale(bar.reversal(A, bar.connes(A, ch)), -1)):
        return t
    c = cents[0]
    if not _check(bar.insertion_sum(Aop, ph, c),
                  bar.chain_scale(bar.reversal(A, bar.insertion_sum(A, ch, c)), -1)):
        return t
    if not _check(bar.e_central(Aop, ph, c), bar.reversal(A, bar.e_central(A, ch, c))):
        return t
    if not _check(bar.big_e_central(Aop, ph, c),
                  bar.chain_scale(bar.reversal(A, bar.big_e_central_tilde(A, ch, c)), -1)):
        return t
    return None


def run_slot_rule_grid(A, rng, cents):
    """The case-by-case commutation rules for slot operators."""
    t, ch = _sample(A, rng, 3)
    c1, c2 = cents[0], cents[-1]
    l = len(t[1])
    for j in range(1, l + 2):
        cj = bar.insert_slot(A, ch, c1, j)
        for i in range(0, l + 3):
            lhs = bar.diff_slot(A, cj, i % (l + 2))
            if i == j:
                ok = _check(lhs, {})
            elif i > j:
                ok = _check(lhs, bar.chain_scale(
                    bar.insert_slot(A, bar.diff_slot(A, ch, i - 1), c1, j), -1))
            else:
                ok = _check(lhs, bar.chain_scale(
                    bar.insert_slot(A, bar.diff_slot(A, ch, i), c1, j), -1))
            if not ok:
                return (t, "diff-insert", i, j)
        for i in range(1, l + 3):
            lhs = bar.insert_slot(A, bar.insert_slot(A, ch, c2, j), c1, i)
            if i > j:
                rhs = bar.insert_slot(A, bar.insert_slot(A, ch, c1, i - 1), c2, j)
            else:
                rhs = bar.insert_slot(A, bar.insert_slot(A, ch, c1, i), c2, j + 1)
            if not _check(lhs, bar.chain_scale(rhs, -1)):
                return (t, "insert-insert", i, j)
    if l >= 1:
        for i in range(1, l + 1):
            lhs = bar.insert_slot(A, bar.mult_slot(A, ch, 0), c1, i)
            rhs = bar.mult_slot(A, bar.insert_slot(A, ch, c1, i + 1), 0)
            if not _check(lhs, bar.chain_scale(rhs, -1)):
                return (t, "insert-mult", i)
    for i in range(1, l + 2):
        lhs = bar.shift(A, bar.insert_slot(A, ch, c1, i))
        rhs = bar.insert_slot(A, bar.shift(A, ch), c1, i + 1)
        if not _check(lhs, bar.chain_scale(rhs, -1)):
            return (t, "shift-insert", i)
    for i in range(1, l + 2):
        lhs = bar.insert_slot(A, ch, c1, i)
        def conj(tt):
            out = []
            rot, sg = bar._rotate_pow_raw(A, tt, i)
            for t1, cc in bar._insert_raw(A, rot, 0, c1):
                letters = len(t1[1]) + 1
                back, sg2 = bar._rotate_pow_raw(A, t1, (-i) % letters)
                out.append((back, sg * sg2 * cc))
            return out
        rhs = bar._apply(A, ch, conj)
        if not _check(lhs, rhs):
            return (t, "insert-conjugation", i)
    return None


def run_kunneth_chain_map(A, rng, cents):
    B = dga.exterior_algebra(1)
    AT = dga.TensorAlgebra(A, B)
    tL = bar.random_tensor(A, rng, 2)
    tR = bar.random_tensor(B, rng, 2)
    chL, chR = bar.chain({tL: 1}), bar.chain({tR: 1})
    both = lambda x, y: bar.chain_add(
        bar.shuffle(A, B, AT, x, y),
        bar.chain_scale(bar.cyclic_shuffle(A, B, AT, x, y), UZ.u_power(1)))
    sgn = -1 if bar.tensor_parity(A, tL) else 1
    lhs = _plain(AT, both(chL, chR))
    rhs = bar.chain_add(both(_plain(A, chL), chR),
                        bar.chain_scale(both(chL, _plain(B, chR)), sgn))
    return None if _check(lhs, rhs) else (tL, tR)


def run_shuffle_insertion(A, rng, cents):
    B = dga.exterior_algebra(1)
    AT = dga.TensorAlgebra(A, B)
    tL = bar.random_tensor(A, rng, 2)
    tR = bar.random_tensor(B, rng, 2)
    chL, chR = bar.chain({tL: 1}), bar.chain({tR: 1})
    c = cents[0]
    cT = {(lbl, B.unit): v for lbl, v in c.items()}
    sh = lambda x, y: bar.shuffle(A, B, AT, x, y)
    Sh = lambda x, y: bar.cyclic_shuffle(A, B, AT, x, y)
    if not _check(sh(bar.insertion_sum(A, chL, c), chR),
                  bar.insertion_sum(AT, sh(chL, chR), cT)):
        return (tL, tR, "plain-left")
    if not _check(Sh(bar.insertion_sum(A, chL, c), chR),
                  bar.insertion_sum(AT, Sh(chL, chR), cT)):
        return (tL, tR, "cyclic-left")
    cB = {0: Fraction(1)}  # the unit central of the right factor
    cT2 = {(A.unit, lbl): v for lbl, v in cB.items()}
    if not _check(sh(chL, bar.insertion_sum(B, chR, cB)),
                  bar.insertion_sum(AT, sh(chL, chR), cT2)):
        return (tL, tR, "plain-right")
    if not _check(Sh(chL, bar.insertion_sum(B, chR, cB)),
                  bar.insertion_sum(AT, Sh(chL, chR), cT2)):
        return (tL, tR, "cyclic-right")
    return None


def run_inner_shuffle_split(A, rng, cents):
    """Decomposition of the inner shuffle around one distinguished entry.

    All left-row entries are odd, as the decomposition requires.
    """
    ext = dga.exterior_algebra(3)
    odd = [l for l in ext.labels if ext.parity(l) == 1]
    anyl = [l for l in ext.labels if l != 0]
    lx = [odd[rng.randrange(len(odd))] for _ in range(rng.randint(0, 3))]
    ly = [anyl[rng.randrange(len(anyl))] for _ in range(rng.randint(0, 3))]
    y = anyl[rng.randrange(len(anyl))]
    k = rng.randint(0, len(ly))
    tag = lambda side, seq: [((side, v), ext.parity(v)) for v in seq]

    full = {}
    for merged, sign in bar.signed_shuffles(
            tag("x", lx), tag("y", ly[:k]) + [(("y", y), ext.parity(y))] + tag("y", ly[k:])):
        full[merged] = full.get(merged, 0) + sign

    split = {}
    for r in range(len(lx) + 1):
        for m1, s1 in bar.signed_shuffles(tag("x", lx[:r]), tag("y", ly[:k])):
            for m2, s2 in bar.signed_shuffles(tag("x", lx[r:]), tag("y", ly[k:])):
                merged = m1 + (("y", y),) + m2
                split[merged] = split.get(merged, 0) + s1 * s2
    full = {k2: v for k2, v in full.items() if v}
    split = {k2: v for k2, v in split.items() if v}
    if full != split:
        return (lx, ly, y, k, "left")

    # mirrored version: the distinguished entry sits in the first row
    full = {}
    for merged, sign in bar.signed_shuffles(
            tag("y", ly[:k]) + [(("y", y), ext.parity(y))] + tag("y", ly[k:]), tag("x", lx)):
        full[merged] = full.get(merged, 0) + sign
    split = {}
    for r in range(len(lx) + 1):
        for m1, s1 in bar.signed_shuffles(tag("y", ly[:k]), tag("x", lx[:r])):
            for m2, s2 in bar.signed_shuffles(tag("y", ly[k:]), tag("x", lx[r:])):
                merged = m1 + (("y", y),) + m2
                split[merged] = split.get(merged, 0) + s1 * s2
    full = {k2: v for k2, v in full.items() if v}
    split = {k2: v for k2, v in split.items() if v}
    if full != split:
        return (lx, ly, y, k, "right")
    return None


IDENTITIES = [
    ("hochschild-squares-to-zero", run_hochschild_sq, False),
    ("connes-squares-to-zero", run_connes_sq, False),
    ("hochschild-connes-anticommute", run_anticommute, False),
    ("deformed-total-differential-squares-to-zero", run_total_sq, True),
    ("diff-connection-commutator", run_conn_comm_diff, False),
    ("central-connection-commutator", run_conn_comm_central, True),
    ("diff-connection-vs-insertion", run_diff_conn_vs_insertion, True),
    ("central-connection-vs-insertion", run_central_conn_vs_insertion, True),
    ("u-connection-axiom", run_u_connection, True),
    ("z-connection-descends", run_z_connection, True),
    ("central-pair-homotopy", run_homotopy_pair, True),
    ("diff-central-homotopy", run_homotopy_mixed, True),
    ("reversal-connection-homotopy", run_homotopy_reversal, True),
    ("reversal-homotopy-kills-insertion", run_reversal_homotopy_insertion, True),
    ("reversal-morphism-relations", run_reversal_relations, True),
    ("slot-operator-commutation-grid", run_slot_rule_grid, True),
    ("kunneth-shuffle-chain-map", run_kunneth_chain_map, False),
    ("shuffles-commute-with-insertions", run_shuffle_insertion, True),
    ("inner-shuffle-decomposition", run_inner_shuffle_split, False),
]


def run_identity_suite(A, seed=0, samples=20, corrupt=None):
    """Evaluate every identity on random data; returns one record per identity."""
    report = []
    cents = [c for _, c in getattr(A, "centrals", ())]
    for name, runner, needs_centrals in IDENTITIES:
        if needs_centrals and not cents:
            report.append({"name": name, "anchor": name, "algebra": A.name,
                           "samples": 0, "failures": 0, "passed": True,
                           "witness": None, "skipped": "no central elements"})
            continue
        rng = random.Random("%s:%s:%s" % (seed, name, A.name))
        failures = 0
        witness = None
        ran = 0
        for _ in range(samples):
            ran += 1
            if corrupt:
                with bar.corrupted(corrupt):
                    w = runner(A, rng, cents)
            else:
                w = runner(A, rng, cents)
            if w is not None:
                failures += 1
                if witness is None:
                    witness = repr(w)
        report.append({"name": name, "anchor": name, "algebra": A.name,
                       "samples": ran, "failures": failures,
                       "passed": failures == 0, "witness": witness})
    return report


def default_zoo(seed=0):
    """Five verified algebras spanning the zoo kinds plus a jet Clifford algebra."""
    jet = dga.clifford_jet_algebra(4)
    jet.validate()
    return [
        dga.random_test_dga(seed + 1, "exterior"),
        dga.random_test_dga(seed + 2, "endp"),
        dga.random_test_dga(seed + 3, "truncation"),
        dga.random_test_dga(seed + 4, "tensor"),
        jet,
    ]
