"""The comparison map from chains over the factorization algebra to forms.

The map is the composition of three stages: exponentiated insertions of the
odd generator D, the slot-wise matrix supertrace to chains over polynomial
coefficients, and the antisymmetrization into de Rham forms.  Because forms
of degree above the number of variables vanish, the exponential only needs
finitely many insertion rounds; one extra round is computed on demand to
check the truncation is exact.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction

from . import bar, derham
from .dga import MFAlgebra, PolyAlgebra, end_mul, end_parity, end_str
from .exact import SparseMatrix, kernel_basis, solve_opt, sparse_solve
from .milnor import MilnorData, poly_mul
from .uz import UZ


class SpanNotReached(Exception):
    pass


# ----------------------------------------------------------------------------
# the three stages


def insert_d_once(mf: MFAlgebra, ch, cap):
    """Unsigned insertion of D into every interior position, lengths capped."""
    out = {}
    for (a0, slots), coeff in ch.items():
        if len(slots) + 1 > cap:
            continue
        for i in range(len(slots) + 1):
            for lbl, c in mf.D.items():
                t = (a0, slots[:i] + (lbl,) + slots[i:])
                if bar._degenerate(mf, t):
                    continue
                acc = out.get(t, UZ()) + coeff * c
                if acc:
                    out[t] = acc
                else:
                    out.pop(t, None)
    return out


def exp_insert_d(mf: MFAlgebra, ch, cap):
    """exp(-insertion of D) truncated to bar lengths <= cap (exact: longer
    terms die in the form stage)."""
    total = {t: c for t, c in ch.items() if len(t[1]) <= cap}
    cur = dict(total)
    k = 1
    while cur:
        cur = bar.chain_scale(insert_d_once(mf, cur, cap), Fraction(-1, k))
        total = bar.chain_add(total, cur)
        k += 1
    return total


def chain_supertrace(mf: MFAlgebra, ch):
    """Slot-wise matrix supertrace onto chains over the polynomial coefficients."""
    n = mf.n
    RP = PolyAlgebra(mf.ws)
    out = {}
    for (a0, slots), coeff in ch.items():
        monos = (a0[0],) + tuple(m for m, _ in slots)
        ends = (a0[1],) + tuple(e for _, e in slots)
        sign_exp = sum(end_parity(ends[i], n) for i in range(1, len(ends), 2))
        prod = {ends[0]: Fraction(1)}
        for e in ends[1:]:
            nxt = {}
            for lbl, c in prod.items():
                for lbl2, c2 in end_mul(lbl, e, n).items():
                    acc = nxt.get(lbl2, Fraction(0)) + c * c2
                    if acc:
                        nxt[lbl2] = acc
                    else:
                        nxt.pop(lbl2, None)
            prod = nxt
            if not prod:
                break
        tr = end_str(prod, n)
        if not tr:
            continue
        t = (monos[0], tuple(monos[1:]))
        if bar._degenerate(RP, t):
            continue
        val = coeff * (tr * (-1 if sign_exp % 2 else 1))
        acc = out.get(t, UZ()) + val
        if acc:
            out[t] = acc
        else:
            out.pop(t, None)
    return out


def hkr_form(ch, ws):
    """phi0[phi1|...|phil] -> phi0 dphi1 ... dphil / l!, zero above degree n."""
    n = ws.n
    sign_flip = -1 if "epsilon" in bar._CORRUPTIONS else 1
    out = {}
    for (m0, slots), coeff in ch.items():
        l = len(slots)
        if l > n:
            continue
        base = coeff * Fraction(sign_flip, _factorial(l))
        for choice in itertools.permutations(range(n), l):
            mult = Fraction(1)
            mono = list(m0)
            ok = True
            for j, i in enumerate(choice):
                e = slots[j][i]
                if not e:
                    ok = False
                    break
                mult *= e
                for k in range(n):
                    mono[k] += slots[j][k]
                mono[i] -= 1
            if not ok:
                continue
            perm_sign = 1
            for a in range(l):
                for b in range(a + 1, l):
                    if choice[a] > choice[b]:
                        perm_sign = -perm_sign
            key = (tuple(mono), tuple(sorted(choice)))
            acc = out.get(key, UZ()) + base * (mult * perm_sign)
            if acc:
                out[key] = acc
            else:
                out.pop(key, None)
    return out


def _factorial(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def segal_map(mf: MFAlgebra, ch, cap=None):
    """The full comparison map on finite chains; cap defaults to the exact bound."""
    if cap is None:
        cap = mf.n
    expanded = exp_insert_d(mf, ch, cap)
    return hkr_form(chain_supertrace(mf, expanded), mf.ws)


def milnor_class(formv, md: MilnorData):
    """Milnor coordinates of a closed form (top component only)."""
    return derham.top_degree_class(formv, md)


# ----------------------------------------------------------------------------
# cycle search on exact slices


def slice_tensors(A, vdeg, length):
    """All normalized tensors of the given length whose weight minus
    length*step equals vdeg."""
    step = A.d_weight
    target = vdeg + length * step
    minw = getattr(A, "min_label_weight", lambda: 0)()
    out = []

    def rec(slots_left, remaining, acc):
        if slots_left == 0:
            if remaining == 0 and acc:
                out.append((acc[0], tuple(acc[1:])))
            return
        hi = remaining - (slots_left - 1) * minw
        for w in range(minw, hi + 1):
            for lbl in sorted(A.weight_basis(w)):
                if acc and lbl == A.unit:
                    continue
                rec(slots_left - 1, remaining - w, acc + [lbl])

    rec(length + 1, target, [])
    return sorted(out)


def hochschild_kernel_on_slice(A, vdeg, max_length):
    """Cycles of the Hochschild differential supported on bar lengths <= max_length."""
    basis = []
    for l in range(max_length + 1):
        basis.extend(slice_tensors(A, vdeg, l))
    if not basis:
        return []
    index = {t: j for j, t in enumerate(basis)}
    images = []
    target_index = {}
    cols = []
    for t in basis:
        img = bar.hochschild(A, bar.chain({t: 1}))
        col = {}
        for t2, c in img.items():
            if t2 not in target_index:
                target_index[t2] = len(target_index)
            col[target_index[t2]] = c.as_fraction()
        cols.append(col)
    m = SparseMatrix(len(target_index), len(basis))
    for j, col in enumerate(cols):
        for i, c in col.items():
            m[i, j] = c
    out = []
    for vec in kernel_basis(m):
        ch = bar.chain({basis[j]: vec[j] for j in range(len(basis)) if vec[j]})
        out.append(ch)
    return out


def find_cycles(mf: MFAlgebra, md: MilnorData, length_cap=2):
    """Hochschild cycles whose form classes span the Milnor algebra.

    Searches length-0 slices first, then deeper bar lengths per missing
    direction, in deterministic order.  Raises SpanNotReached if the cap is
    hit before the classes span.
    """
    from .exact import _Echelon

    theta_weight = sum(mf.ws.weights) - mf.n * (mf.ws.total // 2)
    basis_index = {m: i for i, m in enumerate(md.basis)}
    ech = _Echelon(md.mu)
    cycles = []
    classes = []

    def try_cycle(ch):
        if not ch:
            return False
        cls = milnor_class(segal_map(mf, ch), md)
        vec = [Fraction(0)] * md.mu
        for mono, c in cls.items():
            vec[basis_index[mono]] = c
        if ech.insert(vec):
            cycles.append(ch)
            classes.append(cls)
            return True
        return False

    for max_l in range(0, length_cap + 1):
        if len(cycles) == md.mu:
            break
        for g in md.basis:
            if len(cycles) == md.mu:
                break
            vdeg = md.ws.monomial_weight(g) + theta_weight
            for ch in hochschild_kernel_on_slice(mf, vdeg, max_l):
                try_cycle(ch)
                if len(cycles) == md.mu:
                    break
    if len(cycles) != md.mu:
        raise SpanNotReached(
            "span not reached: %d of %d classes within length cap %d"
            % (len(cycles), md.mu, length_cap))
    return cycles, classes


# ----------------------------------------------------------------------------
# solving for cycle extensions


def tensor_vdegree(A, t):
    return bar.tensor_weight(A, t) - len(t[1]) * A.d_weight


def solve_hochschild_preimage(A, rhs, require_closed_image=False, extra_len=1):
    """One solution of hochschild(X) = rhs on the exact slice, or None.

    With require_closed_image, also demands connes(X) = 0 (rows for both
    conditions are stacked).  Candidate tensors are ordered short-first and
    their images are built lazily: the incremental solver stops as soon as a
    combination reaches the right-hand side.
    """
    if not rhs:
        return {}
    step = A.d_weight
    vdegs = set()
    max_len = 0
    for t in rhs:
        vdegs.add(tensor_vdegree(A, t) - step)
        max_len = max(max_len, len(t[1]))
    basis = []
    seen = set()
    for l in range(max_len + 1 + extra_len):
        for v in sorted(vdegs):
            for t in slice_tensors(A, v, l):
                if t not in seen:
                    seen.add(t)
                    basis.append(t)
    if not basis:
        return None

    def columns():
        for t in basis:
            ch = bar.chain({t: 1})
            col = {("b", t2): c.as_fraction()
                   for t2, c in bar.hochschild(A, ch).items()}
            if require_closed_image:
                for t2, c in bar.connes(A, ch).items():
                    col[("B", t2)] = c.as_fraction()
            yield col

    rhs_vec = {("b", t): c.as_fraction() for t, c in rhs.items()}
    combo = sparse_solve(columns(), rhs_vec)
    if combo is None:
        return None
    return bar.chain({basis[j]: c for j, c in combo.items()})


def chain_u_layers(ch):
    """Split a chain into {u_power: rational chain} (z-free input)."""
    layers = {}
    for t, c in ch.items():
        for (p, z), v in c.terms.items():
            if z != ():
                raise ValueError("u-layer split expects z-free chains")
            lay = layers.setdefault(p, {})
            lay[t] = lay.get(t, UZ()) + UZ.rational(v)
    return layers


def solve_mixed_equation(A, rhs, max_extra=8):
    """One solution of (hochschild + u*connes)(X) = rhs, u-power by u-power.

    Each layer solves a Hochschild equation; whatever connes leaves over is
    carried into the next power.  Returns None when some layer is obstructed;
    raises if the carry fails to terminate.
    """
    layers = chain_u_layers(rhs)
    if not layers:
        return {}
    X = {}
    carry = {}
    p = min(layers)
    top = max(layers)
    while p <= top + max_extra:
        if p > top and not carry:
            return X
        need = bar.chain_add(layers.get(p, {}), carry)
        carry = {}
        if need:
            sol = solve_hochschild_preimage(A, need, require_closed_image=True)
            if sol is None:
                sol = solve_hochschild_preimage(A, need)
            if sol is None:
                sol = solve_hochschild_preimage(A, need, extra_len=2)
            if sol is None:
                return None
            X = bar.chain_add(X, bar.chain_scale(sol, UZ.u_power(p)))
            ob = bar.connes(A, sol)
            if ob:
                carry = bar.chain_scale(ob, -1)
        p += 1
    raise ValueError("mixed solve did not terminate")


def extend_to_mixed_cycle(A, ch, max_extra=8):
    """Extend a Hochschild cycle to an exact Laurent-polynomial cycle of b + u*connes."""
    if bar.hochschild(A, ch):
        raise ValueError("input is not a Hochschild cycle")
    rhs = bar.chain_scale(bar.connes(A, ch), UZ.u_power(1, -1))
    corr = solve_mixed_equation(A, rhs, max_extra)
    if corr is None:
        raise ValueError("mixed-cycle extension obstructed")
    return bar.chain_add(ch, corr)


def extend_cycle_mod_u(A, ch, orders: int):
    """u-corrections making the total differential vanish to the given u-order.

    Returns (chain, exact) where exact means the result is an honest cycle
    (the correction tower terminated early).
    """
    if bar.hochschild(A, ch):
        raise ValueError("input is not a Hochschild cycle")
    total = dict(ch)
    prev = ch
    for p in range(1, orders):
        obstruction = bar.connes(A, prev)
        if not obstruction:
            return total, True
        rhs = bar.chain_scale(obstruction, -1)
        sol = solve_hochschild_preimage(A, rhs)
        if sol is None:
            sol = solve_hochschild_preimage(A, rhs, extra_len=2)
        if sol is None:
            raise ValueError("cycle correction obstructed at u-order %d" % p)
        total = bar.chain_add(total, bar.chain_scale(sol, UZ.u_power(p)))
        prev = sol
    return total, not bar.connes(A, prev)


# ----------------------------------------------------------------------------
# bridge identities between the chain side and the form side


def _rand_mf_chain(mf, rng, max_len=2, max_deg=2, u_powers=(0,)):
    labels = []
    for _ in range(rng.randint(0, max_len) + 1):
        mono = tuple(rng.randint(0, max_deg) for _ in range(mf.n))
        endl = rng.randint(0, 4 ** mf.n - 1)
        labels.append((mono, endl))
    a0 = labels[0]
    slots = tuple(l for l in labels[1:] if l != mf.unit)
    return bar.chain({(a0, slots): UZ.u_power(rng.choice(u_powers))})


def bridge_identity_checks(mf: MFAlgebra, seed=0, samples=50):
    """Exact checks of every comparison-map identity on random finite chains."""
    from . import derham

    ws = mf.ws
    n = mf.n
    RP = PolyAlgebra(ws)
    fpoly = mf.f
    g = {milnor_monomial(n, 0): Fraction(1)}
    gel = {(milnor_monomial(n, 0), 0): Fraction(1)}
    gp = dict(fpoly)
    gpel = {(e, 0): c for e, c in fpoly.items()}
    If = lambda ch: segal_map(mf, ch)

    def conn_central(A, x, c):
        return bar.chain_add(bar.e_central(A, x, c),
                             bar.chain_scale(bar.big_e_central(A, x, c), UZ.u_power(1)))

    def mu_usn(A, x):
        return bar.chain_add(
            bar.mult_slot(A, x, 0),
            bar.chain_scale(bar.shift(A, bar.weighted_symmetrize(A, x)), UZ.u_power(1)))

    def bridge_h(x):
        inner = If(mu_usn(mf, x))
        middle = hkr_form(chain_supertrace(
            mf, mu_usn(mf, exp_insert_d(mf, x, n + 1))), ws)
        outer = derham.form_poly_mul(fpoly, derham.form_d(If(x), n))
        return derham.form_sub(derham.form_sub(inner, middle), outer)

    checks = {}

    def run(name, fn):
        rng = random.Random("%s:%s" % (seed, name))
        failures = 0
        witness = None
        for _ in range(samples):
            w = fn(rng)
            if w is not None:
                failures += 1
                if witness is None:
                    witness = repr(w)
        checks[name] = {"name": name, "anchor": name, "samples": samples,
                        "failures": failures, "passed": failures == 0,
                        "witness": witness}

    def chk(lhs, rhs, w):
        return None if derham.form_eq(lhs, rhs) else w

    def c_chain_eq(lhs, rhs, w):
        return None if bar.chain_eq(lhs, rhs) else w

    def f_b(rng):
        ch = _rand_mf_chain(mf, rng)
        return chk(If(bar.hochschild(mf, ch)),
                   derham.form_scale(derham.wedge_poly_d(fpoly, If(ch), n), -1), ch)
    run("comparison-intertwines-hochschild", f_b)

    def f_B(rng):
        ch = _rand_mf_chain(mf, rng)
        return chk(If(bar.connes(mf, ch)), derham.form_d(If(ch), n), ch)
    run("comparison-intertwines-connes", f_B)

    def f_bg(rng):
        ch = _rand_mf_chain(mf, rng)
        return chk(If(bar.insertion_sum(mf, ch, gel)),
                   derham.form_scale(derham.wedge_poly_d(g, If(ch), n), -1), ch)
    run("comparison-intertwines-insertion", f_bg)

    def f_str_bg(rng):
        ch = _rand_mf_chain(mf, rng)
        return c_chain_eq(chain_supertrace(mf, bar.insertion_sum(mf, ch, gel)),
                          bar.insertion_sum(RP, chain_supertrace(mf, ch), g), ch)
    run("supertrace-commutes-insertion", f_str_bg)

    def f_eps_bg(rng):
        ch = _rand_mf_chain(mf, rng)
        sch = chain_supertrace(mf, ch)
        return chk(hkr_form(bar.insertion_sum(RP, sch, g), ws),
                   derham.form_scale(
                       derham.wedge_poly_d(g, hkr_form(sch, ws), n), -1), ch)
    run("antisymmetrization-twists-insertion", f_eps_bg)

    def f_eps_eg(rng):
        ch = _rand_mf_chain(mf, rng)
        sch = chain_supertrace(mf, ch)
        return chk(hkr_form(bar.e_central(RP, sch, g), ws),
                   derham.form_poly_mul(g, hkr_form(sch, ws)), ch)
    run("antisymmetrization-absorbs-e", f_eps_eg)

    def f_bd_comm(rng):
        ch = _rand_mf_chain(mf, rng)
        bD = lambda x: insert_d_once(mf, x, 10 ** 9)
        return c_chain_eq(bD(conn_central(mf, ch, gel)),
                          conn_central(mf, bD(ch), gel), ch)
    run("d-insertion-commutes-connection", f_bd_comm)

    def f_str_comm(rng):
        ch = _rand_mf_chain(mf, rng)
        return c_chain_eq(chain_supertrace(mf, conn_central(mf, ch, gel)),
                          conn_central(RP, chain_supertrace(mf, ch), g), ch)
    run("supertrace-commutes-connection", f_str_comm)

    def f_super_bracket(rng):
        ch = _rand_mf_chain(mf, rng)
        bg = lambda x: bar.insertion_sum(mf, x, gel)
        lhs = bar.chain_add(bg(mu_usn(mf, ch)), mu_usn(mf, bg(ch)))
        return c_chain_eq(lhs, bar.chain_scale(conn_central(mf, ch, gel), -1), ch)
    run("insertion-multiplication-bracket", f_super_bracket)

    def f_homotconn(rng):
        ch = _rand_mf_chain(mf, rng, u_powers=(-1, 0, 1))
        lhs = derham.form_sub(
            derham.form_sub(
                derham.form_add(
                    derham.form_map_coeff(If(ch), lambda c: c.du()),
                    derham.form_scale(derham.form_poly_mul(fpoly, If(ch)),
                                      UZ.u_power(-2))),
                derham.form_scale(derham.degree_grading(If(ch)),
                                  UZ.u_power(-1, Fraction(1, 2)))),
            If(bar.u_connection(mf, ch, ())))
        half = lambda x: derham.form_scale(bridge_h(x), UZ.u_power(-2, Fraction(1, 2)))
        rhs = derham.form_add(
            derham.twisted_differential(half(ch), fpoly, n),
            half(bar.total_differential(mf, ch, ())))
        return chk(lhs, rhs, ch)
    run("connection-homotopy-identity", f_homotconn)

    def f_rts1(rng):
        ch = _rand_mf_chain(mf, rng)
        return chk(derham.wedge_poly_d(g, bridge_h(ch), n),
                   bridge_h(bar.insertion_sum(mf, ch, gel)), ch)
    run("homotopy-commutes-insertion", f_rts1)

    def f_rts3(rng):
        ch = _rand_mf_chain(mf, rng)
        lhs = derham.form_sub(
            derham.form_scale(derham.form_poly_mul(g, If(ch)), UZ.u_power(-2)),
            derham.form_scale(If(conn_central(mf, ch, gel)), UZ.u_power(-2)))
        hom = lambda x: derham.form_scale(
            derham.form_poly_mul(g, derham.form_d(If(x), n)),
            UZ.u_power(-2, Fraction(-1, 2)))
        rhs = derham.form_add(
            derham.form_add(
                derham.twisted_differential(hom(ch), fpoly, n),
                derham.form_scale(derham.wedge_poly_d(gp, hom(ch), n), -1)),
            hom(bar.chain_add(bar.total_differential(mf, ch, ()),
                              bar.insertion_sum(mf, ch, gpel))))
        return chk(lhs, rhs, ch)
    run("central-connection-homotopy", f_rts3)

    def f_truncation(rng):
        ch = _rand_mf_chain(mf, rng)
        full = segal_map(mf, ch, cap=n)
        wide = segal_map(mf, ch, cap=n + 1)
        return chk(full, wide, ch)
    run("exponential-truncation-exact", f_truncation)

    return list(checks.values())


def milnor_monomial(n, i):
    from .milnor import monomial
    return monomial(n, i)


def deform_cycle_z(A, ch, central, z_orders=2):
    """z-corrections making a mixed cycle a cycle of the deformed total
    differential modulo z^z_orders, for a single central element."""
    total = dict(ch)
    prev = ch
    for j in range(1, z_orders):
        rhs = bar.chain_scale(bar.insertion_sum(A, prev, central), -1)
        sol = solve_mixed_equation(A, rhs)
        if sol is None:
            raise ValueError("deformation obstructed at z-order %d" % j)
        prev = sol
        zj = UZ({(0, (j,)): Fraction(1)})
        total = bar.chain_add(total, bar.chain_scale(sol, zj))
    return total
