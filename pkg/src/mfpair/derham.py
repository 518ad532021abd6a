"""Truncated de Rham forms with exact coefficients.

A form is a map (exponent tuple, strictly increasing dx index tuple) -> UZ.
Only polynomial coefficient forms appear: every operator in the pipeline has
finite support on finite chains.
"""
from __future__ import annotations

from fractions import Fraction

from .milnor import poly_diff
from .uz import UZ


class NotACocycle(Exception):
    pass


def form(pairs=None) -> dict:
    out = {}
    for (mono, dxs), c in (pairs or {}).items():
        if not isinstance(c, UZ):
            c = UZ.rational(c)
        if c:
            key = (tuple(mono), tuple(dxs))
            acc = out.get(key, UZ()) + c
            if acc:
                out[key] = acc
            else:
                out.pop(key, None)
    return out


def form_add(*forms) -> dict:
    out = {}
    for f in forms:
        for key, c in f.items():
            acc = out.get(key, UZ()) + c
            if acc:
                out[key] = acc
            else:
                out.pop(key, None)
    return out


def form_scale(f, coeff) -> dict:
    if not isinstance(coeff, UZ):
        coeff = UZ.rational(coeff)
    if not coeff:
        return {}
    out = {}
    for key, c in f.items():
        acc = c * coeff
        if acc:
            out[key] = acc
    return out


def form_sub(f1, f2) -> dict:
    return form_add(f1, form_scale(f2, -1))


def form_eq(f1, f2) -> bool:
    return form_sub(f1, f2) == {}


def form_map_coeff(f, fn) -> dict:
    out = {}
    for key, c in f.items():
        acc = fn(c)
        if acc:
            out[key] = acc
    return out


def _wedge_dx(i, dxs):
    """dx_i wedged onto a sorted tuple; returns (tuple, sign) or None."""
    if i in dxs:
        return None
    below = sum(1 for j in dxs if j < i)
    merged = tuple(sorted(dxs + (i,)))
    return merged, (-1 if below % 2 else 1)


def form_d(f, n) -> dict:
    """The de Rham differential; z-variables are treated as constants."""
    out = {}
    for (mono, dxs), coeff in f.items():
        for i in range(n):
            if mono[i]:
                hit = _wedge_dx(i, dxs)
                if hit is None:
                    continue
                merged, sign = hit
                newmono = mono[:i] + (mono[i] - 1,) + mono[i + 1:]
                key = (newmono, merged)
                acc = out.get(key, UZ()) + coeff * (sign * mono[i])
                if acc:
                    out[key] = acc
                else:
                    out.pop(key, None)
    return out


def form_poly_mul(p, f) -> dict:
    """Multiply by a polynomial {exps: Fraction}."""
    out = {}
    for (mono, dxs), coeff in f.items():
        for e, c in p.items():
            key = (tuple(a + b for a, b in zip(mono, e)), dxs)
            acc = out.get(key, UZ()) + coeff * c
            if acc:
                out[key] = acc
            else:
                out.pop(key, None)
    return out


def wedge_poly_d(g, f, n) -> dict:
    """dg wedge (the given form), for a polynomial g."""
    out = {}
    for i in range(n):
        gi = poly_diff(g, i)
        if not gi:
            continue
        for (mono, dxs), coeff in f.items():
            hit = _wedge_dx(i, dxs)
            if hit is None:
                continue
            merged, sign = hit
            for e, c in gi.items():
                key = (tuple(a + b for a, b in zip(mono, e)), merged)
                acc = out.get(key, UZ()) + coeff * (sign * c)
                if acc:
                    out[key] = acc
                else:
                    out.pop(key, None)
    return out


def degree_grading(f) -> dict:
    """Multiply each component by its form degree."""
    out = {}
    for key, c in f.items():
        deg = len(key[1])
        if deg:
            out[key] = c * deg
    return out


def twisted_differential(f, fpoly, n, zpolys=(), with_u=True) -> dict:
    """-df - sum z_j dg_j + u d applied to a form."""
    out = form_scale(wedge_poly_d(fpoly, f, n), -1)
    for j, g in enumerate(zpolys):
        out = form_add(out, form_scale(wedge_poly_d(g, f, n), -UZ.z_var(j)))
    if with_u:
        out = form_add(out, form_scale(form_d(f, n), UZ.u_power(1)))
    return out


def u_connection_form(f, fpoly, n, zpolys=()) -> dict:
    """d/du + (f + sum z_j g_j)/u^2, the connection on the form side."""
    out = form_map_coeff(f, lambda c: c.du())
    out = form_add(out, form_scale(form_poly_mul(fpoly, f), UZ.u_power(-2)))
    for j, g in enumerate(zpolys):
        out = form_add(out, form_scale(form_poly_mul(g, f),
                                       UZ.u_power(-2) * UZ.z_var(j)))
    return out


def z_connection_form(f, index, n, zpolys) -> dict:
    """d/dz_i - g_i/u."""
    out = form_map_coeff(f, lambda c: c.dz(index))
    out = form_add(out, form_scale(form_poly_mul(zpolys[index], f),
                                   UZ.u_power(-1, -1)))
    return out


def top_degree_class(f, md) -> dict:
    """Milnor coordinates of the top component xi dx_1...dx_n of a closed form.

    Requires df wedge f = 0 (the u^0 cocycle condition); lower components are
    discarded since the twisted cohomology is concentrated in top degree.
    """
    n = md.ws.n
    if wedge_poly_d(md.f, f, n):
        raise NotACocycle("df wedge form != 0")
    xi = {}
    full = tuple(range(n))
    for (mono, dxs), coeff in f.items():
        if dxs == full:
            xi[mono] = coeff.as_fraction()
    return md.normal_form(xi)
