"""Polynomial differential forms and vector fields in n variables, exact.

Representations (all coefficients Fraction, zeros never stored):
- polynomial: {exponent tuple: coeff}
- k-form:     {(exponent tuple, strictly increasing index tuple): coeff}
- vector field: {(exponent tuple, direction index): coeff}

Indices are 0-based internally.  The identifications used by the algebra
models live here as well:
- a top form  f dx_1...dx_n  <->  the polynomial f;
- an (n-1)-form <-> a vector field via contraction into the volume form,
  i.e. the field D with iota_D(vol) = omega; concretely the term omitting
  dx_i picks up the sign (-1)^i (0-based).
"""

from fractions import Fraction

from .exact import ONE, ZERO, vec_iadd

Poly = dict
Form = dict
Field = dict


def zero_exps(n: int) -> tuple:
    return (0,) * n


def mono(n: int, **powers) -> tuple:
    """Exponent tuple from keyword powers, e.g. mono(3, x1=2) -> (2,0,0)."""
    e = [0] * n
    for name, p in powers.items():
        e[int(name[1:]) - 1] = p
    return tuple(e)


def poly_const(n: int, c=ONE) -> Poly:
    c = Fraction(c)
    return {zero_exps(n): c} if c else {}


def mono_diff(exps: tuple, i: int):
    """d/dx_i of a monomial: (coefficient, new exponent tuple) or None."""
    if exps[i] == 0:
        return None
    out = list(exps)
    out[i] -= 1
    return Fraction(exps[i]), tuple(out)


def poly_diff(p: Poly, i: int) -> Poly:
    out: Poly = {}
    for exps, c in p.items():
        hit = mono_diff(exps, i)
        if hit:
            vec_iadd(out, {hit[1]: hit[0]}, c)
    return out


def poly_mul_poly(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for ea, ca in p.items():
        for eb, cb in q.items():
            key = tuple(x + y for x, y in zip(ea, eb))
            w = out.get(key, ZERO) + ca * cb
            if w:
                out[key] = w
            else:
                del out[key]
    return out


def merge_indices(ia: tuple, ib: tuple):
    """Sorted union of disjoint index tuples with the Koszul sign, or None."""
    if set(ia) & set(ib):
        return None
    sign = 1
    for x in ia:
        for y in ib:
            if x > y:
                sign = -sign
    return sign, tuple(sorted(ia + ib))


def wedge(a: Form, b: Form) -> Form:
    out: Form = {}
    for (ea, ia), ca in a.items():
        for (eb, ib), cb in b.items():
            hit = merge_indices(ia, ib)
            if hit is None:
                continue
            sign, idx = hit
            key = (tuple(x + y for x, y in zip(ea, eb)), idx)
            w = out.get(key, ZERO) + sign * ca * cb
            if w:
                out[key] = w
            else:
                del out[key]
    return out


def poly_to_form(p: Poly) -> Form:
    return {(exps, ()): c for exps, c in p.items()}


def form_to_poly(a: Form) -> Poly:
    assert all(not idx for (_, idx) in a), "not a 0-form"
    return {exps: c for (exps, _), c in a.items()}


def scale_form(a: Form, c) -> Form:
    c = Fraction(c)
    if not c:
        return {}
    return {k: c * v for k, v in a.items()}


def mul_poly_form(p: Poly, a: Form) -> Form:
    return wedge(poly_to_form(p), a)


def dform(a: Form) -> Form:
    out: Form = {}
    for (exps, idx), c in a.items():
        for i in range(len(exps)):
            hit = mono_diff(exps, i)
            if hit is None:
                continue
            dc, dexps = hit
            merged = merge_indices((i,), idx)
            if merged is None:
                continue
            sign, nidx = merged
            vec_iadd(out, {(dexps, nidx): ONE}, sign * dc * c)
    return out


def dpoly(p: Poly) -> Form:
    return dform(poly_to_form(p))


def iota(D: Field, a: Form) -> Form:
    """Contraction of a form with a polynomial vector field."""
    out: Form = {}
    for (ed, i), cd in D.items():
        for (ea, idx), ca in a.items():
            if i not in idx:
                continue
            pos = idx.index(i)
            nidx = idx[:pos] + idx[pos + 1:]
            key = (tuple(x + y for x, y in zip(ed, ea)), nidx)
            vec_iadd(out, {key: ONE}, (-1) ** pos * cd * ca)
    return out


def lie_form(D: Field, a: Form) -> Form:
    """Lie derivative via Cartan's formula d iota + iota d."""
    out = dform(iota(D, a))
    vec_iadd(out, iota(D, dform(a)))
    return out


def field_div(D: Field) -> Poly:
    out: Poly = {}
    for (exps, i), c in D.items():
        hit = mono_diff(exps, i)
        if hit:
            vec_iadd(out, {hit[1]: hit[0]}, c)
    return out


def twisted_lie(D: Field, a: Form, lam: Fraction) -> Form:
    """L_D a + lam * (div D) * a — the density-twisted action on odd parts."""
    out = lie_form(D, a)
    if lam:
        vec_iadd(out, mul_poly_form(field_div(D), a), Fraction(lam))
    return out


def field_apply(D: Field, p: Poly) -> Poly:
    out: Poly = {}
    for (ed, i), cd in D.items():
        for exps, c in p.items():
            hit = mono_diff(exps, i)
            if hit is None:
                continue
            dc, dexps = hit
            key = tuple(x + y for x, y in zip(ed, dexps))
            vec_iadd(out, {key: ONE}, cd * c * dc)
    return out


def field_bracket(D: Field, E: Field) -> Field:
    out: Field = {}
    for (ee, j), ce in E.items():
        for key, c in field_apply(D, {ee: ce}).items():
            vec_iadd(out, {(key, j): ONE}, c)
    for (ed, j), cd in D.items():
        for key, c in field_apply(E, {ed: cd}).items():
            vec_iadd(out, {(key, j): ONE}, -c)
    return out


def mul_poly_field(p: Poly, D: Field) -> Field:
    out: Field = {}
    for ep, cp in p.items():
        for (ed, i), cd in D.items():
            key = (tuple(x + y for x, y in zip(ep, ed)), i)
            vec_iadd(out, {key: ONE}, cp * cd)
    return out


def top_form_to_poly(a: Form, n: int) -> Poly:
    """f dx_1...dx_n  ->  f."""
    full = tuple(range(n))
    out: Poly = {}
    for (exps, idx), c in a.items():
        assert idx == full, "not a top form"
        out[exps] = c
    return out


def poly_to_top_form(p: Poly, n: int) -> Form:
    full = tuple(range(n))
    return {(exps, full): c for exps, c in p.items()}


def form_to_field(a: Form, n: int) -> Field:
    """(n-1)-form -> vector field, via iota_D(vol) = form.

    The term  f * (dx_0...omit dx_i...dx_{n-1})  maps to  (-1)^i f d_i.
    """
    out: Field = {}
    for (exps, idx), c in a.items():
        assert len(idx) == n - 1, "not an (n-1)-form"
        (i,) = set(range(n)) - set(idx)
        vec_iadd(out, {(exps, i): ONE}, (-1) ** i * c)
    return out


def field_to_form(D: Field, n: int) -> Form:
    out: Form = {}
    for (exps, i), c in D.items():
        idx = tuple(j for j in range(n) if j != i)
        vec_iadd(out, {(exps, idx): ONE}, (-1) ** i * c)
    return out


def form_weight(key) -> tuple:
    """gl-weight of a monomial form key ((exps, idx)): x_i and dx_i count 1."""
    exps, idx = key
    w = list(exps)
    for i in idx:
        w[i] += 1
    return tuple(w)
