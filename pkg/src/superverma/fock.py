"""Weyl-algebra realization of the degree-zero action on finite blocks.

The algebra here is the Weyl algebra on five conjugate pairs
(x1, x2, x3, z+, z-; dx1, dx2, dx3, dz+, dz-) with [d_u, u] = 1.  Elements
are kept normal-ordered: multiplication letters on the left, derivative
letters on the right, encoded as {(p, d): coeff} with p and d exponent
5-tuples over the variable order (x1, x2, x3, z+, z-).

Four inequivalent Fock representations are used, labeled by which letters
create (act freely on the vacuum) and which annihilate:

    kind  creators            annihilators
    "A"   x_i, z_a            dx_i, dz_a
    "B"   x_i, dz_a           dx_i, z_a
    "C"   dx_i, z_a           x_i, dz_a
    "D"   dx_i, dz_a          x_i, z_a

A Fock vector is a polynomial in the five creation letters, encoded as
{exps: coeff} over exponent 5-tuples.  An annihilating multiplication
letter acts as minus the derivative in its conjugate creation letter; an
annihilating derivative letter acts as the plain derivative.

The degree-zero algebra (three-by-three traceless fields, the sl2 of
currents, and the grading element) embeds into this Weyl algebra in two
flavors differing only in the grading element:
    flat:  Y = (2/3) sum x_i dx_i - sum z_a dz_a
    sharp: Y = -(4/3) sum x_i dx_i + sum z_a dz_a
Vacuum eigenvalues of Y are (0, 2, -2, 0) for flat and (0, -2, 4, 2) for
sharp over kinds (A, B, C, D).
"""

from fractions import Fraction
from math import comb, factorial

from .exact import ONE, vec_iadd, vec_scale

F = Fraction

KINDS = ("A", "B", "C", "D")
ZERO5 = (0, 0, 0, 0, 0)


def _tuple_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def weyl(p, d, coeff=ONE):
    """Single normal-ordered term x^p z^p' dx^d dz^d'."""
    return {(tuple(p), tuple(d)): F(coeff)}


def weyl_xd(i, j):
    """The field letter x_i dx_j (0-based)."""
    p = [0] * 5
    d = [0] * 5
    p[i] = 1
    d[j] = 1
    return weyl(p, d)


def weyl_zd(a, b):
    """The current letter z_a dz_b with a, b in {0 (+), 1 (-)}."""
    return weyl_xd(3 + a, 3 + b)


def heis_mul(A, B):
    """Normal-ordered product of two Weyl-algebra elements.

    Derivative letters of A contract against matching multiplication
    letters of B in all possible numbers.
    """
    out = {}
    for (pa, da), ca in A.items():
        for (pb, db), cb in B.items():
            base = ca * cb
            # choose how many of each derivative letter to contract
            choices = [
                range(min(da[v], pb[v]) + 1) for v in range(5)
            ]
            stack = [((), ONE)]
            for v in range(5):
                nxt = []
                for ks, coeff in stack:
                    for k in choices[v]:
                        c = coeff * comb(da[v], k) * comb(pb[v], k) * factorial(k)
                        nxt.append((ks + (k,), c))
                stack = nxt
            for ks, coeff in stack:
                p = tuple(pa[v] + pb[v] - ks[v] for v in range(5))
                d = tuple(da[v] + db[v] - ks[v] for v in range(5))
                key = (p, d)
                newc = out.get(key, F(0)) + base * coeff
                if newc:
                    out[key] = newc
                else:
                    out.pop(key, None)
    return out


def heis_commutator(A, B):
    out = heis_mul(A, B)
    vec_iadd(out, heis_mul(B, A), -ONE)
    return out


def _creators(kind):
    x_creates = kind in ("A", "B")
    z_creates = kind in ("A", "C")
    return x_creates, z_creates


def fock_apply(op, vec, kind):
    """Apply a normal-ordered Weyl element to a Fock vector of the given
    kind.  Returns a Fock vector."""
    assert kind in KINDS, kind
    x_creates, z_creates = _creators(kind)
    # per position: what multiplication letters and derivative letters do
    mul_modes = ["mul" if x_creates else "negdiff"] * 3 + [
        "mul" if z_creates else "negdiff"
    ] * 2
    der_modes = ["diff" if x_creates else "mul"] * 3 + [
        "diff" if z_creates else "mul"
    ] * 2

    def apply_power(acc, pos, k, mode):
        if not k:
            return acc
        out = {}
        for exps, c in acc.items():
            if mode == "mul":
                e = list(exps)
                e[pos] += k
                vec_iadd(out, {tuple(e): ONE}, c)
            else:
                n = exps[pos]
                if n < k:
                    continue
                coeff = ONE
                for t in range(k):
                    coeff *= n - t
                if mode == "negdiff" and k % 2:
                    coeff = -coeff
                e = list(exps)
                e[pos] -= k
                vec_iadd(out, {tuple(e): ONE}, c * coeff)
        return out

    result = {}
    for (p, d), c in op.items():
        acc = vec_scale(vec, c)
        # operator order: derivative letters act first (z then x within
        # each group is immaterial since they touch disjoint positions)
        for pos in range(5):
            acc = apply_power(acc, pos, d[pos], der_modes[pos])
        for pos in range(5):
            acc = apply_power(acc, pos, p[pos], mul_modes[pos])
        vec_iadd(result, acc)
    return result


def vacuum():
    return {ZERO5: ONE}


# ---------------------------------------------------------------------------
# the degree-zero embedding
# ---------------------------------------------------------------------------

G0_NAMES = (
    "e1",
    "e2",
    "e3",
    "e12",
    "f1",
    "f2",
    "f3",
    "f12",
    "h1",
    "h2",
    "h3",
    "Y",
)


def weyl_T():
    """The normal-ordered shift sum z_a dz_a - sum x_i dx_i."""
    out = {}
    for a in range(2):
        vec_iadd(out, weyl_zd(a, a))
    for i in range(3):
        vec_iadd(out, weyl_xd(i, i), -ONE)
    return out


def g0_embed(name, flavor):
    """Weyl image of an abstract degree-zero basis element.

    flavor "flat" and "sharp" agree on the semisimple part and differ in
    the grading element Y.
    """
    assert flavor in ("flat", "sharp"), flavor
    if name == "e1":
        return weyl_xd(0, 1)
    if name == "e2":
        return weyl_xd(1, 2)
    if name == "e12":
        return weyl_xd(0, 2)
    if name == "f1":
        return weyl_xd(1, 0)
    if name == "f2":
        return weyl_xd(2, 1)
    if name == "f12":
        return weyl_xd(2, 0)
    if name == "h1":
        out = weyl_xd(0, 0)
        vec_iadd(out, weyl_xd(1, 1), -ONE)
        return out
    if name == "h2":
        out = weyl_xd(1, 1)
        vec_iadd(out, weyl_xd(2, 2), -ONE)
        return out
    if name == "e3":
        return weyl_zd(0, 1)
    if name == "f3":
        return weyl_zd(1, 0)
    if name == "h3":
        out = weyl_zd(0, 0)
        vec_iadd(out, weyl_zd(1, 1), -ONE)
        return out
    if name == "Y":
        xc = F(2, 3) if flavor == "flat" else F(-4, 3)
        zc = -ONE if flavor == "flat" else ONE
        out = {}
        for i in range(3):
            vec_iadd(out, weyl_xd(i, i), xc)
        for a in range(2):
            vec_iadd(out, weyl_zd(a, a), zc)
        return out
    raise ValueError("unknown degree-zero basis name %r" % (name,))


# ---------------------------------------------------------------------------
# weight blocks and dimensions
# ---------------------------------------------------------------------------


def _monomials(nvars, total):
    if nvars == 1:
        return [(total,)]
    out = []
    for first in range(total + 1):
        for rest in _monomials(nvars - 1, total - first):
            out.append((first,) + rest)
    return out


_BLOCK_SIGNS = {
    "A": (1, 1),
    "B": (1, -1),
    "C": (-1, 1),
    "D": (-1, -1),
}


def weight_block(kind, m, n):
    """Basis (exponent 5-tuples) of the finite block with x-bidegree m and
    z-bidegree n in the Fock space of the given kind.

    The sign of each bidegree is forced by the kind: creation in the x
    letters gives m >= 0 (kinds A, B) and creation in the derivative
    letters gives m <= 0 (kinds C, D); likewise n over the z letters.
    """
    assert kind in KINDS, kind
    sm, sn = _BLOCK_SIGNS[kind]
    if m * sm < 0 or n * sn < 0:
        raise ValueError(
            "block (%d, %d) has a sign inconsistent with kind %s" % (m, n, kind)
        )
    out = []
    for xm in _monomials(3, abs(m)):
        for zm in _monomials(2, abs(n)):
            out.append(xm + zm)
    return out


def y_value(kind, m, n, flavor="sharp"):
    """Eigenvalue of the flavor's grading element on the (m, n) block."""
    xc = F(2, 3) if flavor == "flat" else F(-4, 3)
    zc = -ONE if flavor == "flat" else ONE
    x_creates, z_creates = _creators(kind)
    xe = abs(m) if x_creates else -abs(m) - 3
    ze = abs(n) if z_creates else -abs(n) - 2
    return xc * xe + zc * ze


def dim_irrep_g0(p, q, r):
    """Dimension of the finite irreducible with sl3 labels (p, q) and sl2
    label r."""
    assert p >= 0 and q >= 0 and r >= 0
    return (p + 1) * (q + 1) * (p + q + 2) * (r + 1) // 2
