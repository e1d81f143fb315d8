"""Degree-windowed models of the superalgebras E(3,6), E(3,8), E(5,10).

Structure conventions fixed here and relied on throughout:

- Gradations: deg x_i = 2 = -deg d_i in all three algebras.  E(3,6) odd part
  sits in odd degrees 2|alpha|-1 (one-forms with polynomial coefficients,
  tensored with the 2-dim spin space); E(3,8) odd generators x^alpha (x) eps^a
  sit in degree 2|alpha|-3 and two-form generators in degree 2|gamma|+1;
  E(5,10) even elements (divergence-free fields) have degree 2|alpha|-2 and
  odd elements (closed two-forms) degree 2|gamma|-1.  Parity == degree mod 2.
- Spin space: basis eps^+, eps^-, pairing <eps^+ ^ eps^-> = 1.  The symmetric
  square is identified with sl2 via eps^+eps^- -> h, (eps^+)^2 -> -2e,
  (eps^-)^2 -> 2f, where e.eps^- = eps^+, f.eps^+ = eps^-, h.eps^± = ±eps^±.
- Identifications: a two-form in three variables corresponds to the vector
  field contracting the volume form to it (dx2^dx3 -> d1 etc.); a top form
  corresponds to its coefficient function.  Same contraction convention in
  five variables.
- Vector fields act on the odd parts of the (3,6)/(3,8) models through the
  Lie derivative twisted by -1/2 times the divergence.
- E(3,6) odd bracket: [w (x) v, w' (x) v'] =
      -field(w ^ w') <v ^ v'>  +  (1/2) func(dw ^ w' + w ^ dw') (x) (v.v')
  E(3,8) brackets of the degree -1 generators follow from the scalar-scalar
  case [f (x) v, g (x) w] = -field(df ^ dg) <v ^ w>; the scalar/two-form
  bracket is [f (x) v, w2 (x) w] = -field(f.w2) <v ^ w>
      + (1/2) func(df ^ w2 - f dw2) (x) (v.w)  (calibrated so the
  distinguished relations below hold); two-forms bracket to zero with each
  other.  E(5,10): [w2, w2'] = field(w2 ^ w2').
- E(3,8) degrees >= 1 are NOT populated from coefficient formulas: they are
  constructed as the maximal transitive prolongation of the (rigid,
  hand-checkable) nonpositive part.  A degree-j element is a
  weight-homogeneous triple of maps (depth-1, depth-2, depth-3 components
  into degrees j-1, j-2, j-3) satisfying the super-derivation constraint on
  all pairs of negative generators; brackets of positive elements are then
  evaluated by transitivity.  This makes the graded Jacobi identity hold by
  construction and lets the model itself decide the structure constants in
  high degree.  Recognizable elements (polynomial-coefficient fields,
  currents, odd scalars/two-forms) are identified inside the prolongation
  afterwards by matching their rigid action on depths 2 and 3.
- Degree windows are hard: a bracket whose degree leaves the window raises
  WindowError rather than returning a truncated answer.
"""

from fractions import Fraction

from .exact import ONE, SparseMatrix, SpanSolver, kernel_with_free, vec_iadd, vec_scale
from . import forms
from .forms import (
    dform,
    field_apply,
    field_bracket,
    field_div,
    field_to_form,
    form_to_field,
    lie_form,
    mul_poly_field,
    mul_poly_form,
    poly_mul_poly,
    poly_to_top_form,
    top_form_to_poly,
    twisted_lie,
    wedge,
)

F = Fraction
HALF = F(1, 2)

SPINS = ("+", "-")
SL2 = ("e", "h", "f")

ALGEBRAS = ("e36", "e38", "e510")
DEPTH = {"e36": 2, "e38": 3, "e510": 2}
DEFAULT_WINDOW = {"e36": (-2, 4), "e38": (-3, 4), "e510": (-2, 4)}


class WindowError(ValueError):
    """A bracket or image degree left the configured degree window."""


def monomials(nvars, total):
    """All exponent tuples of the given total degree, ascending order."""
    if total < 0:
        return []
    if nvars == 1:
        return [(total,)]
    out = []
    for first in range(total + 1):
        for rest in monomials(nvars - 1, total - first):
            out.append((first,) + rest)
    return out


def _perm_sign(seq):
    sign = 1
    items = list(seq)
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                sign = -sign
    return sign


def spin_eps(a, b):
    """<eps^a ^ eps^b> with <+,-> = 1."""
    if a == b:
        return F(0)
    return ONE if a == "+" else -ONE


def spin_dot(a, b):
    """Symmetric product eps^a.eps^b as an sl2 combination."""
    if a != b:
        return {"h": ONE}
    return {"e": F(-2)} if a == "+" else {"f": F(2)}


def spin_act(X, a):
    """X.eps^a for X in {e,h,f} as a combination of eps^±."""
    if X == "e":
        return {"+": ONE} if a == "-" else {}
    if X == "f":
        return {"-": ONE} if a == "+" else {}
    return {a: ONE if a == "+" else -ONE}


def sl2_bracket(X, Y):
    rules = {
        ("e", "f"): {"h": ONE},
        ("f", "e"): {"h": -ONE},
        ("h", "e"): {"e": F(2)},
        ("e", "h"): {"e": F(-2)},
        ("h", "f"): {"f": F(-2)},
        ("f", "h"): {"f": F(2)},
    }
    return rules.get((X, Y), {})


class SuperElement:
    """A finite rational combination of model basis elements."""

    __slots__ = ("model", "coeffs")

    def __init__(self, model, coeffs):
        self.model = model
        self.coeffs = {k: F(v) for k, v in coeffs.items() if v}

    def __add__(self, other):
        assert self.model is other.model
        return SuperElement(self.model, vec_iadd(dict(self.coeffs), other.coeffs))

    def __sub__(self, other):
        assert self.model is other.model
        return SuperElement(self.model, vec_iadd(dict(self.coeffs), other.coeffs, -ONE))

    def __mul__(self, scalar):
        return SuperElement(self.model, vec_scale(self.coeffs, F(scalar)))

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def bracket(self, other):
        return self.model.bracket(self, other)

    def is_zero(self):
        return not self.coeffs

    def degrees(self):
        return sorted({self.model.degree[self.model.index[n]] for n in self.coeffs})

    def __eq__(self, other):
        return (
            isinstance(other, SuperElement)
            and self.model is other.model
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = [f"{v}*{k}" for k, v in sorted(self.coeffs.items())]
        return " + ".join(parts)


class AlgebraModel:
    """A degree-windowed model with an explicit basis and bracket table.

    table maps ordered index pairs (i, j), for every pair whose degree sum
    stays inside the window, to the bracket [b_i, b_j] as a sparse coefficient
    dict over basis indices.  Out-of-window pairs have no entry; bracketing
    them raises WindowError.
    """

    def __init__(self, name, window):
        self.name = name
        self.window = window
        self.names = []
        self.index = {}
        self.degree = []
        self.parity = []
        self.payload = []
        self.weight = []
        self.by_degree = {}
        self.table = {}
        self.distinguished = {}
        self.families = {}
        self.info = {}

    # -- construction helpers -------------------------------------------

    def add_basis(self, name, deg, parity, payload, weight=None):
        assert name not in self.index, name
        idx = len(self.names)
        self.names.append(name)
        self.index[name] = idx
        self.degree.append(deg)
        self.parity.append(parity)
        self.payload.append(payload)
        self.weight.append(weight)
        self.by_degree.setdefault(deg, []).append(idx)
        return idx

    def store_bracket(self, i, j, value):
        """Record [b_i, b_j] and its mirror."""
        value = {k: v for k, v in value.items() if v}
        self.table[(i, j)] = value
        if i != j:
            sign = ONE if self.parity[i] and self.parity[j] else -ONE
            self.table[(j, i)] = vec_scale(value, sign)

    # -- public API ------------------------------------------------------

    def element(self, data):
        if isinstance(data, str):
            data = {data: ONE}
        return SuperElement(self, {k: F(v) for k, v in data.items()})

    def zero(self):
        return SuperElement(self, {})

    def basis_element(self, idx):
        return SuperElement(self, {self.names[idx]: ONE})

    def bracket_indices(self, i, j):
        got = self.table.get((i, j))
        if got is None:
            s = self.degree[i] + self.degree[j]
            raise WindowError(
                f"bracket degree {s} outside window {self.window} "
                f"({self.names[i]}, {self.names[j]})"
            )
        return got

    def bracket(self, x, y):
        assert x.model is self and y.model is self
        acc = {}
        for nx, cx in x.coeffs.items():
            i = self.index[nx]
            for ny, cy in y.coeffs.items():
                j = self.index[ny]
                vec_iadd(acc, self.bracket_indices(i, j), cx * cy)
        return SuperElement(self, {self.names[k]: v for k, v in acc.items()})

    def dims(self):
        return {d: len(ix) for d, ix in sorted(self.by_degree.items())}


# ---------------------------------------------------------------------------
# E(3,6)
# ---------------------------------------------------------------------------


def _w_name(beta, i):
    return "W[%s]d%d" % ("".join(map(str, beta)), i + 1)


def _c_name(beta, X):
    return "C[%s]%s" % ("".join(map(str, beta)), X)


def _o_name(alpha, i, a):
    return "O[%s]dx%d%s" % ("".join(map(str, alpha)), i + 1, a)


def _field_to_w(fd):
    return {_w_name(exps, i): c for (exps, i), c in fd.items()}


def _poly_to_c(p, xcombo):
    out = {}
    for exps, c in p.items():
        for X, cx in xcombo.items():
            vec_iadd(out, {_c_name(exps, X): ONE}, c * cx)
    return out


def _form1_to_o(w, a):
    out = {}
    for (exps, idx), c in w.items():
        assert len(idx) == 1
        out[_o_name(exps, idx[0], a)] = c
    return out


def _e36_pair(pa, pb):
    """Bracket of two E(3,6) payloads as a name-keyed coefficient dict."""
    ka, kb = pa[0], pb[0]
    if ka == "W" and kb == "W":
        return _field_to_w(field_bracket(pa[1], pb[1]))
    if ka == "W" and kb == "C":
        return _poly_to_c(field_apply(pa[1], pb[1]), {pb[2]: ONE})
    if ka == "C" and kb == "W":
        return vec_scale(_e36_pair(pb, pa), -ONE)
    if ka == "W" and kb == "O":
        return _form1_to_o(twisted_lie(pa[1], pb[1], F(-1, 2)), pb[2])
    if ka == "O" and kb == "W":
        return vec_scale(_e36_pair(pb, pa), -ONE)
    if ka == "C" and kb == "C":
        return _poly_to_c(poly_mul_poly(pa[1], pb[1]), sl2_bracket(pa[2], pb[2]))
    if ka == "C" and kb == "O":
        out = {}
        moved = mul_poly_form(pa[1], pb[1])
        for aprime, c in spin_act(pa[2], pb[2]).items():
            vec_iadd(out, _form1_to_o(moved, aprime), c)
        return out
    if ka == "O" and kb == "C":
        return vec_scale(_e36_pair(pb, pa), -ONE)
    assert ka == "O" and kb == "O"
    wa, a = pa[1], pa[2]
    wb, b = pb[1], pb[2]
    out = {}
    e = spin_eps(a, b)
    if e:
        vec_iadd(out, _field_to_w(form_to_field(wedge(wa, wb), 3)), -e)
    three = wedge(dform(wa), wb)
    vec_iadd(three, wedge(wa, dform(wb)))
    if three:
        cur = vec_scale(top_form_to_poly(three, 3), HALF)
        vec_iadd(out, _poly_to_c(cur, spin_dot(a, b)))
    return out


def _build_e36(window):
    jmin, jmax = window
    model = AlgebraModel("e36", window)
    for d in range(jmin, jmax + 1):
        if d % 2 == 0:
            for beta in monomials(3, (d + 2) // 2):
                for i in range(3):
                    fd = {(beta, i): ONE}
                    model.add_basis(_w_name(beta, i), d, 0, ("W", fd))
            if d >= 0:
                for beta in monomials(3, d // 2):
                    for X in SL2:
                        model.add_basis(_c_name(beta, X), d, 0, ("C", {beta: ONE}, X))
        else:
            for alpha in monomials(3, (d + 1) // 2):
                for i in range(3):
                    for a in SPINS:
                        w = {(alpha, (i,)): ONE}
                        model.add_basis(_o_name(alpha, i, a), d, 1, ("O", w, a))
    n = len(model.names)
    for i in range(n):
        di = model.degree[i]
        for j in range(i, n):
            s = di + model.degree[j]
            if s < jmin or s > jmax:
                continue
            raw = _e36_pair(model.payload[i], model.payload[j])
            model.store_bracket(
                i, j, {model.index[nm]: c for nm, c in raw.items()}
            )
    dist = {
        "e1": {_w_name((1, 0, 0), 1): ONE},
        "e2": {_w_name((0, 1, 0), 2): ONE},
        "e12": {_w_name((1, 0, 0), 2): ONE},
        "f1": {_w_name((0, 1, 0), 0): ONE},
        "f2": {_w_name((0, 0, 1), 1): ONE},
        "f12": {_w_name((0, 0, 1), 0): ONE},
        "h1": {_w_name((1, 0, 0), 0): ONE, _w_name((0, 1, 0), 1): -ONE},
        "h2": {_w_name((0, 1, 0), 1): ONE, _w_name((0, 0, 1), 2): -ONE},
        "h3": {_c_name((0, 0, 0), "h"): ONE},
        "e3": {_c_name((0, 0, 0), "e"): ONE},
        "f3": {_c_name((0, 0, 0), "f"): ONE},
        "Y": {
            _w_name((1, 0, 0), 0): F(2, 3),
            _w_name((0, 1, 0), 1): F(2, 3),
            _w_name((0, 0, 1), 2): F(2, 3),
        },
        "f0": {_o_name((0, 0, 0), 0, "+"): ONE},
        "e0_flat": {
            _o_name((0, 0, 1), 1, "-"): ONE,
            _o_name((0, 1, 0), 2, "-"): -ONE,
        },
        "h0_flat": {
            _w_name((0, 1, 0), 1): -ONE,
            _w_name((0, 0, 1), 2): -ONE,
            _c_name((0, 0, 0), "h"): -ONE,
        },
    }
    model.distinguished = {k: model.element(v) for k, v in dist.items()}
    return model


# ---------------------------------------------------------------------------
# E(5,10)
# ---------------------------------------------------------------------------

PAIRS5 = [(i, j) for i in range(5) for j in range(i + 1, 5)]


def _wt5_even(beta, i):
    return tuple(
        F(beta[m] - beta[m + 1] - (1 if i == m else 0) + (1 if i == m + 1 else 0))
        for m in range(4)
    )


def _wt5_odd(gamma, pair):
    k, l = pair
    return tuple(
        F(
            gamma[m]
            - gamma[m + 1]
            + (1 if k == m else 0)
            + (1 if l == m else 0)
            - (1 if k == m + 1 else 0)
            - (1 if l == m + 1 else 0)
        )
        for m in range(4)
    )


def _build_e510(window):
    jmin, jmax = window
    model = AlgebraModel("e510", window)
    even_solver = {}
    odd_solver = {}
    for d in range(jmin, jmax + 1):
        if d % 2 == 0:
            k = (d + 2) // 2
            coords = [(beta, i) for beta in monomials(5, k) for i in range(5)]
            col = {c: idx for idx, c in enumerate(coords)}
            rows = {}
            for (beta, i), j in col.items():
                hit = forms.mono_diff(beta, i)
                if hit:
                    rows.setdefault(hit[1], {})[j] = hit[0]
            mat = SparseMatrix(len(rows), len(coords), list(rows.values()))
            _, _, kernel = kernel_with_free(mat)
            solver = SpanSolver()
            for kidx, vec in enumerate(kernel):
                fd = {coords[j]: c for j, c in vec.items()}
                wts = {_wt5_even(beta, i) for beta, i in fd}
                assert len(wts) == 1, "kernel vector mixes torus weights"
                name = f"S{d}_{kidx}"
                model.add_basis(name, d, 0, ("S", fd), wts.pop())
                assert solver.insert(fd, name)
            even_solver[d] = solver
        else:
            k = (d + 1) // 2
            coords = [(gamma, p) for gamma in monomials(5, k) for p in PAIRS5]
            rows = {}
            for cidx, (gamma, p) in enumerate(coords):
                for key, c in dform({(gamma, p): ONE}).items():
                    rows.setdefault(key, {})[cidx] = c
            mat = SparseMatrix(len(rows), len(coords), list(rows.values()))
            _, _, kernel = kernel_with_free(mat)
            solver = SpanSolver()
            for kidx, vec in enumerate(kernel):
                fd = {coords[j]: c for j, c in vec.items()}
                wts = {_wt5_odd(gamma, p) for gamma, p in fd}
                assert len(wts) == 1, "kernel vector mixes torus weights"
                name = f"F{d}_{kidx}"
                model.add_basis(name, d, 1, ("F", fd), wts.pop())
                assert solver.insert(fd, name)
            odd_solver[d] = solver
    model.info["even_solver"] = even_solver
    model.info["odd_solver"] = odd_solver

    def express_even(fd, d):
        combo = even_solver[d].express(fd)
        assert combo is not None, "field not divergence-free at degree %d" % d
        return combo

    def express_odd(fd, d):
        combo = odd_solver[d].express(fd)
        assert combo is not None, "form not closed at degree %d" % d
        return combo

    n = len(model.names)
    for i in range(n):
        di = model.degree[i]
        pi = model.payload[i]
        for j in range(i, n):
            s = di + model.degree[j]
            if s < jmin or s > jmax:
                continue
            pj = model.payload[j]
            if pi[0] == "S" and pj[0] == "S":
                raw = express_even(field_bracket(pi[1], pj[1]), s)
            elif pi[0] == "S" and pj[0] == "F":
                raw = express_odd(lie_form(pi[1], pj[1]), s)
            elif pi[0] == "F" and pj[0] == "S":
                raw = vec_scale(express_odd(lie_form(pj[1], pi[1]), s), -ONE)
            else:
                raw = express_even(form_to_field(wedge(pi[1], pj[1]), 5), s)
            model.store_bracket(i, j, {model.index[nm]: c for nm, c in raw.items()})

    def unit_field(i, j):
        e = [0] * 5
        e[i] = 1
        return {(tuple(e), j): ONE}

    dist = {}
    for i in range(4):
        dist[f"e{i + 1}"] = even_solver[0].express(unit_field(i, i + 1))
        dist[f"f{i + 1}"] = even_solver[0].express(unit_field(i + 1, i))
        hvec = dict(unit_field(i, i))
        vec_iadd(hvec, unit_field(i + 1, i + 1), -ONE)
        dist[f"h{i + 1}"] = even_solver[0].express(hvec)
    model.distinguished = {k: model.element(v) for k, v in dist.items()}
    model.info["express_even"] = express_even
    model.info["express_odd"] = express_odd
    return model


# ---------------------------------------------------------------------------
# E(3,8)
# ---------------------------------------------------------------------------

DZ = ["dz+", "dz-"]
DEL = ["del1", "del2", "del3"]
DODD = ["d+1", "d+2", "d+3", "d-1", "d-2", "d-3"]
GL = ["x%dd%d" % (i + 1, j + 1) for i in range(3) for j in range(3)]
CUR = ["cur_e", "cur_h", "cur_f"]


def _dz_name(a):
    return "dz" + a


def _del_name(i):
    return "del%d" % (i + 1)


def _d_name(a, i):
    return "d%s%d" % (a, i + 1)


def _gl_name(i, j):
    return "x%dd%d" % (i + 1, j + 1)


def _e38_low(pa, pb):
    """Bracket of two nonpositive E(3,8) payloads, name-keyed.

    Total on all nonpositive pairs; pairs landing below depth return {}.
    """
    ka, kb = pa[0], pb[0]
    # order the kinds to cut the case analysis in half
    order = {"gl": 0, "cur": 1, "d": 2, "del": 3, "dz": 4}
    if order[ka] > order[kb]:
        sign = ONE if _LOW_PARITY[ka] and _LOW_PARITY[kb] else -ONE
        return vec_scale(_e38_low(pb, pa), sign)
    if ka == "gl":
        i, j = pa[1], pa[2]
        if kb == "gl":
            k, l = pb[1], pb[2]
            out = {}
            if j == k:
                vec_iadd(out, {_gl_name(i, l): ONE})
            if l == i:
                vec_iadd(out, {_gl_name(k, j): ONE}, -ONE)
            return out
        if kb == "cur":
            return {}
        if kb == "d":
            a, k = pb[1], pb[2]
            out = {}
            if j == k:
                vec_iadd(out, {_d_name(a, i): ONE})
            if i == j:
                vec_iadd(out, {_d_name(a, k): ONE}, -HALF)
            return out
        if kb == "del":
            k = pb[1]
            return {_del_name(j): -ONE} if i == k else {}
        assert kb == "dz"
        return {_dz_name(pb[1]): -HALF} if i == j else {}
    if ka == "cur":
        X = pa[1]
        if kb == "cur":
            return {_c38_name(Y): c for Y, c in sl2_bracket(X, pb[1]).items()}
        if kb == "d":
            a, i = pb[1], pb[2]
            return {_d_name(b, i): c for b, c in spin_act(X, a).items()}
        if kb == "del":
            return {}
        assert kb == "dz"
        return {_dz_name(b): c for b, c in spin_act(X, pb[1]).items()}
    if ka == "d":
        a, i = pa[1], pa[2]
        if kb == "d":
            b, j = pb[1], pb[2]
            e = spin_eps(a, b)
            if not e or i == j:
                return {}
            k = 3 - i - j
            return {_del_name(k): -e * _perm_sign((k, i, j))}
        if kb == "del":
            j = pb[1]
            return {_dz_name(a): -ONE} if i == j else {}
        assert kb == "dz"
        return {}
    # del-del, del-dz, dz-dz
    return {}


def _c38_name(X):
    return "cur_" + X


_LOW_PARITY = {"gl": 0, "cur": 0, "d": 1, "del": 0, "dz": 1}


def _build_e38(window):
    jmin, jmax = window
    model = AlgebraModel("e38", window)
    for a in SPINS:
        model.add_basis(_dz_name(a), -3, 1, ("dz", a))
    for i in range(3):
        model.add_basis(_del_name(i), -2, 0, ("del", i))
    for a in SPINS:
        for i in range(3):
            model.add_basis(_d_name(a, i), -1, 1, ("d", a, i))
    for i in range(3):
        for j in range(3):
            model.add_basis(_gl_name(i, j), 0, 0, ("gl", i, j))
    for X in SL2:
        model.add_basis(_c38_name(X), 0, 0, ("cur", X))

    nz = len(model.names)

    def low_pair_idx(i, j):
        raw = _e38_low(model.payload[i], model.payload[j])
        return {model.index[nm]: c for nm, c in raw.items()}

    # weights of the nonpositive basis under (h1, h2, h3)
    h_combos = [
        {model.index[_gl_name(0, 0)]: ONE, model.index[_gl_name(1, 1)]: -ONE},
        {model.index[_gl_name(1, 1)]: ONE, model.index[_gl_name(2, 2)]: -ONE},
        {model.index[_c38_name("h")]: ONE},
    ]
    for b in range(nz):
        wt = []
        for h in h_combos:
            acc = {}
            for hidx, hc in h.items():
                vec_iadd(acc, low_pair_idx(hidx, b), hc)
            if not acc:
                wt.append(F(0))
            else:
                assert set(acc) == {b}, "nonpositive basis not weight-homogeneous"
                wt.append(acc[b])
        model.weight[b] = tuple(wt)

    neg_indices = [i for i in range(nz) if model.degree[i] < 0]
    neg_by_depth = {
        1: [model.index[n] for n in DODD],
        2: [model.index[n] for n in DEL],
        3: [model.index[n] for n in DZ],
    }

    def act_low(t_idx, neg_idx):
        """[b_t, b_neg] for t of any already-built degree, neg negative."""
        if model.degree[t_idx] >= 1:
            return model.payload[t_idx][1].get(model.names[neg_idx], {})
        return low_pair_idx(t_idx, neg_idx)

    full_solver = {}
    for j in range(1, jmax + 1):
        coords = []
        for depth in (1, 2, 3):
            tdeg = j - depth
            for x_idx in neg_by_depth[depth]:
                for t_idx in model.by_degree.get(tdeg, []):
                    coords.append((model.names[x_idx], t_idx))
        coord_pos = {c: idx for idx, c in enumerate(coords)}
        coord_wt = {}
        for xname, t_idx in coords:
            x_idx = model.index[xname]
            coord_wt[(xname, t_idx)] = tuple(
                a - b for a, b in zip(model.weight[t_idx], model.weight[x_idx])
            )
        rows = {}
        p_phi = j % 2
        for xi_pos, x_idx in enumerate(neg_indices):
            ax = -model.degree[x_idx]
            px = ax % 2
            for y_idx in neg_indices[xi_pos:]:
                ay = -model.degree[y_idx]
                sign3 = -ONE if (p_phi and px) else ONE
                # phi([x, y]) lands in degree j - ax - ay
                for z_idx, cz in low_pair_idx(x_idx, y_idx).items():
                    zname = model.names[z_idx]
                    for t_idx in model.by_degree.get(j - ax - ay, []):
                        key = (x_idx, y_idx, t_idx)
                        row = rows.setdefault(key, {})
                        c = coord_pos[(zname, t_idx)]
                        row[c] = row.get(c, F(0)) + cz
                # -[phi(x), y]
                xname = model.names[x_idx]
                for t_idx in model.by_degree.get(j - ax, []):
                    for s_idx, c in act_low(t_idx, y_idx).items():
                        key = (x_idx, y_idx, s_idx)
                        row = rows.setdefault(key, {})
                        cpos = coord_pos[(xname, t_idx)]
                        row[cpos] = row.get(cpos, F(0)) - c
                # -(-1)^{p_phi p_x} [x, phi(y)]
                yname = model.names[y_idx]
                for t_idx in model.by_degree.get(j - ay, []):
                    pt = (j - ay) % 2
                    flip = -ONE if (px and pt) else ONE
                    for s_idx, c in act_low(t_idx, x_idx).items():
                        key = (x_idx, y_idx, s_idx)
                        row = rows.setdefault(key, {})
                        cpos = coord_pos[(yname, t_idx)]
                        row[cpos] = row.get(cpos, F(0)) + sign3 * flip * c
        # group rows and coordinates by weight and solve blockwise
        blocks = {}
        for c in coords:
            blocks.setdefault(coord_wt[c], []).append(c)
        block_rows = {}
        for (x_idx, y_idx, s_idx), row in rows.items():
            if not row:
                continue
            wt = tuple(
                s - a - b
                for s, a, b in zip(
                    model.weight[s_idx], model.weight[x_idx], model.weight[y_idx]
                )
            )
            block_rows.setdefault(wt, []).append(row)
        solver = SpanSolver()
        counter = 0
        for wt in sorted(blocks):
            bcoords = blocks[wt]
            local = {coord_pos[c]: idx for idx, c in enumerate(bcoords)}
            lrows = []
            for row in block_rows.get(wt, []):
                lrow = {}
                for cpos, v in row.items():
                    if not v:
                        continue
                    assert cpos in local, "constraint row mixes weight blocks"
                    lrow[local[cpos]] = v
                if lrow:
                    lrows.append(lrow)
            mat = SparseMatrix(len(lrows), len(bcoords), lrows)
            _, _, kernel = kernel_with_free(mat)
            for vec in kernel:
                actmap = {}
                tuple_vec = {}
                for lcol, c in vec.items():
                    xname, t_idx = bcoords[lcol]
                    actmap.setdefault(xname, {})[t_idx] = c
                    tuple_vec[(xname, t_idx)] = c
                name = f"P{j}_{counter}"
                counter += 1
                model.add_basis(name, j, j % 2, ("P", actmap), wt)
                assert solver.insert(tuple_vec, model.index[name])
        full_solver[j] = solver
    model.info["prolongation_dims"] = {
        j: len(model.by_degree.get(j, [])) for j in range(1, jmax + 1)
    }

    # ---- identify recognizable elements inside the prolongation ----------
    proj_solver = {}
    for j in range(1, jmax + 1):
        ps = SpanSolver()
        for idx in model.by_degree.get(j, []):
            actmap = model.payload[idx][1]
            proj = {}
            for xname in DEL + DZ:
                for t_idx, c in actmap.get(xname, {}).items():
                    proj[(xname, t_idx)] = c
            ok = ps.insert(proj, idx)
            assert ok, "depth-2/3 action does not separate degree %d" % j
        proj_solver[j] = ps

    fam = {
        "W": {},
        "cur": {},
        "o0": {},
        "o2": {},
        "xi": {},
    }
    for i in range(3):
        e = [0, 0, 0]
        fam["W"][(tuple(e), i)] = {model.index[_del_name(i)]: ONE}
    for k in range(3):
        for i in range(3):
            e = [0, 0, 0]
            e[k] = 1
            fam["W"][(tuple(e), i)] = {model.index[_gl_name(k, i)]: ONE}
    for X in SL2:
        fam["cur"][((0, 0, 0), X)] = {model.index[_c38_name(X)]: ONE}
    for a in SPINS:
        fam["o0"][((0, 0, 0), a)] = {model.index[_dz_name(a)]: ONE}
        for i in range(3):
            e = [0, 0, 0]
            e[i] = 1
            fam["o0"][(tuple(e), a)] = {model.index[_d_name(a, i)]: ONE}

    def fam_combo(kind, table):
        """Turn {key: coeff} over family labels into an index-coeff dict."""
        out = {}
        for key, c in table.items():
            vec_iadd(out, fam[kind][key], c)
        return out

    def w_combo_from_field(fd):
        return fam_combo("W", {(exps, i): c for (exps, i), c in fd.items()})

    def cur_combo_from_poly(p, xcombo):
        table = {}
        for exps, c in p.items():
            for X, cx in xcombo.items():
                key = (exps, X)
                table[key] = table.get(key, F(0)) + c * cx
        return fam_combo("cur", table)

    def identify(j, phi23):
        """Find the degree-j element whose depth-2/3 action is phi23."""
        proj = {}
        for xname, vec in phi23.items():
            for t_idx, c in vec.items():
                proj[(xname, t_idx)] = c
        combo = proj_solver[j].express(proj)
        assert combo is not None, "no element matches the requested action"
        return {idx: c for idx, c in combo.items() if c}

    def mono_minus(exps, i):
        e = list(exps)
        e[i] -= 1
        return tuple(e)

    for j in range(1, jmax + 1):
        if j % 2:
            for alpha in monomials(3, (j + 3) // 2):
                for a in SPINS:
                    phi = {}
                    for i in range(3):
                        if alpha[i]:
                            phi[_del_name(i)] = vec_scale(
                                fam["o0"][(mono_minus(alpha, i), a)], -F(alpha[i])
                            )
                    fam["o0"][(alpha, a)] = identify(j, phi)
            for gamma in monomials(3, (j - 1) // 2):
                for p in [(0, 1), (0, 2), (1, 2)]:
                    for a in SPINS:
                        phi = {}
                        for i in range(3):
                            if gamma[i]:
                                phi[_del_name(i)] = vec_scale(
                                    fam["o2"][(mono_minus(gamma, i), p, a)],
                                    -F(gamma[i]),
                                )
                        w2 = {(gamma, p): ONE}
                        fld = form_to_field(w2, 3)
                        dw = dform(w2)
                        for b in SPINS:
                            vec = {}
                            e = spin_eps(b, a)
                            if e:
                                vec_iadd(vec, w_combo_from_field(fld), -e)
                            if dw:
                                vec_iadd(
                                    vec,
                                    cur_combo_from_poly(
                                        vec_scale(top_form_to_poly(dw, 3), -HALF),
                                        spin_dot(b, a),
                                    ),
                                )
                            if vec:
                                phi[_dz_name(b)] = vec
                        fam["o2"][(gamma, p, a)] = identify(j, phi)
        else:
            for beta in monomials(3, (j + 2) // 2):
                for i in range(3):
                    phi = {}
                    for k in range(3):
                        if beta[k]:
                            phi[_del_name(k)] = vec_scale(
                                fam["W"][(mono_minus(beta, k), i)], -F(beta[k])
                            )
                    if beta[i]:
                        for a in SPINS:
                            phi[_dz_name(a)] = vec_scale(
                                fam["o0"][(mono_minus(beta, i), a)],
                                -HALF * F(beta[i]),
                            )
                    fam["W"][(beta, i)] = identify(j, phi)
            for bmono in monomials(3, j // 2):
                for X in SL2:
                    phi = {}
                    for k in range(3):
                        if bmono[k]:
                            phi[_del_name(k)] = vec_scale(
                                fam["cur"][(mono_minus(bmono, k), X)], -F(bmono[k])
                            )
                    for a in SPINS:
                        vec = {}
                        for b, c in spin_act(X, a).items():
                            vec_iadd(vec, fam["o0"][(bmono, b)], c)
                        if vec:
                            phi[_dz_name(a)] = vec
                    fam["cur"][(bmono, X)] = identify(j, phi)
            if j == 4:
                for p in [(0, 1), (0, 2), (1, 2)]:
                    phi = {}
                    for a in SPINS:
                        phi[_dz_name(a)] = dict(fam["o2"][((0, 0, 0), p, a)])
                    try:
                        fam["xi"][p] = identify(4, phi)
                    except AssertionError:
                        pass
    model.families = fam
    model.info["xi_count"] = len(fam["xi"])

    # ---- distinguished elements ----------------------------------------
    def fam_se(kind, key, scale=ONE):
        return model.element(
            {model.names[i]: c * scale for i, c in fam[kind][key].items()}
        )

    dist = {
        "e1": model.element(_gl_name(0, 1)),
        "e2": model.element(_gl_name(1, 2)),
        "e12": model.element(_gl_name(0, 2)),
        "f1": model.element(_gl_name(1, 0)),
        "f2": model.element(_gl_name(2, 1)),
        "f12": model.element(_gl_name(2, 0)),
        "h1": model.element({_gl_name(0, 0): ONE, _gl_name(1, 1): -ONE}),
        "h2": model.element({_gl_name(1, 1): ONE, _gl_name(2, 2): -ONE}),
        "h3": model.element(_c38_name("h")),
        "e3": model.element(_c38_name("e")),
        "f3": model.element(_c38_name("f")),
        "Y": model.element(
            {_gl_name(0, 0): F(2, 3), _gl_name(1, 1): F(2, 3), _gl_name(2, 2): F(2, 3)}
        ),
        "f0": model.element(_d_name("+", 0)),
        "h0_sharp": model.element({_gl_name(0, 0): ONE, _c38_name("h"): -HALF}),
        "e0_prime": fam_se("o0", ((0, 0, 2), "-"), HALF),
        "e0_sharp": fam_se("o2", ((0, 0, 0), (1, 2), "-"), -ONE),
    }
    model.distinguished = dist

    # ---- fill the bracket table ----------------------------------------
    for i in range(nz):
        di = model.degree[i]
        for j in range(i, nz):
            s = di + model.degree[j]
            if s < jmin or s > jmax:
                continue
            model.store_bracket(i, j, low_pair_idx(i, j))
    n = len(model.names)
    for i in range(nz):
        if model.degree[i] >= 0:
            continue
        for j in range(nz, n):
            s = model.degree[i] + model.degree[j]
            if s < jmin or s > jmax:
                continue
            act = model.payload[j][1].get(model.names[i], {})
            sign = ONE if model.parity[i] and model.parity[j] else -ONE
            model.store_bracket(i, j, vec_scale(act, sign))
    for s in range(1, jmax + 1):
        for i in range(n):
            di = model.degree[i]
            if di < 0:
                continue
            dj = s - di
            if dj < max(di, 1):
                continue
            for j in model.by_degree.get(dj, []):
                if j < i:
                    continue
                if (i, j) in model.table:
                    continue
                sign = ONE if model.parity[i] and model.parity[j] else -ONE
                tuple_vec = {}
                for neg_idx in neg_indices:
                    acc = {}
                    for w_idx, c in model.table[(j, neg_idx)].items():
                        vec_iadd(acc, model.table[(i, w_idx)], c)
                    for w_idx, c in model.table[(i, neg_idx)].items():
                        vec_iadd(acc, model.table[(j, w_idx)], sign * c)
                    nm = model.names[neg_idx]
                    for t_idx, c in acc.items():
                        tuple_vec[(nm, t_idx)] = c
                combo = full_solver[s].express(tuple_vec)
                assert combo is not None, "transitivity bracket left the model"
                model.store_bracket(i, j, {k: v for k, v in combo.items() if v})
    return model


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

_CACHE = {}


def build_algebra(name, window=None):
    assert name in ALGEBRAS, name
    if window is None:
        window = DEFAULT_WINDOW[name]
    window = (int(window[0]), int(window[1]))
    jmin, jmax = window
    depth = DEPTH[name]
    if jmin != -depth:
        raise ValueError(
            "window %s must start exactly at the depth -%d of %s"
            % (window, depth, name)
        )
    if jmax < 1:
        raise ValueError("window must reach degree 1")
    key = (name, window)
    if key not in _CACHE:
        builder = {"e36": _build_e36, "e38": _build_e38, "e510": _build_e510}[name]
        _CACHE[key] = builder(window)
    return _CACHE[key]


def bracket(x, y):
    return x.model.bracket(x, y)


def jacobi_check(model, window=None):
    """Exhaustively evaluate the graded Jacobi identity on basis triples.

    Triples are skipped when any nested bracket would leave the window.
    Returns a list of violation records (empty = identity holds).
    """
    wmin, wmax = window if window is not None else model.window
    assert wmin >= model.window[0] and wmax <= model.window[1]
    deg = model.degree
    par = model.parity
    T = model.table
    names = model.names
    n = len(names)
    violations = []
    for i in range(n):
        di = deg[i]
        if di < wmin or di > wmax:
            continue
        for j in range(i, n):
            dj = deg[j]
            if dj > wmax:
                break
            dij = di + dj
            if dij > wmax:
                break
            if dj < wmin or dij < wmin:
                continue
            sij = -ONE if (par[i] and par[j]) else ONE
            for k in range(j, n):
                dk = deg[k]
                if dk > wmax or di + dk > wmax or dj + dk > wmax or dij + dk > wmax:
                    break
                if dk < wmin or di + dk < wmin or dj + dk < wmin or dij + dk < wmin:
                    continue
                acc = {}
                b = T[(i, j)]
                if b:
                    for w, c in b.items():
                        d = T.get((w, k))
                        if d:
                            vec_iadd(acc, d, c)
                b = T[(j, k)]
                if b:
                    for w, c in b.items():
                        d = T.get((i, w))
                        if d:
                            vec_iadd(acc, d, -c)
                b = T[(i, k)]
                if b:
                    for w, c in b.items():
                        d = T.get((j, w))
                        if d:
                            vec_iadd(acc, d, sij * c)
                if acc:
                    violations.append(
                        {
                            "triple": (names[i], names[j], names[k]),
                            "defect": {names[w]: str(c) for w, c in sorted(acc.items())},
                        }
                    )
    return violations


def convert(direction, obj, n):
    """Apply one of the standard identifications between functions, fields,
    and forms in n variables."""
    if direction == "field_to_form":
        return field_to_form(obj, n)
    if direction == "form_to_field":
        return form_to_field(obj, n)
    if direction == "function_to_top":
        return poly_to_top_form(obj, n)
    if direction == "top_to_function":
        return top_form_to_poly(obj, n)
    raise ValueError("unknown conversion %r" % (direction,))


def twisted_action(D, omega, lam):
    """Vector field acting on a form through the density-twisted Lie
    derivative L_D + lam * div(D)."""
    return twisted_lie(D, omega, F(lam))


def _lift5(exps):
    return exps + (0, 0)


def embed_e36_in_e510(x, target=None):
    """The degree-preserving embedding sending a 3-variable field D to
    D - (1/2)(div D)(z+ dz+-dual + z- dz--dual), a current b (x) X to the
    field b times the linear z-field of X, and an odd one-form w (x) eps^a
    to -d(z_a w), with z+ = x4, z- = x5."""
    model = x.model
    assert model.name == "e36"
    if target is None:
        target = build_algebra("e510", model.window)
    zdir = {"+": 3, "-": 4}
    acc = {}
    for nm, c in x.coeffs.items():
        pay = model.payload[model.index[nm]]
        deg = model.degree[model.index[nm]]
        if pay[0] == "W":
            fd = {( _lift5(exps), i): v for (exps, i), v in pay[1].items()}
            div = field_div(fd)
            for exps, v in div.items():
                for zd in (3, 4):
                    e = list(exps)
                    e[zd] += 1
                    vec_iadd(fd, {(tuple(e), zd): ONE}, -HALF * v)
            combo = target.info["express_even"](fd, deg)
        elif pay[0] == "C":
            b5 = {_lift5(exps): v for exps, v in pay[1].items()}
            X = pay[2]
            fd = {}
            if X == "e":
                zf = {((0, 0, 0, 1, 0), 4): ONE}
            elif X == "f":
                zf = {((0, 0, 0, 0, 1), 3): ONE}
            else:
                zf = {((0, 0, 0, 1, 0), 3): ONE, ((0, 0, 0, 0, 1), 4): -ONE}
            fd = mul_poly_field(b5, zf)
            combo = target.info["express_even"](fd, deg)
        else:
            w5 = {(_lift5(exps), idx): v for (exps, idx), v in pay[1].items()}
            a = pay[2]
            e = [0, 0, 0, 0, 0]
            e[zdir[a]] = 1
            za = {tuple(e): ONE}
            img = vec_scale(dform(mul_poly_form(za, w5)), -ONE)
            combo = target.info["express_odd"](img, deg)
        for nm2, v in combo.items():
            vec_iadd(acc, {nm2: ONE}, c * v)
    return SuperElement(target, acc)


def sharp_domain(model):
    """Basis of the even/odd scalar subalgebra of the E(3,8) model:
    polynomial fields, constant currents, and odd scalars.  Returns a list of
    (label, index-coeff dict)."""
    assert model.name == "e38"
    out = []
    jmax = model.window[1]
    for (beta, i), vec in sorted(model.families["W"].items()):
        if 2 * sum(beta) - 2 <= jmax:
            out.append((("W", beta, i), vec))
    for X in SL2:
        out.append((("cur", X), model.families["cur"][((0, 0, 0), X)]))
    for (alpha, a), vec in sorted(model.families["o0"].items()):
        if 2 * sum(alpha) - 3 <= jmax:
            out.append((("o0", alpha, a), vec))
    return out


def sharp_to_flat(x, target=None):
    """Project an element of the scalar subalgebra of the E(3,8) model to
    the E(3,6) model: identity on fields and constant currents, and
    f (x) v -> df (x) v on odd scalars.  Raises if x has a component outside
    that subalgebra."""
    model = x.model
    assert model.name == "e38"
    if target is None:
        target = build_algebra("e36", (-2, model.window[1]))
    domain = sharp_domain(model)
    solver = model.info.get("sharp_solver")
    if solver is None:
        solver = SpanSolver()
        for label, vec in domain:
            solver.insert(vec, label)
        model.info["sharp_solver"] = solver
    target_vec = {model.index[nm]: c for nm, c in x.coeffs.items()}
    combo = solver.express(target_vec)
    if combo is None:
        raise ValueError("element is not in the scalar subalgebra")
    acc = {}
    for label, c in combo.items():
        if not c:
            continue
        kind = label[0]
        if kind == "W":
            _, beta, i = label
            vec_iadd(acc, {_w_name(beta, i): ONE}, c)
        elif kind == "cur":
            vec_iadd(acc, {_c_name((0, 0, 0), label[1]): ONE}, c)
        else:
            _, alpha, a = label
            for i in range(3):
                if alpha[i]:
                    e = list(alpha)
                    e[i] -= 1
                    vec_iadd(acc, {_o_name(tuple(e), i, a): ONE}, c * F(alpha[i]))
    return SuperElement(target, acc)
