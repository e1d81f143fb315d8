"""Polynomial ground modules for the five-variable superalgebra.

Three commutative polynomial algebras carry the degree-zero action of
traceless 5x5 matrices:

* family ``A``: variables x_0..x_4 (the natural module) together with skew
  pairs x_{ij} = -x_{ji} for 0 <= i < j <= 4 (its exterior square);
* family ``B``: the dual variables x*_i and x*_{ij};
* family ``C``: x_i together with x*_i.

A monomial is a flat exponent tuple: the first five entries are the vector
exponents, the remaining entries (ten for A/B, indexed by ``PAIRS5``; five
for C) are the pair/dual exponents.  Polynomials are sparse dicts
``{monomial: Fraction}``.

Matrix units E_ij act by derivations — naturally on unstarred variables
(E_ij x_k = delta_jk x_i), by negative transpose on starred ones.  Raising
operators are E_{i,i+1}; weights are reported as eigenvalue 4-tuples of the
coroots h_k = E_kk - E_{k+1,k+1}.  All indices are 0-based.

Each bidegree splits, under the full matrix action, into a distinguished top
irreducible piece and a complement.  ``high_component`` realises the top
piece concretely: for family A as the submodule generated by the top
highest-weight monomial, for families B and C as the quotient by the
submodule generated by all non-top highest-weight vectors.  Dimensions are
certified against the Weyl dimension formula.

The alternating second-derivative system in the pair variables
(``pluecker_apply``) is kept as a separate diagnostic: its joint kernel
contains the top component of every slice but is strictly larger on slices
with exactly one pair factor, so the top component is constructed
representation-theoretically rather than as that kernel.
"""

from fractions import Fraction
from itertools import combinations

from .algebra import PAIRS5, monomials
from .exact import ONE, SpanSolver, SparseMatrix, rank_kernel, reduce_vector, vec_iadd

PAIR_INDEX = {p: k for k, p in enumerate(PAIRS5)}
QUADS = list(combinations(range(5), 4))
TAGS = ("A", "B", "C")


def _starred(tag, slot):
    """Does the given slot ('v' for the first five exponents, 'w' for the
    rest) carry dual variables in this family?"""
    assert tag in TAGS
    if tag == "A":
        return False
    if tag == "B":
        return True
    return slot == "w"


def _wwidth(tag):
    return 5 if tag == "C" else 10


def base_monomials(tag, vdeg, wdeg):
    """All monomials of the raw bidegree (vector degree, second-slot degree),
    in a deterministic order."""
    out = []
    for ve in monomials(5, vdeg):
        for we in monomials(_wwidth(tag), wdeg):
            out.append(ve + we)
    return out


def bidegree(mono):
    return sum(mono[:5]), sum(mono[5:])


def _pair_key(i, j):
    """(position, orientation sign) of the skew pair variable x_{ij}, or
    None when i == j (the variable vanishes)."""
    if i == j:
        return None
    if i < j:
        return PAIR_INDEX[(i, j)], 1
    return PAIR_INDEX[(j, i)], -1


def _shift(mono, pos, delta):
    lst = list(mono)
    lst[pos] += delta
    return tuple(lst)


def sl5_act(i, j, f, tag):
    """Derivation action of the matrix unit E_ij on a polynomial of the
    given family.  i == j is allowed (then E_ii is a gl element; traceless
    combinations are the caller's business)."""
    width = _wwidth(tag)
    out: dict = {}
    for mono, coeff in f.items():
        ve = mono[:5]
        # vector slot
        if _starred(tag, "v"):
            if ve[i]:
                m2 = _shift(_shift(mono, i, -1), j, 1)
                vec_iadd(out, {m2: -coeff * ve[i]})
        else:
            if ve[j]:
                m2 = _shift(_shift(mono, j, -1), i, 1)
                vec_iadd(out, {m2: coeff * ve[j]})
        # second slot
        if width == 5:
            we = mono[5:]
            if _starred(tag, "w"):
                if we[i]:
                    m2 = _shift(_shift(mono, 5 + i, -1), 5 + j, 1)
                    vec_iadd(out, {m2: -coeff * we[i]})
            else:
                if we[j]:
                    m2 = _shift(_shift(mono, 5 + j, -1), 5 + i, 1)
                    vec_iadd(out, {m2: coeff * we[j]})
        else:
            dual = _starred(tag, "w")
            for k, (a, b) in enumerate(PAIRS5):
                e = mono[5 + k]
                if not e:
                    continue
                # replace one factor x_{ab}; E_ij hits the index equal to j
                # (natural) or i (dual, with a minus sign)
                old = i if dual else j
                new = j if dual else i
                for kept, hit in ((b, a), (a, b)):
                    if hit != old:
                        continue
                    pk = _pair_key(new, kept) if hit == a else _pair_key(kept, new)
                    if pk is None:
                        continue
                    pos, sign = pk
                    if dual:
                        sign = -sign
                    m2 = _shift(_shift(mono, 5 + k, -1), 5 + pos, 1)
                    vec_iadd(out, {m2: coeff * e * sign})
    return out


def sl5_weight(tag, mono):
    """Coroot-eigenvalue 4-tuple of a monomial."""
    w = [0] * 5
    sv = -1 if _starred(tag, "v") else 1
    sw = -1 if _starred(tag, "w") else 1
    for i in range(5):
        w[i] += sv * mono[i]
    if _wwidth(tag) == 5:
        for i in range(5):
            w[i] += sw * mono[5 + i]
    else:
        for k, (a, b) in enumerate(PAIRS5):
            w[a] += sw * mono[5 + k]
            w[b] += sw * mono[5 + k]
    return tuple(w[k] - w[k + 1] for k in range(4))


def theta(tag, i, j, f):
    """The pair-indexed intertwining operators: for family A the derivative
    with respect to x_{ij}; for B multiplication by x*_{ij}; for C the skew
    substitution x*_i d/dx_j - x*_j d/dx_i.  Antisymmetric in (i, j)."""
    assert i != j
    out: dict = {}
    if tag == "A":
        pos, sign = _pair_key(i, j)
        for mono, coeff in f.items():
            e = mono[5 + pos]
            if e:
                vec_iadd(out, {_shift(mono, 5 + pos, -1): coeff * e * sign})
    elif tag == "B":
        pos, sign = _pair_key(i, j)
        for mono, coeff in f.items():
            vec_iadd(out, {_shift(mono, 5 + pos, 1): coeff * sign})
    else:
        for mono, coeff in f.items():
            for src, dst, sgn in ((j, i, 1), (i, j, -1)):
                e = mono[src]
                if e:
                    m2 = _shift(_shift(mono, src, -1), 5 + dst, 1)
                    vec_iadd(out, {m2: coeff * e * sgn})
    return out


def _d_pair(f, i, j):
    """d/dx_{ij} on a family-A/B style pair slot; zero for i == j."""
    pk = _pair_key(i, j)
    if pk is None:
        return {}
    pos, sign = pk
    out = {}
    for mono, coeff in f.items():
        e = mono[5 + pos]
        if e:
            out[_shift(mono, 5 + pos, -1)] = coeff * e * sign
    return out


def _m_pair(f, i, j):
    """Multiplication by the pair variable; zero for i == j."""
    pk = _pair_key(i, j)
    if pk is None:
        return {}
    pos, sign = pk
    return {_shift(mono, 5 + pos, 1): coeff * sign for mono, coeff in f.items()}


def pluecker_apply(tag, f, quad):
    """Apply the alternating pair-variable quadric for indices (a,b,c,d):
    for family A the second-derivative operator, for family B multiplication
    by the quadratic polynomial.  Repeated indices are allowed; the affected
    terms vanish or cancel on their own."""
    assert tag in ("A", "B")
    a, b, c, d = quad
    out: dict = {}
    for (p, q), (r, s), sgn in (((a, b), (c, d), 1), ((a, c), (b, d), -1), ((a, d), (b, c), 1)):
        op = _d_pair if tag == "A" else _m_pair
        term = op(op(f, r, s), p, q)
        vec_iadd(out, term, Fraction(sgn))
    return out


def quadric_kernel(m, n):
    """(ambient dim, rank, kernel dim) of the alternating second-derivative
    system on the (m, n) slice of family A.  The kernel always contains the
    top component but is strictly larger on slices with exactly one pair
    factor, where the system is identically zero."""
    ambient = base_monomials("A", m, n)
    blocks: dict = {}
    for k, mono in enumerate(ambient):
        blocks.setdefault(sl5_weight("A", mono), []).append(k)
    rank_total = 0
    kernel_total = 0
    for wt in sorted(blocks):
        cols = blocks[wt]
        rows_by_target: dict = {}
        for k, c in enumerate(cols):
            unit = {ambient[c]: ONE}
            for q, quad in enumerate(QUADS):
                img = pluecker_apply("A", unit, quad)
                for mono, coeff in img.items():
                    rows_by_target.setdefault((q, mono), {})[k] = coeff
        rows = [r for r in rows_by_target.values() if r]
        rank, ker = rank_kernel(SparseMatrix(len(rows), len(cols), rows))
        rank_total += rank
        kernel_total += len(ker)
    return len(ambient), rank_total, kernel_total


def dim_irrep_sl5(m1, m2, m3, m4):
    """Weyl dimension of the irreducible module with the given highest
    weight labels (coroot eigenvalues of the highest vector)."""
    assert min(m1, m2, m3, m4) >= 0
    lam = (m1 + m2 + m3 + m4, m2 + m3 + m4, m3 + m4, m4, 0)
    num = 1
    den = 1
    for i in range(5):
        for j in range(i + 1, 5):
            num *= lam[i] - lam[j] + j - i
            den *= j - i
    assert num % den == 0
    return num // den


def _top_label(tag, m, n):
    """Highest-weight labels of the top component of the (m, n) slice."""
    if tag == "A":
        return (m, n, 0, 0)
    if tag == "B":
        return (0, 0, m, n)
    return (m, 0, 0, n)


def _raw_bidegree(tag, m, n):
    """Raw (vector, second-slot) degrees of the (m, n) slice.  For family B
    the first label counts pair factors and the second vector factors, so
    the slice carries highest weight (0,0,m,n); for A and C the labels read
    off the two slots directly."""
    if tag == "B":
        return (n, m)
    return (m, n)


class HighComponent:
    """The top irreducible piece of one bidegree slice, with coordinates.

    For family A the piece is a subspace — the submodule generated by the
    top highest-weight monomial — and ``basis`` lists explicit polynomials
    (as sparse vectors over ambient positions).  For B and C it is a
    quotient and ``basis`` data are the representative monomials (non-pivot
    columns of the reduced complement).  ``weights[k]`` is the coroot weight
    of coordinate k.  ``to_coords``/``from_coords`` convert between sparse
    polynomials and sparse coordinate dicts {index: Fraction}.
    """

    def __init__(self, tag, label):
        self.tag = tag
        self.label = label
        self.raw = _raw_bidegree(tag, *label)
        self.ambient = base_monomials(tag, *self.raw)
        self.index = {m: k for k, m in enumerate(self.ambient)}
        self.kind = "subspace" if tag == "A" else "quotient"
        self._build()
        expected = dim_irrep_sl5(*_top_label(tag, *label))
        if self.dim != expected:
            raise ValueError(
                "isotypic split of %s%s gives dimension %d, oracle says %d"
                % (tag, label, self.dim, expected)
            )

    # -- construction -------------------------------------------------

    def _weight_blocks(self):
        blocks: dict = {}
        for k, mono in enumerate(self.ambient):
            blocks.setdefault(sl5_weight(self.tag, mono), []).append(k)
        return blocks

    def _build(self):
        if self.kind == "subspace":
            self._build_subspace()
        else:
            self._build_quotient()

    def _close_under_lowering(self, seeds):
        """Span-closure of weight-homogeneous seed vectors (sparse dicts over
        ambient positions) under the four lowering operators, one solver per
        weight so reductions stay inside small blocks.  Returns the dict
        weight -> SpanSolver."""
        solvers: dict = {}
        frontier = []

        def insert(wt, vec):
            solver = solvers.setdefault(wt, SpanSolver())
            if solver.insert(dict(vec), len(solver.rows)):
                frontier.append((wt, vec))

        for wt, vec in seeds:
            insert(wt, vec)
        while frontier:
            wt, vec = frontier.pop()
            poly = {self.ambient[c]: v for c, v in vec.items()}
            for r in range(4):
                img = sl5_act(r + 1, r, poly, self.tag)
                if img:
                    wt2 = sl5_weight(self.tag, min(img))
                    insert(wt2, {self.index[m]: c for m, c in img.items()})
        return solvers

    def _build_subspace(self):
        # the top highest vector is the monomial x_0^m x_{01}^n; its
        # lowering closure is the whole top component
        m, n = self.label
        top_mono = (m, 0, 0, 0, 0, n, 0, 0, 0, 0, 0, 0, 0, 0, 0)
        for r in range(4):
            assert sl5_act(r, r + 1, {top_mono: ONE}, "A") == {}
        solvers = self._close_under_lowering(
            [(sl5_weight("A", top_mono), {self.index[top_mono]: ONE})]
        )
        basis = []
        weights = []
        self._solver = SpanSolver()
        for wt in sorted(solvers):
            for _, rvec, _ in solvers[wt].rows:
                fresh = self._solver.insert(dict(rvec), len(basis))
                assert fresh, "subspace basis dependent"
                basis.append(dict(rvec))
                weights.append(wt)
        self.basis = basis
        self.weights = weights
        self.dim = len(basis)

    def _build_quotient(self):
        blocks = self._weight_blocks()
        top = _top_label(self.tag, *self.label)
        # highest vectors per weight block, then lowering closure of the
        # non-top ones = the complement submodule
        seeds = []
        top_count = 0
        for wt in sorted(blocks):
            cols = blocks[wt]
            rows_by_target: dict = {}
            for k, c in enumerate(cols):
                unit = {self.ambient[c]: ONE}
                for r in range(4):
                    img = sl5_act(r, r + 1, unit, self.tag)
                    for mono, coeff in img.items():
                        rows_by_target.setdefault((r, mono), {})[k] = coeff
            rows = [r for r in rows_by_target.values() if r]
            _, ker = rank_kernel(SparseMatrix(len(rows), len(cols), rows))
            for vec in ker:
                if wt == top:
                    top_count += 1
                    continue
                seeds.append((wt, {cols[k]: v for k, v in vec.items()}))
        assert top_count == 1, "top weight space is not one-dimensional"
        low = self._close_under_lowering(seeds)
        pivot_cols = []
        pivot_rows = []
        for wt in sorted(low):
            for pkey, rvec, _ in low[wt].rows:
                pivot_cols.append(pkey)
                pivot_rows.append(rvec)
        self.pivot_cols = pivot_cols
        self.pivot_rows = pivot_rows
        pivot_set = set(pivot_cols)
        self.reps = [k for k in range(len(self.ambient)) if k not in pivot_set]
        self.rep_pos = {c: k for k, c in enumerate(self.reps)}
        self.weights = [sl5_weight(self.tag, self.ambient[c]) for c in self.reps]
        self.dim = len(self.reps)

    # -- coordinates ---------------------------------------------------

    def to_coords(self, poly):
        """Coordinates of a polynomial: for a subspace component it must lie
        in the span (ValueError otherwise); for a quotient the polynomial is
        reduced modulo the low part first."""
        vec = {}
        for mono, coeff in poly.items():
            pos = self.index.get(mono)
            if pos is None:
                raise ValueError("monomial outside the bidegree slice")
            vec[pos] = coeff
        if self.kind == "subspace":
            combo = self._solver.express(vec)
            if combo is None:
                raise ValueError("polynomial is not in the top component")
            return combo
        red = reduce_vector(self.pivot_cols, self.pivot_rows, vec)
        return {self.rep_pos[c]: v for c, v in red.items() if v}

    def from_coords(self, coords):
        out: dict = {}
        if self.kind == "subspace":
            for k, c in coords.items():
                for col, v in self.basis[k].items():
                    vec_iadd(out, {self.ambient[col]: v}, c)
        else:
            for k, c in coords.items():
                vec_iadd(out, {self.ambient[self.reps[k]]: ONE}, c)
        return out


_HIGH_CACHE: dict = {}


def high_component(tag, m, n):
    """Cached top component of the (m, n) slice of the given family."""
    key = (tag, m, n)
    if key not in _HIGH_CACHE:
        _HIGH_CACHE[key] = HighComponent(tag, (m, n))
    return _HIGH_CACHE[key]


def act_coords(hc, i, j, coords):
    """Matrix-unit action transported to component coordinates."""
    return hc.to_coords(sl5_act(i, j, hc.from_coords(coords), hc.tag))


def theta_coords(src, dst, i, j, coords):
    """The pair-indexed operator as a map between component coordinates."""
    assert src.tag == dst.tag
    return dst.to_coords(theta(src.tag, i, j, src.from_coords(coords)))
