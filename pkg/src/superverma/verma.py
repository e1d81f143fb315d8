"""Degree-truncated induced modules and their candidate morphisms.

A module here is induced from a finite-dimensional irreducible block V of
the degree-zero part of one of the deeper models ('e38', depth 3, or
'e510', depth 2): everything of positive degree acts on V by zero, and the
negative half acts freely.  Monomials in the negative letters are kept in
a fixed normal order (PBW words) and all coefficients are exact rationals.

Conventions:
- a PBW word is a tuple of positions into ``VermaEngine.order``, weakly
  increasing, odd letters never repeated; ``straighten`` rewrites an
  arbitrary concatenation into this normal form using the model bracket,
  with a Koszul sign -1 for every swap of two odd letters, and drops
  brackets that land below the model depth (they vanish in the full
  algebra, not just in the window);
- the U-degree of a word is the sum of -degree over its letters; actions
  that would push a word past the engine cutoff raise TruncationError
  instead of silently dropping terms;
- a vector of the induced module is a dict {(word, ground_pos): coeff};
  its weight is the sum of the letter weights plus the ground weight, the
  latter always computed as eigenvalues of the model's distinguished
  Cartan elements so both summands live in the same convention;
- a morphism element of U-degree k encodes 1 (x) v -> sum_w w (x) (L_w v)
  as {word: {src_pos: {tgt_pos: coeff}}} (column-major matrices).  It
  defines a module morphism exactly when every generator of the
  non-negative half kills it (``verify_singular``); ``induce_map`` then
  expands it into per-(U-degree, weight) block matrices on the truncated
  modules, and ``compose_elements`` composes two elements exactly,
  without any truncation loss.
"""

import re
from fractions import Fraction

from . import fock
from . import sl5_poly
from .algebra import WindowError, build_algebra
from .exact import ONE, SparseMatrix, rank_kernel, vec_iadd, vec_scale

F = Fraction
HALF = F(1, 2)


class TruncationError(Exception):
    """An action or product would exceed the module's degree cutoff."""


# ---------------------------------------------------------------------------
# column-major sparse matrices {col: {row: coeff}}
# ---------------------------------------------------------------------------


def mat_iadd(target, source, coeff=ONE):
    """In-place target += coeff * source for column-major matrices."""
    if not coeff:
        return target
    for col, vec in source.items():
        acc = target.setdefault(col, {})
        vec_iadd(acc, vec, coeff)
        if not acc:
            del target[col]
    return target


def mat_scale(matrix, coeff):
    if not coeff:
        return {}
    return {col: vec_scale(vec, coeff) for col, vec in matrix.items()}


def mat_compose(outer, inner):
    """Column-major composition: (outer o inner)[v] = outer(inner[v])."""
    out = {}
    for col, mid in inner.items():
        acc = {}
        for w, c in mid.items():
            img = outer.get(w)
            if img:
                vec_iadd(acc, img, c)
        if acc:
            out[col] = acc
    return out


# ---------------------------------------------------------------------------
# the engine: PBW order, straightening, truncated action
# ---------------------------------------------------------------------------

_ORDERS = {
    "e38": (
        "del1", "del2", "del3", "dz+", "dz-",
        "d+1", "d+2", "d+3", "d-1", "d-2", "d-3",
    ),
    "e510": tuple("S-2_%d" % k for k in range(5))
    + tuple("F-1_%d" % k for k in range(10)),
}
_DEPTH = {"e38": 3, "e510": 2}
_WINDOW = {"e38": (-3, 1), "e510": (-2, 1)}


class VermaEngine:
    """Straightening and action machinery for one algebra's modules."""

    def __init__(self, algebra, cutoff=6, order=None):
        assert algebra in _ORDERS, algebra
        self.algebra = algebra
        self.cutoff = cutoff
        self.depth = _DEPTH[algebra]
        self.model = build_algebra(algebra, window=_WINDOW[algebra])
        self.order = tuple(order) if order is not None else _ORDERS[algebra]
        model = self.model
        self.order_index = {name: pos for pos, name in enumerate(self.order)}
        self.letter_model_idx = tuple(model.index[n] for n in self.order)
        self.letter_parity = tuple(model.parity[i] for i in self.letter_model_idx)
        self.letter_udeg = tuple(-model.degree[i] for i in self.letter_model_idx)
        self.weight_rank = len(model.weight[0])
        lw = []
        for i in self.letter_model_idx:
            wt = tuple(int(v) for v in model.weight[i])
            assert all(F(v) == w for v, w in zip(wt, model.weight[i]))
            lw.append(wt)
        self.letter_weight = tuple(lw)
        negatives = sorted(
            i for d, ix in model.by_degree.items() if d < 0 for i in ix
        )
        assert sorted(self.letter_model_idx) == negatives, (
            "the PBW order must enumerate exactly the negative half"
        )
        self._straighten_cache = {}
        self._word_cache = {}
        self._ground_cache = {}
        self._gl_matrices = self._extract_gl_matrices() if algebra == "e510" else None

    # -- word bookkeeping -------------------------------------------------

    def word_udeg(self, word):
        return sum(self.letter_udeg[p] for p in word)

    def word_weight(self, word):
        tot = [0] * self.weight_rank
        for p in word:
            for k, v in enumerate(self.letter_weight[p]):
                tot[k] += v
        return tuple(tot)

    def words_of_degree(self, d):
        """All normal-ordered words of U-degree d, lexicographic order."""
        cached = self._word_cache.get(d)
        if cached is not None:
            return cached
        out = []
        nletters = len(self.order)

        def extend(prefix, start, rem):
            if rem == 0:
                out.append(tuple(prefix))
                return
            for p in range(start, nletters):
                if prefix and p == prefix[-1] and self.letter_parity[p]:
                    continue
                if self.letter_udeg[p] > rem:
                    continue
                prefix.append(p)
                extend(prefix, p, rem - self.letter_udeg[p])
                prefix.pop()

        extend([], 0, d)
        out.sort()
        self._word_cache[d] = out
        return out

    # -- straightening ----------------------------------------------------

    def straighten(self, word):
        """Normal form {pbw_word: coeff} of a concatenation of negative
        letters.  The returned dict is cached: callers must not mutate it."""
        word = tuple(word)
        cached = self._straighten_cache.get(word)
        if cached is None:
            cached = self._straighten(word)
            self._straighten_cache[word] = cached
        return cached

    def _straighten(self, word):
        for k in range(len(word) - 1):
            a, b = word[k], word[k + 1]
            if a > b or (a == b and self.letter_parity[a]):
                break
        else:
            return {word: ONE}
        head, tail = word[:k], word[k + 2:]
        bracket = self._neg_bracket(a, b)
        # replace the bad pair a*b by super-commuted + bracket terms
        replacements = {}
        if a == b:
            # odd square: a*a = (1/2)[a, a]
            for p, c in bracket.items():
                replacements[(p,)] = c * HALF
        else:
            sign = -ONE if self.letter_parity[a] and self.letter_parity[b] else ONE
            replacements[(b, a)] = sign
            for p, c in bracket.items():
                replacements[(p,)] = replacements.get((p,), 0) + c
        out = {}
        for mid, cm in replacements.items():
            if not cm:
                continue
            for w2, c2 in self.straighten(head + mid + tail).items():
                cur = out.get(w2, 0) + cm * c2
                if cur:
                    out[w2] = cur
                else:
                    out.pop(w2, None)
        return out

    def _neg_bracket(self, a, b):
        """Bracket of two negative letters as {letter_pos: coeff}; brackets
        below the model depth are zero in the full algebra."""
        ia, ib = self.letter_model_idx[a], self.letter_model_idx[b]
        try:
            got = self.model.bracket_indices(ia, ib)
        except WindowError:
            s = self.model.degree[ia] + self.model.degree[ib]
            assert s < -self.depth, "window too small for a genuine bracket"
            return {}
        out = {}
        for idx, c in got.items():
            out[self.order_index[self.model.names[idx]]] = c
        return out

    # -- e510 ground realization -----------------------------------------

    def _extract_gl_matrices(self):
        """Realize each degree-zero basis element as a matrix-unit combo
        acting on the polynomial grounds.

        The degree -2 letters carry the dual vector representation; reading
        the bracket action there and dualizing gives the action on the
        (un-starred) polynomial letters: {name: {(b, p): coeff}} meaning
        sum coeff * (matrix unit E_bp)."""
        model = self.model
        dnames = ["S-2_%d" % b for b in range(5)]
        dpos = {n: k for k, n in enumerate(dnames)}
        out = {}
        for idx in model.by_degree[0]:
            cmat = {}
            for q in range(5):
                got = model.bracket_indices(idx, model.index[dnames[q]])
                for j2, c in got.items():
                    b = dpos[model.names[j2]]
                    key = (q, b)
                    cmat[key] = cmat.get(key, 0) - c
            out[model.names[idx]] = {k: v for k, v in cmat.items() if v}
        return out

    # -- ground factories -------------------------------------------------

    def fock_ground(self, kind, m, n):
        key = ("fock", kind, m, n)
        if key not in self._ground_cache:
            self._ground_cache[key] = FockGround(self, kind, m, n)
        return self._ground_cache[key]

    def poly_ground(self, tag, m, n, mode="high"):
        key = ("poly", tag, m, n, mode)
        if key not in self._ground_cache:
            self._ground_cache[key] = PolyGround(self, tag, m, n, mode)
        return self._ground_cache[key]


_ENGINES = {}


def engine(algebra, cutoff=6):
    """Shared engine per (algebra, cutoff); caches straightening and grounds."""
    key = (algebra, cutoff)
    if key not in _ENGINES:
        _ENGINES[key] = VermaEngine(algebra, cutoff)
    return _ENGINES[key]


# ---------------------------------------------------------------------------
# ground blocks
# ---------------------------------------------------------------------------


class GroundBlock:
    """Finite-dimensional block with an exact degree-zero action.

    Subclasses set ``dim`` and ``key`` and implement ``_matrix(name)`` for
    every degree-zero basis name of the model, column-major."""

    def __init__(self, eng):
        self.engine = eng
        self._mat_cache = {}
        self._weight_cache = None

    def g0_matrix(self, name):
        got = self._mat_cache.get(name)
        if got is None:
            got = self._matrix(name)
            self._mat_cache[name] = got
        return got

    def act(self, name_coeffs, vec):
        """Apply a degree-zero combination {model_name: coeff} to a vector
        {pos: coeff}."""
        out = {}
        for name, cn in name_coeffs.items():
            if not cn:
                continue
            mat = self.g0_matrix(name)
            for col, c in vec.items():
                img = mat.get(col)
                if img:
                    vec_iadd(out, img, cn * c)
        return out

    def weight(self, pos):
        if self._weight_cache is None:
            self._weight_cache = self._compute_weights()
        return self._weight_cache[pos]

    def _compute_weights(self):
        model = self.engine.model
        cartans = [
            dict(model.distinguished["h%d" % k].coeffs)
            for k in range(1, self.engine.weight_rank + 1)
        ]
        weights = []
        for pos in range(self.dim):
            unit = {pos: ONE}
            wt = []
            for h in cartans:
                img = self.act(h, unit)
                lam = img.pop(pos, 0)
                assert not img, "Cartan action must be diagonal on the block"
                assert lam.denominator == 1 if isinstance(lam, F) else True
                wt.append(int(lam))
            weights.append(tuple(wt))
        return weights


def _weyl_of_g0(name):
    """Weyl-algebra realization of a degree-zero basis element of the
    deeper rank-3 model on the joint Fock spaces (normalization matching
    the grading operator that takes value -4m/3 + n on creation blocks)."""
    if name == "cur_e":
        return fock.weyl_zd(0, 1)
    if name == "cur_f":
        return fock.weyl_zd(1, 0)
    if name == "cur_h":
        op = dict(fock.weyl_zd(0, 0))
        vec_iadd(op, fock.weyl_zd(1, 1), -ONE)
        return op
    m = re.fullmatch(r"x(\d)d(\d)", name)
    assert m, "unexpected degree-zero name %r" % name
    i, j = int(m.group(1)) - 1, int(m.group(2)) - 1
    if i != j:
        return fock.weyl_xd(i, j)
    op = dict(fock.weyl_xd(i, i))
    for k in range(3):
        vec_iadd(op, fock.weyl_xd(k, k), -ONE)
    for a in range(2):
        vec_iadd(op, fock.weyl_zd(a, a), HALF)
    return op


class FockGround(GroundBlock):
    """A creation-bidegree block of one of the four joint Fock spaces."""

    def __init__(self, eng, kind, m, n):
        super().__init__(eng)
        assert eng.algebra == "e38"
        self.kind, self.m, self.n = kind, m, n
        self.basis = fock.weight_block(kind, m, n)
        self.basis_index = {e: i for i, e in enumerate(self.basis)}
        self.dim = len(self.basis)
        self.key = ("fock", kind, m, n)

    def _matrix(self, name):
        op = _weyl_of_g0(name)
        mat = {}
        for col, exps in enumerate(self.basis):
            img = fock.fock_apply(op, {exps: ONE}, self.kind)
            col_vec = {}
            for e2, c in img.items():
                row = self.basis_index.get(e2)
                assert row is not None, (name, self.kind, e2)
                col_vec[row] = c
            if col_vec:
                mat[col] = col_vec
        return mat


class PolyGround(GroundBlock):
    """Block of the rank-4 polynomial realizations: the top irreducible
    component by default, or (mode='raw') the full bidegree slice as a
    deliberately reducible control."""

    def __init__(self, eng, tag, m, n, mode="high"):
        super().__init__(eng)
        assert eng.algebra == "e510"
        assert mode in ("high", "raw")
        self.tag, self.m, self.n, self.mode = tag, m, n, mode
        if mode == "high":
            self.hc = sl5_poly.high_component(tag, m, n)
            self.dim = self.hc.dim
        else:
            raw = sl5_poly._raw_bidegree(tag, m, n)
            self.monomials = sl5_poly.base_monomials(tag, *raw)
            self.mono_index = {mo: k for k, mo in enumerate(self.monomials)}
            self.dim = len(self.monomials)
        self.key = ("poly", tag, m, n, mode)

    def unit_action(self, b, p, col):
        """Matrix unit E_bp applied to the col-th basis vector."""
        if self.mode == "high":
            return sl5_poly.act_coords(self.hc, b, p, {col: ONE})
        img = sl5_poly.sl5_act(b, p, {self.monomials[col]: ONE}, self.tag)
        return {self.mono_index[mo]: c for mo, c in img.items()}

    def _matrix(self, name):
        cmat = self.engine._gl_matrices[name]
        mat = {}
        for col in range(self.dim):
            acc = {}
            for (b, p), c in cmat.items():
                vec_iadd(acc, self.unit_action(b, p, col), c)
            if acc:
                mat[col] = acc
        return mat


# ---------------------------------------------------------------------------
# the full (truncated) action
# ---------------------------------------------------------------------------


def _act_word(eng, idx, word, payload, pay_scale, pay_ground):
    """Act by a non-negative-degree model basis element on word (x) payload.

    Returns a list of (word', payload') pairs; the ground action and
    scaling are abstracted so the same recursion serves module vectors and
    morphism matrices."""
    model = eng.model
    deg = model.degree[idx]
    assert deg >= 0
    if not word:
        if deg == 0:
            p2 = pay_ground({model.names[idx]: ONE}, payload)
            return [((), p2)] if p2 else []
        return []
    u1, rest = word[0], word[1:]
    out = []
    for j2, cb in model.bracket_indices(idx, eng.letter_model_idx[u1]).items():
        if model.degree[j2] < 0:
            pos2 = eng.order_index[model.names[j2]]
            for w2, c2 in eng.straighten((pos2,) + rest).items():
                out.append((w2, pay_scale(payload, cb * c2)))
        else:
            for w2, p2 in _act_word(eng, j2, rest, payload, pay_scale, pay_ground):
                out.append((w2, pay_scale(p2, cb)))
    sign = -ONE if model.parity[idx] and eng.letter_parity[u1] else ONE
    for w2, p2 in _act_word(eng, idx, rest, payload, pay_scale, pay_ground):
        for w3, c3 in eng.straighten((u1,) + w2).items():
            out.append((w3, pay_scale(p2, sign * c3)))
    return out


def act_full(eng, elem, vec, ground, cutoff=None):
    """Action of a model element on an induced vector {(word, pos): coeff}.

    Negative components prepend letters (raising TruncationError past the
    cutoff); degree-zero components act on ground positions once a word is
    exhausted; positive components annihilate the ground."""
    cutoff = eng.cutoff if cutoff is None else cutoff
    model = eng.model
    coeffs = elem.coeffs if hasattr(elem, "coeffs") else elem
    by_word = {}
    for (word, gpos), c in vec.items():
        by_word.setdefault(word, {})[gpos] = c
    out = {}

    def emit(word, gvec, scale):
        for gpos, c in gvec.items():
            key = (word, gpos)
            cur = out.get(key, 0) + scale * c
            if cur:
                out[key] = cur
            else:
                out.pop(key, None)

    for name, cn in coeffs.items():
        if not cn:
            continue
        idx = model.index[name]
        deg = model.degree[idx]
        for word, gvec in by_word.items():
            if deg < 0:
                if eng.word_udeg(word) - deg > cutoff:
                    raise TruncationError(
                        "U-degree %d exceeds cutoff %d"
                        % (eng.word_udeg(word) - deg, cutoff)
                    )
                pos = eng.order_index[name]
                for w2, c2 in eng.straighten((pos,) + word).items():
                    emit(w2, gvec, cn * c2)
            else:
                for w2, g2 in _act_word(eng, idx, word, gvec, vec_scale, ground.act):
                    emit(w2, g2, cn)
    return out


# ---------------------------------------------------------------------------
# morphism elements
# ---------------------------------------------------------------------------


class MorphismElement:
    """U-degree-homogeneous candidate morphism of induced modules.

    terms = {word: matrix} with column-major matrices from source ground
    positions to target ground positions; the encoded map sends
    1 (x) v to sum_word word (x) (matrix . v).  A target of None marks an
    identically zero morphism whose codomain fell outside the node family.
    """

    def __init__(self, eng, src, tgt, terms, udeg=None, label=""):
        self.engine = eng
        self.src = src
        self.tgt = tgt
        self.terms = {w: m for w, m in terms.items() if m}
        self.label = label
        degs = {eng.word_udeg(w) for w in self.terms}
        assert len(degs) <= 1, "morphism element must be U-homogeneous"
        if udeg is None:
            assert degs, "degree of an empty element must be given explicitly"
            self.udeg = degs.pop()
        else:
            self.udeg = udeg
            assert not degs or degs == {udeg}

    def is_zero(self):
        return not self.terms

    def apply_ground(self, src_pos):
        """Image of 1 (x) basis vector: {(word, tgt_pos): coeff}."""
        out = {}
        for word, mat in self.terms.items():
            col = mat.get(src_pos)
            if col:
                for tpos, c in col.items():
                    out[(word, tpos)] = c
        return out


def phi_act(eng, elem, phi):
    """Action of a non-negative model element on a morphism element.

    The element acts on the target-module side of every term and, in
    degree zero, the precomposition with the source ground action is
    subtracted: the result vanishes for every generator of the
    non-negative half exactly when phi defines a module morphism."""
    model = eng.model
    coeffs = elem.coeffs if hasattr(elem, "coeffs") else elem
    tgt = phi.tgt
    if tgt is None:
        return {}

    def tgt_ground(name_coeffs, mat):
        acc = {}
        for name, c in name_coeffs.items():
            rho = tgt.g0_matrix(name)
            mat_iadd(acc, mat_compose(rho, mat), c)
        return acc

    out = {}
    for name, cn in coeffs.items():
        if not cn:
            continue
        idx = model.index[name]
        deg = model.degree[idx]
        assert deg >= 0, "phi_act only takes the non-negative half"
        for word, mat in phi.terms.items():
            for w2, m2 in _act_word(eng, idx, word, mat, mat_scale, tgt_ground):
                acc = out.setdefault(w2, {})
                mat_iadd(acc, m2, cn)
                if not acc:
                    del out[w2]
        if deg == 0:
            rho_src = phi.src.g0_matrix(name)
            for word, mat in phi.terms.items():
                acc = out.setdefault(word, {})
                mat_iadd(acc, mat_compose(mat, rho_src), -cn)
                if not acc:
                    del out[word]
    return {w: m for w, m in out.items() if m}


def singular_generators(eng):
    """(name, element) generators of the non-negative half whose vanishing
    action certifies a morphism element."""
    model = eng.model
    if eng.algebra == "e38":
        names = [
            "e1", "e2", "e3", "e12", "f1", "f2", "f3", "f12",
            "h1", "h2", "h3", "Y", "e0_prime", "e0_sharp",
        ]
        return [(n, model.distinguished[n]) for n in names]
    gens = []
    for idx in model.by_degree[0] + model.by_degree[1]:
        name = model.names[idx]
        gens.append((name, model.element(name)))
    return gens


def verify_singular(eng, phi, generators=None):
    """Check that every generator kills the morphism element.

    Returns {'ok': bool, 'violations': [{'generator': ..,
    'nonzero_entries': ..}, ...]}."""
    gens = singular_generators(eng) if generators is None else generators
    violations = []
    for name, elem in gens:
        res = phi_act(eng, elem, phi)
        if res:
            entries = sum(len(v) for m in res.values() for v in m.values())
            violations.append({"generator": name, "nonzero_entries": entries})
    return {"ok": not violations, "violations": violations}


def compose_elements(eng, outer, inner, label=""):
    """Exact composition of morphism elements (inner first).

    Because induced maps are left-module maps, the composite of the
    induced maps is induced by this composite element; in particular the
    composite vanishes on every block iff this element is zero."""
    assert outer.src is not None and inner.tgt is not None
    assert outer.src.key == inner.tgt.key, "composition grounds must match"
    terms = {}
    for w_in, m_in in inner.terms.items():
        for w_out, m_out in outer.terms.items():
            prod = mat_compose(m_out, m_in)
            if not prod:
                continue
            for w2, c2 in eng.straighten(w_in + w_out).items():
                acc = terms.setdefault(w2, {})
                mat_iadd(acc, mat_scale(prod, c2))
                if not acc:
                    del terms[w2]
    return MorphismElement(
        eng, inner.src, outer.tgt, terms,
        udeg=inner.udeg + outer.udeg, label=label,
    )


# ---------------------------------------------------------------------------
# truncated modules and induced block maps
# ---------------------------------------------------------------------------


class InducedModule:
    """Truncated induced module organized into (U-degree, weight) blocks."""

    def __init__(self, eng, ground, cutoff=None):
        self.engine = eng
        self.ground = ground
        self.cutoff = eng.cutoff if cutoff is None else cutoff
        self._blocks = None
        self._index = None

    def blocks(self):
        if self._blocks is None:
            eng = self.engine
            blocks = {}
            gweights = [self.ground.weight(g) for g in range(self.ground.dim)]
            for d in range(self.cutoff + 1):
                for word in eng.words_of_degree(d):
                    wwt = eng.word_weight(word)
                    for gpos, gwt in enumerate(gweights):
                        wt = tuple(a + b for a, b in zip(wwt, gwt))
                        blocks.setdefault((d, wt), []).append((word, gpos))
            self._blocks = blocks
            self._index = {
                key: {be: i for i, be in enumerate(basis)}
                for key, basis in blocks.items()
            }
        return self._blocks

    def block_basis(self, d, wt):
        return self.blocks().get((d, wt), [])

    def block_index(self, d, wt):
        self.blocks()
        return self._index.get((d, wt), {})

    def degree_dim(self, d):
        return sum(len(b) for (dd, _), b in self.blocks().items() if dd == d)


class GradedBlockMap:
    """Column-major block matrices of an induced map, one per
    (source U-degree, weight)."""

    def __init__(self, src_module, tgt_module, udeg, blocks):
        self.src_module = src_module
        self.tgt_module = tgt_module
        self.udeg = udeg
        self.blocks = blocks

    def block(self, d, wt):
        return self.blocks.get((d, wt), {})

    def is_zero(self):
        return all(not m for m in self.blocks.values())

    def compose(self, inner):
        """self o inner as block matrices (inner applied first); only blocks
        present in both factors survive."""
        assert inner.tgt_module.ground.key == self.src_module.ground.key
        out = {}
        for (d, wt), m_in in inner.blocks.items():
            m_out = self.blocks.get((d + inner.udeg, wt))
            if m_out is None:
                continue
            out[(d, wt)] = mat_compose(m_out, m_in)
        return GradedBlockMap(
            inner.src_module, self.tgt_module, self.udeg + inner.udeg, out
        )

    def rank_at(self, d, wt):
        mat = self.blocks.get((d, wt))
        if not mat:
            return 0
        ncols = len(self.tgt_module.block_basis(d + self.udeg, wt))
        rows = [dict(v) for v in mat.values()]
        return rank_kernel(SparseMatrix(len(rows), ncols, rows))[0]

    def kernel_dim_at(self, d, wt):
        return len(self.src_module.block_basis(d, wt)) - self.rank_at(d, wt)


def induce_map(eng, phi, src_module, tgt_module):
    """Expand a (verified) morphism element into block matrices.

    Blocks are produced for every source (d, weight) with d + udeg within
    the target cutoff; weight bookkeeping is asserted, so the element must
    be weight-preserving (in particular Cartan-equivariant)."""
    k = phi.udeg
    blocks = {}
    for (d, wt), basis in sorted(src_module.blocks().items()):
        if d + k > tgt_module.cutoff:
            continue
        tindex = tgt_module.block_index(d + k, wt)
        mat = {}
        for col, (word, gpos) in enumerate(basis):
            img = {}
            for w_m, lmat in phi.terms.items():
                lcol = lmat.get(gpos)
                if not lcol:
                    continue
                for w2, c2 in eng.straighten(word + w_m).items():
                    for tpos, ct in lcol.items():
                        row = tindex.get((w2, tpos))
                        assert row is not None, "weight bookkeeping broken"
                        cur = img.get(row, 0) + c2 * ct
                        if cur:
                            img[row] = cur
                        else:
                            img.pop(row, None)
            if img:
                mat[col] = img
        blocks[(d, wt)] = mat
    return GradedBlockMap(src_module, tgt_module, k, blocks)
