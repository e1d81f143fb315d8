"""Exact linear algebra over the rationals.

Everything downstream (brackets, induced maps, homology counts) reduces to
exact row reduction of sparse rational matrices, so nothing in this package
touches floats: Fraction in, Fraction out.

Conventions:
- a sparse vector is a dict mapping index -> nonzero Fraction (zeros are
  never stored; helpers drop entries that cancel);
- a SparseMatrix stores rows as sparse vectors; missing entries are zero;
- a polynomial is a dict mapping exponent tuples -> Fraction; poly_mul adds
  exponent tuples componentwise.

Kernel vectors returned by rank_kernel are integer-primitive (denominators
cleared, content divided out) with the lowest-index entry positive, so test
oracles can freeze them literally.
"""

from fractions import Fraction
from math import gcd

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def vec_iadd(target: dict, source: dict, coeff=ONE) -> dict:
    """In-place target += coeff * source, dropping cancelled entries."""
    if not coeff:
        return target
    for k, v in source.items():
        w = target.get(k, ZERO) + coeff * v
        if w:
            target[k] = w
        else:
            target.pop(k, None)
    return target


def vec_add(u: dict, v: dict, coeff=ONE) -> dict:
    out = dict(u)
    return vec_iadd(out, v, coeff)


def vec_scale(u: dict, coeff) -> dict:
    if not coeff:
        return {}
    return {k: coeff * v for k, v in u.items()}


def poly_mul(p: dict, q: dict) -> dict:
    """Multiply two polynomials given as {exponent tuple: coefficient}."""
    out: dict = {}
    for ea, ca in p.items():
        for eb, cb in q.items():
            key = tuple(x + y for x, y in zip(ea, eb))
            w = out.get(key, ZERO) + ca * cb
            if w:
                out[key] = w
            else:
                del out[key]
    return out


def _primitive(vec: dict) -> dict:
    """Scale a sparse rational vector to integer-primitive, lead positive."""
    if not vec:
        return vec
    denom = 1
    for v in vec.values():
        denom = denom * v.denominator // gcd(denom, v.denominator)
    ints = {k: int(v * denom) for k, v in vec.items()}
    g = 0
    for v in ints.values():
        g = gcd(g, abs(v))
    lead = ints[min(ints)]
    sign = -1 if lead < 0 else 1
    return {k: Fraction(sign * v, g) for k, v in ints.items()}


class SparseMatrix:
    """Sparse rational matrix with explicit shape.

    Rows are kept as {col: Fraction}.  The shape is authoritative: rank and
    kernel computations use ncols even when trailing columns are empty.
    """

    def __init__(self, nrows: int, ncols: int, rows=None):
        self.nrows = nrows
        self.ncols = ncols
        self.rows = [dict() for _ in range(nrows)] if rows is None else rows
        assert len(self.rows) == nrows

    @classmethod
    def from_dense(cls, data) -> "SparseMatrix":
        rows = []
        ncols = 0
        for drow in data:
            ncols = max(ncols, len(drow))
            rows.append({j: Fraction(v) for j, v in enumerate(drow) if v})
        return cls(len(rows), ncols, rows)

    def set(self, i: int, j: int, value) -> None:
        assert 0 <= i < self.nrows and 0 <= j < self.ncols
        value = Fraction(value)
        if value:
            self.rows[i][j] = value
        else:
            self.rows[i].pop(j, None)

    def get(self, i: int, j: int):
        return self.rows[i].get(j, ZERO)

    def add_to(self, i: int, j: int, value) -> None:
        self.set(i, j, self.get(i, j) + Fraction(value))

    def transpose(self) -> "SparseMatrix":
        rows = [dict() for _ in range(self.ncols)]
        for i, row in enumerate(self.rows):
            for j, v in row.items():
                rows[j][i] = v
        return SparseMatrix(self.ncols, self.nrows, rows)

    def apply(self, vec: dict) -> dict:
        """Matrix-vector product, vec indexed by columns."""
        out: dict = {}
        for i, row in enumerate(self.rows):
            s = ZERO
            for j, v in row.items():
                c = vec.get(j)
                if c is not None:
                    s += v * c
            if s:
                out[i] = s
        return out

    def compose(self, other: "SparseMatrix") -> "SparseMatrix":
        """self @ other."""
        assert self.ncols == other.nrows
        other_rows = other.rows
        rows = []
        for row in self.rows:
            acc: dict = {}
            for k, v in row.items():
                vec_iadd(acc, other_rows[k], v)
            rows.append(acc)
        return SparseMatrix(self.nrows, other.ncols, rows)

    def is_zero(self) -> bool:
        return all(not row for row in self.rows)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparseMatrix)
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.rows == other.rows
        )


def rref(rows, drop_zero_rows: bool = True):
    """Reduced row echelon form of sparse rows.

    Returns (pivot_cols, reduced_rows): pivot_cols[i] is the pivot column of
    reduced_rows[i]; each pivot entry is 1 and is the only nonzero in its
    column among the reduced rows.  Deterministic: pivots are chosen left to
    right, and among candidate rows the sparsest (ties by original order).
    """
    work = [dict(r) for r in rows if r] if drop_zero_rows else [dict(r) for r in rows]
    done_rows: list = []
    pivot_cols: list = []
    while work:
        col = min(min(r) for r in work)
        cand = [r for r in work if col in r]
        cand.sort(key=len)
        pivot = cand[0]
        work.remove(pivot)
        inv = ONE / pivot[col]
        pivot = {k: v * inv for k, v in pivot.items()}
        for r in work:
            if col in r:
                vec_iadd(r, pivot, -r[col])
        work = [r for r in work if r]
        for r in done_rows:
            if col in r:
                vec_iadd(r, pivot, -r[col])
        done_rows.append(pivot)
        pivot_cols.append(col)
    order = sorted(range(len(pivot_cols)), key=lambda i: pivot_cols[i])
    return [pivot_cols[i] for i in order], [done_rows[i] for i in order]


def reduce_vector(pivot_cols, reduced_rows, vec: dict) -> dict:
    """Eliminate the pivot coordinates of vec against an rref basis."""
    out = dict(vec)
    for col, row in zip(pivot_cols, reduced_rows):
        c = out.get(col)
        if c:
            vec_iadd(out, row, -c)
    return out


def kernel_with_free(matrix: SparseMatrix):
    """(rank, free_cols, kernel_basis); kernel_basis[i] has free column
    free_cols[i] (its only support outside the pivot columns)."""
    pivot_cols, reduced = rref(matrix.rows)
    rank = len(pivot_cols)
    pivot_set = set(pivot_cols)
    free_cols = []
    kernel = []
    for col in range(matrix.ncols):
        if col in pivot_set:
            continue
        vec = {col: ONE}
        for pcol, row in zip(pivot_cols, reduced):
            c = row.get(col)
            if c:
                vec[pcol] = -c
        free_cols.append(col)
        kernel.append(_primitive(vec))
    assert rank + len(kernel) == matrix.ncols
    return rank, free_cols, kernel


def rank_kernel(matrix: SparseMatrix):
    """Exact (rank, kernel_basis) of a SparseMatrix.

    kernel_basis is a list of primitive sparse vectors (see module docstring),
    sorted by their free column, spanning the right kernel.
    """
    rank, _, kernel = kernel_with_free(matrix)
    return rank, kernel


def express_in_span(vectors, target: dict):
    """Coefficients writing target = sum c_i * vectors[i], or None.

    vectors and target are sparse dicts over any common (hashable) key space.
    When the vectors are dependent the representation returned is the one
    picked by the deterministic elimination order.
    """
    key_index: dict = {}
    for vec in list(vectors) + [target]:
        for k in vec:
            if k not in key_index:
                key_index[k] = len(key_index)
    m = len(vectors)
    rows = [dict() for _ in range(len(key_index))]
    for j, vec in enumerate(vectors):
        for k, v in vec.items():
            rows[key_index[k]][j] = v
    for k, v in target.items():
        rows[key_index[k]][m] = v
    _, free_cols, kernel = kernel_with_free(SparseMatrix(len(rows), m + 1, rows))
    for fcol, vec in zip(free_cols, kernel):
        if fcol == m:
            d = vec[m]
            return [-vec.get(j, ZERO) / d for j in range(m)]
    if not target:
        return [ZERO] * m
    return None


class SpanSolver:
    """Incremental exact span membership with coefficient recovery.

    Vectors (sparse dicts over comparable keys) are inserted one at a time
    under a caller-chosen tag.  The solver keeps a mutually reduced echelon
    of the independent ones, so that express() answers many membership
    queries against the same span cheaply and deterministically.
    """

    def __init__(self):
        self.rows = []  # (pivot_key, vec, comb) with vec[pivot_key] == 1

    def _reduce(self, vec, comb):
        for pkey, rvec, rcomb in self.rows:
            c = vec.get(pkey)
            if c:
                vec_iadd(vec, rvec, -c)
                vec_iadd(comb, rcomb, -c)
        return vec, comb

    def insert(self, vec, tag):
        """Add a vector under tag; returns False if it was already in the
        span (in which case it is not stored)."""
        vec, comb = self._reduce(dict(vec), {tag: ONE})
        if not vec:
            return False
        pkey = min(vec)
        lead = vec[pkey]
        vec = {k: v / lead for k, v in vec.items()}
        comb = {k: v / lead for k, v in comb.items()}
        for _, rvec, rcomb in self.rows:
            c = rvec.get(pkey)
            if c:
                vec_iadd(rvec, vec, -c)
                vec_iadd(rcomb, comb, -c)
        self.rows.append((pkey, vec, comb))
        return True

    def express(self, target):
        """Tag-keyed coefficients writing target over the inserted vectors,
        or None when target is outside the span."""
        residual = dict(target)
        combo = {}
        for pkey, rvec, rcomb in self.rows:
            c = residual.get(pkey)
            if c:
                vec_iadd(residual, rvec, -c)
                vec_iadd(combo, rcomb, c)
        if residual:
            return None
        return combo
