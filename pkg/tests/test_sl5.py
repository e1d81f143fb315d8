"""Tests for the five-variable polynomial ground modules: matrix actions,
pair operators, quadric systems, and the certified top components."""

from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from superverma.exact import poly_mul, vec_iadd
from superverma.sl5_poly import (
    PAIR_INDEX,
    QUADS,
    act_coords,
    base_monomials,
    dim_irrep_sl5,
    high_component,
    pluecker_apply,
    quadric_kernel,
    sl5_act,
    sl5_weight,
    theta,
    theta_coords,
)

ONE = F(1)


def _v(i, tag="A"):
    width = 10 if tag == "C" else 15
    m = [0] * width
    m[i] = 1
    return {tuple(m): ONE}


def _w(i, j, tag="A"):
    width = 10 if tag == "C" else 15
    pos = PAIR_INDEX[(min(i, j), max(i, j))]
    sign = 1 if i < j else -1
    m = [0] * width
    m[5 + pos] = 1
    return {tuple(m): F(sign)}


def _s(i):
    m = [0] * 10
    m[5 + i] = 1
    return {tuple(m): ONE}


def _quadric(a, b, c, d, tag="A"):
    out: dict = {}
    for pq, rs, sgn in (((a, b), (c, d), 1), ((a, c), (b, d), -1), ((a, d), (b, c), 1)):
        vec_iadd(out, poly_mul(_w(*pq, tag), _w(*rs, tag)), F(sgn))
    return out


# ---------------------------------------------------------------------------
# matrix-unit action
# ---------------------------------------------------------------------------


def test_action_on_vectors():
    assert sl5_act(0, 1, _v(1, "A"), "A") == _v(0, "A")
    assert sl5_act(0, 1, _w(2, 3, "A"), "A") == {}
    assert sl5_act(0, 1, _v(0, "B"), "B") == {k: -c for k, c in _v(1, "B").items()}
    assert sl5_act(0, 1, _w(1, 2), "A") == _w(0, 2)
    assert sl5_act(1, 0, _w(0, 2), "A") == _w(1, 2)
    assert sl5_act(0, 1, _w(0, 2, "B"), "B") == {k: -c for k, c in _w(1, 2, "B").items()}
    # repeated index collapses the pair variable
    assert sl5_act(0, 1, _w(0, 1), "A") == {}
    # C mixes natural and dual vector slots
    assert sl5_act(0, 1, _v(1, "C"), "C") == _v(0, "C")
    assert sl5_act(0, 1, _s(0), "C") == {k: -c for k, c in _s(1).items()}


def _sample_polys(tag):
    polys = [_v(0, tag), _v(4, tag)]
    if tag == "C":
        polys += [_s(2), poly_mul(_v(1, tag), _s(3)), poly_mul(_s(0), _s(0))]
    else:
        polys += [_w(0, 1, tag), _w(2, 4, tag), poly_mul(_v(2, tag), _w(1, 3, tag))]
    return polys


@pytest.mark.parametrize("tag", ["A", "B", "C"])
def test_commutation_relations(tag):
    # [E_ab, E_cd] = delta_bc E_ad - delta_da E_cb on sample polynomials
    units = [(0, 1), (1, 0), (1, 2), (2, 1), (3, 4), (4, 0), (2, 2)]
    for a, b in units:
        for c, d in units:
            for f in _sample_polys(tag):
                lhs = sl5_act(a, b, sl5_act(c, d, f, tag), tag)
                vec_iadd(lhs, sl5_act(c, d, sl5_act(a, b, f, tag), tag), -ONE)
                rhs: dict = {}
                if b == c:
                    vec_iadd(rhs, sl5_act(a, d, f, tag))
                if d == a:
                    vec_iadd(rhs, sl5_act(c, b, f, tag), -ONE)
                assert lhs == rhs


@pytest.mark.parametrize("tag", ["A", "B", "C"])
def test_weight_is_action_eigenvalue(tag):
    for f in _sample_polys(tag):
        for mono in f:
            wt = sl5_weight(tag, mono)
            unit = {mono: ONE}
            for k in range(4):
                img: dict = {}
                vec_iadd(img, sl5_act(k, k, unit, tag))
                vec_iadd(img, sl5_act(k + 1, k + 1, unit, tag), -ONE)
                assert img == ({mono: F(wt[k])} if wt[k] else {})


# ---------------------------------------------------------------------------
# theta operators
# ---------------------------------------------------------------------------


def test_theta_examples():
    assert theta("A", 0, 1, poly_mul(_w(0, 1), _w(2, 3))) == _w(2, 3)
    assert theta("B", 0, 1, {tuple([0] * 15): ONE}) == _w(0, 1, "B")
    assert theta("C", 0, 1, _v(1, "C")) == _s(0)
    for tag, f in (("A", poly_mul(_w(0, 1), _w(2, 3))), ("B", _v(0, "B")), ("C", _v(1, "C"))):
        plus = theta(tag, 1, 0, f)
        minus = {k: -c for k, c in theta(tag, 0, 1, f).items()}
        assert plus == minus


def test_theta_bidegree_shifts():
    f = poly_mul(_v(0), _w(0, 1))
    assert all(m[:5] == (1, 0, 0, 0, 0) and sum(m[5:]) == 0 for m in theta("A", 0, 1, f))
    g = theta("B", 2, 3, _v(0, "B"))
    assert all(sum(m[:5]) == 1 and sum(m[5:]) == 1 for m in g)
    h = theta("C", 0, 1, poly_mul(_v(1, "C"), _v(2, "C")))
    assert all(sum(m[:5]) == 1 and sum(m[5:]) == 1 for m in h)


@pytest.mark.parametrize("tag", ["A", "B", "C"])
def test_theta_equivariance(tag):
    # [rho(E_ab), theta_ij] = -delta_ai theta_bj - delta_aj theta_ib
    pairs = [(0, 1), (1, 2), (0, 4), (2, 3)]
    units = [(0, 1), (1, 0), (2, 1), (4, 3), (0, 2)]
    for a, b in units:
        for i, j in pairs:
            for f in _sample_polys(tag):
                lhs = sl5_act(a, b, theta(tag, i, j, f), tag)
                vec_iadd(lhs, theta(tag, i, j, sl5_act(a, b, f, tag)), -ONE)
                rhs: dict = {}
                if a == i and b != j:
                    vec_iadd(rhs, theta(tag, b, j, f), -ONE)
                if a == j and i != b:
                    vec_iadd(rhs, theta(tag, i, b, f), -ONE)
                assert lhs == rhs


def test_theta_quadric_identity_family_c():
    # theta_ab theta_cd - theta_ac theta_bd + theta_ad theta_bc = 0 on S_C
    samples = [_v(0, "C"), poly_mul(_v(1, "C"), _v(2, "C")),
               poly_mul(poly_mul(_v(0, "C"), _v(0, "C")), _s(4))]
    for a, b, c, d in QUADS:
        for f in samples:
            acc: dict = {}
            for pq, rs, sgn in (((a, b), (c, d), 1), ((a, c), (b, d), -1),
                                ((a, d), (b, c), 1)):
                term = theta("C", *pq, theta("C", *rs, f))
                vec_iadd(acc, term, F(sgn))
            assert acc == {}


# ---------------------------------------------------------------------------
# quadric system
# ---------------------------------------------------------------------------


def test_pluecker_on_quadric_is_scalar():
    q = _quadric(0, 1, 2, 3)
    assert pluecker_apply("A", q, (0, 1, 2, 3)) == {tuple([0] * 15): F(3)}


def test_pluecker_examples():
    sq = poly_mul(_w(0, 1), _w(0, 1))
    assert pluecker_apply("A", sq, (0, 1, 2, 3)) == {}
    for mono in base_monomials("A", 2, 0):
        assert pluecker_apply("A", {mono: ONE}, (0, 1, 2, 3)) == {}
    # repeated indices cancel rather than erroring
    assert pluecker_apply("A", _quadric(0, 1, 2, 3), (0, 1, 0, 3)) == {}
    assert pluecker_apply("A", _quadric(0, 1, 2, 3), (2, 2, 3, 4)) == {}
    # B multiplies by the quadric polynomial
    assert pluecker_apply("B", {tuple([0] * 15): ONE}, (0, 1, 2, 3)) == _quadric(0, 1, 2, 3, "B")


def test_quadric_kernel_dimensions():
    # the joint kernel equals the top component exactly when the slice has
    # no pair factor, one vector factor at most, or no vector factor; with
    # exactly one pair factor the system is identically zero and the kernel
    # is the whole slice
    table = {
        (0, 0): (1, 0, 1),
        (0, 1): (10, 0, 10),
        (1, 0): (5, 0, 5),
        (1, 1): (50, 0, 50),
        (0, 2): (55, 5, 50),
        (2, 1): (150, 0, 150),
        (1, 2): (275, 25, 250),
        (0, 3): (220, 45, 175),
    }
    for (m, n), expect in table.items():
        assert quadric_kernel(m, n) == expect
    assert quadric_kernel(0, 2)[2] == dim_irrep_sl5(0, 2, 0, 0)
    assert quadric_kernel(1, 1)[2] != dim_irrep_sl5(1, 1, 0, 0)


def test_invariant_vector_separates_the_systems():
    # the unique invariant in slice (1,2) of family A generates a trivial
    # submodule that the quadric system does not kill; it lies outside the
    # top component
    inv: dict = {}
    for i in range(5):
        rest = [k for k in range(5) if k != i]
        sgn = 1 if i % 2 == 0 else -1
        q = _quadric(*rest)
        for mono, co in q.items():
            key = tuple(co2 + (1 if p == i else 0) for p, co2 in enumerate(mono[:5])) + mono[5:]
            inv[key] = inv.get(key, F(0)) + sgn * co
    for a in range(5):
        for b in range(5):
            if a != b:
                assert sl5_act(a, b, inv, "A") == {}
    assert pluecker_apply("A", inv, (0, 1, 2, 3)) != {}
    with pytest.raises(ValueError):
        high_component("A", 1, 2).to_coords(inv)


# ---------------------------------------------------------------------------
# top components
# ---------------------------------------------------------------------------


def test_dim_irrep_frozen():
    assert dim_irrep_sl5(0, 0, 0, 0) == 1
    assert dim_irrep_sl5(1, 0, 0, 0) == 5
    assert dim_irrep_sl5(0, 1, 0, 0) == 10
    assert dim_irrep_sl5(0, 0, 1, 0) == 10
    assert dim_irrep_sl5(0, 0, 0, 1) == 5
    assert dim_irrep_sl5(1, 1, 0, 0) == 40
    assert dim_irrep_sl5(1, 0, 0, 1) == 24
    assert dim_irrep_sl5(0, 2, 0, 0) == 50
    assert dim_irrep_sl5(2, 1, 0, 0) == 105
    assert dim_irrep_sl5(1, 2, 0, 0) == 175
    assert dim_irrep_sl5(0, 4, 0, 0) == 490


def test_high_component_dimensions():
    table = {
        ("A", 0, 2): 50,
        ("A", 1, 1): 40,
        ("A", 2, 0): 15,
        ("A", 1, 2): 175,
        ("B", 1, 0): 10,
        ("B", 0, 1): 5,
        ("B", 2, 0): 50,
        ("B", 1, 1): 40,
        ("C", 1, 1): 24,
        ("C", 2, 1): 70,
        ("C", 0, 3): 35,
    }
    for (tag, m, n), d in table.items():
        hc = high_component(tag, m, n)
        assert hc.dim == d
        assert len(hc.weights) == d


def test_pure_vector_slices_are_whole():
    for tag in ("A", "C"):
        hc = high_component(tag, 3, 0)
        assert hc.dim == len(hc.ambient) == 35


def test_coords_roundtrip():
    for tag, m, n in (("A", 1, 1), ("B", 1, 1), ("C", 1, 1)):
        hc = high_component(tag, m, n)
        for k in (0, hc.dim // 2, hc.dim - 1):
            coords = {k: F(3, 2)}
            back = hc.to_coords(hc.from_coords(coords))
            assert back == coords


def test_component_weights_match_polynomials():
    for tag, m, n in (("A", 1, 1), ("B", 2, 0), ("C", 1, 1)):
        hc = high_component(tag, m, n)
        for k in range(hc.dim):
            poly = hc.from_coords({k: ONE})
            wts = {sl5_weight(tag, mono) for mono in poly}
            assert wts == {hc.weights[k]}


def test_act_coords_closure_and_relations():
    hc = high_component("A", 1, 1)
    # lowering then raising a highest coordinate reproduces a multiple
    top = [k for k in range(hc.dim) if hc.weights[k] == (1, 1, 0, 0)]
    assert len(top) == 1
    k0 = top[0]
    down = act_coords(hc, 1, 0, {k0: ONE})
    assert down
    back = act_coords(hc, 0, 1, down)
    assert set(back) == {k0}


def test_theta_coords_between_components():
    src = high_component("A", 1, 2)
    dst = high_component("A", 1, 1)
    moved = sum(bool(theta_coords(src, dst, 0, 1, {k: ONE})) for k in range(src.dim))
    assert moved > 0
    # B-family theta lands in the quotient
    srcb = high_component("B", 1, 1)
    dstb = high_component("B", 2, 1)
    img = theta_coords(srcb, dstb, 0, 1, {0: ONE})
    assert img


def test_quadric_multiples_vanish_in_b_quotients():
    # every quadric times any monomial reduces to zero in the quotient
    for a, b, c, d in QUADS:
        q = _quadric(a, b, c, d, "B")
        for vdeg, wdeg in ((0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2)):
            for mono in base_monomials("B", vdeg, wdeg):
                prod = poly_mul(q, {mono: ONE})
                label_m, label_n = wdeg + 2, vdeg
                hc = high_component("B", label_m, label_n)
                assert hc.to_coords(prod) == {}


def test_theta_preserves_a_tops():
    for m, n in ((0, 2), (1, 1), (1, 2), (2, 1)):
        src = high_component("A", m, n)
        dst = high_component("A", m, n - 1)
        for k in range(src.dim):
            poly = src.from_coords({k: ONE})
            for i, j in ((0, 1), (1, 3), (2, 4)):
                dst.to_coords(theta("A", i, j, poly))


def test_quadric_derivatives_vanish_on_a_tops():
    for m, n in ((0, 2), (1, 1), (1, 2), (0, 3)):
        hc = high_component("A", m, n)
        for k in range(0, hc.dim, 7):
            poly = hc.from_coords({k: ONE})
            for quad in QUADS:
                assert pluecker_apply("A", poly, quad) == {}


@given(st.integers(0, 2), st.integers(0, 2), st.sampled_from(["A", "B", "C"]))
def test_component_dim_matches_oracle(m, n, tag):
    hc = high_component(tag, m, n)
    if tag == "A":
        want = dim_irrep_sl5(m, n, 0, 0)
    elif tag == "B":
        want = dim_irrep_sl5(0, 0, m, n)
    else:
        want = dim_irrep_sl5(m, 0, 0, n)
    assert hc.dim == want
