"""Tests for the windowed algebra models: gradations, bracket oracles,
distinguished relations, Jacobi sweeps, the 5-variable embedding, and the
scalar-subalgebra projection."""

from fractions import Fraction as F

import pytest
from hypothesis import given, assume, strategies as st

from superverma import (
    WindowError,
    bracket,
    build_algebra,
    embed_e36_in_e510,
    jacobi_check,
    sharp_to_flat,
)
from superverma.algebra import sharp_domain


E36 = build_algebra("e36", (-2, 4))
E38 = build_algebra("e38", (-3, 4))
E510 = build_algebra("e510", (-2, 4))


# ---------------------------------------------------------------------------
# gradations
# ---------------------------------------------------------------------------


def test_e36_dims():
    assert E36.dims() == {-2: 3, -1: 6, 0: 12, 1: 18, 2: 27, 3: 36, 4: 48}


def test_e38_dims():
    assert E38.dims() == {-3: 2, -2: 3, -1: 6, 0: 12, 1: 18, 2: 27, 3: 38, 4: 51}


def test_e38_prolongation_found_trace_currents():
    # the maximal prolongation at degree 4 strictly exceeds the span of
    # fields + currents (30 + 18): it contains three extra elements, one per
    # constant two-form mu, that kill depth 2, send dz_a to mu (x) eps^a,
    # and multiply the depth-1 generators into odd two-forms
    assert E38.info["prolongation_dims"] == {1: 18, 2: 27, 3: 38, 4: 51}
    assert E38.info["xi_count"] == 3
    o2 = E38.families["o2"]
    for p, vec in E38.families["xi"].items():
        se = E38.element({E38.names[i]: c for i, c in vec.items()})
        for i in range(1, 4):
            assert bracket(se, E38.element(f"del{i}")).is_zero()
        for a in "+-":
            got = bracket(se, E38.element("dz" + a))
            assert got == E38.element(
                {E38.names[i]: c for i, c in o2[((0, 0, 0), p, a)].items()}
            )
            # [xi_mu, x_i (x) eps^a] = (x_i mu) (x) eps^a
            for i in range(3):
                e = [0, 0, 0]
                e[i] = 1
                got = bracket(se, E38.element(f"d{a}{i + 1}"))
                assert got == E38.element(
                    {E38.names[t]: c for t, c in o2[(tuple(e), p, a)].items()}
                )


def test_e510_dims():
    assert E510.dims() == {-2: 5, -1: 10, 0: 24, 1: 40, 2: 70, 3: 105, 4: 160}


def test_parity_matches_degree():
    for m in (E36, E38, E510):
        for i in range(len(m.names)):
            assert m.parity[i] == m.degree[i] % 2


def test_window_validation():
    with pytest.raises(ValueError):
        build_algebra("e38", (-2, 2))  # misses depth 3
    with pytest.raises(ValueError):
        build_algebra("e36", (-3, 2))  # below depth 2
    with pytest.raises(ValueError):
        build_algebra("e510", (-2, 0))  # no positive part


# ---------------------------------------------------------------------------
# bracket oracles, frozen by hand
# ---------------------------------------------------------------------------


def test_e38_low_bracket_oracles():
    m = E38
    assert bracket(m.element("del1"), m.element("d+1")) == m.element("dz+")
    assert bracket(m.element("d+1"), m.element("del1")) == -1 * m.element("dz+")
    assert bracket(m.element("d+1"), m.element("d-2")) == -1 * m.element("del3")
    assert bracket(m.element("d-2"), m.element("d+1")) == -1 * m.element("del3")
    assert bracket(m.element("d+1"), m.element("d-1")).is_zero()
    assert bracket(m.element("x1d2"), m.element("d+2")) == m.element("d+1")
    assert bracket(m.element("x1d1"), m.element("dz+")) == F(-1, 2) * m.element("dz+")
    assert bracket(m.element("cur_e"), m.element("d-3")) == m.element("d+3")
    assert bracket(m.element("cur_e"), m.element("dz-")) == m.element("dz+")
    assert bracket(m.element("cur_e"), m.element("del1")).is_zero()
    assert bracket(m.element("x1d2"), m.element("x2d1")) == m.element(
        {"x1d1": 1, "x2d2": -1}
    )


def test_e38_same_sign_odd_generators_commute():
    for i in range(1, 4):
        for j in range(1, 4):
            for a in "+-":
                x = E38.element(f"d{a}{i}")
                y = E38.element(f"d{a}{j}")
                assert bracket(x, y).is_zero()


def test_e510_bracket_oracles():
    m = E510
    # [dx1^dx2, dx3^dx4] = del5 (contraction of the 5-variable volume)
    assert bracket(m.element("F-1_0"), m.element("F-1_7")) == m.element("S-2_4")
    # [dx1^dx2, dx4^dx5] = del3
    assert bracket(m.element("F-1_0"), m.element("F-1_9")) == m.element("S-2_2")
    # [dx1^dx2, dx1^dx2] = 0, odd diagonal
    assert bracket(m.element("F-1_0"), m.element("F-1_0")).is_zero()
    # odd-odd brackets are symmetric
    assert bracket(m.element("F-1_0"), m.element("F-1_7")) == bracket(
        m.element("F-1_7"), m.element("F-1_0")
    )


def test_e510_basis_invariants():
    from superverma.forms import field_div, dform

    for idx, name in enumerate(E510.names):
        kind, data = E510.payload[idx]
        if kind == "S":
            assert not field_div(data), name
        else:
            assert not dform(data), name


def test_e510_weights_match_cartan_brackets():
    for mth in range(4):
        h = E510.distinguished[f"h{mth + 1}"]
        for idx in range(len(E510.names)):
            got = bracket(h, E510.basis_element(idx))
            assert got == E510.weight[idx][mth] * E510.basis_element(idx)


def test_e38_weights_match_cartan_brackets():
    hs = [E38.distinguished["h1"], E38.distinguished["h2"], E38.distinguished["h3"]]
    for mth, h in enumerate(hs):
        for idx in range(len(E38.names)):
            got = bracket(h, E38.basis_element(idx))
            assert got == E38.weight[idx][mth] * E38.basis_element(idx)


# ---------------------------------------------------------------------------
# distinguished elements
# ---------------------------------------------------------------------------


def _check_sl_triples(m, pairs):
    d = m.distinguished
    for e, h, f in pairs:
        assert bracket(d[e], d[f]) == d[h]
        assert bracket(d[h], d[e]) == 2 * d[e]
        assert bracket(d[h], d[f]) == -2 * d[f]


def test_e36_chevalley_triples():
    _check_sl_triples(E36, [("e1", "h1", "f1"), ("e2", "h2", "f2"), ("e3", "h3", "f3")])


def test_e38_chevalley_triples():
    _check_sl_triples(E38, [("e1", "h1", "f1"), ("e2", "h2", "f2"), ("e3", "h3", "f3")])


def test_e510_chevalley_triples():
    _check_sl_triples(
        E510,
        [(f"e{i}", f"h{i}", f"f{i}") for i in range(1, 5)],
    )


def test_e38_lowest_root_relations():
    m = E38
    d = m.distinguished
    # the odd scalar (1/2) x3^2 (x) eps^-
    assert bracket(d["e0_prime"], d["f0"]) == d["f2"]
    assert bracket(d["e0_prime"], m.element("d+2")) == -1 * d["f12"]
    assert bracket(d["e0_prime"], m.element("d+3")).is_zero()
    for i in range(1, 4):
        assert bracket(d["e0_prime"], m.element(f"d-{i}")).is_zero()
    # the odd two-form -dx2^dx3 (x) eps^-
    assert bracket(d["e0_sharp"], d["f0"]) == d["h0_sharp"]
    assert d["h0_sharp"] == m.element({"x1d1": 1, "cur_h": F(-1, 2)})
    assert bracket(d["e0_sharp"], m.element("dz+")) == m.element("del1")
    assert bracket(d["e0_sharp"], m.element("dz-")).is_zero()
    assert bracket(d["e0_sharp"], m.element("d-1")) == -1 * m.element("cur_f")
    assert bracket(d["e0_sharp"], m.element("d-2")).is_zero()
    for i in range(1, 4):
        assert bracket(d["e0_sharp"], m.element(f"del{i}")).is_zero()


def test_e36_lowest_root_relations():
    d = E36.distinguished
    assert bracket(d["e0_flat"], d["f0"]) == d["h0_flat"]
    # the pair is odd isotropic: the coroot acts by zero on both members,
    # and each member self-commutes
    assert bracket(d["h0_flat"], d["e0_flat"]).is_zero()
    assert bracket(d["h0_flat"], d["f0"]).is_zero()
    assert bracket(d["e0_flat"], d["e0_flat"]).is_zero()
    assert bracket(d["f0"], d["f0"]).is_zero()


def test_e38_lowest_root_pairs_are_isotropic():
    d = E38.distinguished
    assert bracket(d["h0_sharp"], d["e0_sharp"]).is_zero()
    assert bracket(d["h0_sharp"], d["f0"]).is_zero()
    assert bracket(d["e0_sharp"], d["e0_sharp"]).is_zero()
    assert bracket(d["e0_prime"], d["e0_prime"]).is_zero()


def test_grading_element_eigenvalues():
    for m in (E36, E38):
        Y = m.distinguished["Y"]
        for idx in range(len(m.names)):
            got = bracket(Y, m.basis_element(idx))
            assert got == F(m.degree[idx], 3) * m.basis_element(idx)


# ---------------------------------------------------------------------------
# window semantics
# ---------------------------------------------------------------------------


def test_bracket_raises_outside_window():
    with pytest.raises(WindowError):
        bracket(E510.element("S4_0"), E510.element("S4_1"))
    with pytest.raises(WindowError):
        # depth sum -6 below the window even though the value would be 0
        bracket(E38.element("dz+"), E38.element("dz-"))
    with pytest.raises(WindowError):
        bracket(E36.element("O[000]dx1+"), E36.element("W[000]d1"))


def test_jacobi_zero_on_subwindows():
    assert jacobi_check(E36, (-2, 2)) == []
    assert jacobi_check(E38, (-3, 2)) == []
    assert jacobi_check(E510, (-2, 2)) == []


def test_jacobi_detects_fault_injection():
    m = build_algebra("e36", (-2, 4))
    i = m.index["W[000]d1"]
    j = m.index["W[100]d1"]
    key = (i, j)
    saved = m.table[key]
    try:
        corrupted = dict(saved)
        k = m.index["W[000]d2"]
        corrupted[k] = corrupted.get(k, F(0)) + 1
        m.table[key] = corrupted
        violations = jacobi_check(m, (-2, 2))
        assert violations
    finally:
        m.table[key] = saved
    assert jacobi_check(m, (-2, 2)) == []


# ---------------------------------------------------------------------------
# embedding into the 5-variable model
# ---------------------------------------------------------------------------


def test_embed_examples():
    # del1 -> del1
    img = embed_e36_in_e510(E36.element("W[000]d1"))
    assert img == E510.element("S-2_0")
    # the raising current maps to x4 d5
    img = embed_e36_in_e510(E36.distinguished["e3"])
    expected = E510.element(
        E510.info["express_even"]({((0, 0, 0, 1, 0), 4): F(1)}, 0)
    )
    assert img == expected
    # dx1 (x) eps+ -> dx1 ^ dz+
    img = embed_e36_in_e510(E36.element("O[000]dx1+"))
    expected = E510.element(
        E510.info["express_odd"]({((0, 0, 0, 0, 0), (0, 3)): F(1)}, -1)
    )
    assert img == expected


def test_embed_is_injective_on_basis():
    from superverma.exact import SpanSolver

    solver = SpanSolver()
    for i in range(len(E36.names)):
        img = embed_e36_in_e510(E36.basis_element(i))
        vec = {E510.index[nm]: c for nm, c in img.coeffs.items()}
        assert vec, E36.names[i]
        assert solver.insert(vec, i), E36.names[i]


def test_embed_preserves_brackets_sample():
    # the exhaustive sweep runs in the acceptance suite; spot-check a
    # representative mix of kinds and degrees here
    names = [
        "W[000]d1",
        "W[101]d2",
        "C[000]h",
        "C[110]e",
        "O[000]dx1+",
        "O[010]dx3-",
        "O[200]dx2+",
    ]
    for na in names:
        for nb in names:
            x, y = E36.element(na), E36.element(nb)
            s = x.degrees()[0] + y.degrees()[0]
            if s < -2 or s > 4:
                continue
            assert embed_e36_in_e510(bracket(x, y)) == bracket(
                embed_e36_in_e510(x), embed_e36_in_e510(y)
            )


# ---------------------------------------------------------------------------
# the scalar-subalgebra projection
# ---------------------------------------------------------------------------


def test_sharp_to_flat_examples():
    assert sharp_to_flat(E38.element("d+1")) == E36.element("O[000]dx1+")
    assert sharp_to_flat(E38.element("dz+")).is_zero()
    assert sharp_to_flat(E38.element("dz-")).is_zero()
    assert sharp_to_flat(E38.element("x1d2")) == E36.element("W[100]d2")
    assert sharp_to_flat(E38.element("cur_e")) == E36.element("C[000]e")
    # an odd scalar with quadratic coefficient: x3^2 (x) eps- -> 2 x3 dx3 (x) eps-
    x = 2 * E38.distinguished["e0_prime"]
    assert sharp_to_flat(x) == 2 * E36.element("O[001]dx3-")


def test_sharp_to_flat_rejects_two_forms():
    with pytest.raises(ValueError):
        sharp_to_flat(E38.distinguished["e0_sharp"])
    xi = E38.families["xi"][(0, 1)]
    with pytest.raises(ValueError):
        sharp_to_flat(E38.element({E38.names[i]: c for i, c in xi.items()}))


def test_sharp_to_flat_kernel_is_two_dimensional():
    # within the scalar subalgebra exactly the constant odd scalars die
    dom = sharp_domain(E38)
    killed = []
    for label, vec in dom:
        se = E38.element({E38.names[i]: c for i, c in vec.items()})
        if sharp_to_flat(se).is_zero():
            killed.append(label)
    assert killed == [("o0", (0, 0, 0), "+"), ("o0", (0, 0, 0), "-")]


def test_sharp_to_flat_kernel_not_central():
    # the projection kernel fails to be central: currents rotate it ...
    r = bracket(E38.element("cur_h"), E38.element("dz+"))
    assert r == E38.element("dz+")
    # ... and non-divergence-free fields push it out of itself entirely
    fam = E38.families["W"]
    x33 = E38.element({E38.names[i]: c for i, c in fam[((0, 0, 2), 2)].items()})
    r = bracket(x33, E38.element("dz+"))
    assert r == -1 * E38.element("d+3")


def test_sharp_to_flat_homomorphism_fails_beyond_divergence_constant():
    # documented obstruction: for div-nonconstant fields the kernel is not
    # an ideal, so the projection cannot intertwine those brackets
    fam = E38.families["W"]
    x33 = E38.element({E38.names[i]: c for i, c in fam[((0, 0, 2), 2)].items()})
    dzp = E38.element("dz+")
    lhs = sharp_to_flat(bracket(x33, dzp))
    rhs = bracket(sharp_to_flat(x33), sharp_to_flat(dzp))
    assert lhs != rhs


def test_sharp_to_flat_homomorphism_on_divergence_free_part():
    fam = E38.families["W"]
    # divergence-free combinations and odd scalars
    combos = [
        {((1, 0, 0), 1): F(1)},  # x1 d2
        {((0, 1, 0), 0): F(1)},  # x2 d1
        {((2, 0, 0), 1): F(1)},  # x1^2 d2
        {((1, 1, 0), 0): F(1), ((0, 2, 0), 1): F(-1, 2)},  # div-free mix
        {((1, 0, 0), 0): F(1), ((0, 1, 0), 1): F(-1)},  # h-type
    ]
    elems = []
    for combo in combos:
        acc = {}
        for key, c in combo.items():
            for i2, c2 in fam[key].items():
                acc[E38.names[i2]] = acc.get(E38.names[i2], F(0)) + c * c2
        elems.append(E38.element(acc))
    for a in "+-":
        elems.append(E38.element(f"d{a}1"))
        elems.append(E38.element(f"d{a}3"))
    for x in elems:
        for y in elems:
            s = x.degrees()[0] + y.degrees()[0]
            if s < -2 or s > 4:
                continue
            assert sharp_to_flat(bracket(x, y)) == bracket(
                sharp_to_flat(x), sharp_to_flat(y)
            )


# ---------------------------------------------------------------------------
# property tests
# ---------------------------------------------------------------------------


@st.composite
def _homogeneous_pair(draw, model):
    degs = sorted(model.by_degree)
    da = draw(st.sampled_from(degs))
    db = draw(st.sampled_from(degs))
    assume(model.window[0] <= da + db <= model.window[1])
    ia = draw(st.sampled_from(model.by_degree[da]))
    ib = draw(st.sampled_from(model.by_degree[db]))
    ca = draw(st.integers(-3, 3).filter(bool))
    cb = draw(st.integers(-3, 3).filter(bool))
    return ia, ib, F(ca), F(cb)


@given(_homogeneous_pair(E38))
def test_super_anticommutativity_e38(data):
    ia, ib, ca, cb = data
    x = ca * E38.basis_element(ia)
    y = cb * E38.basis_element(ib)
    sign = -1 if (E38.parity[ia] and E38.parity[ib]) else 1
    assert bracket(x, y) == (-sign) * bracket(y, x)


@given(_homogeneous_pair(E510))
def test_super_anticommutativity_e510(data):
    ia, ib, ca, cb = data
    x = ca * E510.basis_element(ia)
    y = cb * E510.basis_element(ib)
    sign = -1 if (E510.parity[ia] and E510.parity[ib]) else 1
    assert bracket(x, y) == (-sign) * bracket(y, x)


@given(_homogeneous_pair(E36))
def test_bracket_degree_additive_e36(data):
    ia, ib, ca, cb = data
    r = bracket(ca * E36.basis_element(ia), cb * E36.basis_element(ib))
    if not r.is_zero():
        assert r.degrees() == [E36.degree[ia] + E36.degree[ib]]


def _valid_degree_triples(model):
    wmin, wmax = model.window
    degs = sorted(model.by_degree)
    out = []
    for a in degs:
        for b in degs:
            for c in degs:
                if all(
                    wmin <= s <= wmax
                    for s in (a + b, a + c, b + c, a + b + c)
                ):
                    out.append((a, b, c))
    return out


@given(st.data())
def test_random_jacobi_triples(data):
    model = data.draw(st.sampled_from([E36, E38, E510]))
    da, db, dc = data.draw(st.sampled_from(_valid_degree_triples(model)))
    i = data.draw(st.sampled_from(model.by_degree[da]))
    j = data.draw(st.sampled_from(model.by_degree[db]))
    k = data.draw(st.sampled_from(model.by_degree[dc]))
    x, y, z = (model.basis_element(t) for t in (i, j, k))
    sign = -1 if (model.parity[i] and model.parity[j]) else 1
    lhs = bracket(bracket(x, y), z)
    rhs = bracket(x, bracket(y, z)) - sign * bracket(y, bracket(x, z))
    assert lhs == rhs
