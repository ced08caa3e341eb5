from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bctorus.unitary import (
    BiDegree,
    MatElem,
    U_op,
    bc_roots,
    bidegree,
    bracket,
    canonical_form,
    cell_basis,
    centroid_act,
    coroot,
    decompose,
    e_mat,
    h_elem,
    homogeneous_degree,
    in_F,
    in_S,
    mat_coords,
    root_space_basis,
    sl2_check,
    star,
    trace,
    trace_form,
    u_mat,
)
from bctorus.torus import center_project, involute

from conftest import make_data


def t(data, *sigma, c=1):
    return data.spec.monomial(sigma, c)


# --- basic matrices ------------------------------------------------------------


def test_star_examples(setup_a, setup_b):
    a = setup_a
    assert star(e_mat(a, 1, 5, t(a, 1))) == e_mat(a, 2, 6, t(a, 1))
    assert u_mat(a, 1, 5) == e_mat(a, 1, 5) - e_mat(a, 2, 6)
    b = setup_b
    # gamma_9^-1 * 1 * gamma_8 = t2^-1 t1
    expected = b.spec.gen(2).inverse() * b.spec.gen(1)
    assert star(e_mat(b, 8, 9)) == e_mat(b, 9, 8, expected)


def test_index_range(setup_a):
    with pytest.raises(IndexError):
        e_mat(setup_a, 0, 1)
    with pytest.raises(IndexError):
        u_mat(setup_a, 1, 8)


def test_U_examples(setup_a):
    a = setup_a
    assert U_op(a, 1, 1, 2) == u_mat(a, 1, 5)
    assert U_op(a, 7, 1, 1) == u_mat(a, 7, 6)
    for i in range(1, a.l + 1):
        # symmetric coefficients give U(x_i.a, x_i) = 0 in the hyperbolic block
        if i <= 2 * a.r:
            assert not U_op(a, i, t(a, 2), i)


def test_bracket_example(setup_a):
    a = setup_a
    al, be = t(a, 1, c=2), t(a, -1, c=3)
    assert bracket(u_mat(a, 1, 5, al), u_mat(a, 5, 4, be)) == u_mat(a, 1, 4, al * be)


def test_uident4_needs_distinct_indices(setup_a):
    # i = j = 1, k = 2: U(x1, x1) vanishes for the identity involution but U(x1, x2) does not
    a = setup_a
    lhs = bracket(U_op(a, 1, 1, 1), U_op(a, a.bar(1), 1, 2))
    assert not lhs
    assert U_op(a, 1, 1, 2)


def test_trace_examples(setup_a, setup_b):
    a = setup_a
    assert not trace(u_mat(a, 1, 3, t(a, 1)))
    b = setup_b
    alpha = b.spec.gen(1) * b.spec.gen(3)
    tr = trace(u_mat(b, 9, 9, alpha))
    assert not center_project(tr - alpha + involute(alpha))


def test_membership_examples(setup_a, setup_b):
    a = setup_a
    h1 = u_mat(a, 1, 1)
    assert h1 == e_mat(a, 1, 1) - e_mat(a, 6, 6)
    assert in_S(h1)
    assert not in_F(e_mat(a, 1, 1))
    b = setup_b
    u = u_mat(b, 9, 9, b.spec.gen(3))
    assert in_F(u) and not in_S(u)
    assert center_project(trace(u)) == b.spec.gen(3) * 2


# --- canonical form ---------------------------------------------------------------


def test_canonical_form_examples(setup_a, setup_b):
    a = setup_a
    cf = canonical_form(u_mat(a, 1, 5, t(a, 1)))
    assert cf.alpha == {(1, 5): t(a, 1)} and cf.b == {}
    zero = canonical_form(MatElem.zero(a))
    assert zero.alpha == {} and zero.b == {}
    # the duplicate u_{bar j, bar i} collapses onto the i < bar j representative
    b = setup_b
    alpha = b.spec.gen(1)
    u = u_mat(b, 6, 2, alpha)
    cf = canonical_form(u)
    assert set(cf.alpha) == {(5, 1)}
    assert cf.reassemble(b) == u
    cf = canonical_form(u_mat(b, 8, 9, alpha))
    assert set(cf.alpha) == {(8, 9)}
    assert cf.reassemble(b) == u_mat(b, 8, 9, alpha)
    with pytest.raises(ValueError):
        canonical_form(e_mat(a, 1, 1))


def test_canonical_form_skew_diagonal(setup_b):
    b = setup_b
    skew = b.spec.gen(3)
    T = u_mat(b, 1, 6, skew)
    cf = canonical_form(T)
    assert cf.reassemble(b) == T
    assert all(involute(v) == -v for v in cf.b.values())


# --- gradings -------------------------------------------------------------------


def test_bidegree_examples(setup_a, setup_b):
    assert bidegree(setup_a, 1, 2, (0,)) == BiDegree((1, -1, 0), (0,))
    assert bidegree(setup_b, 1, 8, (1, 1, 0)) == BiDegree((1, 0, 0), (1, 2, 0))
    assert homogeneous_degree(h_elem(setup_a, 1)) == BiDegree((0, 0, 0), (0,))


def test_decompose_sums_back(setup_b):
    b = setup_b
    T = u_mat(b, 1, 8, t(b, 1, 0, 0)) + u_mat(b, 2, 3, t(b, 0, 1, 0)) + h_elem(b, 2)
    parts = decompose(T)
    assert len(parts) >= 3
    total = MatElem.zero(b)
    for deg, part in parts.items():
        assert homogeneous_degree(part) == deg
        total = total + part
    assert total == T


def test_root_space_examples(setup_a, setup_b):
    a = setup_a
    for h in range(-4, 5):
        assert root_space_basis(a, (2, 0, 0), (h,)) == []
    b = setup_b
    assert root_space_basis(b, (1, 1, 0), (2, 0, 0)) == [U_op(b, 1, b.spec.gen(1), 2)]
    assert root_space_basis(b, (1, 0, 0), (1, 0, 0)) == [U_op(b, 8, 1, 1)]
    assert root_space_basis(b, (1, 1, 0), (1, 0, 0)) == []
    with pytest.raises(ValueError):
        root_space_basis(b, (1, 1, 1), (0, 0, 0))


def test_coroots(setup_a):
    a = setup_a
    assert coroot(a, (1, 0, 0)) == h_elem(a, 1) * 2
    assert coroot(a, (1, -1, 0)) == h_elem(a, 1) - h_elem(a, 2)
    assert coroot(a, (2, 0, 0)) == h_elem(a, 1)
    v0 = 2 * a.r + 1
    assert bracket(U_op(a, 1, 1, v0), U_op(a, v0, 1, a.bar(1))) == h_elem(a, 1)


def test_sl2_check(setup_a, setup_b):
    pair = sl2_check(setup_b, (1, 0, 0), (1, 0, 0))
    assert bracket(pair.e, pair.f) == pair.h == coroot(setup_b, (1, 0, 0))
    with pytest.raises(ValueError):
        sl2_check(setup_a, (2, 0, 0), (0,))


def test_trace_form_examples(setup_a):
    a = setup_a
    assert trace_form(u_mat(a, 1, 5), u_mat(a, 5, 1)) == 2
    assert trace_form(h_elem(a, 1), h_elem(a, 2)) == 0
    assert trace_form(h_elem(a, 1), MatElem.zero(a)) == 0


def test_centroid_act(setup_a, setup_b):
    a = setup_a
    T = u_mat(a, 1, 5, t(a, 1))
    assert centroid_act(a.spec.one(), T) == T
    b = setup_b
    z = t(b, 0, 0, 2)
    assert centroid_act(z, u_mat(b, 1, 5)) == u_mat(b, 1, 5, z)
    with pytest.raises(ValueError):
        centroid_act(b.spec.gen(3), u_mat(b, 1, 5))


def test_json_round_trip(setup_b):
    T = u_mat(setup_b, 1, 8, t(setup_b, 1, -1, 0, c=Fraction(1, 2)))
    assert MatElem.from_json(setup_b, T.to_json()) == T


# --- properties -----------------------------------------------------------------

DATA = {
    "A": make_data(3, "0", 1, [0]),
    "B": make_data(3, "l3 + l1 l2", 3, [0, 1, 2]),
    "C": make_data(2, "l2 l3", 3, [0, 1, 2, 3]),
}


@st.composite
def monomials(draw, d):
    sigma = tuple(draw(st.integers(-2, 2)) for _ in range(d.n))
    return d.spec.monomial(sigma, draw(st.integers(-3, 3).filter(bool)))


@st.composite
def mats(draw, d, size=3):
    T = MatElem.zero(d)
    for _ in range(draw(st.integers(1, size))):
        i, j = draw(st.integers(1, d.l)), draw(st.integers(1, d.l))
        T = T + e_mat(d, i, j, draw(monomials(d)))
    return T


@st.composite
def skew_mats(draw, d):
    T = draw(mats(d))
    return T - star(T)


@st.composite
def in_data(draw, maker, k):
    d = DATA[draw(st.sampled_from(sorted(DATA)))]
    return (d,) + tuple(draw(maker(d)) for _ in range(k))


@st.composite
def homogeneous_s(draw, d):
    while True:
        i, j = draw(st.integers(1, d.l)), draw(st.integers(1, d.l))
        T = u_mat(d, i, j, draw(monomials(d)))
        if T and in_S(T):
            return T


@settings(max_examples=60, deadline=None)
@given(in_data(mats, 2))
def test_star_is_an_involution(args):
    d, T1, T2 = args
    assert star(star(T1)) == T1
    assert star(T1 * T2) == star(T2) * star(T1)
    assert not center_project(trace(T1 * T2) - trace(T2 * T1))


@settings(max_examples=60, deadline=None)
@given(in_data(skew_mats, 2))
def test_F_closed_and_commutators_in_S(args):
    d, T1, T2 = args
    assert in_F(T1) and in_F(T2)
    B = bracket(T1, T2)
    assert in_F(B) and in_S(B)
    cf = canonical_form(T1)
    assert cf.reassemble(d) == T1
    assert all(involute(v) == -v for v in cf.b.values())


@settings(max_examples=40, deadline=None)
@given(in_data(homogeneous_s, 3))
def test_jacobi_grading_and_invariance(args):
    d, x, y, z = args
    jac = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y))
    assert not jac
    dx, dy = homogeneous_degree(x), homogeneous_degree(y)
    xy = bracket(x, y)
    if xy:
        assert homogeneous_degree(xy) == BiDegree(
            tuple(p + q for p, q in zip(dx.root, dy.root)),
            tuple(p + q for p, q in zip(dx.ext, dy.ext)))
    assert trace_form(xy, z) + trace_form(y, bracket(x, z)) == 0
    assert trace_form(x, y) == trace_form(y, x)
    if trace_form(x, y):
        assert all(p + q == 0 for p, q in zip(dx.ext, dy.ext))


@settings(max_examples=40, deadline=None)
@given(in_data(mats, 3))
def test_trace_form_associative(args):
    d, T1, T2, T3 = args
    assert trace_form(T1 * T2, T3) == trace_form(T1, T2 * T3)


@pytest.mark.parametrize("name", sorted(DATA))
def test_root_space_dimensions_and_support(name):
    d = DATA[name]
    w = 2
    for mu in bc_roots(d.r):
        for h in product(range(-w, w + 1), repeat=d.n):
            if not d.in_gamma(h):
                continue
            basis = root_space_basis(d, mu, h)
            assert len(basis) <= 1
            lattice = all(x % 2 == 0 for x in h)
            nz = [x for x in mu if x]
            if len(nz) == 2:
                assert bool(basis) == lattice
            elif abs(nz[0]) == 2:
                assert bool(basis) == (lattice and d.spec.in_lambda_minus(tuple(x // 2 for x in h)))
            else:
                assert bool(basis) == d.in_gamma_an(h)
            for e in basis:
                assert in_S(e)
                assert homogeneous_degree(e) == BiDegree(mu, h)
                opp = root_space_basis(d, tuple(-x for x in mu), tuple(-x for x in h))
                assert len(opp) == 1 and trace_form(e, opp[0]) != 0


def test_zero_root_cells_lie_in_S(setup_b):
    d = setup_b
    for h in [(0, 0, 0), (2, 0, 0), (0, 0, 2), (1, 1, 0), (1, -1, 0)]:
        basis = cell_basis(d, (0, 0, 0), h)
        for T in basis:
            assert in_S(T)
        if basis:
            assert mat_coords(basis[0], basis) == [1] + [0] * (len(basis) - 1)
