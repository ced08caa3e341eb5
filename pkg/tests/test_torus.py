from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bctorus.bitquad import BilForm, QuadForm
from bctorus.torus import (
    TorusElem,
    TorusSpec,
    center_project,
    commutator,
    commutator_part,
    commutator_witness,
    gamma_m,
    involute,
    skew_part,
    supp_plus,
    symmetric_part,
    varpi,
)


@pytest.fixture(scope="module")
def spec():
    return TorusSpec.from_form(QuadForm.parse("l3 + l1 l2", 3))


def test_spec_uses_tabulated_bilinear_form(spec):
    assert spec.kappa_b == BilForm.from_pairs(3, [(1, 2)])


def test_incompatible_bilinear_form_rejected():
    with pytest.raises(ValueError):
        TorusSpec(QuadForm.parse("l1 l2", 2), BilForm.zero(2))


def test_monomial_basics(spec):
    assert spec.monomial((0, 0, 0)) == spec.one() == 1
    assert spec.monomial((1, 0, 0)) == spec.gen(1)
    assert not spec.monomial((2, 1, 0), 0)
    with pytest.raises(ValueError):
        spec.monomial((1, 0))


def test_multiplication_signs(spec):
    t1, t2, t3 = spec.gen(1), spec.gen(2), spec.gen(3)
    assert t1 * t2 == -spec.monomial((1, 1, 0))
    assert t2 * t1 == spec.monomial((1, 1, 0))
    assert t3 * t3 == spec.monomial((0, 0, 2))


def test_involution_examples(spec):
    t1, t2, t3 = spec.gen(1), spec.gen(2), spec.gen(3)
    assert involute(t3) == -t3
    assert involute(t1) == t1
    # conj(t1 t2) = conj(t2) conj(t1) = t2 t1, and kappa(s1 + s2) = 1 gives the same sign
    assert involute(t1 * t2) == t2 * t1 == spec.monomial((1, 1, 0))


def test_centre_split_examples(spec):
    t1, t3 = spec.gen(1), spec.gen(3)
    assert not center_project(t1) and commutator_part(t1) == t1
    assert center_project(t3) == t3 and not commutator_part(t3)
    assert center_project(spec.one()) == 1


def test_parts_and_supports(spec):
    assert skew_part(spec.gen(3)) == spec.gen(3)
    assert supp_plus(spec)((1, 1, 1))
    assert not gamma_m(spec)((1, 0, 0))
    assert gamma_m(spec)((2, 0, 0))


def test_varpi():
    spec = TorusSpec.from_form(QuadForm.zero(1))
    assert varpi(spec.scalar(3) + spec.gen(1)) == 3
    assert varpi(spec.gen(1)) == 0
    assert varpi(spec.zero()) == 0


def test_inverse(spec):
    for sigma in [(1, 1, 0), (1, 0, 1), (0, -1, 3)]:
        a = spec.monomial(sigma, Fraction(2, 3))
        assert a * a.inverse() == 1
        assert a.inverse() * a == 1


def test_json_round_trip(spec):
    a = spec.monomial((1, -2, 0), Fraction(3, 5)) + spec.gen(3)
    assert TorusElem.from_json(spec, a.to_json()) == a
    assert TorusSpec.from_json(spec.to_json()) == spec
    assert TorusSpec.from_json({"kappa": spec.kappa.to_json()}) == spec


# --- properties ---------------------------------------------------------------

SPECS = [TorusSpec.from_form(QuadForm.parse(t, 3)) for t in ["0", "l3", "l2 + l3 + l2 l3", "l2 l3", "l3 + l1 l2"]]
exponents = st.tuples(*[st.integers(-2, 2)] * 3)
coeffs = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@st.composite
def elems(draw, spec):
    terms = draw(st.dictionaries(exponents, coeffs, max_size=3))
    return TorusElem(spec, terms)


@st.composite
def spec_and_elems(draw, k=3):
    spec = draw(st.sampled_from(SPECS))
    return (spec,) + tuple(draw(elems(spec)) for _ in range(k))


@settings(max_examples=80, deadline=None)
@given(spec_and_elems())
def test_associative_and_unital(args):
    spec, a, b, c = args
    assert (a * b) * c == a * (b * c)
    assert a * spec.one() == a == spec.one() * a


@settings(max_examples=80, deadline=None)
@given(spec_and_elems(2))
def test_involution_is_anti_automorphism(args):
    spec, a, b = args
    assert involute(involute(a)) == a
    assert involute(a * b) == involute(b) * involute(a)
    assert symmetric_part(a) + skew_part(a) == a
    assert involute(symmetric_part(a)) == symmetric_part(a)
    assert involute(skew_part(a)) == -skew_part(a)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(SPECS), exponents, exponents)
def test_monomials_commute_up_to_polar_sign(spec, s, t):
    a, b = spec.monomial(s), spec.monomial(t)
    sign = -1 if spec.kappa.polar_value(spec_bits(s), spec_bits(t)) else 1
    assert a * b == b * a * sign


def spec_bits(sigma):
    return sum((x & 1) << k for k, x in enumerate(sigma))


@settings(max_examples=80, deadline=None)
@given(spec_and_elems(1))
def test_centre_and_commutator_split(args):
    spec, a = args
    z, c = center_project(a), commutator_part(a)
    assert z + c == a
    for k in range(1, 4):
        assert not commutator(z, spec.gen(k))
    total = spec.zero()
    for x, y in commutator_witness(a):
        total = total + commutator(x, y)
    assert total == c
