from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import rationals
from todaheat.algebra import (
    LaurentPoly,
    PowerSeries,
    TruncatedLaurentSeries,
    as_rational,
    binom,
    format_rational,
    formal_sqrt,
    parse_rational,
    poly_in_u,
    residue_z,
    symmetric_decompose,
)
from todaheat.errors import DepthError, StructureError

x = LaurentPoly.x()
u = LaurentPoly.u()

laurent = st.dictionaries(st.integers(-5, 5), rationals(), max_size=5).map(LaurentPoly)


def test_zero_coefficients_not_stored():
    p = LaurentPoly({0: 1, 3: 0, -2: Fraction(0)})
    assert p.terms() == [(0, Fraction(1))]
    assert LaurentPoly().degree is None and LaurentPoly().is_zero()


def test_rationals_refuse_floats():
    with pytest.raises(TypeError):
        as_rational(0.5)
    with pytest.raises(ValueError):
        parse_rational("0.5")
    assert format_rational(Fraction(-6, 4)) == "-3/2"
    assert parse_rational("-3/2") == Fraction(-3, 2)


@given(rationals(nonzero=True), rationals(nonzero=True), rationals())
def test_rational_field_laws(a, b, c):
    assert (a / b) * (b / a) == 1
    assert a * (b + c) == a * b + a * c
    q = a / b
    assert q.denominator >= 1


def test_binomial_falling_factorial_convention():
    assert binom(5, 2) == 10
    assert binom(-1, 3) == -1
    assert binom(-3, 2) == 6
    assert binom(4, -1) == 0
    assert binom(2, 5) == 0


@given(laurent, laurent, laurent)
def test_laurent_ring_axioms(p, q, r):
    assert p * (q + r) == p * q + p * r
    assert (p * q) * r == p * (q * r)
    assert p * q == q * p


@given(laurent, laurent)
def test_inversion_is_a_ring_involution(p, q):
    assert p.invert().invert() == p
    assert (p * q).invert() == p.invert() * q.invert()


@given(laurent, laurent)
def test_exact_division_round_trip(p, q):
    if q.is_zero():
        return
    assert (p * q).exact_div(q) == p


def test_exact_division_detects_remainder():
    assert (x + 1).exact_div(x - 1) is None


@given(laurent)
def test_symmetric_decompose_recombines(h):
    coeffs, anti = symmetric_decompose(h)
    assert poly_in_u(coeffs) + anti == h
    assert anti.invert() == -anti


def test_symmetric_decompose_examples():
    assert symmetric_decompose(u) == ([Fraction(0), Fraction(1)], LaurentPoly())
    coeffs, anti = symmetric_decompose(x - x.invert())
    assert coeffs == [] and anti == x - x.invert()
    # q_1(x) = x^3 - 3x splits into half its symmetrization and half (x - 1/x)^3
    q1 = x ** 3 - 3 * x
    coeffs, anti = symmetric_decompose(q1)
    assert anti * 2 == (x - x.invert()) ** 3
    assert poly_in_u(coeffs) * 2 == q1 + q1.invert()


def test_residue_examples():
    s = TruncatedLaurentSeries({2: 1, 0: 3, -1: 5}, -4)
    assert residue_z(s) == 5
    assert residue_z(TruncatedLaurentSeries({1: 1}, -3)) == 0


def test_residue_below_floor_is_an_error():
    with pytest.raises(DepthError):
        residue_z(TruncatedLaurentSeries({1: 1}, 0))


def test_product_floor_is_pessimistic():
    a = TruncatedLaurentSeries.from_list(0, [1, 2, 3])   # valid down to z^-2
    b = TruncatedLaurentSeries.from_list(1, [1, 5])      # valid down to z^0
    prod = a * b
    assert prod.floor == max(a.floor + b.top, b.floor + a.top)
    assert prod.coeff(1) == 1 and prod.coeff(0) == 7
    with pytest.raises(DepthError):
        prod.coeff(prod.floor - 1)


@given(st.lists(rationals(), min_size=1, max_size=8), rationals(nonzero=True), st.integers(-3, 3))
def test_series_times_reciprocal_is_one(tail, lead, top):
    s = TruncatedLaurentSeries.from_list(top, [lead] + tail)
    prod = s * s.reciprocal()
    assert prod.floor == -len(tail)
    assert all(c == (1 if e == 0 else 0) for e, c in prod.coefficients())


@given(st.lists(rationals(), min_size=0, max_size=10))
def test_formal_sqrt_squares_back(tail):
    p = PowerSeries([1] + tail)
    s = formal_sqrt(p)
    assert s * s == p
    assert s[0] == 1


def test_formal_sqrt_examples():
    assert formal_sqrt(PowerSeries([1, 2, 1])) == PowerSeries([1, 1, 0])
    assert formal_sqrt(PowerSeries([1])) == PowerSeries([1])
    q = PowerSeries([1, 0, -2, 0, 1])  # free operator: (1 - w^2)^2
    assert formal_sqrt(q) == PowerSeries([1, 0, -1, 0, 0])
    with pytest.raises(StructureError):
        formal_sqrt(PowerSeries([2, 1]))


@given(st.lists(rationals(), min_size=0, max_size=8), rationals(nonzero=True))
def test_power_series_reciprocal(tail, c0):
    p = PowerSeries([c0] + tail)
    assert p * p.reciprocal() == PowerSeries([1] + [0] * len(tail))
