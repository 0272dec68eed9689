import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from todaheat.bessel import (
    FiniteKernelForm,
    bessel_i,
    finite_form_check,
    finite_form_from_alpha,
    fit_odd_branches,
    kernel_truncated,
    lemma_check,
    lemma_coefficient,
    recurrence_check,
    resum_two_bessel,
    t_power_times_bessel,
    uniform_bound,
)
from todaheat.darboux import DarbouxSpec, extract_L
from todaheat.errors import FitFailure, StructureError
from todaheat.heat import alpha_recurrence, required_window
from todaheat.lattice import Window
from todaheat.verify import DARBOUX_CASES


def test_small_values():
    assert bessel_i(0, 0.0).value == 1.0
    assert bessel_i(1, 0.0).value == 0.0
    # I_0(2) from tables
    v = bessel_i(0, 2.0)
    assert abs(v.value - 2.2795853023360673) <= max(v.bound, 1e-15)
    assert bessel_i(-3, 1.3).value == bessel_i(3, 1.3).value


@given(st.integers(-10, 10), st.floats(0.05, 4.0))
def test_recurrence_within_bound(k, t):
    defect, bound = recurrence_check(k, t)
    assert defect <= bound


def test_lemma_examples():
    # t I_k(2t) = (k+1) I_{k+1} + ... reduces to the Bessel recurrence for m = 1
    for k in range(-4, 5):
        for i in (k - 1, k - 3):
            assert lemma_coefficient(1, k, i) == i
    coeffs = t_power_times_bessel(1, 2, depth=6)
    assert coeffs == {1: -1, -1: 1, -3: 3}
    for m in range(1, 5):
        for k in range(-6, 7):
            for i in range(1, 8):
                assert lemma_coefficient(m, k, -i) == -lemma_coefficient(m, k, i)


@pytest.mark.parametrize("t", [0.1, 1.0, 3.0])
def test_lemma_numeric(t):
    for m in range(1, 5):
        for k in range(-6, 7):
            lhs, rhs, bound = lemma_check(m, k, t)
            assert abs(lhs - rhs) <= bound


def test_uniform_bound():
    for T in (0.1, 1.0, 3.0):
        for r in range(-12, 13):
            for t in (T / 3, T / 2, T):
                assert abs(bessel_i(r, 2 * t).value) <= uniform_bound(r, T)
    assert uniform_bound(0, 0.0) == 1.0 and uniform_bound(2, 0.0) == 0.0


def test_free_kernel_is_single_bessel():
    w = Window.free(-80, 80)
    alpha = alpha_recurrence(w, 30, [(2, -1)])
    value, bound, tail = kernel_truncated(alpha, 2, -1, 1.0)
    assert tail == 0.0
    assert abs(value - bessel_i(3, 2.0).value) <= bound + 1e-15


def test_truncation_converges_on_darboux_operator():
    spec = DarbouxSpec.generic(1, 0)
    w = extract_L(spec, required_window([(1, 0)], 60)).window
    alpha = alpha_recurrence(w, 60, [(1, 0)])
    v40, _, tail40 = kernel_truncated(alpha, 1, 0, 1.0, K=40)
    v60, b60, _ = kernel_truncated(alpha, 1, 0, 1.0, K=60)
    assert abs(v40 - v60) < 1e-12
    with pytest.raises(ValueError):
        kernel_truncated(alpha, 1, 0, 1.0, K=61)


def test_resummation():
    zero = resum_two_bessel([0], [0], 3)
    assert zero.p1 == (0,) and zero.p2 == (0,)
    # sum_{i<0} i I_i(2t) = -t (I_0 + I_1) from the recurrence telescoping
    form = resum_two_bessel([0, 1], [0, 1], 0)
    assert form.p1 == (0, -1) and form.p2 == (0, -1)
    assert len(form.samples) == 5
    with pytest.raises(StructureError):
        resum_two_bessel([1, 1], [0], 2)
    with pytest.raises(StructureError):
        resum_two_bessel([0, 0, 1], [0], 2)


def test_resummation_random_odd_rules():
    rng = random.Random(11)
    for _ in range(5):
        even = [0, rng.randint(-3, 3), 0, Fraction(rng.randint(-3, 3), 4)]
        odd = [0, rng.randint(-3, 3)]
        resum_two_bessel(even, odd, rng.randint(-3, 3))  # certifies numerically


def test_fit_odd_branches():
    values = {k: Fraction((5 - k) ** 3 - 2 * (5 - k)) for k in range(1, 20)}
    branches, degrees = fit_odd_branches(values, 5, 3)
    assert branches[0] == branches[1] == [0, -2, 0, 1]
    with pytest.raises(FitFailure) as err:
        fit_odd_branches({**values, 7: Fraction(1)}, 5, 3)
    assert err.value.k == 7
    with pytest.raises(FitFailure):
        fit_odd_branches({1: Fraction(1)}, 0, 0)


def test_form_requires_vanishing_constant_terms():
    with pytest.raises(StructureError):
        FiniteKernelForm((1,), (0,), 0)


@pytest.mark.parametrize("nn", DARBOUX_CASES)
def test_finite_form_on_darboux_operators(nn):
    for n, m in ((1, -1), (0, 2)):
        form = finite_form_check(DarbouxSpec.generic(*nn), n, m)
        assert all(s["ok"] for s in form.samples), form.samples
        N = max(nn)
        assert max(form.degrees) <= max(0, 2 * N - 1)


def test_random_window_has_no_finite_form():
    rng = random.Random(8)
    for _ in range(2):
        w = Window.random(rng, -10, 40)
        alpha = alpha_recurrence(w, 12, [(0, 0)])
        with pytest.raises(FitFailure):
            finite_form_from_alpha(alpha, 0, 0, 3)
