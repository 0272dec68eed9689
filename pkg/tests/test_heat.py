import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import rationals, windows
from todaheat.algebra import LaurentPoly, binom
from todaheat.errors import DepthError, IntervalError
from todaheat.heat import (
    alpha_constant_generating,
    alpha_recurrence,
    alpha_residue,
    diagonal_band,
    diamond,
    g_poly,
    q_beta_poly,
    required_window,
)
from todaheat.lattice import Window
from todaheat.verify import example_fixtures
from todaheat.wave import build_wave_table

z = LaurentPoly.x()


def test_q_beta_small_cases():
    assert q_beta_poly(7, 0) == LaurentPoly({0: 1})
    for beta in range(-5, 6):
        for k in range(0, 5):
            q = q_beta_poly(beta, k)
            assert q.degree == k and q.coeff(k) == 1


@given(st.integers(-20, 20), st.integers(1, 8))
def test_q_beta_lowering_and_mixed_identities(beta, k):
    lower = q_beta_poly(beta, k) - z * q_beta_poly(beta - 2, k - 1)
    assert lower == LaurentPoly({0: Fraction(beta - 2 * k, k) * binom(beta - 1, k - 1)})
    mixed = q_beta_poly(beta, k) + q_beta_poly(beta, k - 1) - z * q_beta_poly(beta - 1, k - 1)
    assert mixed == LaurentPoly({0: Fraction(beta - 2 * k + 1, k) * binom(beta, k - 1)})


@given(st.integers(0, 12), st.integers(-10, 15))
def test_g_parity_and_monic(k, c):
    g = g_poly(k, c)
    assert g.degree == k and g.coeff(k) == 1
    assert all(e % 2 == k % 2 for e, _ in g.terms())


def test_g_on_seed_line():
    for k in range(1, 9):
        assert g_poly(k, k) == LaurentPoly({k: 1})


@given(st.integers(1, 13), st.integers(-10, 15))
def test_g_steps(k, c):
    step = g_poly(k, c) - z * g_poly(k - 1, c - 1)
    if k % 2:
        assert step.is_zero()
    else:
        want = LaurentPoly({0: Fraction(2 * (c - k), k) * binom(c - 1, k // 2 - 1)})
        assert step == want
        assert g_poly(k, c) - z * z * g_poly(k - 2, c - 2) == want


def test_g_just_below_diagonal_closed_form():
    for k in range(0, 11):
        body = LaurentPoly({k + 1 - 2 * i: k * Fraction((-1) ** i, i) * binom(k - i - 1, i - 1)
                            for i in range(1, (k + 1) // 2 + 1)})
        assert g_poly(k + 1, 1) == LaurentPoly({k + 1: 1}) + body


def test_region_shapes():
    assert len(diamond(0, 4)) == 41
    assert all(abs(n - m) <= 2 for n, m in diagonal_band(-3, 3, 2))


def test_required_window_examples():
    assert required_window([(0, 0)], 1) == (0, 0)
    assert required_window([(n, n) for n in range(-2, 3)], 2) == (-2, 3)
    assert required_window([(0, 0)], 0) is None


@given(st.integers(0, 10**6))
def test_required_window_is_sufficient_and_tight(seed):
    import random
    rng = random.Random(seed)
    region = [(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(3)]
    order = rng.randint(1, 6)
    lo, hi = required_window(region, order)
    w = Window.random(rng, lo, hi - lo + 1)
    alpha_recurrence(w, order, region)
    for narrow in ((lo + 1, hi), (lo, hi - 1)):
        if narrow[0] <= narrow[1]:
            with pytest.raises(IntervalError):
                alpha_recurrence(w.restrict(narrow), order, region)


@given(windows(lo=-14, width=29), st.integers(0, 10**6))
def test_values_depend_only_on_the_cone(w, salt):
    region = [(1, -1), (0, 0), (-1, 2)]
    lo, hi = required_window(region, 5)
    base = alpha_recurrence(w, 5, region)
    outside = [n for n in range(w.lo, w.hi + 1) if not lo <= n <= hi]
    n = outside[salt % len(outside)]
    w2 = w.with_values(n, a=Fraction(salt % 7 + 1, 3), b=Fraction(salt % 11))
    assert alpha_recurrence(w2, 5, region).same_values(base)


@given(windows())
def test_near_diagonal_fixtures(w):
    for n in (-2, 0, 3):
        for name, (got, want) in example_fixtures(w, n).items():
            assert got == want, name


def test_free_operator_and_seed_line(random_window):
    tab = alpha_recurrence(Window.free(-20, 20), 6, diamond(0, 3))
    assert all(v == (1 if k == 0 else 0) for (k, n, m), v in tab.values.items())
    tab = alpha_recurrence(random_window, 5, diagonal_band(-2, 2, 3))
    assert tab.seed_line_ok()


@given(windows(lo=-12, width=26), st.integers(0, 8))
def test_residue_formula_matches_recurrence(w, order):
    region = diagonal_band(-2, 2, 2)
    rec = alpha_recurrence(w, order, region)
    res = alpha_residue(build_wave_table(w, order), order, region)
    assert rec.same_values(res)


def test_first_two_residue_closed_forms(random_window):
    t = build_wave_table(random_window, 4)
    tab = alpha_recurrence(random_window, 2, diagonal_band(-2, 2, 2))
    for (k, n, m), v in tab.values.items():
        if k == 1:
            assert v == t.psi[1][n] + t.psi_star[1][m + 1]
        if k == 2:
            assert v == (t.psi[2][n] + t.psi[1][n] * t.psi_star[1][m + 1] + t.psi_star[2][m + 1]
                         + (n - m - 2))


def test_residue_needs_enough_order(random_window):
    with pytest.raises(DepthError):
        alpha_residue(build_wave_table(random_window, 3), 5, [(0, 0)])


def test_residue_gauge_independent(random_window):
    region = diagonal_band(-1, 1, 2)
    t1 = build_wave_table(random_window, 6, base=-4)
    t2 = build_wave_table(random_window, 6, base=5)
    assert alpha_residue(t1, 6, region).same_values(alpha_residue(t2, 6, region))


def test_generating_function_examples():
    assert alpha_constant_generating(1, 0, 8) == [1] + [0] * 8
    assert alpha_constant_generating(Fraction(2, 3), Fraction(-5, 7), 3)[1] == Fraction(-5, 7)
    with pytest.raises(ValueError):
        alpha_constant_generating(0, 1, 4)


@given(rationals(nonzero=True), rationals())
def test_generating_function_matches_recurrence(a, b):
    w = Window.constant(-20, 20, a, b)
    assert alpha_constant_generating(a, b, 12) == alpha_recurrence(w, 12, [(0, 0)]).series(0, 0)


def test_table_json_is_exact(random_window):
    tab = alpha_recurrence(random_window, 3, [(0, 0), (1, 0)])
    data = json.loads(json.dumps(tab.to_json()))
    assert data["method"] == "recurrence"
    assert all("/" in row[3] for row in data["rows"])
    back = {(k, n, m): Fraction(v) for k, n, m, v in data["rows"]}
    assert back == dict(tab.values)
