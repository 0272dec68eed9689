import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from todaheat.algebra import LaurentPoly
from todaheat.darboux import (
    DarbouxSpec,
    alpha_contour,
    baker,
    build_phi_chains,
    casorati_q,
    chain_defect,
    commuting_pair,
    curve_function,
    determinant,
    extract_L,
    orthogonality_check,
    orthogonality_matrix,
    ring_membership,
)
from todaheat.errors import SingularParametersError, StructureError
from todaheat.lattice import BandedOperator, Seq, Window
from todaheat.toda import stationarity_bracket_check, stationarity_field
from todaheat.verify import (
    DARBOUX_CASES,
    adjoint_detail,
    darboux_case,
    intertwining_detail,
    prop_combination,
    three_way_detail,
)

x, u = LaurentPoly.x(), LaurentPoly.u()


@pytest.fixture(scope="module")
def cases():
    return {nn: darboux_case(DarbouxSpec.generic(*nn)) for nn in DARBOUX_CASES}


def test_determinant():
    assert determinant([]) == 1
    assert determinant([[2, 1], [4, 3]]) == 2
    assert determinant([[0, 1, 0], [1, 0, 0], [0, 0, 5]]) == -5


def test_first_chain_element():
    plus, minus = build_phi_chains(DarbouxSpec.from_params(1, 1, [0, 0]))
    assert [plus[0](n) for n in range(-2, 3)] == [-2, -1, 0, 1, 2]
    # the '-' chain alternates: phi(n) = (-1)^n n solves phi(n+1) + phi(n-1) = -2 phi(n)
    assert [minus[0](n) for n in range(-2, 3)] == [-2, 1, 0, -1, 2]


def test_second_chain_element_is_cubic():
    spec = DarbouxSpec.from_params(2, 0, [Fraction(1, 3), Fraction(-1, 2)])
    plus, _ = build_phi_chains(spec)
    assert len(plus[1].poly) == 4 and plus[1].poly[3] == Fraction(1, 6)
    assert chain_defect(spec, (-20, 20)) is None


@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 50))
def test_chain_relations_hold(n1, n2, seed):
    assert chain_defect(DarbouxSpec.generic(n1, n2, seed), (-15, 15)) is None


def test_params_validation():
    with pytest.raises(ValueError):
        DarbouxSpec.from_params(1, 1, [1])
    with pytest.raises(StructureError):
        DarbouxSpec(1, 0, ((Fraction(1), Fraction(0)),), ())
    with pytest.raises(TypeError):
        DarbouxSpec.from_params(1, 0, [0.5])


def test_q_trivial_and_first_order():
    q = casorati_q(DarbouxSpec(0, 0), (-5, 5))
    assert list(q.offsets) == [0] and list(q.band(0).values) == [1] * 11
    c = Fraction(1, 3)
    q = casorati_q(DarbouxSpec.from_params(1, 0, [c]), (-5, 5))
    for n in range(-5, 6):
        assert q.coefficient(1, n) == 1
        assert q.coefficient(0, n) == -(n + 1 + c) / (n + c)


def test_singular_parameters():
    with pytest.raises(SingularParametersError) as err:
        casorati_q(DarbouxSpec.from_params(1, 0, [0]), (-5, 5))
    assert err.value.index == 0


def test_trivial_extraction_is_free():
    w = extract_L(DarbouxSpec(0, 0), (-10, 10)).window
    assert all(v == 1 for v in w.a.values)
    assert w.b.is_zero()


def test_first_order_operator_tends_to_free():
    w = extract_L(DarbouxSpec.from_params(1, 0, [Fraction(1, 3)]), (-60, 60)).window
    near = max(abs(w.a[3] - 1), abs(w.b[3]))
    for n in (-60, 59):
        assert abs(w.a[n] - 1) < Fraction(1, 100) and abs(w.b[n]) < Fraction(1, 100)
        assert abs(w.a[n] - 1) < near


def test_intertwining_on_random_sequences(cases):
    rng = random.Random(3)
    for case in cases.values():
        assert intertwining_detail(case.result) is None
        q, w = case.result.q, case.window
        N = case.spec.order
        f = Seq(w.lo - 2, [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(w.hi - w.lo + N + 5)])
        l0 = BandedOperator.constant({-1: 1, 1: 1}, w.lo - 2, w.hi + N + 3)
        left = q.apply(l0.apply(f))
        right = w.lax_operator().apply(q.apply(f))
        for n in range(w.lo + 1, w.hi):
            assert left[n] == right[n]


def test_baker_function(cases):
    for case in cases.values():
        assert case.bf.eigen_defect(case.window) is None
        assert adjoint_detail(case) is None


def test_biorthogonality(cases):
    idx = list(range(-3, 4))
    for case in cases.values():
        assert orthogonality_check(case.bf, idx, idx)
    mat, side_ok = orthogonality_matrix(cases[(1, 1)].bf, [0, 1], [0, 1])
    assert mat == [[1, 0], [0, 1]] and side_ok


def test_contour_on_free_operator(cases):
    bf = cases[(0, 0)].bf
    for n in range(-2, 3):
        for m in range(-2, 3):
            # u(n, m; t) = I_{n-m}(2t): only the leading coefficient survives
            assert alpha_contour(bf, 0, n, m) == 1
            for k in range(1, 4):
                assert alpha_contour(bf, k, n, m) == 0


def test_three_way_agreement_small(cases):
    assert three_way_detail(cases[(1, 0)], order=4, radius=2) is None


def test_commuting_operator(cases):
    m = commuting_pair(cases[(0, 0)].result).m
    for n in range(-5, 6):
        assert m.coefficient(1, n) == 1 and m.coefficient(-1, n) == -1 and m.coefficient(0, n) == 0
    for case in cases.values():
        assert commuting_pair(case.result).certified


def test_curve_function():
    assert curve_function(0, 0) == x - x.invert()
    f = curve_function(1, 0)
    assert f * f == (u - 2) ** 3 * (u + 2)


def test_ring_membership():
    for n1, n2 in DARBOUX_CASES:
        assert ring_membership(u ** 3 - u, n1, n2)[0]
        f = curve_function(n1, n2)
        ok, (p, r) = ring_membership(f * u + 2, n1, n2)
        assert ok and p == [2] and r == [0, 1]
    assert ring_membership(prop_combination((1, 3, 5)), 1, 1)[0]
    assert not ring_membership(x, 1, 0)[0]
    assert not ring_membership(x, 1, 1)[0]


def test_stationarity_range(cases):
    for (n1, n2), case in cases.items():
        N = max(n1, n2)
        for k in range(2 * N + 1, 2 * N + 5):
            assert stationarity_field(case.window, k).is_zero()
        assert stationarity_bracket_check(case.window, 2 * N + 1)
    # the range is sharp for the first-order case
    assert not stationarity_field(cases[(1, 0)].window, 2).is_zero()
