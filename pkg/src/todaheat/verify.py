"""Seeded identity suites behind ``todaheat verify``.

Every check walks a deterministic list of cases and stops at the first
counterexample.  Identities are named descriptively; the name is the anchor
a failing report points at.  Random instances come from
``random.Random(f"{suite}-{seed}")`` so a suite never depends on which other
suites ran before it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional

from .algebra import LaurentPoly, binom, format_rational, poly_in_u
from .bessel import (
    bessel_i,
    finite_form_check,
    finite_form_from_alpha,
    lemma_check,
    recurrence_check,
    uniform_bound,
)
from .darboux import (
    DarbouxSpec,
    alpha_contour,
    baker,
    chain_defect,
    commuting_pair,
    curve_function,
    darboux_wave_table,
    extract_L,
    orthogonality_matrix,
    ring_membership,
)
from .errors import FitFailure, TodaHeatError
from .heat import (
    alpha_constant_generating,
    alpha_recurrence,
    alpha_residue,
    diagonal_band,
    g_poly,
    q_beta_poly,
    required_window,
)
from .lattice import BandedOperator, Window, compare_operators, compose
from .toda import (
    VectorFieldValue,
    binomial_identity_sides,
    heat_field,
    oddness_sum,
    r_coefficient_closed,
    r_coefficient_sum,
    special_poly_p,
    special_poly_q,
    stationarity_bracket_check,
    stationarity_field,
    stationarity_x_coefficients,
    stationarity_xprime_coefficients,
    substitute,
    toda_field,
    x_from_xprime,
    xprime_from_x,
)
from .wave import build_wave_table, check_bilinear, inverse_residual_ok, reconstruct_coefficients

__all__ = ["CheckResult", "SUITES", "run_suite", "run_suites", "DARBOUX_CASES"]

DARBOUX_CASES = ((0, 0), (1, 0), (0, 1), (1, 1), (2, 1))

Detail = Optional[dict]


@dataclass(frozen=True)
class CheckResult:
    suite: str
    identity: str
    cases: int
    passed: bool
    counterexample: Detail = None

    def to_json(self) -> dict:
        out = {"identity": self.identity, "cases": self.cases,
               "status": "pass" if self.passed else "fail"}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


def _plain(value):
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, LaurentPoly):
        return {str(e): format_rational(c) for e, c in value.terms()}
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def _check(suite: str, identity: str, cases: Iterable[dict],
           test: Callable[..., Detail]) -> CheckResult:
    count = 0
    for case in cases:
        count += 1
        try:
            detail = test(**case)
        except (TodaHeatError, ValueError, ZeroDivisionError) as exc:
            detail = {"error": f"{type(exc).__name__}: {exc}"}
        if detail is not None:
            info = {k: _plain(v) for k, v in case.items() if not isinstance(v, (Window, DarbouxSpec))}
            info.update({k: _plain(v) for k, v in detail.items()})
            return CheckResult(suite, identity, count, False, info)
    return CheckResult(suite, identity, count, True)


def _unequal(lhs, rhs) -> Detail:
    return None if lhs == rhs else {"lhs": lhs, "rhs": rhs}


def _field_diff(x: VectorFieldValue, y: VectorFieldValue) -> Detail:
    if not x.agrees(y):
        return {"first_difference": list(x.first_difference(y))}
    return None


# -- polys -----------------------------------------------------------------

def suite_polys(seed: int) -> List[CheckResult]:
    s = "polys"
    z = LaurentPoly.x()
    rng = random.Random(f"{s}-{seed}")
    out = []

    def q_lower(beta, k):
        lhs = q_beta_poly(beta, k) - z * q_beta_poly(beta - 2, k - 1)
        return _unequal(lhs, LaurentPoly({0: Fraction(beta - 2 * k, k) * binom(beta - 1, k - 1)}))

    def q_mixed(beta, k):
        lhs = q_beta_poly(beta, k) + q_beta_poly(beta, k - 1) - z * q_beta_poly(beta - 1, k - 1)
        return _unequal(lhs, LaurentPoly({0: Fraction(beta - 2 * k + 1, k) * binom(beta, k - 1)}))

    grid = [dict(beta=b, k=k) for b in range(-8, 15) for k in range(1, 8)]
    out.append(_check(s, "Q-polynomial lowering identity", grid, q_lower))
    out.append(_check(s, "Q-polynomial mixed-index identity", grid, q_mixed))

    def g_odd(c, k):
        return _unequal(g_poly(k, c) - z * g_poly(k - 1, c - 1), LaurentPoly())

    def g_even(c, k):
        want = LaurentPoly({0: Fraction(2 * (c - k), k) * binom(c - 1, k // 2 - 1)})
        first = g_poly(k, c) - z * g_poly(k - 1, c - 1)
        second = g_poly(k, c) - z * z * g_poly(k - 2, c - 2)
        return _unequal(first, want) or _unequal(second, want)

    out.append(_check(s, "g-polynomial odd step", [dict(c=c, k=k) for c in range(-8, 15)
                                                   for k in range(1, 13, 2)], g_odd))
    out.append(_check(s, "g-polynomial even step", [dict(c=c, k=k) for c in range(-8, 15)
                                                    for k in range(2, 13, 2)], g_even))

    def basis_orth(k, m):
        total = k * sum((Fraction((-1) ** i, k - 2 * i) * binom(k - i - 1, i) * binom(k - 2 * i, m - i)
                         for i in range(m + 1)), Fraction(0))
        return _unequal(total, Fraction(int(m == 0)))

    out.append(_check(s, "basis-change orthogonality sum",
                      [dict(k=k, m=m) for k in range(1, 21) for m in range((k - 1) // 2 + 1)],
                      basis_orth))

    triples = []
    for _ in range(200):
        k = rng.randint(0, 30)
        triples.append(dict(k=k, r=rng.randint(0, k), m=rng.randint(0, k)))
    out.append(_check(s, "inclusion-exclusion binomial identity", triples,
                      lambda k, r, m: _unequal(*binomial_identity_sides(k, r, m))))

    def near_diag(k, diagonal):
        body = {k + 1 - 2 * i: k * Fraction((-1) ** i, i) * binom(k - i - 1, i - 1)
                for i in range(1, (k + 1) // 2 + 1)}
        if diagonal:
            # g_k(n-1, n-1): same coefficients one degree lower, plus delta_{k1}/z
            want = LaurentPoly({k: 1}) + LaurentPoly({e - 1: c for e, c in body.items()})
            if k == 1:
                want = want + LaurentPoly({-1: 1})
            return _unequal(g_poly(k, 0), want)
        return _unequal(g_poly(k + 1, 1), LaurentPoly({k + 1: 1}) + LaurentPoly(body))

    out.append(_check(s, "g-polynomial just below the diagonal",
                      [dict(k=k, diagonal=False) for k in range(0, 16)], near_diag))
    out.append(_check(s, "g-polynomial on the diagonal",
                      [dict(k=k, diagonal=True) for k in range(1, 16)], near_diag))

    def q_antisym(k):
        q = special_poly_q(k)
        return _unequal(q - q.invert(), (z - z.invert()) ** (2 * k + 1))

    def q_recur(k):
        u = LaurentPoly.u()
        rhs = (u * u - 4) * special_poly_q(k) + u * ((-1) ** (k + 1) * binom(2 * k + 1, k))
        return _unequal(special_poly_q(k + 1), rhs)

    def q_sym(k):
        q = special_poly_q(k)
        return _unequal(q + q.invert(), poly_in_u(special_poly_p(k)))

    ks = [dict(k=k) for k in range(0, 9)]
    out.append(_check(s, "odd polynomial q antisymmetrization", ks, q_antisym))
    out.append(_check(s, "odd polynomial q recurrence in u", ks, q_recur))
    out.append(_check(s, "odd polynomial q symmetrization equals P", ks, q_sym))

    out.append(_check(s, "Toda/heat basis change round trip", [dict(k=k) for k in range(1, 21)],
                      lambda k: _unequal(substitute(xprime_from_x(k), x_from_xprime), {k: Fraction(1)})))

    def r_closed(k):
        for l in range((k - 1) // 2 + 1):
            if r_coefficient_sum(k, l) != r_coefficient_closed(k, l):
                return {"l": l, "sum": r_coefficient_sum(k, l), "closed": r_coefficient_closed(k, l)}
        via = substitute(stationarity_x_coefficients(k), x_from_xprime)
        return _unequal(via, {j: c for j, c in stationarity_xprime_coefficients(k) if c != 0})

    out.append(_check(s, "stationarity coefficient closed form", [dict(k=k) for k in range(1, 19)],
                      r_closed))

    def oddness(N, k, j):
        f = [0] * (2 * j + 2)
        f[2 * j + 1] = 1
        return _unequal(oddness_sum(f, k), Fraction(0))

    out.append(_check(s, "oddness lemma for the stationarity sum",
                      [dict(N=N, k=k, j=j) for N in range(1, 5) for k in range(2 * N + 1, 2 * N + 7)
                       for j in range(N)], oddness))
    return out


# -- wave ------------------------------------------------------------------

def _random_windows(rng: random.Random, count: int, lo: int, width: int) -> List[Window]:
    return [Window.random(rng, lo, width) for _ in range(count)]


def suite_wave(seed: int) -> List[CheckResult]:
    s = "wave"
    rng = random.Random(f"{s}-{seed}")
    order = 8
    tables = [(w, build_wave_table(w, order)) for w in _random_windows(rng, 3, -12, 25)]
    cases = [dict(idx=i) for i in range(len(tables))]
    out = []

    def recurrence(idx):
        w, t = tables[idx]
        for k in range(1, order + 1):
            for n in range(max(w.lo, t.psi[k].lo), min(w.hi, t.psi[k].hi - 1) + 1):
                if not (t.psi[k - 1].lo <= n <= t.psi[k - 1].hi):
                    continue
                rhs = t.psi[k][n + 1] + w.b[n] * t.psi[k - 1][n]
                if k >= 2:
                    if not t.psi[k - 2].lo <= n - 1 <= t.psi[k - 2].hi:
                        continue
                    rhs += w.a[n] * t.psi[k - 2][n - 1]
                if rhs != t.psi[k][n]:
                    return {"k": k, "n": n}
        return None

    def inverse(idx):
        return None if inverse_residual_ok(tables[idx][1]) else {"inverse": "nonzero residual"}

    def reconstruct(idx):
        w, t = tables[idx]
        b, a = reconstruct_coefficients(t)
        for n, v in b.items():
            if v != w.b[n]:
                return {"coefficient": "b", "n": n}
        for n, v in a.items():
            if v != w.a[n]:
                return {"coefficient": "a", "n": n}
        return None

    def bilinear(idx):
        t = tables[idx][1]
        for k0 in range(0, 4):
            if not check_bilinear(t, k0, min(k0 + 1, order - k0)):
                return {"k0": k0}
        return None

    out.append(_check(s, "wave function recurrence", cases, recurrence))
    out.append(_check(s, "adjoint wave inversion", cases, inverse))
    out.append(_check(s, "coefficient reconstruction from wave data", cases, reconstruct))
    out.append(_check(s, "bilinear residue identity", cases, bilinear))
    return out


# -- heat ------------------------------------------------------------------

def example_fixtures(w: Window, n: int) -> Dict[str, tuple]:
    """Near-diagonal values of ``alpha_1`` and ``alpha_2`` listed by hand."""
    a, b = w.a, w.b
    tab = alpha_recurrence(w, 2, [(n, n), (n, n - 1), (n, n + 1)])
    return {
        "alpha_1(n,n)": (tab[(1, n, n)], b[n]),
        "alpha_1(n,n-1)": (tab[(1, n, n - 1)], Fraction(0)),
        "alpha_1(n,n+1)": (tab[(1, n, n + 1)], b[n] + b[n + 1]),
        "alpha_2(n,n)": (tab[(2, n, n)], a[n + 1] + a[n] + b[n] ** 2 - 2),
        "alpha_2(n,n-1)": (tab[(2, n, n - 1)], a[n] - 1),
        "alpha_2(n,n+1)": (tab[(2, n, n + 1)],
                           a[n] + a[n + 1] + a[n + 2] + b[n] ** 2 + b[n + 1] ** 2 + b[n] * b[n + 1] - 3),
    }


def residue_vs_recurrence(w: Window, order: int, region) -> Detail:
    rec = alpha_recurrence(w, order, region)
    res = alpha_residue(build_wave_table(w, order), order, region)
    for key, v in sorted(rec.values.items()):
        if res[key] != v:
            return {"k_n_m": list(key), "recurrence": v, "residue": res[key]}
    return None


def suite_heat(seed: int) -> List[CheckResult]:
    s = "heat"
    rng = random.Random(f"{s}-{seed}")
    out = []
    windows = _random_windows(rng, 3, 0, 30)
    region = diagonal_band(8, 16, 4)
    out.append(_check(s, "heat coefficients by residue formula",
                      [dict(w=w) for w in windows], lambda w: residue_vs_recurrence(w, 8, region)))

    def fixtures(w):
        for n in range(w.lo + 2, w.hi - 3):
            for name, (got, want) in example_fixtures(w, n).items():
                if got != want:
                    return {"entry": name, "n": n, "got": got, "expected": want}
        return None

    out.append(_check(s, "near-diagonal heat coefficients", [dict(w=w) for w in windows[:2]], fixtures))

    def generating(a, b):
        gen = alpha_constant_generating(a, b, 12)
        w = Window.constant(-20, 20, a, b)
        rec = alpha_recurrence(w, 12, [(0, 0)]).series(0, 0)
        return _unequal(gen, rec)

    pairs = [dict(a=Fraction(1), b=Fraction(0))]
    while len(pairs) < 6:
        a = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        if a:
            pairs.append(dict(a=a, b=Fraction(rng.randint(-9, 9), rng.randint(1, 9))))
    out.append(_check(s, "constant-coefficient generating function", pairs, generating))
    return out


# -- toda ------------------------------------------------------------------

def suite_toda(seed: int, k_max: int = 6) -> List[CheckResult]:
    s = "toda"
    rng = random.Random(f"{s}-{seed}")
    windows = _random_windows(rng, 2, -20, 41)
    cases = [dict(w=w, k=k) for w in windows for k in range(1, k_max + 1)]
    out = []

    out.append(_check(s, "Toda field by bracket and by residues", cases,
                      lambda w, k: _field_diff(toda_field(w, k), toda_field(w, k, "residue"))))

    def classical(w):
        x = toda_field(w, 1)
        (lo, hi), _ = x.intervals
        for n in range(lo, min(hi, w.hi - 1) + 1):
            if x.db[n] != w.a[n + 1] - w.a[n]:
                return {"n": n, "component": "db"}
        lo, hi = x.da.interval
        for n in range(max(lo, w.lo + 1), hi + 1):
            if x.da[n] != w.a[n] * (w.b[n] - w.b[n - 1]):
                return {"n": n, "component": "da"}
        return None

    out.append(_check(s, "classical Toda field", [dict(w=w) for w in windows], classical))

    def forward(w, k):
        combo = VectorFieldValue.combine((c, toda_field(w, j)) for j, c in xprime_from_x(k))
        return _field_diff(heat_field(w, k), combo)

    def backward(w, k):
        combo = VectorFieldValue.combine((c, heat_field(w, j)) for j, c in x_from_xprime(k))
        return _field_diff(toda_field(w, k), combo)

    out.append(_check(s, "heat field as Toda combination", cases, forward))
    out.append(_check(s, "Toda field as heat combination", cases, backward))
    out.append(_check(s, "stationarity field two expressions", cases,
                      lambda w, k: _field_diff(stationarity_field(w, k), stationarity_field(w, k, "heat"))))

    def control(w):
        return {"stationarity": "vanished"} if stationarity_field(w, 5).is_zero() else None

    out.append(_check(s, "stationarity field nonzero off the Darboux locus",
                      [dict(w=w) for w in windows], control))
    return out


# -- darboux ---------------------------------------------------------------

@dataclass
class DarbouxCase:
    spec: DarbouxSpec
    window: Window
    result: object
    bf: object


def darboux_case(spec: DarbouxSpec, interval=(-30, 30), baker_interval=(-22, 22)) -> DarbouxCase:
    res = extract_L(spec, interval)
    return DarbouxCase(spec, res.window, res, baker(res, baker_interval))


def intertwining_detail(res) -> Detail:
    q, w = res.q, res.window
    N = res.spec.order
    l0 = BandedOperator.constant({-1: 1, 1: 1}, w.lo - 2, w.hi + N + 3)
    cmp = compare_operators(compose(q, l0), compose(w.lax_operator(), q))
    if not cmp:
        return {"offset_n": list(cmp.mismatch)}
    return None


def three_way_detail(case: DarbouxCase, order: int = 6, radius: int = 3) -> Detail:
    region = [(n, m) for n in range(-radius, radius + 1) for m in range(-radius, radius + 1)]
    rec = alpha_recurrence(case.window, order, region)
    table = darboux_wave_table(case.bf, order, (-radius - 2 * order, radius + 2 * order))
    res = alpha_residue(table, order, region)
    for (k, n, m), v in sorted(rec.values.items()):
        c = alpha_contour(case.bf, k, n, m)
        if not v == res[(k, n, m)] == c:
            return {"k_n_m": [k, n, m], "recurrence": v, "residue": res[(k, n, m)], "contour": c}
    return None


def adjoint_detail(case: DarbouxCase, order: int = 6) -> Detail:
    table = darboux_wave_table(case.bf, order, (-12, 12))
    for m in range(-6, 6):
        direct = case.bf.adjoint_wave_coefficients(m, order)
        inverted = [table.psi_star[k][m + 1] for k in range(order + 1)]
        if direct != inverted:
            return {"m": m}
    return None


def suite_darboux(seed: int) -> List[CheckResult]:
    s = "darboux"
    cases = []
    for n1, n2 in DARBOUX_CASES:
        cases.append(dict(label=f"{n1},{n2}", case=darboux_case(DarbouxSpec.generic(n1, n2, seed))))
    out = []

    def stripped(test):
        return lambda label, case: test(case)

    out.append(_check(s, "Jordan chain relations", cases,
                      stripped(lambda c: None if chain_defect(c.spec, (-12, 12)) is None
                               else {"defect": list(chain_defect(c.spec, (-12, 12)))})))
    out.append(_check(s, "intertwining Q L0 = L Q", cases, stripped(lambda c: intertwining_detail(c.result))))
    out.append(_check(s, "Baker function eigen relation", cases,
                      stripped(lambda c: None if c.bf.eigen_defect(c.window) is None
                               else {"n": c.bf.eigen_defect(c.window)})))
    out.append(_check(s, "adjoint Baker function by spectral involution", cases,
                      stripped(adjoint_detail)))

    def orth(c):
        idx = list(range(-3, 4))
        mat, side_ok = orthogonality_matrix(c.bf, idx, idx)
        for n, row in zip(idx, mat):
            for m, v in zip(idx, row):
                if v != int(n == m):
                    return {"n": n, "m": m, "value": v}
        return None if side_ok else {"side_residues": "nonzero at x = +-1"}

    out.append(_check(s, "biorthogonality of Baker functions", cases, stripped(orth)))

    def commuting(c):
        pair = commuting_pair(c.result)
        if not pair.commutes:
            return {"commutator_offset_n": list(pair.commutes.mismatch)}
        if not pair.curve:
            return {"curve_offset_n": list(pair.curve.mismatch)}
        return None

    out.append(_check(s, "commuting operator and spectral curve", cases, stripped(commuting)))

    def stationary_simple(c):
        N = max(c.spec.n1, c.spec.n2)
        for k in range(2 * N + 1, 2 * N + 5):
            if not stationarity_field(c.window, k).is_zero():
                return {"k": k}
        return None

    def brackets(c):
        N = max(c.spec.n1, c.spec.n2)
        for k in range(2 * N + 1, 2 * N + 5):
            if not stationarity_bracket_check(c.window, k):
                return {"k": k}
        return None

    out.append(_check(s, "stationarity fields vanish", cases, stripped(stationary_simple)))
    out.append(_check(s, "polynomial brackets vanish", cases, stripped(brackets)))
    out.append(_check(s, "heat coefficients three ways", cases, stripped(three_way_detail)))

    x, u = LaurentPoly.x(), LaurentPoly.u()
    ring_cases = [dict(h=u, n1=n1, n2=n2, member=True) for n1, n2 in DARBOUX_CASES]
    ring_cases += [dict(h=x ** j * curve_function(n1, n2) if j >= 0 else curve_function(n1, n2).shift(j),
                        n1=n1, n2=n2, member=True)
                   for n1, n2 in ((1, 0), (1, 1), (2, 1)) for j in range(-3, 4)]
    ring_cases.append(dict(h=prop_combination((1, 3, 5)), n1=1, n2=1, member=True))
    ring_cases.append(dict(h=x, n1=1, n2=0, member=False))
    out.append(_check(s, "spectral ring membership", ring_cases,
                      lambda h, n1, n2, member: _unequal(ring_membership(h, n1, n2)[0], member)))
    return out


def prop_combination(ls) -> LaurentPoly:
    """``sum_k x^{l_k} / (l_k prod_{j != k} (l_k^2 - l_j^2))``."""
    total = LaurentPoly()
    for k, lk in enumerate(ls):
        denom = Fraction(lk)
        for j, lj in enumerate(ls):
            if j != k:
                denom *= lk * lk - lj * lj
        total = total + LaurentPoly({lk: 1 / denom})
    return total


# -- bessel ----------------------------------------------------------------

T_SAMPLES = (0.1, 1.0, 3.0)


def suite_bessel(seed: int) -> List[CheckResult]:
    s = "bessel"
    rng = random.Random(f"{s}-{seed}")
    out = []

    def recurrence(k, t):
        defect, bound = recurrence_check(k, t)
        return None if defect <= bound else {"defect": defect, "bound": bound}

    def lemma(m, k, t):
        lhs, rhs, bound = lemma_check(m, k, t)
        return None if abs(lhs - rhs) <= bound else {"lhs": lhs, "rhs": rhs, "bound": bound}

    def uniform(r, t):
        v = bessel_i(r, 2 * t)
        cap = uniform_bound(r, t)
        return None if abs(v.value) <= cap else {"value": v.value, "cap": cap}

    out.append(_check(s, "Bessel three-term recurrence",
                      [dict(k=k, t=t) for k in range(-6, 7) for t in T_SAMPLES], recurrence))
    out.append(_check(s, "power-times-Bessel expansion",
                      [dict(m=m, k=k, t=t) for m in range(1, 5) for k in range(-6, 7) for t in T_SAMPLES],
                      lemma))
    out.append(_check(s, "uniform Bessel bound",
                      [dict(r=r, t=t) for r in range(-12, 13) for t in T_SAMPLES], uniform))

    def finite(n1, n2, n, m):
        form = finite_form_check(DarbouxSpec.generic(n1, n2, seed), n, m)
        bad = [smp for smp in form.samples if not smp["ok"]]
        return {"sample": bad[0]} if bad else None

    out.append(_check(s, "finite two-Bessel heat kernel",
                      [dict(n1=n1, n2=n2, n=n, m=m) for n1, n2 in DARBOUX_CASES for n, m in ((1, -1), (0, 2))],
                      finite))

    def negative(w):
        n = m = (w.lo + w.hi) // 2
        alpha = alpha_recurrence(w, 12, [(n, m)])
        try:
            finite_form_from_alpha(alpha, n, m, 3)
        except FitFailure:
            return None
        return {"fit": "succeeded on a generic window"}

    controls = [dict(w=w) for w in _random_windows(rng, 2, -10, 40)]
    out.append(_check(s, "finite form fails off the Darboux locus", controls, negative))
    return out


SUITES: Dict[str, Callable[[int], List[CheckResult]]] = {
    "bessel": suite_bessel,
    "darboux": suite_darboux,
    "heat": suite_heat,
    "polys": suite_polys,
    "toda": suite_toda,
    "wave": suite_wave,
}


def run_suite(name: str, seed: int = 0, **options) -> List[CheckResult]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(sorted(SUITES))} or 'all'")
    return SUITES[name](seed, **options)


def run_suites(names: Iterable[str], seed: int = 0, k_max: Optional[int] = None) -> dict:
    """Report dictionary ordered by suite name."""
    report = {"seed": seed, "suites": {}}
    for name in sorted(set(names)):
        options = {"k_max": k_max} if name == "toda" and k_max is not None else {}
        report["suites"][name] = [c.to_json() for c in run_suite(name, seed, **options)]
    report["passed"] = all(c["status"] == "pass" for checks in report["suites"].values() for c in checks)
    return report
