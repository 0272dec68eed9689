"""Modified Bessel functions ``I_k(2t)`` and finite two-Bessel heat kernels.

This is the only floating-point layer.  Every value carries an explicit
forward error bound (series truncation plus rounding), and comparisons use
those bounds.  Exact rational data (heat coefficients, Lemma coefficients,
resummed polynomials) stay exact until the final evaluation.

The resummation rests on

    t^m I_k(2t) = (-1)^m sum_{i <= k, i = k+m mod 2} A^{m,k}_i I_i(2t),
    A^{m,k}_i   = i / (4^{m-1} (m-1)!) prod_{|j|<m, j = m mod 2} ((k+j)^2 - i^2),

so a coefficient rule that is an odd polynomial in ``i`` on each parity
class sums to ``p1(t) I_k(2t) + p2(t) I_{k-1}(2t)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .algebra import LaurentPoly, as_rational
from .darboux import DarbouxSpec, extract_L
from .errors import CapExceededError, FitFailure, StructureError, TodaHeatError
from .heat import AlphaTable, alpha_recurrence, required_window
from .lattice import Window

__all__ = [
    "BesselEvaluator",
    "BesselValue",
    "bessel_i",
    "uniform_bound",
    "recurrence_check",
    "lemma_coefficient",
    "t_power_times_bessel",
    "lemma_check",
    "kernel_truncated",
    "FiniteKernelForm",
    "resum_two_bessel",
    "fit_odd_branches",
    "finite_form_from_alpha",
    "finite_form_check",
]

UNIT = 2.0 ** -53


def _gamma(n: int) -> float:
    """Standard rounding-growth factor ``n u / (1 - n u)``."""
    nu = n * UNIT
    return nu / (1 - nu)


@dataclass(frozen=True)
class BesselValue:
    value: float
    bound: float

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class BesselEvaluator:
    """Series evaluator with a relative truncation target and a term cap."""

    rel_tol: float = 1e-17
    max_terms: int = 100_000

    def __call__(self, k: int, two_t: float) -> BesselValue:
        r = abs(int(k))
        t = float(two_t) / 2.0
        at = abs(t)
        # first term t^r / r!, built with 2r roundings
        term = 1.0
        for i in range(1, r + 1):
            term = term * at / i
        total, j, ops = 0.0, 0, 2 * r
        t2 = at * at
        while True:
            total += term
            q = t2 / ((j + 1) * (r + j + 1))
            nxt = term * q
            j += 1
            ops += 3
            # terms decrease from here on with ratio <= q, so the tail is geometric
            if q < 0.5:
                tail = nxt / (1 - q)
                if tail <= self.rel_tol * total or nxt == 0.0:
                    break
            if j > self.max_terms:
                raise CapExceededError(f"I_{k}({two_t}) needs more than {self.max_terms} terms")
            term = nxt
        bound = tail * (1 + _gamma(ops + 2)) + total * _gamma(ops + j + 2)
        sign = -1.0 if (t < 0 and r % 2) else 1.0
        return BesselValue(sign * total, bound)


_DEFAULT = BesselEvaluator()


def bessel_i(k: int, two_t: float, evaluator: Optional[BesselEvaluator] = None) -> BesselValue:
    """``I_k(two_t)`` with a rigorous absolute error bound (``I_{-k} = I_k``)."""
    return (evaluator or _DEFAULT)(k, two_t)


def uniform_bound(r: int, T: float) -> float:
    """``T^{|r|} / |r|! * e^{T^2}``, valid for ``|I_r(2t)|`` whenever ``|t| <= T``."""
    r = abs(r)
    return math.exp(r * math.log(T) - math.lgamma(r + 1) + T * T) if T > 0 else float(r == 0)


def recurrence_check(k: int, t: float) -> Tuple[float, float]:
    """Defect of ``t (I_{k-1} - I_{k+1}) = k I_k`` at ``2t`` and its admissible bound."""
    a, b, c = bessel_i(k - 1, 2 * t), bessel_i(k + 1, 2 * t), bessel_i(k, 2 * t)
    lhs = t * (a.value - b.value)
    rhs = k * c.value
    bound = abs(t) * (a.bound + b.bound) + abs(k) * c.bound
    bound += _gamma(3) * (abs(lhs) + abs(rhs)) + _gamma(1) * abs(t) * (abs(a.value) + abs(b.value))
    return abs(lhs - rhs), bound


# -- Lemma coefficients ------------------------------------------------------

def _lemma_poly(m: int, base: int) -> LaurentPoly:
    """``A^{m,base}_i`` as a polynomial in ``i`` (odd, degree ``2m - 1``)."""
    if m < 1:
        raise ValueError("m must be positive")
    i = LaurentPoly.x()
    out = i * Fraction(1, 4 ** (m - 1) * math.factorial(m - 1))
    for j in range(-(m - 1), m):
        if (j - m) % 2 == 0:
            out = out * (LaurentPoly({0: (base + j) ** 2}) - i * i)
    return out


def lemma_coefficient(m: int, k: int, i: int) -> Fraction:
    """``A^{m,k}_i`` exactly (no parity or range restriction applied)."""
    return _lemma_poly(m, k)(Fraction(i))


def t_power_times_bessel(m: int, k: int, depth: int = 60) -> Dict[int, Fraction]:
    """Signed coefficients ``(-1)^m A^{m,k}_i`` for ``k - depth <= i <= k``, ``i = k+m mod 2``."""
    poly = _lemma_poly(m, k)
    sign = (-1) ** m
    return {i: sign * poly(Fraction(i)) for i in range(k, k - depth - 1, -1) if (i - k - m) % 2 == 0}


def _tail_bound(coeff_at, start: int, T: float, extra: int = 400) -> float:
    """Bound on ``sum_{i <= start} |c(i)| |I_i(2t)|`` with the uniform bound, ``start < 0``.

    Sums ``extra`` terms explicitly and closes with a geometric remainder.
    """
    total, last_ratio, prev = 0.0, 1.0, 0.0
    for s in range(extra):
        b = abs(float(coeff_at(start - s))) * uniform_bound(start - s, T)
        total += b
        if prev > 0:
            last_ratio = b / prev
        prev = b
    if last_ratio >= 1:
        return math.inf
    return total * (1 + 4 * UNIT * extra) + (prev or 0.0) * last_ratio / (1 - last_ratio)


def _sum_with_bound(terms: Sequence[Tuple[float, BesselValue]]) -> Tuple[float, float]:
    """``sum c I`` with error: propagated Bessel bounds, coefficient rounding, accumulation."""
    total, bound, mag = 0.0, 0.0, 0.0
    for c, v in terms:
        total += c * v.value
        bound += abs(c) * v.bound
        mag += abs(c * v.value)
    bound += _gamma(len(terms) + 2) * mag
    return total, bound


def lemma_check(m: int, k: int, t: float, depth: int = 60) -> Tuple[float, float, float]:
    """``(lhs, rhs, bound)`` for the ``t^m I_k`` expansion at ``t``."""
    lhs_v = bessel_i(k, 2 * t)
    lhs = t ** m * lhs_v.value
    lhs_bound = abs(t) ** m * lhs_v.bound + _gamma(m + 1) * abs(lhs)
    coeffs = t_power_times_bessel(m, k, depth)
    rhs, bound = _sum_with_bound([(float(c), bessel_i(i, 2 * t)) for i, c in coeffs.items()])
    low = min(coeffs) - 2
    poly, sign = _lemma_poly(m, k), (-1) ** m
    tail = _tail_bound(lambda i: sign * poly(Fraction(i)), low, abs(t)) if low < 0 else math.inf
    return lhs, rhs, lhs_bound + bound + tail


# -- heat kernel -------------------------------------------------------------

def kernel_truncated(alpha: AlphaTable, n: int, m: int, t: float,
                     K: Optional[int] = None) -> Tuple[float, float, float]:
    """``sum_{k<=K} alpha_k(n,m) I_{n-m-k}(2t)``.

    Returns ``(value, rounding_bound, tail_estimate)``; the tail estimate is a
    heuristic from the observed growth of ``|alpha_k|`` and is not guaranteed.
    """
    K = alpha.order if K is None else K
    if K > alpha.order:
        raise ValueError(f"table has order {alpha.order}, asked for {K}")
    vals = [alpha[(k, n, m)] for k in range(K + 1)]
    value, bound = _sum_with_bound(
        [(float(v), bessel_i(n - m - k, 2 * t)) for k, v in enumerate(vals)])
    bound += sum(abs(float(v)) * UNIT * abs(bessel_i(n - m - k, 2 * t).value)
                 for k, v in enumerate(vals))
    recent = [abs(float(v)) for v in vals[-6:]]
    scale = max(recent) if recent else 0.0
    ratios = [recent[i + 1] / recent[i] for i in range(len(recent) - 1) if recent[i] > 0]
    growth = max([1.0] + ratios)
    tail = 0.0
    for j in range(1, 200):
        tail += scale * growth ** j * uniform_bound(n - m - K - j, abs(t))
    return value, bound, tail


@dataclass(frozen=True)
class FiniteKernelForm:
    """``u = (1 + p1(t)) I_c(2t) + p2(t) I_{c-1}(2t)`` with ``c = n - m`` (cutoff)."""

    p1: Tuple[Fraction, ...]
    p2: Tuple[Fraction, ...]
    cutoff: int
    n: Optional[int] = None
    m: Optional[int] = None
    degrees: Tuple[int, int] = (0, 0)
    samples: Tuple[dict, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if (self.p1 and self.p1[0] != 0) or (self.p2 and self.p2[0] != 0):
            raise StructureError("p1(0) and p2(0) must vanish")

    @staticmethod
    def _poly(coeffs: Sequence[Fraction], t: float) -> Tuple[float, float]:
        v, mag = 0.0, 0.0
        for c in reversed(coeffs):
            v = v * t + float(c)
        for e, c in enumerate(coeffs):
            mag += abs(float(c)) * abs(t) ** e
        return v, _gamma(2 * len(coeffs) + 2) * mag

    def tail_value(self, t: float) -> Tuple[float, float]:
        """``p1 I_c + p2 I_{c-1}`` with its rounding bound."""
        a, ab = self._poly(self.p1, t)
        b, bb = self._poly(self.p2, t)
        i1, i2 = bessel_i(self.cutoff, 2 * t), bessel_i(self.cutoff - 1, 2 * t)
        v = a * i1.value + b * i2.value
        bound = ab * abs(i1.value) + abs(a) * i1.bound + bb * abs(i2.value) + abs(b) * i2.bound
        return v, bound + _gamma(3) * (abs(a * i1.value) + abs(b * i2.value))

    def kernel_value(self, t: float) -> Tuple[float, float]:
        v, b = self.tail_value(t)
        lead = bessel_i(self.cutoff, 2 * t)
        return lead.value + v, b + lead.bound + UNIT * abs(lead.value + v)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "p1": [str(c) for c in self.p1],
            "p2": [str(c) for c in self.p2],
            "fit_degrees": list(self.degrees),
            "samples": list(self.samples),
        }


def _odd_poly(coeffs: Sequence[object]) -> LaurentPoly:
    p = LaurentPoly({e: as_rational(c) for e, c in enumerate(coeffs)})
    if any(e % 2 == 0 for e, _ in p.terms()):
        raise StructureError("coefficient rule is not an odd polynomial on a parity branch")
    return p


def _resum_class(target: LaurentPoly, k: int, same_parity: bool) -> Tuple[Dict[int, Fraction], Dict[int, Fraction]]:
    """Triangular solve on one parity class; returns ``(p1, p2)`` power maps."""
    p1: Dict[int, Fraction] = {}
    p2: Dict[int, Fraction] = {}
    rest = target
    top = target.degree
    if top is None:
        return p1, p2
    for m in range((top + 1) // 2, 0, -1):
        # class i = k takes I_k for even m and I_{k-1} for odd m; the other class swaps
        onto_k = (m % 2 == 0) == same_parity
        basis = _lemma_poly(m, k if onto_k else k - 1) * Fraction((-1) ** m)
        lam = rest.coeff(2 * m - 1) / basis.coeff(2 * m - 1)
        rest = rest - basis * lam
        if lam:
            (p1 if onto_k else p2)[m] = lam
    if not rest.is_zero():
        raise StructureError("residual after triangular solve; rule is not odd")
    return p1, p2


def resum_two_bessel(even_branch: Sequence[object], odd_branch: Sequence[object], k: int,
                     certify: bool = True) -> FiniteKernelForm:
    """``sum_{i<k} p(i) I_i(2t) = p1(t) I_k(2t) + p2(t) I_{k-1}(2t)``.

    ``even_branch``/``odd_branch`` are ascending coefficient lists of the odd
    polynomials giving ``p(i)`` for even/odd ``i``.  With ``certify`` the
    identity is checked numerically at five sample ``t`` values to ``1e-9``.
    """
    branches = {0: _odd_poly(even_branch), 1: _odd_poly(odd_branch)}
    same = branches[k % 2]
    other = branches[(k - 1) % 2]
    a1, a2 = _resum_class(same, k, True)
    b1, b2 = _resum_class(other, k, False)
    top = max([0] + list(a1) + list(a2) + list(b1) + list(b2))
    p1 = [Fraction(0)] * (top + 1)
    p2 = [Fraction(0)] * (top + 1)
    for d, target in ((a1, p1), (b1, p1), (a2, p2), (b2, p2)):
        for e, c in d.items():
            target[e] += c
    while len(p1) > 1 and p1[-1] == 0:
        p1.pop()
    while len(p2) > 1 and p2[-1] == 0:
        p2.pop()
    form = FiniteKernelForm(tuple(p1), tuple(p2), k)
    if certify:
        samples = []
        for t in (0.2, 0.5, 1.0, 1.7, 2.5):
            closed, cb = form.tail_value(t)
            direct, db = _direct_sum(branches, k, t)
            if abs(closed - direct) > min(1e-9, cb + db) and abs(closed - direct) > 1e-9:
                raise TodaHeatError(f"resummation failed numerically at t={t}: {closed} vs {direct}")
            samples.append({"t": t, "closed": closed, "direct": direct, "bound": cb + db})
        form = FiniteKernelForm(form.p1, form.p2, k, samples=tuple(samples))
    return form


def _direct_sum(branches: Mapping[int, LaurentPoly], k: int, t: float,
                depth: int = 80) -> Tuple[float, float]:
    terms = [(float(branches[i % 2](Fraction(i))), bessel_i(i, 2 * t))
             for i in range(k - 1, k - 1 - depth, -1)]
    v, b = _sum_with_bound(terms)
    low = k - 1 - depth
    tail = _tail_bound(lambda i: branches[i % 2](Fraction(i)), low, abs(t)) if low < 0 else math.inf
    return v, b + tail


# -- exact odd-polynomial fit ------------------------------------------------

def _solve_consistent(rows: List[List[Fraction]], rhs: List[Fraction]) -> Optional[List[Fraction]]:
    """Exact solution of an overdetermined system, or ``None`` if inconsistent."""
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots, r = [], 0
    for c in range(ncols):
        p = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    if any(row[-1] != 0 for row in aug[r:]):
        return None
    sol = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        sol[c] = aug[i][-1]
    return sol


def fit_odd_branches(values: Mapping[int, Fraction], shift: int, max_degree: int):
    """Fit ``values[k]`` (``k >= 1``) by an odd polynomial in ``d = shift - k`` per parity of ``k``.

    Returns ``{parity_of_k: ascending coefficients in d}`` and the degrees
    actually used.  Raises :class:`FitFailure` naming the first ``k`` that
    breaks the fit.
    """
    powers = list(range(1, max_degree + 1, 2))
    out: Dict[int, List[Fraction]] = {}
    degrees: Dict[int, int] = {}
    for parity in (1, 0):
        ks = sorted(k for k in values if k >= 1 and k % 2 == parity)
        rows = [[Fraction(shift - k) ** e for e in powers] for k in ks]
        rhs = [values[k] for k in ks]
        sol = _solve_consistent(rows, rhs) if powers else None
        if not powers:
            bad = next((k for k in ks if values[k] != 0), None)
            if bad is not None:
                raise FitFailure(f"heat coefficient alpha_{bad} is nonzero but degree bound is empty", k=bad)
            sol = []
        if sol is None:
            # locate the first k at which the prefix stops being fittable
            bad = ks[-1]
            for cut in range(1, len(ks) + 1):
                if _solve_consistent(rows[:cut], rhs[:cut]) is None:
                    bad = ks[cut - 1]
                    break
            raise FitFailure(
                f"heat coefficients are not an odd polynomial of degree <= {max_degree} "
                f"in n-m-k (parity {parity}); first failure at k={bad}", k=bad)
        coeffs = [Fraction(0)] * (max_degree + 1 if max_degree > 0 else 1)
        for e, c in zip(powers, sol):
            coeffs[e] = c
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        out[parity] = coeffs
        degrees[parity] = len(coeffs) - 1
    return out, degrees


def finite_form_from_alpha(alpha: AlphaTable, n: int, m: int, max_degree: int,
                           t_samples: Sequence[float] = (0.25, 1.0, 2.0)) -> FiniteKernelForm:
    """Exact fit, resummation and numeric comparison for one ``(n, m)``."""
    c = n - m
    values = {k: alpha[(k, n, m)] for k in range(1, alpha.order + 1)}
    branches, degrees = fit_odd_branches(values, c, max_degree)
    # p(i) with i = c - k: the parity of i is fixed by the parity of k
    by_i = {}
    for parity_k, coeffs in branches.items():
        # alpha_k = f(d), d = c - k = i, so p(i) = f(i)
        by_i[(c - parity_k) % 2] = coeffs
    form = resum_two_bessel(by_i[0], by_i[1], c, certify=False)
    samples = []
    for t in t_samples:
        closed, cb = form.kernel_value(t)
        trunc, tb, tail = kernel_truncated(alpha, n, m, t)
        diff = abs(closed - trunc)
        bound = cb + tb + tail
        samples.append({"t": t, "closed": closed, "truncated": trunc, "bound": bound,
                        "diff": diff, "ok": diff <= bound and diff <= 1e-9})
    return FiniteKernelForm(form.p1, form.p2, c, n, m, (degrees[1], degrees[0]), tuple(samples))


def finite_form_check(spec: DarbouxSpec, n: int, m: int,
                      t_samples: Sequence[float] = (0.25, 1.0, 2.0), K: int = 60) -> FiniteKernelForm:
    """Full pipeline on a Darboux operator: exact fit, resum, numeric match."""
    need = required_window([(n, m)], K) or (min(n, m), max(n, m))
    w = extract_L(spec, need).window
    alpha = alpha_recurrence(w, K, [(n, m)])
    N = max(spec.n1, spec.n2)
    return finite_form_from_alpha(alpha, n, m, 2 * N - 1, t_samples)
