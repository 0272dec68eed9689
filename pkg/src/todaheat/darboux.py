"""Darboux transformations of ``L_0 = E + E^{-1}`` at the spectral edges ``±2``.

The operator ``L_{N1,N2}`` is recovered from the kernel of a monic difference
operator ``Q`` of order ``N = N1 + N2`` through ``Q L_0 = L Q``.  The kernel is
spanned by two Jordan chains

    (L_0 - 2) phi+_j = phi+_{j-1},    (L_0 + 2) phi-_j = phi-_{j-1},

and ``Q`` is the normalized Casorati determinant with ``f`` in the last column.

Chain realization.  ``L_0 - 2`` acts on sequences as ``Delta nabla`` and
``(L_0 + 2)[(-1)^n p] = -(-1)^n Delta nabla p``.  Let ``D^{-1}`` pick the
polynomial solution of ``Delta nabla p = g`` with zero constant and linear
terms.  Each step ``j`` carries a pair ``(c, d)`` and

    phi+_j = D^{-1} phi+_{j-1} + c + d n,
    phi-_j = (-1)^n (-1)^{j-1} [D^{-1} p_{j-1} + c + d n]

(``p_{j-1}`` the polynomial part of the previous ``-`` step).  Only ``c`` of
each step and the ratio ``c/d`` of the first step change ``ker Q``; the
default ``d`` is 1 for the first step and 0 afterwards.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .algebra import LaurentPoly, PowerSeries, as_rational, binom, formal_sqrt, symmetric_decompose
from .errors import IntervalError, SingularParametersError, StructureError
from .lattice import (
    BandedOperator,
    Comparison,
    Interval,
    Seq,
    Window,
    commutator,
    compare_operators,
    compose,
    intersect,
    solve_intertwining,
)
from .wave import WaveTable, wave_table_from_psi

__all__ = [
    "DarbouxSpec",
    "BakerFunction",
    "DarbouxResult",
    "build_phi_chains",
    "chain_defect",
    "casorati_q",
    "extract_L",
    "baker",
    "darboux_wave_table",
    "rational_residue",
    "orthogonality_matrix",
    "orthogonality_check",
    "alpha_contour",
    "curve_function",
    "ring_membership",
    "commuting_pair",
    "spectral_curve_rhs",
    "determinant",
]

Pair = Tuple[Fraction, Fraction]


def determinant(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant by fraction-valued Gaussian elimination."""
    m = [list(r) for r in rows]
    size = len(m)
    det = Fraction(1)
    for c in range(size):
        p = next((r for r in range(c, size) if m[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, size):
            if m[r][c] != 0:
                f = m[r][c] / m[c][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return det


# -- chains -----------------------------------------------------------------

def _poly_eval(coeffs: Sequence[Fraction], n: int) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * n + c
    return acc


def _second_difference_inverse(g: Sequence[Fraction]) -> List[Fraction]:
    """Polynomial ``p`` with ``p(n+1) - 2p(n) + p(n-1) = g(n)`` and ``p(0) = p'(0) = 0``."""
    deg = len(g) - 1
    p = [Fraction(0)] * (deg + 3)
    rest = list(g)
    for e in range(deg + 2, 1, -1):
        # second difference of n^e: 2 * sum_{i even >= 2} C(e, i) n^{e-i}
        c = rest[e - 2] / (e * (e - 1))
        p[e] = c
        for i in range(2, e + 1, 2):
            rest[e - i] -= c * 2 * comb(e, i)
    return p


@dataclass(frozen=True)
class DarbouxSpec:
    """Darboux data: ``N1`` steps at ``+2`` and ``N2`` at ``-2``, one ``(c, d)`` pair each."""

    n1: int
    n2: int
    plus: Tuple[Pair, ...] = ()
    minus: Tuple[Pair, ...] = ()

    def __post_init__(self):
        if self.n1 < 0 or self.n2 < 0:
            raise ValueError("N1 and N2 must be nonnegative")
        if len(self.plus) != self.n1 or len(self.minus) != self.n2:
            raise ValueError(
                f"expected {self.n1} '+' and {self.n2} '-' parameter pairs, "
                f"got {len(self.plus)} and {len(self.minus)}")
        for chain in (self.plus, self.minus):
            if chain and chain[0][1] == 0:
                raise StructureError("first chain element needs a nonzero linear coefficient")

    @property
    def order(self) -> int:
        return self.n1 + self.n2

    @classmethod
    def from_params(cls, n1: int, n2: int, params: Sequence[object]) -> "DarbouxSpec":
        """One constant per step: ``params[:n1]`` for ``+``, the rest for ``-``."""
        params = [as_rational(p) for p in params]
        if len(params) != n1 + n2:
            raise ValueError(f"expected {n1 + n2} parameters, got {len(params)}")

        def pairs(ps):
            return tuple((c, Fraction(1 if i == 0 else 0)) for i, c in enumerate(ps))

        return cls(n1, n2, pairs(params[:n1]), pairs(params[n1:]))

    @classmethod
    def generic(cls, n1: int, n2: int, seed: int = 0) -> "DarbouxSpec":
        """Small non-integer rational parameters (keeps Casorati determinants away from zero)."""
        rng = random.Random(f"darboux-{n1}-{n2}-{seed}")
        params = [Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.choice([2, 3, 5, 7]))
                  for _ in range(n1 + n2)]
        return cls.from_params(n1, n2, params)

    def params_list(self) -> List[str]:
        return [f"{c}" for c, _ in self.plus + self.minus]

    def to_json(self) -> dict:
        return {
            "N1": self.n1,
            "N2": self.n2,
            "plus": [[str(c), str(d)] for c, d in self.plus],
            "minus": [[str(c), str(d)] for c, d in self.minus],
        }


@dataclass(frozen=True)
class Chain:
    """Kernel function ``sign^n * poly(n)`` of a Darboux chain."""

    poly: Tuple[Fraction, ...]
    alternating: bool
    sign: int = 1

    def __call__(self, n: int) -> Fraction:
        v = _poly_eval(self.poly, n) * self.sign
        return -v if self.alternating and n % 2 else v


def build_phi_chains(spec: DarbouxSpec) -> Tuple[List[Chain], List[Chain]]:
    """The two chains as exact callables (defined for every integer ``n``)."""

    def build(pairs, alternating):
        out, prev = [], [Fraction(0)]
        for j, (c, d) in enumerate(pairs, start=1):
            p = _second_difference_inverse(prev) if j > 1 else [Fraction(0), Fraction(0)]
            p = list(p) + [Fraction(0)] * max(0, 2 - len(p))
            p[0] += as_rational(c)
            p[1] += as_rational(d)
            while len(p) > 1 and p[-1] == 0:
                p.pop()
            out.append(Chain(tuple(p), alternating, (-1) ** (j - 1) if alternating else 1))
            prev = p
        return out

    return build(spec.plus, False), build(spec.minus, True)


def chain_defect(spec: DarbouxSpec, interval: Interval) -> Optional[Tuple[str, int, int]]:
    """First ``(chain, j, n)`` where a chain equation fails on ``interval``, else ``None``."""
    plus, minus = build_phi_chains(spec)
    for name, chain, eig in (("+", plus, 2), ("-", minus, -2)):
        for j, phi in enumerate(chain):
            for n in range(interval[0], interval[1] + 1):
                lhs = phi(n + 1) + phi(n - 1) - eig * phi(n)
                if lhs != (chain[j - 1](n) if j else 0):
                    return name, j + 1, n
    return None


# -- Q and L ----------------------------------------------------------------

def _delta_powers(f, n: int, top: int) -> List[Fraction]:
    """``[Delta^i f(n) for i = 0..top]``."""
    vals = [f(n + r) for r in range(top + 1)]
    out = []
    for i in range(top + 1):
        out.append(sum((comb(i, r) * (-1) ** (i - r) * vals[r] for r in range(i + 1)), Fraction(0)))
    return out


def casorati_q(spec: DarbouxSpec, interval: Interval) -> BandedOperator:
    """Monic order-``N`` operator killing both chains, bands on ``interval``."""
    plus, minus = build_phi_chains(spec)
    funcs = plus + minus
    N = len(funcs)
    lo, hi = interval
    if N == 0:
        return BandedOperator.identity(lo, hi)
    bands: Dict[int, List[Fraction]] = {r: [] for r in range(N + 1)}
    for n in range(lo, hi + 1):
        cols = [_delta_powers(f, n, N) for f in funcs]  # cols[j][i] = Delta^i phi_j(n)
        W = determinant([[cols[j][i] for j in range(N)] for i in range(N)])
        if W == 0:
            raise SingularParametersError(
                f"Casorati determinant vanishes at n={n}; Darboux data is degenerate", index=n)
        delta_coeffs = []
        for i in range(N + 1):
            minor = [[cols[j][r] for j in range(N)] for r in range(N + 1) if r != i]
            delta_coeffs.append((-1) ** (i + N) * determinant(minor) / W)
        for r in range(N + 1):
            bands[r].append(sum((delta_coeffs[i] * comb(i, r) * (-1) ** (i - r)
                                 for i in range(r, N + 1)), Fraction(0)))
    return BandedOperator({r: Seq(lo, v) for r, v in bands.items()})


@dataclass(frozen=True)
class DarbouxResult:
    spec: DarbouxSpec
    q: BandedOperator
    window: Window


def extract_L(spec: DarbouxSpec, interval: Interval) -> DarbouxResult:
    """Solve ``Q L_0 = L Q`` for ``L = E + b_n + a_n E^{-1}`` on ``interval``."""
    lo, hi = interval
    N = spec.order
    q = casorati_q(spec, (lo - 1, hi + 2))
    l0 = BandedOperator.constant({-1: 1, 1: 1}, lo - 2, hi + N + 3)
    L = solve_intertwining(q, compose(q, l0), (-1, 1))
    iv = intersect(L.band(-1).interval, L.band(0).interval, L.band(1).interval)
    if iv is None or iv[0] > lo or iv[1] < hi:
        raise IntervalError(f"extracted operator does not cover {interval}")
    if any(L.band(1)[n] != 1 for n in range(lo, hi + 1)):
        raise StructureError("extracted operator is not monic in E")
    a = L.band(-1).restrict(interval)
    for n, v in a.items():
        if v == 0:
            raise SingularParametersError(f"a_n vanishes at n={n}", index=n)
    w = Window(a=a, b=L.band(0).restrict(interval))
    return DarbouxResult(spec, q, w)


def spectral_curve_rhs(w: Window, n1: int, n2: int) -> BandedOperator:
    """``(L - 2)^{2N1+1} (L + 2)^{2N2+1}`` on the window's valid interior."""
    L = w.lax_operator()
    lo, hi = w.interval
    out = None
    for shift, power in ((-2, 2 * n1 + 1), (2, 2 * n2 + 1)):
        factor = L + BandedOperator.constant({0: shift}, lo, hi)
        for _ in range(power):
            out = factor if out is None else compose(factor, out)
    return out


def _laurent_to_operator(h: LaurentPoly, lo: int, hi: int) -> BandedOperator:
    return BandedOperator.constant(dict(h.terms()), lo, hi)


def curve_function(n1: int, n2: int) -> LaurentPoly:
    """``f_{N1,N2}(x) = (x-1)^{2N1+1} (x+1)^{2N2+1} / x^{N1+N2+1}``."""
    x = LaurentPoly.x()
    return ((x - 1) ** (2 * n1 + 1) * (x + 1) ** (2 * n2 + 1)).shift(-(n1 + n2 + 1))


@dataclass(frozen=True)
class CommutingPair:
    m: BandedOperator
    commutes: Comparison
    curve: Comparison

    @property
    def certified(self) -> bool:
        return bool(self.commutes) and bool(self.curve)


def commuting_pair(result: DarbouxResult) -> CommutingPair:
    """``M`` with ``M Q = Q f(E)``, plus the commutation and curve certificates."""
    spec, q, w = result.spec, result.q, result.window
    N = spec.order
    f = curve_function(spec.n1, spec.n2)
    qlo, qhi = q.interior()
    fe = _laurent_to_operator(f, qlo - N - 2, qhi + 2 * N + 3)
    m = solve_intertwining(q, compose(q, fe), (-(N + 1), N + 1))
    # restrict M to where the extracted window lives so products stay meaningful
    mw = BandedOperator({j: s.restrict(intersect(s.interval, w.interval)) for j, s in m.bands.items()})
    L = w.lax_operator()
    comm = commutator(mw, L)
    zero = BandedOperator({j: Seq.constant(s.lo, s.hi, 0) for j, s in comm.bands.items()})
    return CommutingPair(
        m=mw,
        commutes=compare_operators(comm, zero),
        curve=compare_operators(compose(mw, mw), spectral_curve_rhs(w, spec.n1, spec.n2)),
    )


# -- Baker function -----------------------------------------------------------

def _ps_const(c, order: int) -> PowerSeries:
    return PowerSeries([c] + [0] * order)


def _shift_up(p: PowerSeries) -> PowerSeries:
    """Multiply by the series variable, keeping the order."""
    return PowerSeries([0] + list(p.coeffs[:-1]))


def _ps_power(p: PowerSeries, e: int) -> PowerSeries:
    base = p if e >= 0 else p.reciprocal()
    out = _ps_const(1, p.order)
    for _ in range(abs(e)):
        out = out * base
    return out


def _x_over_z(order: int) -> PowerSeries:
    """``X(w) = (1 + sqrt(1 - 4 w^2)) / 2`` so that ``x = z X(1/z)``."""
    root = formal_sqrt(PowerSeries(([1, 0, -4] + [0] * order)[: order + 1]))
    return (root + _ps_const(1, order)) * Fraction(1, 2)


@dataclass(frozen=True)
class BakerFunction:
    """``Psi_n(x) = Q(x^n) / ((x-1)^N1 (x+1)^N2)`` stored by numerator."""

    n1: int
    n2: int
    numerators: Mapping[int, LaurentPoly] = field(repr=False)
    q0: Mapping[int, Fraction] = field(repr=False)

    @property
    def interval(self) -> Interval:
        return min(self.numerators), max(self.numerators)

    @property
    def denominator(self) -> LaurentPoly:
        x = LaurentPoly.x()
        return (x - 1) ** self.n1 * (x + 1) ** self.n2

    def numerator(self, n: int) -> LaurentPoly:
        if n not in self.numerators:
            raise IntervalError(f"Baker function known on {self.interval}, not at n={n}")
        return self.numerators[n]

    def c(self, n: int) -> Fraction:
        """Constant in ``Psi_n(1/x) = c_n x Psi*_{n+1}(x)``."""
        if n not in self.q0:
            raise IntervalError(f"c_n known on {self.interval}, not at n={n}")
        return (-1) ** self.n1 * self.q0[n]

    def adjoint_numerator(self, m: int) -> LaurentPoly:
        """Numerator of ``Psi*_{m+1}`` over the same denominator as ``Psi``."""
        sign = (-1) ** self.n1
        return self.numerator(m).invert().shift(self.n1 + self.n2 - 1) * (sign / self.c(m))

    def wave_coefficients(self, n: int, order: int) -> List[Fraction]:
        """``psi_k(n)``, ``k = 0..order``: ``z^{-n} Psi_n`` expanded in ``1/z``.

        The wave functions use the eigenvalue ``z = x + 1/x`` of ``L`` as the
        spectral parameter, so ``x = z X(1/z)`` with
        ``X(w) = (1 + sqrt(1 - 4 w^2)) / 2``.
        """
        X = _x_over_z(order)
        y = _shift_up(X.reciprocal())  # 1/x = w / X(w)
        num = self.numerator(n).shift(-n)
        N = self.n1 + self.n2
        one = _ps_const(1, order)
        top = one * 0
        y_pow = one
        for i in range(N + 1):
            top = top + y_pow * num.coeff(N - i)
            y_pow = y_pow * y
        den = one
        for _ in range(self.n1):
            den = den * (one + y * -1)
        for _ in range(self.n2):
            den = den * (one + y)
        return list((_ps_power(X, n) * top * den.reciprocal()).coeffs)

    def adjoint_wave_coefficients(self, m: int, order: int) -> List[Fraction]:
        """``psi*_k(m+1)`` read off ``Psi*_{m+1}(x) dx / dz`` expanded in ``1/z``.

        ``Psi*_{m+1}`` is taken from ``Psi_m(1/x) / (c_m x)``, so comparing with
        the series-inversion adjoint tests that relation independently.
        """
        X = _x_over_z(order)
        y = _shift_up(X.reciprocal())
        one = _ps_const(1, order)
        top, y_pow = one * 0, one
        num = self.numerator(m).shift(-m)  # sum_j q_j(m) x^j
        for j in range(self.n1 + self.n2 + 1):
            top = top + y_pow * num.coeff(j)
            y_pow = y_pow * y
        den = one * (self.c(m) * (-1) ** self.n1)
        for _ in range(self.n1):
            den = den * (one + y * -1)
        for _ in range(self.n2):
            den = den * (one + y)
        den = den * (one + y * y * -1)  # dz/dx = 1 - 1/x^2
        return list((_ps_power(X, -m - 1) * top * den.reciprocal()).coeffs)

    def eigen_defect(self, w: Window) -> Optional[int]:
        """First ``n`` where ``L Psi_n != (x + 1/x) Psi_n`` (``None`` if none)."""
        u = LaurentPoly.u()
        lo, hi = intersect(w.interval, (self.interval[0] + 1, self.interval[1] - 1))
        for n in range(lo, hi + 1):
            lhs = self.numerator(n + 1) + self.numerator(n) * w.b[n] + self.numerator(n - 1) * w.a[n]
            if lhs != u * self.numerator(n):
                return n
        return None


def baker(result: DarbouxResult, interval: Optional[Interval] = None) -> BakerFunction:
    q = result.q
    lo, hi = interval if interval is not None else q.interior()
    iv = intersect((lo, hi), q.interior())
    if iv != (lo, hi):
        raise IntervalError(f"Q is known on {q.interior()}, Baker function wanted on {(lo, hi)}")
    nums, q0 = {}, {}
    for n in range(lo, hi + 1):
        nums[n] = LaurentPoly({n + j: q.coefficient(j, n) for j in q.offsets})
        q0[n] = q.coefficient(0, n)
        if q0[n] == 0:
            raise SingularParametersError(f"Q has vanishing lowest band at n={n}", index=n)
    return BakerFunction(result.spec.n1, result.spec.n2, nums, q0)


def darboux_wave_table(bf: BakerFunction, order: int, interval: Interval) -> WaveTable:
    """Wave table read off the exact Baker function (adjoint by series inversion)."""
    lo, hi = interval
    rows = {n: bf.wave_coefficients(n, order) for n in range(lo, hi + 1)}
    psi = [Seq(lo, (rows[n][k] for n in range(lo, hi + 1))) for k in range(1, order + 1)]
    return wave_table_from_psi(psi, provenance="darboux-exact")


# -- residues and orthogonality ----------------------------------------------

def _series_inverse_power(root: Fraction, at: Fraction, mult: int, order: int) -> PowerSeries:
    """``1 / (at - root + h)^mult`` as a power series in ``h``."""
    d = at - root
    base = PowerSeries([Fraction(1), Fraction(1) / d] + [0] * order).truncate(order)
    out = PowerSeries([Fraction(1) / d ** mult] + [0] * order)
    inv = base.reciprocal()
    for _ in range(mult):
        out = out * inv
    return out


def rational_residue(num: LaurentPoly, poles: Mapping[int, int], point: int) -> Fraction:
    """Residue at ``point`` of ``num(x) / prod_r (x - r)^{poles[r]}``.

    ``num`` may contain negative powers (an extra pole at 0).  All poles are
    at integers, so exact expansions in the local parameter suffice.
    """
    poles = {r: m for r, m in poles.items() if m > 0}
    if num.is_zero():
        return Fraction(0)
    low = num.low_degree
    if low < 0:
        num = num.shift(-low)
        poles = dict(poles)
        poles[0] = poles.get(0, 0) + (-low)
    mult = poles.get(point, 0)
    if mult == 0:
        return Fraction(0)
    need = mult - 1
    # num(point + h) as a polynomial in h
    local = [Fraction(0)] * (need + 1)
    for e, c in num.terms():
        for i in range(min(e, need) + 1):
            local[i] += c * binom(e, i) * Fraction(point) ** (e - i)
    series = PowerSeries(local)
    for r, m in poles.items():
        if r != point:
            series = series * _series_inverse_power(Fraction(r), Fraction(point), m, need)
    return series[need]


def _pair_numerator(bf: BakerFunction, n: int, m: int, twist: int = 0) -> LaurentPoly:
    return (bf.numerator(n) * bf.adjoint_numerator(m)).shift(twist)


def _pair_poles(bf: BakerFunction) -> Dict[int, int]:
    return {1: 2 * bf.n1, -1: 2 * bf.n2}


def orthogonality_matrix(bf: BakerFunction, ns: Sequence[int], ms: Sequence[int]):
    """Residues at 0 of ``Psi_n Psi*_{m+1}`` plus the largest failure at ``±1``.

    Returns ``(matrix, side_residues_ok)``.
    """
    poles = _pair_poles(bf)
    mat, side_ok = [], True
    for n in ns:
        row = []
        for m in ms:
            num = _pair_numerator(bf, n, m)
            row.append(rational_residue(num, poles, 0))
            if rational_residue(num, poles, 1) != 0 or rational_residue(num, poles, -1) != 0:
                side_ok = False
        mat.append(row)
    return mat, side_ok


def orthogonality_check(bf: BakerFunction, ns: Sequence[int], ms: Sequence[int]) -> bool:
    mat, side_ok = orthogonality_matrix(bf, ns, ms)
    ident = all(v == (1 if n == m else 0) for n, row in zip(ns, mat) for m, v in zip(ms, row))
    return ident and side_ok


def alpha_contour(bf: BakerFunction, k: int, n: int, m: int) -> Fraction:
    """Contour integral of ``x^{k-n+m} Psi_n(x) Psi*_{m+1}(x) dx / 2 pi i``.

    The contour must enclose ``x = ±1`` as well as the origin: ``x^j`` is not
    a function on the spectral curve, so the residues at ``±1`` do not vanish
    once the monomial is inserted.  The origin alone gives
    ``q_0(n)/q_0(m)`` for ``k = 0`` instead of 1.
    """
    num, poles = _pair_numerator(bf, n, m, k - n + m), _pair_poles(bf)
    return sum((rational_residue(num, poles, p) for p in (0, 1, -1)), Fraction(0))


# -- ring membership ---------------------------------------------------------

def ring_membership(h: LaurentPoly, n1: int, n2: int):
    """Decide ``h in C[x + 1/x, f_{N1,N2}]``.

    Returns ``(True, (P, R))`` with ``h = P(u) + R(u) f`` (ascending ``u``
    coefficient lists), or ``(False, None)``.
    """
    p, anti = symmetric_decompose(h)
    if anti.is_zero():
        return True, (p, [])
    quotient = anti.exact_div(curve_function(n1, n2))
    if quotient is None or not quotient.is_symmetric():
        return False, None
    r, rest = symmetric_decompose(quotient)
    if not rest.is_zero():
        return False, None
    return True, (p, r)
