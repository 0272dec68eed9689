"""Heat-expansion coefficients ``alpha_k(n, m)``.

The heat kernel of ``L = E + b_n + a_n E^{-1}`` expands as
``u(n, m; t) = sum_k alpha_k(n, m) I_{n-m-k}(2t)``.  The coefficients are the
unique solution of

    alpha_k(n,m) + alpha_{k-2}(n,m)
        = alpha_k(n+1,m) + b_n alpha_{k-1}(n,m) + a_n alpha_{k-2}(n-1,m),
    alpha_k(m+k, m) = delta_{k,0},

which :func:`alpha_recurrence` solves by sweeping away from the seed line.
:func:`alpha_residue` evaluates the closed form
``res_z[g_k(n,m;z) Psibar_n(z) Psibar*_{m+1}(z) / z]`` from a wave table, and
:func:`alpha_constant_generating` reads ``alpha_k(0,0)`` of a constant
operator off ``(1 - w^2) / sqrt(1 - 2bw + (2+b^2-4a)w^2 - 2bw^3 + w^4)``.

For ``n > m`` the coefficients are not determined by ``u`` alone (both
``I_r`` and ``I_{-r}`` appear); everything here is the canonical solution of
the recurrence above.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Set, Tuple

from .algebra import LaurentPoly, PowerSeries, as_rational, binom, format_rational, formal_sqrt, residue_z
from .errors import DepthError, IntervalError
from .lattice import Interval, Window
from .wave import WaveTable

Point = Tuple[int, int]

__all__ = [
    "AlphaTable",
    "q_beta_poly",
    "g_poly",
    "alpha_recurrence",
    "alpha_residue",
    "alpha_constant_generating",
    "required_window",
    "diagonal_band",
    "diamond",
]


def q_beta_poly(beta: int, k: int) -> LaurentPoly:
    """Monic ``Q^beta_k(z) = z^k + (beta-2k) sum_j C(beta-2j-1, k-j-1) z^j / (k-j)``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    coeffs = {k: Fraction(1)}
    for j in range(k):
        coeffs[j] = (beta - 2 * k) * binom(beta - 2 * j - 1, k - j - 1) / (k - j)
    return LaurentPoly(coeffs)


def _in_z_squared(p: LaurentPoly) -> LaurentPoly:
    return LaurentPoly({2 * e: c for e, c in p.terms()})


def g_poly(k: int, n_minus_m: int) -> LaurentPoly:
    """Monic degree-``k`` polynomial ``g_k(n, m; z)`` (depends on ``n - m`` only)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k % 2 == 0:
        return _in_z_squared(q_beta_poly(n_minus_m, k // 2))
    return _in_z_squared(q_beta_poly(n_minus_m - 1, (k - 1) // 2)).shift(1)


def diagonal_band(lo: int, hi: int, width: int) -> List[Point]:
    """Points ``(n, m)`` with ``lo <= n <= hi`` and ``|n - m| <= width``."""
    return [(n, m) for n in range(lo, hi + 1) for m in range(n - width, n + width + 1)]


def diamond(center: int, radius: int) -> List[Point]:
    """Points with ``|n - c| + |m - c| <= radius``."""
    return [
        (n, m)
        for n in range(center - radius, center + radius + 1)
        for m in range(center - radius, center + radius + 1)
        if abs(n - center) + abs(m - center) <= radius
    ]


@dataclass(frozen=True)
class AlphaTable:
    """Exact ``alpha_k(n, m)`` for ``0 <= k <= order`` and every region point."""

    order: int
    region: Tuple[Point, ...]
    values: Mapping[Tuple[int, int, int], Fraction] = field(repr=False)
    method: str = "recurrence"

    def __getitem__(self, key: Tuple[int, int, int]) -> Fraction:
        return self.values[key]

    def get(self, k: int, n: int, m: int) -> Fraction:
        return self.values[(k, n, m)]

    def series(self, n: int, m: int) -> List[Fraction]:
        return [self.values[(k, n, m)] for k in range(self.order + 1)]

    def same_values(self, other: "AlphaTable") -> bool:
        return dict(self.values) == dict(other.values)

    def seed_line_ok(self) -> bool:
        for (k, n, m), v in self.values.items():
            if k == 0 and v != 1:
                return False
            if n - m == k and v != (1 if k == 0 else 0):
                return False
        return True

    def rows(self) -> List[Tuple[int, int, int, Fraction]]:
        return [(k, n, m, v) for (k, n, m), v in sorted(self.values.items())]

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "order": self.order,
            "rows": [[k, n, m, format_rational(v)] for k, n, m, v in self.rows()],
        }


def _hull(iv: Optional[Interval], lo: int, hi: int) -> Interval:
    return (lo, hi) if iv is None else (min(iv[0], lo), max(iv[1], hi))


def _plan(m: int, ns: Iterable[int], order: int):
    """Needed ``n`` ranges per order for column ``m`` plus data indices used."""
    ns = list(ns)
    need: List[Optional[Interval]] = [None] * (order + 1)
    for k in range(order + 1):
        need[k] = _hull(None, min(ns + [m + k]), max(ns + [m + k]))
    b_idx: Set[int] = set()
    a_idx: Set[int] = set()
    for k in range(order, 0, -1):
        lo, hi = need[k]
        if lo > hi - 1:
            continue
        steps = (lo, hi - 1)
        b_idx.update(range(steps[0], steps[1] + 1))
        need[k - 1] = _hull(need[k - 1], *steps)
        if k >= 2:
            a_idx.update(range(steps[0], steps[1] + 1))
            need[k - 2] = _hull(need[k - 2], steps[0] - 1, steps[1])
    return need, a_idx, b_idx


def _columns(region: Iterable[Point]) -> Dict[int, List[int]]:
    cols: Dict[int, List[int]] = {}
    for n, m in region:
        cols.setdefault(m, []).append(n)
    return cols


def required_window(region: Iterable[Point], order: int) -> Optional[Interval]:
    """Smallest interval of ``a, b`` data that :func:`alpha_recurrence` reads.

    ``None`` means no data is needed at all (e.g. order 0).
    """
    idx: Set[int] = set()
    for m, ns in _columns(region).items():
        _, a_idx, b_idx = _plan(m, ns, order)
        idx |= a_idx | b_idx
    return (min(idx), max(idx)) if idx else None


def alpha_recurrence(w: Window, order: int, region: Iterable[Point]) -> AlphaTable:
    """Solve the heat recurrence with its seed line exactly."""
    region = tuple(sorted(set(region)))
    need_iv = required_window(region, order)
    if need_iv is not None and (need_iv[0] < w.lo or need_iv[1] > w.hi):
        missing = [n for n in range(need_iv[0], need_iv[1] + 1) if not w.lo <= n <= w.hi]
        raise IntervalError(
            f"window {w.interval} does not cover the dependency cone {need_iv}; "
            f"missing indices {missing}",
            missing=missing,
        )
    a, b = w.a, w.b
    values: Dict[Tuple[int, int, int], Fraction] = {}
    one = Fraction(1)
    for m, ns in _columns(region).items():
        need, _, _ = _plan(m, ns, order)
        cols: List[Dict[int, Fraction]] = []
        for k in range(order + 1):
            lo, hi = need[k]
            if k == 0:
                cols.append({n: one for n in range(lo - 1, hi + 2)})
                continue
            prev, prev2 = cols[k - 1], cols[k - 2] if k >= 2 else None

            def source(n):
                s = b[n] * prev[n]
                if prev2 is not None:
                    s += a[n] * prev2[n - 1] - prev2[n]
                return s

            col = {m + k: Fraction(0)}
            for n in range(m + k, hi):
                col[n + 1] = col[n] - source(n)
            for n in range(m + k - 1, lo - 1, -1):
                col[n] = col[n + 1] + source(n)
            cols.append(col)
        for n in ns:
            for k in range(order + 1):
                values[(k, n, m)] = cols[k][n]
    return AlphaTable(order, region, values, "recurrence")


def alpha_residue(t: WaveTable, order: int, region: Iterable[Point]) -> AlphaTable:
    """Closed form through the reduced wave and adjoint wave functions."""
    if order > t.order:
        raise DepthError(f"alpha up to order {order} needs a wave table of order >= {order}")
    region = tuple(sorted(set(region)))
    values: Dict[Tuple[int, int, int], Fraction] = {}
    for n, m in region:
        try:
            prod = t.wave_series(n, order) * t.adjoint_series(m + 1, order)
        except IntervalError as exc:
            raise IntervalError(f"point ({n}, {m}) lies outside the wave table: {exc}") from exc
        for k in range(order + 1):
            values[(k, n, m)] = residue_z((prod * g_poly(k, n - m)).shift(-1))
    return AlphaTable(order, region, values, "residue")


def alpha_constant_generating(a, b, order: int) -> List[Fraction]:
    """``alpha_k(0, 0)`` for constant coefficients, ``k = 0..order``."""
    a, b = as_rational(a), as_rational(b)
    if a == 0:
        raise ValueError("a must be nonzero")
    if order < 0:
        raise ValueError("order must be nonnegative")
    pad = [0] * (order + 1)
    q = ([1, -2 * b, 2 + b * b - 4 * a, -2 * b, 1] + pad)[: order + 1]
    numer = ([1, 0, -1] + pad)[: order + 1]
    return list((PowerSeries(numer) * formal_sqrt(PowerSeries(q)).reciprocal()).coeffs)
