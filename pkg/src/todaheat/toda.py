"""Toda vector fields, heat-coefficient fields and stationarity combinations.

Everything is an instantaneous vector field at a fixed ``L``: a pair
``(db, da)`` of exact sequences.  No flow is ever integrated.

* ``X_k = [(L^k)_+, L]``; ``db`` is its diagonal, ``da`` its ``E^{-1}`` band.
  A second path reads the same field off wave-function residues
  ``r_k(n) = sum_{i+j=k+1} psi_i(n) psi*_j(n)`` and
  ``l_k(n) = sum_{i+j=k} psi_i(n-1) psi*_j(n)``.
* ``X'_k`` has ``db = alpha_{k+1}(n+1,n) - alpha_{k+1}(n,n-1)`` and
  ``da = a_n (alpha_k(n,n) - alpha_k(n-1,n-1))``.
* ``Y_k`` is the combination of ``X_j`` whose vanishing for large ``k``
  characterizes the operators obtained from ``E + E^{-1}`` by Darboux steps at
  the spectral edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .algebra import LaurentPoly, as_rational, binom
from .errors import IntervalError, WindowTooNarrowError
from .heat import alpha_recurrence, required_window
from .lattice import (
    BandedOperator,
    Interval,
    Seq,
    Window,
    commutator,
    compose,
    intersect,
    operator_power,
    positive_part,
)
from .wave import build_wave_table

Combination = List[Tuple[int, Fraction]]

__all__ = [
    "VectorFieldValue",
    "toda_field",
    "heat_field",
    "xprime_from_x",
    "x_from_xprime",
    "substitute",
    "special_poly_p",
    "special_poly_q",
    "epsilon",
    "r_coefficient_sum",
    "r_coefficient_closed",
    "stationarity_x_coefficients",
    "stationarity_xprime_coefficients",
    "stationarity_field",
    "stationarity_bracket_check",
    "oddness_sum",
    "binomial_identity_sides",
]


def _restrict_common(a: Seq, b: Seq) -> Tuple[Seq, Seq, Interval]:
    iv = intersect(a.interval, b.interval)
    if iv is None:
        raise IntervalError("sequences have disjoint intervals")
    return a.restrict(iv), b.restrict(iv), iv


@dataclass(frozen=True)
class VectorFieldValue:
    """A tangent vector ``(db_n, da_n)`` at a fixed Jacobi operator."""

    db: Seq
    da: Seq

    @property
    def intervals(self) -> Tuple[Interval, Interval]:
        return self.db.interval, self.da.interval

    def restrict(self, iv: Interval) -> "VectorFieldValue":
        return VectorFieldValue(self.db.restrict(iv), self.da.restrict(iv))

    def is_zero(self) -> bool:
        return self.db.is_zero() and self.da.is_zero()

    def agrees(self, other: "VectorFieldValue") -> bool:
        """Equality on the common intervals (which must be nonempty)."""
        a1, b1, _ = _restrict_common(self.db, other.db)
        a2, b2, _ = _restrict_common(self.da, other.da)
        return a1 == b1 and a2 == b2

    def first_difference(self, other: "VectorFieldValue") -> Optional[Tuple[str, int]]:
        for name in ("db", "da"):
            p, q, iv = _restrict_common(getattr(self, name), getattr(other, name))
            for n in range(iv[0], iv[1] + 1):
                if p[n] != q[n]:
                    return name, n
        return None

    @staticmethod
    def combine(terms: Iterable[Tuple[object, "VectorFieldValue"]]) -> "VectorFieldValue":
        """Linear combination, defined on the intersection of all intervals."""
        terms = [(as_rational(c), v) for c, v in terms]
        out = []
        for name in ("db", "da"):
            iv = intersect(*(getattr(v, name).interval for _, v in terms))
            if iv is None:
                raise IntervalError("combination has an empty common interval")
            out.append(Seq.from_function(
                iv[0], iv[1],
                lambda n, name=name: sum((c * getattr(v, name)[n] for c, v in terms), Fraction(0)),
            ))
        return VectorFieldValue(*out)

    def to_json(self) -> dict:
        return {"db": self.db.to_json(), "da": self.da.to_json()}


def _field_from_bracket(m: BandedOperator) -> VectorFieldValue:
    return VectorFieldValue(m.band(0), m.band(-1))


def _toda_bracket(w: Window, k: int) -> VectorFieldValue:
    L = w.lax_operator()
    try:
        return _field_from_bracket(commutator(positive_part(operator_power(w, k)), L))
    except IntervalError as exc:
        raise WindowTooNarrowError(f"window {w.interval} too narrow for X_{k}") from exc


def _toda_residue(w: Window, k: int) -> VectorFieldValue:
    t = build_wave_table(w, k + 1)
    psi, star = t.psi, t.psi_star

    def pair_seq(total: int, lag: int) -> Seq:
        ivs = []
        for i in range(total + 1):
            ivs += [(psi[i].lo + lag, psi[i].hi + lag), star[total - i].interval]
        iv = intersect(*ivs)
        if iv is None:
            raise WindowTooNarrowError(f"window {w.interval} too narrow for residue path, k={k}")
        return Seq.from_function(
            iv[0], iv[1],
            lambda n: sum((psi[i][n - lag] * star[total - i][n] for i in range(total + 1)),
                          Fraction(0)),
        )

    r, l = pair_seq(k + 1, 0), pair_seq(k, 1)
    div = intersect((r.lo, r.hi - 1), w.interval)
    aiv = intersect((l.lo, l.hi - 1), w.interval)
    if div is None or aiv is None:
        raise WindowTooNarrowError(f"window {w.interval} too narrow for residue path, k={k}")
    db = Seq.from_function(div[0], div[1], lambda n: r[n + 1] - r[n])
    da = Seq.from_function(aiv[0], aiv[1], lambda n: w.a[n] * (l[n + 1] - l[n]))
    return VectorFieldValue(db, da)


def toda_field(w: Window, k: int, method: str = "bracket") -> VectorFieldValue:
    """``X_k(L)`` by operator algebra (``"bracket"``) or wave residues (``"residue"``)."""
    if k < 1:
        raise ValueError("k must be positive")
    if method == "bracket":
        return _toda_bracket(w, k)
    if method == "residue":
        return _toda_residue(w, k)
    raise ValueError(f"unknown method {method!r}")


def _heat_points(n: int) -> List[Tuple[int, int]]:
    return [(n + 1, n), (n, n - 1), (n, n), (n - 1, n - 1)]


def heat_field(w: Window, k: int) -> VectorFieldValue:
    """``X'_k(L)`` from heat coefficients next to the diagonal."""
    if k < 1:
        raise ValueError("k must be positive")
    ok = []
    for n in range(w.lo, w.hi + 1):
        need = required_window(_heat_points(n), k + 1)
        if need is None or (w.lo <= need[0] and need[1] <= w.hi):
            ok.append(n)
    if not ok:
        raise WindowTooNarrowError(f"window {w.interval} too narrow for X'_{k}")
    lo, hi = min(ok), max(ok)
    region = [p for n in range(lo, hi + 1) for p in _heat_points(n)]
    tab = alpha_recurrence(w, k + 1, region)
    db = Seq.from_function(lo, hi, lambda n: tab[(k + 1, n + 1, n)] - tab[(k + 1, n, n - 1)])
    da = Seq.from_function(lo, hi, lambda n: w.a[n] * (tab[(k, n, n)] - tab[(k, n - 1, n - 1)]))
    return VectorFieldValue(db, da)


def xprime_from_x(k: int) -> Combination:
    """``X'_k = k sum_i (-1)^i/(k-2i) C(k-i-1, i) X_{k-2i}`` as ``[(index, coeff)]``."""
    if k < 1:
        raise ValueError("k must be positive")
    return [
        (k - 2 * i, Fraction(k * (-1) ** i * comb(k - i - 1, i), k - 2 * i))
        for i in range((k - 1) // 2 + 1)
    ]


def x_from_xprime(k: int) -> Combination:
    """``X_k = sum_j C(k, j) X'_{k-2j}``."""
    if k < 1:
        raise ValueError("k must be positive")
    return [(k - 2 * j, Fraction(comb(k, j))) for j in range((k - 1) // 2 + 1)]


def substitute(outer: Combination, inner) -> Dict[int, Fraction]:
    """Expand ``sum c_j Z_j`` where each ``Z_j = inner(j)`` is itself a combination."""
    out: Dict[int, Fraction] = {}
    for j, c in outer:
        for i, d in inner(j):
            out[i] = out.get(i, Fraction(0)) + c * d
    return {i: v for i, v in out.items() if v != 0}


def special_poly_q(k: int) -> LaurentPoly:
    """Odd polynomial ``q_k(x) = sum_j C(2k+1, j) (-1)^j x^{2k-2j+1}``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return LaurentPoly({2 * k - 2 * j + 1: (-1) ** j * comb(2 * k + 1, j) for j in range(k + 1)})


def special_poly_p(k: int) -> List[Fraction]:
    """Ascending coefficients in ``u`` of ``P_k(u)``, the symmetrization of ``q_k``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    out = [Fraction(0)] * (2 * k + 2)
    lead = Fraction(factorial(2 * k + 1), factorial(k))
    for j in range(k + 1):
        out[2 * k - 2 * j + 1] = lead * Fraction(
            (-1) ** j * factorial(k - j), factorial(j) * factorial(2 * k + 1 - 2 * j))
    return out


def epsilon(k: int) -> int:
    """Parity indicator: 0 for odd ``k``, 1 for even ``k``."""
    return 1 - k % 2


def stationarity_x_coefficients(k: int) -> Combination:
    """``Y_k`` written in the ``X_j`` basis."""
    if k < 1:
        raise ValueError("k must be positive")
    e, h = epsilon(k), (k - 1) // 2
    lead = Fraction(factorial(k - e), factorial(h))
    return [
        (k - 2 * j, lead * Fraction((-1) ** j * factorial(h - j),
                                    factorial(j) * factorial(k - e - 2 * j)))
        for j in range(h + 1)
    ]


def r_coefficient_sum(k: int, l: int) -> Fraction:
    """Coefficient of ``X'_{k-2l}`` in ``Y_k`` from the defining double sum."""
    e, h = epsilon(k), (k - 1) // 2
    lead = Fraction(factorial(k - e), factorial(h))
    total = Fraction(0)
    for j in range(l + 1):
        total += Fraction(
            (-1) ** j * factorial(h - j) * factorial(k - 2 * j),
            factorial(j) * factorial(k - e - 2 * j) * factorial(l - j) * factorial(k - l - j),
        )
    return lead * total


def r_coefficient_closed(k: int, l: int) -> Fraction:
    """Closed form ``(-1)^l (1 - 2l eps_k / k) C(k, l)``."""
    return (-1) ** l * (1 - Fraction(2 * l * epsilon(k), k)) * comb(k, l)


def stationarity_xprime_coefficients(k: int) -> Combination:
    if k < 1:
        raise ValueError("k must be positive")
    return [(k - 2 * l, r_coefficient_closed(k, l)) for l in range((k - 1) // 2 + 1)]


def stationarity_field(w: Window, k: int, method: str = "toda") -> VectorFieldValue:
    """``Y_k(L)`` from Toda fields (``"toda"``) or heat fields (``"heat"``)."""
    if method == "toda":
        return VectorFieldValue.combine(
            (c, toda_field(w, j)) for j, c in stationarity_x_coefficients(k))
    if method == "heat":
        return VectorFieldValue.combine(
            (c, heat_field(w, j)) for j, c in stationarity_xprime_coefficients(k))
    raise ValueError(f"unknown method {method!r}")


def _poly_of_operator(L: BandedOperator, coeffs: Sequence[Fraction]) -> BandedOperator:
    """``sum_j c_j L^j`` with the constant term omitted (it is always zero here)."""
    if coeffs and coeffs[0] != 0:
        raise ValueError("constant term not supported")
    power, total = L, None
    for j in range(1, len(coeffs)):
        if j > 1:
            power = compose(L, power)
        if coeffs[j] != 0:
            term = power.scale(coeffs[j])
            total = term if total is None else total + term
    return total


def stationarity_bracket_check(w: Window, k: int) -> bool:
    """Whether ``[P_k(L)_+, L]`` and ``[(L P_k(L))_+, L]`` vanish wherever known."""
    L = w.lax_operator()
    try:
        pk = _poly_of_operator(L, special_poly_p(k))
        first = commutator(positive_part(pk), L)
        second = commutator(positive_part(compose(L, pk)), L)
    except IntervalError as exc:
        raise WindowTooNarrowError(f"window {w.interval} too narrow for P_{k}(L)") from exc
    return first.is_zero() and second.is_zero()


def oddness_sum(f: Sequence[object], k: int) -> Fraction:
    """``sum_l (-1)^l (1 - 2l eps_k/k) C(k,l) f(k-2l)`` for ``f`` given by ascending coefficients."""
    coeffs = [as_rational(c) for c in f]

    def ev(x):
        return sum((c * x ** i for i, c in enumerate(coeffs)), Fraction(0))

    return sum((r_coefficient_closed(k, l) * ev(k - 2 * l) for l in range((k - 1) // 2 + 1)),
               Fraction(0))


def binomial_identity_sides(k: int, r: int, m: int) -> Tuple[Fraction, Fraction]:
    """Both sides of ``sum_i (-1)^i C(k-i, r) C(m, i) = C(k-m, k-r)``."""
    lhs = sum((Fraction((-1) ** i) * binom(k - i, r) * comb(m, i) for i in range(m + 1)),
              Fraction(0))
    return lhs, Fraction(binom(k - m, k - r))
