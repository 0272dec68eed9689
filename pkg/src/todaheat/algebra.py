"""Exact arithmetic substrate.

Rationals are :class:`fractions.Fraction` throughout.  On top of them this
module provides Laurent polynomials in a spectral variable, truncated Laurent
series with tracked validity depth, formal power series with a square root,
and the split of a Laurent polynomial into its ``x -> 1/x`` symmetric and
antisymmetric parts.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from numbers import Rational as _RationalABC
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import DepthError, StructureError

Rational = Fraction

__all__ = [
    "Rational",
    "as_rational",
    "format_rational",
    "parse_rational",
    "binom",
    "LaurentPoly",
    "TruncatedLaurentSeries",
    "PowerSeries",
    "residue_z",
    "formal_sqrt",
    "symmetric_decompose",
    "poly_in_u",
]


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction (never floats)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, _RationalABC):
        return Fraction(value.numerator, value.denominator)
    raise TypeError(f"cannot use {value!r} as an exact rational")


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if "." in text or "e" in text.lower():
        raise ValueError(f"decimal literal {text!r} is not an exact rational")
    return Fraction(text)


def binom(x, r: int) -> Fraction:
    """Binomial coefficient C(x, r) by the falling-factorial convention.

    ``x`` may be any rational (in particular a negative integer); ``r < 0``
    gives 0.
    """
    if r < 0:
        return Fraction(0)
    x = as_rational(x)
    num = Fraction(1)
    for i in range(r):
        num *= x - i
    return num / factorial(r)


def _clean(coeffs: Mapping[int, Fraction]) -> Dict[int, Fraction]:
    return {int(e): as_rational(c) for e, c in coeffs.items() if c != 0}


class LaurentPoly:
    """Finite Laurent polynomial ``sum c_e x^e`` with exact coefficients.

    Zero coefficients are never stored.  ``degree`` and ``low_degree`` are
    ``None`` for the zero polynomial.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Optional[Mapping[int, object]] = None):
        self._c = _clean(coeffs or {})

    @classmethod
    def monomial(cls, exponent: int, coeff=1) -> "LaurentPoly":
        return cls({exponent: coeff})

    @classmethod
    def x(cls) -> "LaurentPoly":
        return cls({1: 1})

    @classmethod
    def u(cls) -> "LaurentPoly":
        """``x + 1/x``."""
        return cls({1: 1, -1: 1})

    @classmethod
    def from_poly(cls, coeffs: Sequence[object]) -> "LaurentPoly":
        """From ascending coefficient list ``[c0, c1, ...]``."""
        return cls({i: c for i, c in enumerate(coeffs)})

    # -- queries -----------------------------------------------------------
    def coeff(self, exponent: int) -> Fraction:
        return self._c.get(exponent, Fraction(0))

    def terms(self) -> List[Tuple[int, Fraction]]:
        return sorted(self._c.items())

    @property
    def degree(self) -> Optional[int]:
        return max(self._c) if self._c else None

    @property
    def low_degree(self) -> Optional[int]:
        return min(self._c) if self._c else None

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly({0: other})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        return hash(frozenset(self._c.items()))

    def __repr__(self) -> str:
        if not self._c:
            return "LaurentPoly(0)"
        parts = [f"{c}*x^{e}" for e, c in sorted(self._c.items(), reverse=True)]
        return "LaurentPoly(" + " + ".join(parts) + ")"

    # -- arithmetic --------------------------------------------------------
    @staticmethod
    def _lift(other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        return LaurentPoly({0: as_rational(other)})

    def __add__(self, other) -> "LaurentPoly":
        other = self._lift(other)
        out = dict(self._c)
        for e, c in other._c.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self._c.items()})

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return self._lift(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, TruncatedLaurentSeries):
            return NotImplemented
        other = self._lift(other)
        out: Dict[int, Fraction] = {}
        for e1, c1 in self._c.items():
            for e2, c2 in other._c.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if len(self._c) == 1:
                (e, c), = self._c.items()
                return LaurentPoly({e * n: Fraction(1) / c ** (-n)})
            raise ValueError("negative powers only for monomials")
        result = LaurentPoly({0: 1})
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``x**k``."""
        return LaurentPoly({e + k: c for e, c in self._c.items()})

    def invert(self) -> "LaurentPoly":
        """Substitute ``x -> 1/x``."""
        return LaurentPoly({-e: c for e, c in self._c.items()})

    def __call__(self, value):
        value = as_rational(value) if not isinstance(value, float) else value
        return sum((c * value ** e for e, c in self._c.items()), Fraction(0))

    def exact_div(self, other: "LaurentPoly") -> Optional["LaurentPoly"]:
        """Return ``self / other`` if it is a Laurent polynomial, else ``None``."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero Laurent polynomial")
        if self.is_zero():
            return LaurentPoly()
        la, lb = self.low_degree, other.low_degree
        num = [self.coeff(e) for e in range(la, self.degree + 1)]
        den = [other.coeff(e) for e in range(lb, other.degree + 1)]
        if len(den) > len(num):
            return None
        # ascending long division; both constant terms are nonzero
        quot = []
        rem = list(num)
        for i in range(len(num) - len(den) + 1):
            q = rem[i] / den[0]
            quot.append(q)
            if q:
                for j, d in enumerate(den):
                    rem[i + j] -= q * d
        if any(rem):
            return None
        return LaurentPoly({la - lb + i: q for i, q in enumerate(quot)})

    def is_symmetric(self) -> bool:
        return self == self.invert()

    def is_antisymmetric(self) -> bool:
        return self == -self.invert()

    def to_json(self) -> Dict[str, str]:
        return {str(e): format_rational(c) for e, c in sorted(self._c.items())}

    @classmethod
    def from_json(cls, data: Mapping[str, str]) -> "LaurentPoly":
        return cls({int(e): parse_rational(c) for e, c in data.items()})


def poly_in_u(coeffs: Sequence[object]) -> LaurentPoly:
    """Evaluate the polynomial ``sum coeffs[j] u^j`` at ``u = x + 1/x``."""
    u = LaurentPoly.u()
    acc = LaurentPoly()
    for c in reversed(list(coeffs)):
        acc = acc * u + as_rational(c)
    return acc


def symmetric_decompose(h: LaurentPoly) -> Tuple[List[Fraction], LaurentPoly]:
    """Split ``h = P(x + 1/x) + r(x)`` with ``r(1/x) = -r(x)``.

    Returns the ascending coefficient list of ``P`` (empty for zero) and ``r``.
    """
    hinv = h.invert()
    sym = (h + hinv) * Fraction(1, 2)
    anti = (h - hinv) * Fraction(1, 2)
    coeffs: Dict[int, Fraction] = {}
    rest = sym
    u = LaurentPoly.u()
    while not rest.is_zero():
        d = rest.degree
        c = rest.coeff(d)
        coeffs[d] = c
        rest = rest - (u ** d) * c
    top = max(coeffs) if coeffs else -1
    return [coeffs.get(j, Fraction(0)) for j in range(top + 1)], anti


class TruncatedLaurentSeries:
    """Laurent series in ``z`` known exactly down to exponent ``floor``.

    Coefficients at exponents ``>= floor`` are exact (absent means zero);
    anything below ``floor`` is unknown and asking for it raises
    :class:`DepthError`.  Every operation recomputes the floor it can
    guarantee.
    """

    __slots__ = ("_c", "floor")

    def __init__(self, coeffs: Mapping[int, object], floor: int):
        self.floor = int(floor)
        self._c = {e: c for e, c in _clean(coeffs).items() if e >= self.floor}

    @classmethod
    def from_list(cls, top: int, coeffs: Sequence[object]) -> "TruncatedLaurentSeries":
        """Coefficients for exponents ``top, top-1, ..., top-len+1``."""
        return cls({top - i: c for i, c in enumerate(coeffs)}, top - len(coeffs) + 1)

    @property
    def top(self) -> int:
        """Largest exponent that may be nonzero (``floor - 1`` if all zero)."""
        return max(self._c) if self._c else self.floor - 1

    @property
    def depth(self) -> int:
        """Number of exponents from the top down to the floor."""
        return self.top - self.floor + 1

    def coeff(self, exponent: int) -> Fraction:
        if exponent < self.floor:
            raise DepthError(
                f"coefficient of z^{exponent} requested but series is only valid "
                f"down to z^{self.floor}"
            )
        return self._c.get(exponent, Fraction(0))

    def coefficients(self) -> List[Tuple[int, Fraction]]:
        """All known coefficients, top exponent first (zeros included)."""
        return [(e, self._c.get(e, Fraction(0))) for e in range(self.top, self.floor - 1, -1)]

    def __repr__(self) -> str:
        body = ", ".join(f"z^{e}: {c}" for e, c in sorted(self._c.items(), reverse=True))
        return f"TruncatedLaurentSeries({{{body}}}, floor={self.floor})"

    def __add__(self, other) -> "TruncatedLaurentSeries":
        if isinstance(other, LaurentPoly):
            out = dict(self._c)
            for e, c in other.terms():
                out[e] = out.get(e, 0) + c
            return TruncatedLaurentSeries(out, self.floor)
        if not isinstance(other, TruncatedLaurentSeries):
            return self + LaurentPoly({0: as_rational(other)})
        floor = max(self.floor, other.floor)
        out = dict(self._c)
        for e, c in other._c.items():
            out[e] = out.get(e, 0) + c
        return TruncatedLaurentSeries(out, floor)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedLaurentSeries":
        return TruncatedLaurentSeries({e: -c for e, c in self._c.items()}, self.floor)

    def __sub__(self, other) -> "TruncatedLaurentSeries":
        return self + (-other)

    def __mul__(self, other) -> "TruncatedLaurentSeries":
        if isinstance(other, (int, Fraction)):
            return TruncatedLaurentSeries({e: c * other for e, c in self._c.items()}, self.floor)
        if isinstance(other, LaurentPoly):
            if other.is_zero():
                return TruncatedLaurentSeries({}, self.floor)
            floor = self.floor + other.degree
            out: Dict[int, Fraction] = {}
            for e1, c1 in self._c.items():
                for e2, c2 in other.terms():
                    out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
            return TruncatedLaurentSeries(out, floor)
        if isinstance(other, TruncatedLaurentSeries):
            floor = max(self.floor + other.top, other.floor + self.top)
            out = {}
            for e1, c1 in self._c.items():
                for e2, c2 in other._c.items():
                    e = e1 + e2
                    if e >= floor:
                        out[e] = out.get(e, 0) + c1 * c2
            return TruncatedLaurentSeries(out, floor)
        return NotImplemented

    __rmul__ = __mul__

    def shift(self, k: int) -> "TruncatedLaurentSeries":
        """Multiply by ``z**k``."""
        return TruncatedLaurentSeries({e + k: c for e, c in self._c.items()}, self.floor + k)

    def reciprocal(self) -> "TruncatedLaurentSeries":
        if not self._c:
            raise ZeroDivisionError("series has no nonzero known coefficient")
        d = self.top
        lead = self._c[d]
        depth = d - self.floor
        r = [Fraction(1) / lead]
        for j in range(1, depth + 1):
            acc = sum((self._c.get(d - i, 0) * r[j - i] for i in range(1, j + 1)), Fraction(0))
            r.append(-acc / lead)
        return TruncatedLaurentSeries.from_list(-d, r)


def residue_z(s: TruncatedLaurentSeries) -> Fraction:
    """Coefficient of ``z**-1``."""
    return s.coeff(-1)


class PowerSeries:
    """Truncated power series ``c_0 + c_1 w + ... + c_K w^K``."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[object]):
        self._c = tuple(as_rational(c) for c in coeffs)
        if not self._c:
            raise ValueError("power series needs at least the constant term")

    @property
    def order(self) -> int:
        return len(self._c) - 1

    @property
    def coeffs(self) -> Tuple[Fraction, ...]:
        return self._c

    def __getitem__(self, i: int) -> Fraction:
        return self._c[i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self._c == other._c

    def __repr__(self) -> str:
        return f"PowerSeries({[str(c) for c in self._c]})"

    def truncate(self, order: int) -> "PowerSeries":
        if order > self.order:
            raise DepthError(f"series known to order {self.order}, not {order}")
        return PowerSeries(self._c[: order + 1])

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        k = min(self.order, other.order)
        return PowerSeries(self._c[i] + other._c[i] for i in range(k + 1))

    def __mul__(self, other) -> "PowerSeries":
        if isinstance(other, (int, Fraction)):
            return PowerSeries(c * other for c in self._c)
        k = min(self.order, other.order)
        return PowerSeries(
            sum((self._c[i] * other._c[j - i] for i in range(j + 1)), Fraction(0))
            for j in range(k + 1)
        )

    __rmul__ = __mul__

    def reciprocal(self) -> "PowerSeries":
        c0 = self._c[0]
        if c0 == 0:
            raise ZeroDivisionError("constant term is zero")
        r = [Fraction(1) / c0]
        for j in range(1, self.order + 1):
            acc = sum((self._c[i] * r[j - i] for i in range(1, j + 1)), Fraction(0))
            r.append(-acc / c0)
        return PowerSeries(r)


def formal_sqrt(p: PowerSeries) -> PowerSeries:
    """Square root with constant term 1 of a series with constant term 1."""
    if p[0] != 1:
        raise StructureError(f"formal_sqrt needs constant term 1, got {p[0]}")
    s = [Fraction(1)]
    for j in range(1, p.order + 1):
        cross = sum((s[i] * s[j - i] for i in range(1, j)), Fraction(0))
        s.append((p[j] - cross) / 2)
    return PowerSeries(s)
