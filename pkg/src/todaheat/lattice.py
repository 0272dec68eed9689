"""Banded difference operators on finite integer windows.

An operator ``M = sum_j mu_j(n) E^j`` stores, for each shift offset ``j``, a
coefficient sequence on its own explicit integer interval.  Nothing is ever
zero-filled: evaluating a coefficient outside its interval raises
:class:`~todaheat.errors.IntervalError`, and every composition computes the
largest interval on which the result is provably known.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .algebra import as_rational, format_rational
from .errors import InconsistentSystemError, IntervalError, WindowTooNarrowError

Interval = Tuple[int, int]

__all__ = [
    "Seq",
    "Window",
    "BandedOperator",
    "Comparison",
    "compose",
    "commutator",
    "positive_part",
    "negative_part",
    "res_E",
    "operator_power",
    "solve_intertwining",
    "compare_operators",
    "intersect",
]


def intersect(*intervals: Optional[Interval]) -> Optional[Interval]:
    """Intersection of closed integer intervals; ``None`` if empty."""
    lo, hi = -10**18, 10**18
    for iv in intervals:
        if iv is None:
            return None
        lo, hi = max(lo, iv[0]), min(hi, iv[1])
    return (lo, hi) if lo <= hi else None


class Seq:
    """Exact rational sequence on the closed interval ``[lo, hi]``."""

    __slots__ = ("lo", "values")

    def __init__(self, lo: int, values: Iterable[object]):
        self.lo = int(lo)
        self.values = tuple(as_rational(v) for v in values)
        if not self.values:
            raise IntervalError("empty sequence")

    @classmethod
    def from_function(cls, lo: int, hi: int, fn: Callable[[int], object]) -> "Seq":
        if hi < lo:
            raise IntervalError(f"empty interval [{lo}, {hi}]", missing=(lo, hi))
        return cls(lo, (fn(n) for n in range(lo, hi + 1)))

    @classmethod
    def constant(cls, lo: int, hi: int, value=0) -> "Seq":
        value = as_rational(value)
        return cls(lo, [value] * (hi - lo + 1))

    @property
    def hi(self) -> int:
        return self.lo + len(self.values) - 1

    @property
    def interval(self) -> Interval:
        return (self.lo, self.hi)

    def __len__(self) -> int:
        return len(self.values)

    def __contains__(self, n: int) -> bool:
        return self.lo <= n <= self.hi

    def __getitem__(self, n: int) -> Fraction:
        if not self.lo <= n <= self.hi:
            raise IntervalError(
                f"index {n} outside sequence interval [{self.lo}, {self.hi}]", missing=(n, n)
            )
        return self.values[n - self.lo]

    def items(self) -> Iterator[Tuple[int, Fraction]]:
        return ((self.lo + i, v) for i, v in enumerate(self.values))

    def restrict(self, iv: Interval) -> "Seq":
        lo, hi = iv
        if lo < self.lo or hi > self.hi or hi < lo:
            raise IntervalError(f"cannot restrict [{self.lo}, {self.hi}] to [{lo}, {hi}]")
        return Seq(lo, self.values[lo - self.lo : hi - self.lo + 1])

    def is_zero(self) -> bool:
        return not any(self.values)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Seq):
            return NotImplemented
        return self.lo == other.lo and self.values == other.values

    def __repr__(self) -> str:
        return f"Seq([{self.lo}, {self.hi}], {[str(v) for v in self.values]})"

    def to_json(self) -> list:
        return [[self.lo, self.hi], [format_rational(v) for v in self.values]]

    @classmethod
    def from_json(cls, data) -> "Seq":
        (lo, hi), vals = data
        if hi - lo + 1 != len(vals):
            raise ValueError("interval length does not match value count")
        return cls(lo, (as_rational(v) for v in vals))


def _combine(p: Seq, q: Seq, op) -> Seq:
    iv = intersect(p.interval, q.interval)
    if iv is None:
        raise IntervalError(f"sequences on {p.interval} and {q.interval} do not overlap")
    return Seq.from_function(iv[0], iv[1], lambda n: op(p[n], q[n]))


@dataclass(frozen=True)
class Window:
    """Jacobi operator data ``L = E + b_n Id + a_n E^{-1}`` on ``[lo, hi]``."""

    a: Seq
    b: Seq

    def __post_init__(self):
        if self.a.interval != self.b.interval:
            raise ValueError(f"a on {self.a.interval} but b on {self.b.interval}")
        for n, v in self.a.items():
            if v == 0:
                raise ValueError(f"a_{n} = 0: operator is not properly bordered")

    @classmethod
    def from_lists(cls, lo: int, a: Sequence[object], b: Sequence[object]) -> "Window":
        return cls(Seq(lo, a), Seq(lo, b))

    @classmethod
    def constant(cls, lo: int, hi: int, a=1, b=0) -> "Window":
        return cls(Seq.constant(lo, hi, a), Seq.constant(lo, hi, b))

    @classmethod
    def free(cls, lo: int, hi: int) -> "Window":
        return cls.constant(lo, hi, 1, 0)

    @classmethod
    def random(cls, rng: random.Random, lo: int, width: int, size: int = 5) -> "Window":
        """Small random rationals; ``a`` never vanishes."""

        def rat(nonzero: bool) -> Fraction:
            while True:
                q = Fraction(rng.randint(-size, size), rng.randint(1, size))
                if q or not nonzero:
                    return q

        a = [rat(True) for _ in range(width)]
        b = [rat(False) for _ in range(width)]
        return cls.from_lists(lo, a, b)

    @property
    def lo(self) -> int:
        return self.a.lo

    @property
    def hi(self) -> int:
        return self.a.hi

    @property
    def interval(self) -> Interval:
        return self.a.interval

    def restrict(self, iv: Interval) -> "Window":
        return Window(self.a.restrict(iv), self.b.restrict(iv))

    def with_values(self, n: int, a=None, b=None) -> "Window":
        """Copy with ``a_n`` and/or ``b_n`` replaced."""
        av, bv = list(self.a.values), list(self.b.values)
        if a is not None:
            av[n - self.lo] = as_rational(a)
        if b is not None:
            bv[n - self.lo] = as_rational(b)
        return Window.from_lists(self.lo, av, bv)

    def is_constant(self) -> bool:
        return len(set(self.a.values)) == 1 and len(set(self.b.values)) == 1

    def lax_operator(self) -> "BandedOperator":
        lo, hi = self.interval
        return BandedOperator({1: Seq.constant(lo, hi, 1), 0: self.b, -1: self.a})

    def to_json(self) -> dict:
        return {
            "interval": [self.lo, self.hi],
            "a": [format_rational(v) for v in self.a.values],
            "b": [format_rational(v) for v in self.b.values],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Window":
        lo, hi = data["interval"]
        if len(data["a"]) != hi - lo + 1 or len(data["b"]) != hi - lo + 1:
            raise ValueError("window interval does not match sequence lengths")
        return cls.from_lists(lo, [as_rational(v) for v in data["a"]],
                              [as_rational(v) for v in data["b"]])


class BandedOperator:
    """``sum_j mu_j(n) E^j`` with a per-offset coefficient interval."""

    __slots__ = ("bands",)

    def __init__(self, bands: Mapping[int, Seq]):
        self.bands: Dict[int, Seq] = {int(j): s for j, s in sorted(bands.items())}

    @classmethod
    def constant(cls, coeffs: Mapping[int, object], lo: int, hi: int) -> "BandedOperator":
        """Constant-coefficient operator with every band defined on ``[lo, hi]``."""
        return cls({j: Seq.constant(lo, hi, c) for j, c in coeffs.items()})

    @classmethod
    def identity(cls, lo: int, hi: int) -> "BandedOperator":
        return cls.constant({0: 1}, lo, hi)

    @classmethod
    def shift(cls, j: int, lo: int, hi: int) -> "BandedOperator":
        return cls.constant({j: 1}, lo, hi)

    @property
    def offsets(self) -> List[int]:
        return list(self.bands)

    @property
    def support(self) -> Tuple[int, int]:
        return (min(self.bands), max(self.bands))

    def band(self, j: int) -> Seq:
        return self.bands[j]

    def coefficient(self, j: int, n: int) -> Fraction:
        if j not in self.bands:
            return Fraction(0)
        return self.bands[j][n]

    def interior(self) -> Optional[Interval]:
        """Indices where every band is known."""
        return intersect(*(s.interval for s in self.bands.values()))

    def apply(self, f: Seq) -> Seq:
        """``(M f)(n) = sum_j mu_j(n) f(n+j)`` wherever all terms are known."""
        iv = intersect(*(intersect(s.interval, (f.lo - j, f.hi - j)) for j, s in self.bands.items()))
        if iv is None:
            raise IntervalError("operator cannot be applied: no index has all data")
        return Seq.from_function(
            iv[0], iv[1], lambda n: sum((s[n] * f[n + j] for j, s in self.bands.items()), Fraction(0))
        )

    def is_zero(self) -> bool:
        return all(s.is_zero() for s in self.bands.values())

    def __neg__(self) -> "BandedOperator":
        return BandedOperator({j: Seq(s.lo, (-v for v in s.values)) for j, s in self.bands.items()})

    def __add__(self, other: "BandedOperator") -> "BandedOperator":
        out = dict(self.bands)
        for j, s in other.bands.items():
            out[j] = _combine(out[j], s, lambda x, y: x + y) if j in out else s
        return BandedOperator(out)

    def __sub__(self, other: "BandedOperator") -> "BandedOperator":
        return self + (-other)

    def scale(self, c) -> "BandedOperator":
        c = as_rational(c)
        return BandedOperator({j: Seq(s.lo, (c * v for v in s.values)) for j, s in self.bands.items()})

    def __matmul__(self, other: "BandedOperator") -> "BandedOperator":
        return compose(self, other)

    def __repr__(self) -> str:
        return "BandedOperator({" + ", ".join(f"{j}: {s!r}" for j, s in self.bands.items()) + "})"

    def to_json(self) -> dict:
        return {str(j): s.to_json() for j, s in self.bands.items()}

    @classmethod
    def from_json(cls, data: Mapping) -> "BandedOperator":
        return cls({int(j): Seq.from_json(v) for j, v in data.items()})


def compose(p: BandedOperator, q: BandedOperator) -> BandedOperator:
    """Operator product ``p q`` (apply ``q`` first)."""
    intervals: Dict[int, Optional[Interval]] = {}
    pairs: Dict[int, List[Tuple[int, int]]] = {}
    for i, ps in p.bands.items():
        for j, qs in q.bands.items():
            s = i + j
            iv = intersect(ps.interval, (qs.lo - i, qs.hi - i))
            intervals[s] = intersect(intervals[s], iv) if s in intervals else iv
            pairs.setdefault(s, []).append((i, j))
    out = {}
    for s in sorted(pairs):
        iv = intervals[s]
        if iv is None:
            raise IntervalError(
                f"composition: offset {s} has no index where all contributing "
                f"coefficients {pairs[s]} are known",
                missing=s,
            )
        terms = [(p.bands[i], q.bands[j], i) for i, j in pairs[s]]
        out[s] = Seq.from_function(
            iv[0], iv[1],
            lambda n, terms=terms: sum((ps[n] * qs[n + i] for ps, qs, i in terms), Fraction(0)),
        )
    return BandedOperator(out)


def commutator(p: BandedOperator, q: BandedOperator) -> BandedOperator:
    return compose(p, q) - compose(q, p)


def positive_part(m: BandedOperator) -> BandedOperator:
    return BandedOperator({j: s for j, s in m.bands.items() if j >= 0})


def negative_part(m: BandedOperator) -> BandedOperator:
    return BandedOperator({j: s for j, s in m.bands.items() if j < 0})


def res_E(m: BandedOperator) -> Seq:
    """Coefficient of ``E^{-1}``; the zero sequence on the interior if absent."""
    if -1 in m.bands:
        return m.bands[-1]
    iv = m.interior()
    if iv is None:
        raise IntervalError("operator has no common interval")
    return Seq.constant(iv[0], iv[1], 0)


def operator_power(w: Window, k: int) -> BandedOperator:
    """``L^k`` for the Jacobi operator of ``w`` (``k >= 1``)."""
    if k < 1:
        raise ValueError("k must be positive")
    L = w.lax_operator()
    out = L
    try:
        for _ in range(k - 1):
            out = compose(L, out)
    except IntervalError as exc:
        raise WindowTooNarrowError(
            f"window {w.interval} too narrow for L^{k}", missing=exc.missing
        ) from exc
    return out


@dataclass(frozen=True)
class Comparison:
    """Outcome of comparing two operators on their common intervals."""

    equal: bool
    interval: Optional[Interval]
    mismatch: Optional[Tuple[int, int]] = None  # (offset, n)

    def __bool__(self) -> bool:
        return self.equal


def compare_operators(p: BandedOperator, q: BandedOperator) -> Comparison:
    """Coefficient equality on the intersection of valid intervals.

    An offset missing from one operator counts as identically zero there.
    ``interval`` reports where all compared bands are known.
    """
    overall: List[Interval] = []
    for j in sorted(set(p.bands) | set(q.bands)):
        ivs = [m.bands[j].interval for m in (p, q) if j in m.bands]
        iv = intersect(*ivs)
        if iv is None:
            return Comparison(False, None, (j, None))
        overall.append(iv)
        for n in range(iv[0], iv[1] + 1):
            if p.coefficient(j, n) != q.coefficient(j, n):
                return Comparison(False, intersect(*overall), (j, n))
    return Comparison(True, intersect(*overall))


def solve_intertwining(lhs_factor: BandedOperator, rhs: BandedOperator,
                       unknown_support: Tuple[int, int]) -> BandedOperator:
    """Solve ``X lhs_factor = rhs`` for ``X`` banded on ``unknown_support``.

    Back-substitution from the top band of ``lhs_factor``, independently at
    each ``n``; the remaining lower bands of the product are then checked
    against ``rhs`` exactly.
    """
    kmin, kmax = unknown_support
    F = lhs_factor.bands
    fmin, fmax = lhs_factor.support
    lead = F[fmax]
    X: Dict[int, Seq] = {}
    for i in range(kmax, kmin - 1, -1):
        s = i + fmax
        ivs = [(lead.lo - i, lead.hi - i)]
        if s in rhs.bands:
            ivs.append(rhs.bands[s].interval)
        terms = []
        for ip in range(i + 1, kmax + 1):
            jf = s - ip
            if fmin <= jf <= fmax and jf in F:
                fs = F[jf]
                ivs += [X[ip].interval, (fs.lo - ip, fs.hi - ip)]
                terms.append((X[ip], fs, ip))
        iv = intersect(*ivs)
        if iv is None:
            raise IntervalError(f"intertwining: no index supports unknown band {i}", missing=i)

        def solve_at(n, i=i, s=s, terms=terms):
            r = rhs.bands[s][n] if s in rhs.bands else Fraction(0)
            r -= sum((x[n] * fs[n + ip] for x, fs, ip in terms), Fraction(0))
            d = lead[n + i]
            if d == 0:
                raise InconsistentSystemError(
                    f"leading coefficient vanishes at n={n + i}", offset=fmax, index=n + i)
            return r / d

        X[i] = Seq.from_function(iv[0], iv[1], solve_at)
    sol = BandedOperator(X)
    check = compare_operators(compose(sol, lhs_factor), rhs)
    if not check.equal:
        off, n = check.mismatch
        raise InconsistentSystemError(
            f"no banded solution on support {unknown_support}: band {off} fails at n={n}",
            offset=off, index=n)
    return sol
