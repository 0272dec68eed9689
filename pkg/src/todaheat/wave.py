"""Reduced wave and adjoint-wave coefficient tables.

For ``L = E + b_n + a_n E^{-1}`` the reduced wave function
``1 + sum_k psi_k(n) z^{-k}`` obeys

    psi_k(n+1) + b_n psi_{k-1}(n) + a_n psi_{k-2}(n-1) = psi_k(n),

which fixes each ``psi_k`` up to an additive constant (the gauge).  We pin it
with ``psi_k(n0) = 0`` for ``k >= 1``.  The adjoint coefficients come from
inverting the wave operator ``W_n = sum_k psi_k(n) E^{-k}``:

    sum_{k+j=m} psi_k(n) psi*_j(n+1-m) = delta_{m,0}.

Recovering the window from a table uses

    b_n = psi_1(n) + psi*_1(n+1),
    a_n = psi_2(n) + psi_1(n) psi*_1(n) + psi*_2(n),

the second being the only index placement of the ``psi*_2`` term that
round-trips on generic windows (see ``tests/test_wave.py``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .algebra import TruncatedLaurentSeries, format_rational
from .errors import DepthError, IntervalError, WindowTooNarrowError
from .lattice import Interval, Seq, Window, intersect

__all__ = [
    "WaveTable",
    "build_wave_table",
    "wave_table_from_psi",
    "reconstruct_coefficients",
    "check_bilinear",
    "bilinear_residues",
    "inverse_residual_ok",
]


@dataclass(frozen=True)
class WaveTable:
    """``psi[k]`` and ``psi_star[k]`` for ``0 <= k <= order`` on explicit intervals."""

    order: int
    base: Optional[int]
    psi: Tuple[Seq, ...]
    psi_star: Tuple[Seq, ...]
    provenance: str = "generic-window"

    def psi_at(self, k: int, n: int) -> Fraction:
        self._check_order(k)
        return self.psi[k][n]

    def psi_star_at(self, k: int, n: int) -> Fraction:
        self._check_order(k)
        return self.psi_star[k][n]

    def _check_order(self, k: int) -> None:
        if not 0 <= k <= self.order:
            raise DepthError(f"table has order {self.order}; psi_{k} requested")

    def wave_series(self, n: int, depth: Optional[int] = None) -> TruncatedLaurentSeries:
        """``1 + sum_{k<=depth} psi_k(n) z^{-k}``, valid down to ``z^{-depth}``."""
        depth = self.order if depth is None else depth
        self._check_order(depth)
        return TruncatedLaurentSeries.from_list(0, [self.psi[k][n] for k in range(depth + 1)])

    def adjoint_series(self, n: int, depth: Optional[int] = None) -> TruncatedLaurentSeries:
        depth = self.order if depth is None else depth
        self._check_order(depth)
        return TruncatedLaurentSeries.from_list(0, [self.psi_star[k][n] for k in range(depth + 1)])

    def psi_interval(self, k: int) -> Interval:
        return self.psi[k].interval

    def psi_star_interval(self, k: int) -> Interval:
        return self.psi_star[k].interval

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "base": self.base,
            "provenance": self.provenance,
            "psi": [[format_rational(v) for v in s.values] for s in self.psi],
            "psi_star": [[format_rational(v) for v in s.values] for s in self.psi_star],
            "psi_intervals": [list(s.interval) for s in self.psi],
            "psi_star_intervals": [list(s.interval) for s in self.psi_star],
        }

    @classmethod
    def from_json(cls, data) -> "WaveTable":
        def seqs(vals, ivs):
            return tuple(Seq.from_json([iv, v]) for v, iv in zip(vals, ivs))

        return cls(
            order=data["order"],
            base=data["base"],
            psi=seqs(data["psi"], data["psi_intervals"]),
            psi_star=seqs(data["psi_star"], data["psi_star_intervals"]),
            provenance=data.get("provenance", "generic-window"),
        )


def _invert(psi: Sequence[Seq], order: int, ones: Seq) -> List[Seq]:
    """Adjoint coefficients by exact triangular inversion of the wave operator."""
    star = [ones]
    for m in range(1, order + 1):
        ivs = []
        for k in range(1, m + 1):
            ivs.append((psi[k].lo - m + 1, psi[k].hi - m + 1))
            ivs.append(star[m - k].interval)
        iv = intersect(*ivs)
        if iv is None:
            raise WindowTooNarrowError(f"adjoint coefficient of order {m} has empty interval",
                                       missing=m)

        def value(p, m=m):
            return -sum((psi[k][p + m - 1] * star[m - k][p] for k in range(1, m + 1)), Fraction(0))

        star.append(Seq.from_function(iv[0], iv[1], value))
    return star


def build_wave_table(w: Window, order: int, base: Optional[int] = None) -> WaveTable:
    """Wave/adjoint table of the given order with gauge ``psi_k(base) = 0``."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    lo, hi = w.interval
    base = (lo + hi) // 2 if base is None else base
    if not lo <= base <= hi:
        raise ValueError(f"base point {base} outside window {w.interval}")
    pad = order + 2
    ones = Seq.constant(lo - pad, hi + pad, 1)
    psi: List[Seq] = [ones]
    for k in range(1, order + 1):
        step_lo, step_hi = max(lo, psi[k - 1].lo), min(hi, psi[k - 1].hi)
        if k >= 2:
            step_lo = max(step_lo, psi[k - 2].lo + 1)
            step_hi = min(step_hi, psi[k - 2].hi + 1)
        klo, khi = step_lo, step_hi + 1
        if not klo <= base <= khi:
            raise WindowTooNarrowError(
                f"window {w.interval} too narrow: psi_{k} would live on [{klo}, {khi}] "
                f"which misses the base point {base}",
                missing=k,
            )
        vals = {base: Fraction(0)}
        prev, prev2 = psi[k - 1], psi[k - 2] if k >= 2 else None

        def source(n):
            s = w.b[n] * prev[n]
            if prev2 is not None:
                s += w.a[n] * prev2[n - 1]
            return s

        for n in range(base, khi):
            vals[n + 1] = vals[n] - source(n)
        for n in range(base - 1, klo - 1, -1):
            vals[n] = vals[n + 1] + source(n)
        psi.append(Seq(klo, (vals[n] for n in range(klo, khi + 1))))
    star = _invert(psi, order, ones)
    return WaveTable(order, base, tuple(psi), tuple(star), "generic-window")


def wave_table_from_psi(psi: Sequence[Seq], provenance: str = "darboux-exact",
                        base: Optional[int] = None) -> WaveTable:
    """Complete given wave coefficients ``psi[1..K]`` with their adjoint."""
    order = len(psi)
    lo = min(s.lo for s in psi) if psi else 0
    hi = max(s.hi for s in psi) if psi else 0
    ones = Seq.constant(lo - order - 2, hi + order + 2, 1)
    full = [ones] + list(psi)
    return WaveTable(order, base, tuple(full), tuple(_invert(full, order, ones)), provenance)


def inverse_residual_ok(t: WaveTable) -> bool:
    """Re-check ``W W^{-1} = Id`` order by order on every valid index."""
    for m in range(1, t.order + 1):
        ivs = [(t.psi[k].lo, t.psi[k].hi) for k in range(m + 1)]
        ivs += [(t.psi_star[j].lo + m - 1, t.psi_star[j].hi + m - 1) for j in range(m + 1)]
        iv = intersect(*ivs)
        if iv is None:
            continue
        for n in range(iv[0], iv[1] + 1):
            total = sum((t.psi[k][n] * t.psi_star[m - k][n + 1 - m] for k in range(m + 1)),
                        Fraction(0))
            if total != 0:
                return False
    return True


def reconstruct_coefficients(t: WaveTable) -> Tuple[Seq, Seq]:
    """Recover ``(b, a)`` from a table of order at least 2."""
    if t.order < 2:
        raise DepthError("reconstructing a_n needs order >= 2")
    p1, p2, s1, s2 = t.psi[1], t.psi[2], t.psi_star[1], t.psi_star[2]
    biv = intersect(p1.interval, (s1.lo - 1, s1.hi - 1))
    aiv = intersect(p1.interval, p2.interval, s1.interval, s2.interval)
    if biv is None or aiv is None:
        raise IntervalError("table intervals too short to reconstruct coefficients")
    b = Seq.from_function(biv[0], biv[1], lambda n: p1[n] + s1[n + 1])
    a = Seq.from_function(aiv[0], aiv[1], lambda n: p2[n] + p1[n] * s1[n] + s2[n])
    return b, a


def bilinear_residues(t: WaveTable, k0: int, twist: int = 0) -> Seq:
    """``res_z(z^twist Psi_{n+k0}(z) Psi*_n(z))`` as a sequence in ``n``.

    With exponentials removed this is the coefficient of ``z^{-(1+k0+twist)}``
    in ``Psibar_{n+k0} Psibar*_n``.  It vanishes whenever ``twist <= k0``.
    """
    deg = k0 + twist + 1
    if k0 < 0 or twist < 0:
        raise ValueError("k0 and twist must be nonnegative")
    if deg > t.order:
        raise DepthError(f"needs order {deg}, table has {t.order}")
    ivs = [(t.psi[i].lo - k0, t.psi[i].hi - k0) for i in range(deg + 1)]
    ivs += [t.psi_star[i].interval for i in range(deg + 1)]
    iv = intersect(*ivs)
    if iv is None:
        raise IntervalError("no index supports the bilinear residue")
    return Seq.from_function(
        iv[0], iv[1],
        lambda n: sum((t.psi[i][n + k0] * t.psi_star[deg - i][n] for i in range(deg + 1)),
                      Fraction(0)),
    )


def check_bilinear(t: WaveTable, k0: int, depth: int) -> bool:
    """Whether the bilinear residues vanish for twists ``0..min(k0, depth-1)``.

    ``depth`` counts twist levels and may not exceed ``order - k0``.
    """
    if depth < 1 or k0 + depth > t.order:
        raise DepthError(f"depth {depth} with shift {k0} exceeds table order {t.order}")
    return all(bilinear_residues(t, k0, j).is_zero() for j in range(min(k0, depth - 1) + 1))
