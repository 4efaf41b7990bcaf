"""Monomial expansions of Mahler series and Strassman zero counts.

Coefficients are exact rationals together with an error valuation: the true
``c_j`` equals ``approx_j`` modulo ``p^error_j``.  A coefficient is
*determined* when its approximation has valuation strictly below the error,
since then every lift has that same valuation.

For a Mahler series known modulo ``p^K`` whose coefficients obey
``v(b_n) >= ceil((n+1)/2)``, the monomial coefficient is
``c_j = sum_{n >= j} b_n s(n, j) / n!`` with Stirling numbers of the first
kind ``s(n, j)``.  Each stored ``b_n`` is uncertain by ``p^K``; each
unstored one is bounded by its floor.  Dividing by ``n!`` costs
``v_p(n!)``, so the error valuation of ``c_j`` is::

    min over n >= j of  max(K, ceil((n+1)/2)) - v_p(n!)

which is nondecreasing in ``j`` and tends to infinity for ``p >= 5``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .domains import factorial_valuation, vp
from .errors import Indeterminate


@lru_cache(maxsize=None)
def stirling_first(n: int, k: int) -> int:
    """Signed Stirling numbers: ``z(z-1)...(z-n+1) = sum_k s(n,k) z^k``."""
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return stirling_first(n - 1, k - 1) - (n - 1) * stirling_first(n - 1, k)


def _ceil_half(n):
    return (n + 2) // 2


@dataclass(frozen=True)
class ZeroSeries:
    precision: int

    def __str__(self):
        return f"ZeroSeries(at precision {self.precision})"


@dataclass(frozen=True)
class Bound:
    N: int

    def __str__(self):
        return f"Bound({self.N})"


@dataclass(frozen=True)
class IndeterminateVerdict:
    reason: str

    def __str__(self):
        return "Indeterminate"


class PadicPowerSeries:
    """Truncated ``sum c_j z^j`` over ``Q_p`` with per-coefficient error valuations.

    ``approx[j]`` is exact; ``error[j]`` is the guaranteed agreement
    valuation; indices past the stored range have zero approximation and
    error ``tail_floor(j)``.
    """

    def __init__(self, p, K, approx, error, tail):
        self.p = p
        self.K = K
        self.approx = list(approx)
        self.error = list(error)
        self._tail = tail

    @classmethod
    def exact(cls, coeffs, p, K):
        """Coefficients given modulo ``p^K`` with every later one ``≡ 0``."""
        coeffs = [Fraction(c) for c in coeffs]
        return cls(p, K, coeffs, [K] * len(coeffs), lambda j: K)

    def __len__(self):
        return len(self.approx)

    def tail_floor(self, j):
        """Lower bound for ``v(c_i)`` at every unstored ``i >= j``."""
        return self._tail(max(j, len(self.approx)))

    def valuation(self, j):
        """Exact valuation of ``c_j`` if determined, else ``None``."""
        if j >= len(self.approx):
            return None
        c = self.approx[j]
        if c == 0:
            return None
        v = vp(c, self.p)
        return v if v < self.error[j] else None

    def unit(self, j):
        v = self.valuation(j)
        if v is None:
            return None
        return self.approx[j] / Fraction(self.p) ** v

    def _zero_mod(self, j):
        c = self.approx[j]
        return c == 0 or vp(c, self.p) >= self.error[j]

    def evaluate(self, z: int):
        """Partial sum at an integer ``z``; exact modulo ``p^error_at(z)``."""
        return sum((c * Fraction(z) ** j for j, c in enumerate(self.approx)), Fraction(0))

    def error_at(self):
        errs = list(self.error)
        errs.append(self.tail_floor(len(self.approx)))
        return min(errs)


def _tail_error(p, K):
    """``j -> min_{n >= j} max(K, ceil((n+1)/2)) - v_p(n!)`` for ``p >= 5``."""
    if p < 5:
        raise ValueError("tail estimates need p >= 5")
    # beyond this n, ceil((n+1)/2) - v_p(n!) exceeds every earlier value
    horizon = 8 * K + 4 * p + 64
    vals = [max(K, _ceil_half(n)) - factorial_valuation(n, p) for n in range(horizon + 1)]
    suffix = vals[:]
    for n in range(horizon - 1, -1, -1):
        suffix[n] = min(vals[n], suffix[n + 1])

    def tail(j):
        if j <= horizon:
            return suffix[j]
        return _ceil_half(j) - j // (p - 1)

    return tail


def mahler_to_power(b, p, K) -> PadicPowerSeries:
    """Monomial form of one coordinate ``sum b_n C(z, n)`` of an arc-type series."""
    b = [int(x) for x in b]
    while b and b[-1] % p**K == 0:
        b.pop()
    tail = _tail_error(p, K)
    n_max = len(b)
    approx = []
    for j in range(n_max):
        total = Fraction(0)
        for n in range(j, n_max):
            if b[n]:
                total += Fraction(b[n] * stirling_first(n, j), _factorial(n))
        approx.append(total)
    error = [tail(j) for j in range(n_max)]
    return PadicPowerSeries(p, K, approx, error, tail)


@lru_cache(maxsize=None)
def _factorial(n):
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def strassman_bound(g: PadicPowerSeries):
    """``ZeroSeries``, ``Bound(N)`` or ``IndeterminateVerdict`` for one series.

    ``Bound(N)``: the series has at most ``N`` zeros in ``Z_p``.  It is only
    returned when the minimal valuation is attained at determined indices
    and is strictly below every undetermined coefficient's error.
    """
    determined = [(j, g.valuation(j)) for j in range(len(g)) if g.valuation(j) is not None]
    if not determined:
        if min(g.error, default=g.K) >= g.K and g.tail_floor(len(g)) >= g.K:
            return ZeroSeries(g.K)
        return IndeterminateVerdict("no coefficient is determined at this precision")
    vmin = min(v for _, v in determined)
    for j in range(len(g)):
        if g.valuation(j) is None and g.error[j] <= vmin:
            return IndeterminateVerdict(f"coefficient {j} is not pinned below valuation {vmin}")
    if g.tail_floor(len(g)) <= vmin:
        return IndeterminateVerdict(f"tail bound {g.tail_floor(len(g))} does not exceed {vmin}")
    N = max(j for j, v in determined if v == vmin)
    return Bound(N)


def mahler_coordinate_verdict(b, p, K):
    """Verdict for one coordinate of a Mahler series known modulo ``p^K``."""
    if all(x % p**K == 0 for x in b):
        return ZeroSeries(K)
    return strassman_bound(mahler_to_power(b, p, K))


def extended_strassman(verdicts):
    """Combine coordinate verdicts: a common zero is a zero of each coordinate."""
    verdicts = list(verdicts)
    bounds = [v.N for v in verdicts if isinstance(v, Bound)]
    if bounds:
        return Bound(min(bounds))
    if all(isinstance(v, ZeroSeries) for v in verdicts):
        return ZeroSeries(min((v.precision for v in verdicts), default=0))
    return next(v for v in verdicts if isinstance(v, IndeterminateVerdict))


def series_verdict(series):
    """Extended Strassman verdict for an algebra-valued :class:`MahlerSeries`."""
    S = series.algebra
    return extended_strassman(
        mahler_coordinate_verdict(series.coordinate(i), S.p, S.K) for i in range(S.dim)
    )


def require(verdict):
    """Raise :class:`Indeterminate` for an indeterminate verdict, else pass it on."""
    if isinstance(verdict, IndeterminateVerdict):
        raise Indeterminate(verdict.reason)
    return verdict
