"""Integer-valued polynomials in the binomial basis, and p-adic arcs.

A :class:`MahlerSeries` is ``sum_k b_k * C(z, k)`` with coefficients in a
quotient algebra reduced mod ``p^K``.  Everything is exact modulo ``p^K``.

:func:`build_arc` constructs series ``f_1, ..., f_d`` with ``f(0) = s0`` and
``f(z + 1) = H(f(z))`` by successive approximation: at level ``j`` the
defect ``g(z + 1) - H(g(z))`` is divisible by ``p^j``, the quotient mod ``p``
is a polynomial of Mahler degree at most ``2j - 2``, and the correction
``p^j * h`` with ``h(z + 1) - h(z) = -Q(z)`` kills it one level higher.  The
resulting coefficients satisfy ``v(b_k) >= ceil((k + 1) / 2)``, so every
product of such series is again truncated exactly at degree ``2K - 2``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .dynamics import dyn_eval
from .errors import DegreeOverflow, InternalDefect, PreconditionFailed, SmallPrime
from .quotient import AlgebraElement, QuotientAlgebra, jacobian_along_cycle


def binom(z: int, k: int) -> int:
    """``C(z, k)`` for any integer ``z`` (negative allowed) and ``k >= 0``."""
    num = 1
    den = 1
    for i in range(k):
        num *= z - i
        den *= i + 1
    return num // den


def arc_floor(k: int) -> int:
    """Valuation floor ``ceil((k+1)/2)`` guaranteed for arc coefficients, ``k >= 1``."""
    return (k + 2) // 2 if k >= 1 else 0


class MahlerSeries:
    """``sum_k coeffs[k] * C(z, k)`` over an algebra mod ``p^K``."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: QuotientAlgebra, coeffs):
        coeffs = list(coeffs)
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        self.algebra = algebra
        self.coeffs = tuple(coeffs)

    @classmethod
    def constant(cls, value: AlgebraElement):
        return cls(value.algebra, [value])

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def p(self):
        return self.algebra.p

    @property
    def K(self):
        return self.algebra.K

    def coefficient(self, k):
        return self.coeffs[k] if k < len(self.coeffs) else self.algebra.zero()

    def valuation_floor(self, k):
        return self.coefficient(k).valuation()

    def __call__(self, z: int) -> AlgebraElement:
        total = self.algebra.zero()
        for k, b in enumerate(self.coeffs):
            c = binom(z, k)
            if c:
                total = total + b.scale(c)
        return total

    def values(self, count):
        return [self(z) for z in range(count)]

    def __add__(self, other):
        if not isinstance(other, MahlerSeries):
            other = MahlerSeries(self.algebra, [self.algebra.scalar(other)])
        n = max(len(self.coeffs), len(other.coeffs))
        return MahlerSeries(self.algebra, [self.coefficient(k) + other.coefficient(k) for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return MahlerSeries(self.algebra, [-b for b in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, MahlerSeries):
            return mahler_mul(self, other)
        if isinstance(other, AlgebraElement):
            return MahlerSeries(self.algebra, [b * other for b in self.coeffs])
        return MahlerSeries(self.algebra, [b.scale(other) for b in self.coeffs])

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, MahlerSeries) and self.coeffs == other.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"MahlerSeries({[list(b.coords) for b in self.coeffs]})"

    def coordinate(self, i):
        """Integer Mahler coefficients of basis coordinate ``i``."""
        return [b.coords[i] for b in self.coeffs]


def mahler_from_values(values) -> MahlerSeries:
    """Forward differences at 0: ``b_k = Delta^k v (0)``."""
    values = list(values)
    if not values:
        raise ValueError("need at least one value")
    algebra = values[0].algebra
    coeffs = []
    row = values
    while row:
        coeffs.append(row[0])
        row = [row[i + 1] - row[i] for i in range(len(row) - 1)]
    return MahlerSeries(algebra, coeffs)


def shift(f: MahlerSeries) -> MahlerSeries:
    """``f(z + 1)``; by Pascal the new ``k``-th coefficient is ``b_k + b_{k+1}``."""
    n = len(f.coeffs)
    return MahlerSeries(f.algebra, [f.coeffs[k] + f.coefficient(k + 1) for k in range(n)])


DEFAULT_DEGREE_CAP = 512


def mahler_mul(f: MahlerSeries, g: MahlerSeries, degree_cap=DEFAULT_DEGREE_CAP) -> MahlerSeries:
    """Product by evaluation at ``0..deg f + deg g`` and interpolation."""
    if not f.coeffs or not g.coeffs:
        return MahlerSeries(f.algebra, [])
    D = f.degree + g.degree
    if D > degree_cap:
        raise DegreeOverflow(f"Mahler product degree {D} exceeds cap {degree_cap}")
    return mahler_from_values([a * b for a, b in zip(f.values(D + 1), g.values(D + 1))])


def solve_difference(Q):
    """Series ``h`` with ``h(0) = 0`` and ``h(z + 1) = h(z) - Q(z)``.

    With ``Q = sum c_k C(z, k)`` the answer is ``-sum c_k C(z, k + 1)``.
    Accepts one series or a list of them.
    """
    if isinstance(Q, MahlerSeries):
        return MahlerSeries(Q.algebra, [Q.algebra.zero()] + [-c for c in Q.coeffs])
    return [solve_difference(q) for q in Q]


# ---------------------------------------------------------------------------
# the arc builder
# ---------------------------------------------------------------------------


@dataclass
class LevelRecord:
    level: int
    defect_degree: int
    correction_degree: int


@dataclass
class Arc:
    series: list
    base_point: tuple
    rho: object
    power: int
    p: int
    K: int
    ledger: list = field(default_factory=list)
    certifying: bool = True
    validated: bool = False

    @property
    def algebra(self):
        return self.base_point[0].algebra

    def __call__(self, n):
        return arc_eval(self, n)

    def min_floor_margin(self):
        """Smallest ``v(b_k) - ceil((k+1)/2)`` over stored coefficients ``k >= 1``."""
        margin = None
        for f in self.series:
            for k in range(1, len(f.coeffs)):
                m = f.valuation_floor(k) - arc_floor(k)
                margin = m if margin is None else min(margin, m)
        return margin

    def satisfies_floor(self):
        return all(
            f.valuation_floor(k) >= min(arc_floor(k), self.K)
            for f in self.series
            for k in range(1, len(f.coeffs))
        )


def arc_eval(arc: Arc, n: int):
    return tuple(f(n) for f in arc.series)


def _step(rho, point, power, one):
    for _ in range(power):
        point = dyn_eval(rho, point, one=one)
    return point


def check_prime(p, experimental=False):
    if p == 2:
        raise SmallPrime("arcs are not available for p = 2")
    if p == 3 and not experimental:
        raise SmallPrime("p = 3 needs the experimental flag (results are non-certifying)")
    if p < 2:
        raise SmallPrime(f"{p} is not a prime")


def build_arc(rho, S: QuotientAlgebra, s0, p, K, power=1, experimental=False) -> Arc:
    """Arc through ``s0`` for ``H = f_rho`` applied ``power`` times.

    ``S`` must be reduced mod ``p^K``.  Preconditions (checked): ``H(s0) = s0``
    and ``J(H; s0) = I`` modulo ``p``.
    """
    check_prime(p, experimental)
    if S.p != p or S.K != K:
        raise PreconditionFailed("algebra must be reduced modulo p^K for the requested p and K")
    one = S.one()
    s0 = tuple(s0)
    d = len(s0)
    image = _step(rho, s0, power, one)
    if any(c % p for a, b in zip(image, s0) for c in (a - b).coords):
        raise PreconditionFailed("H(s0) is not congruent to s0 mod p (condition i)")
    M = jacobian_along_cycle(rho, S, s0, power)
    for i in range(d):
        for j in range(d):
            entry = M[i, j] - (1 if i == j else 0)
            if any(c % p for c in entry.coords):
                raise PreconditionFailed("J(H; s0) is not the identity mod p (condition ii)")

    nvals = max(2 * K - 1, 1)
    g = [MahlerSeries.constant(x) for x in s0]
    ledger = []
    for j in range(1, K):
        values = [tuple(f(z) for f in g) for z in range(nvals + 1)]
        mapped = [_step(rho, v, power, one) for v in values[:nvals]]
        corrections = []
        defect_degree = -1
        for i in range(d):
            defect = mahler_from_values([values[z + 1][i] - mapped[z][i] for z in range(nvals)])
            q_coeffs = []
            for b in defect.coeffs:
                try:
                    q = b.divide_by_p_power(j)
                except InternalDefect:
                    raise InternalDefect(f"level {j}: defect of coordinate {i} is not divisible by {p}^{j}")
                q_coeffs.append(AlgebraElement(S, tuple(c % p for c in q)))
            Q = MahlerSeries(S, q_coeffs)
            defect_degree = max(defect_degree, Q.degree)
            if Q.degree > 2 * j - 2:
                raise InternalDefect(f"level {j}: defect degree {Q.degree} exceeds {2 * j - 2}")
            corrections.append(solve_difference(Q))
        scale = p**j
        g = [f + h * scale for f, h in zip(g, corrections)]
        ledger.append(LevelRecord(j, defect_degree, max(h.degree for h in corrections)))

    arc = Arc(g, s0, rho, power, p, K, ledger, certifying=p >= 5)
    validate_arc(arc)
    arc.validated = True
    return arc


def validate_arc(arc: Arc, upto=None):
    """Functional equation at ``z = 0..min(2K, 20)`` and the valuation floor."""
    one = arc.algebra.one()
    upto = min(2 * arc.K, 20) if upto is None else upto
    if arc_eval(arc, 0) != tuple(arc.base_point):
        raise InternalDefect("arc does not start at its base point")
    for z in range(upto + 1):
        lhs = arc_eval(arc, z + 1)
        rhs = _step(arc.rho, arc_eval(arc, z), arc.power, one)
        if lhs != rhs:
            raise InternalDefect(f"functional equation fails at z = {z}")
    for f in arc.series:
        for k in range(1, len(f.coeffs)):
            if f.valuation_floor(k) < min(arc_floor(k), arc.K):
                raise InternalDefect(f"coefficient {k} has valuation below ceil((k+1)/2)")
    return True


def compose_series(poly, arc: Arc) -> MahlerSeries:
    """``D(f_1(z), ..., f_d(z))`` as a Mahler series, through :func:`mahler_mul`."""
    from .polynomial import evaluate

    S = arc.algebra
    one = MahlerSeries.constant(S.one())
    return evaluate(poly, arc.series, one=one)
