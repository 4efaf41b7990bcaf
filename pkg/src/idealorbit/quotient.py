"""Finite-dimensional quotient algebras ``S = K[x]/I`` and their reductions.

``S`` is presented by the standard monomials of a Groebner basis of ``I``
together with structure constants.  ``reduce_mod_pk`` turns an algebra over
the rationals into one over ``Z/p^K Z`` with the same basis, which is sound
when every structure constant is p-integral: the p-integral span of the
standard monomials is then closed under multiplication.

The cycle length and Jacobian exponent are computed along the orbit of the
canonical point only.  Periodicity of ``f_sigma`` on all of ``(S/pS)^d`` is
never required: the arcs are built through the points of this one cycle.
"""
from __future__ import annotations

from math import gcd

from .domains import QQ, rational_to_mod, vp
from .dynamics import Matrix, dyn_eval, jacobian
from .errors import BadPrime, InternalDefect, NotZeroDimensional, SingularJacobian
from .groebner import Ideal, groebner_basis, normal_form
from .polynomial import Polynomial, evaluate


class QuotientAlgebra:
    def __init__(self, ring, basis, table, domain, modulus=None, p=None, K=None, ideal=None, gb=None):
        self.ring = ring
        self.basis = tuple(basis)
        self.table = table
        self.domain = domain
        self.modulus = modulus
        self.p = p
        self.K = K
        self.ideal = ideal
        self.gb = gb
        self.dim = len(self.basis)
        self._index = {m: i for i, m in enumerate(self.basis)}

    def __repr__(self):
        where = self.domain.spec() if self.modulus is None else f"Z/{self.p}^{self.K}"
        return f"QuotientAlgebra(dim={self.dim}, over {where})"

    @property
    def is_reduced(self):
        return self.modulus is not None

    def _norm(self, c):
        if self.modulus is None:
            return self.domain.convert(c)
        return rational_to_mod(c, self.modulus, self.p)

    def zero(self):
        z = 0 if self.is_reduced else self.domain.zero()
        return AlgebraElement(self, (z,) * self.dim)

    def one(self):
        return self.scalar(1)

    def scalar(self, c):
        z = self.zero().coords
        if self.dim == 0:
            return AlgebraElement(self, z)
        return AlgebraElement(self, (self._norm(c),) + z[1:])

    def basis_element(self, i):
        coords = list(self.zero().coords)
        coords[i] = self._norm(1)
        return AlgebraElement(self, tuple(coords))

    def element(self, p: Polynomial):
        """Class of a polynomial (reduced modulo ``I`` first)."""
        nf = normal_form(p.with_ring(self.gb.ring), self.gb)
        coords = list(self.zero().coords)
        for e, c in nf.terms.items():
            coords[self._index[e]] = self._norm(c)
        return AlgebraElement(self, tuple(coords))

    def generators(self):
        """The canonical point ``(x_1 + I, ..., x_d + I)``."""
        return tuple(self.element(x) for x in self.ring.gens())

    def to_poly(self, a: "AlgebraElement"):
        out = {}
        for i, c in enumerate(a.coords):
            if c:
                out[self.basis[i]] = c
        return Polynomial(self.ring, out) if not self.is_reduced else out


class AlgebraElement:
    __slots__ = ("algebra", "coords")

    def __init__(self, algebra: QuotientAlgebra, coords):
        self.algebra = algebra
        self.coords = coords

    def _lift(self, other):
        if isinstance(other, AlgebraElement):
            return other
        return self.algebra.scalar(other)

    def __add__(self, other):
        o = self._lift(other)
        m = self.algebra.modulus
        if m is None:
            return AlgebraElement(self.algebra, tuple(a + b for a, b in zip(self.coords, o.coords)))
        return AlgebraElement(self.algebra, tuple((a + b) % m for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        m = self.algebra.modulus
        if m is None:
            return AlgebraElement(self.algebra, tuple(-a for a in self.coords))
        return AlgebraElement(self.algebra, tuple(-a % m for a in self.coords))

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c):
        alg = self.algebra
        c = alg._norm(c)
        if alg.modulus is None:
            return AlgebraElement(alg, tuple(a * c for a in self.coords))
        m = alg.modulus
        return AlgebraElement(alg, tuple(a * c % m for a in self.coords))

    def __mul__(self, other):
        if not isinstance(other, AlgebraElement):
            return self.scale(other)
        alg = self.algebra
        out = list(alg.zero().coords)
        table = alg.table
        A, B = self.coords, other.coords
        for i, a in enumerate(A):
            if not a:
                continue
            row = table[i]
            for j, b in enumerate(B):
                if not b:
                    continue
                ab = a * b
                for k, c in row[j]:
                    out[k] += ab * c
        m = alg.modulus
        if m is not None:
            out = [x % m for x in out]
        return AlgebraElement(alg, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n):
        result = self.algebra.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return self.coords == other.coords
        try:
            return self.coords == self.algebra.scalar(other).coords
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(self.coords)

    def __bool__(self):
        return any(self.coords)

    def __repr__(self):
        return f"AlgebraElement({list(self.coords)})"

    def valuation(self):
        """Minimum p-adic valuation over coordinates (``K`` for zero)."""
        alg = self.algebra
        vals = [vp(c, alg.p) for c in self.coords if c]
        return min(vals) if vals else alg.K

    def divide_by_p_power(self, j):
        """Exact division by ``p^j``; the quotient is only known mod ``p^(K-j)``."""
        alg = self.algebra
        q = alg.p**j
        if any(c % q for c in self.coords):
            raise InternalDefect(f"element is not divisible by {alg.p}^{j}")
        return tuple(c // q for c in self.coords)

    def mod(self, modulus):
        return tuple(c % modulus for c in self.coords)


def build_quotient(I: Ideal, order=None) -> QuotientAlgebra:
    """Standard-monomial presentation of ``K[x]/I`` (``I`` zero-dimensional)."""
    gb = groebner_basis(I, order)
    if not gb.is_zero_dimensional():
        raise NotZeroDimensional("the ideal has infinitely many standard monomials")
    basis = gb.standard_monomials()
    index = {m: i for i, m in enumerate(basis)}
    ring = gb.ring
    table = []
    for a in basis:
        row = []
        for b in basis:
            prod = Polynomial(ring, {tuple(x + y for x, y in zip(a, b)): ring.domain.one()})
            nf = normal_form(prod, gb)
            row.append(tuple(sorted((index[e], c) for e, c in nf.terms.items())))
        table.append(row)
    return QuotientAlgebra(ring, basis, table, ring.domain, ideal=I, gb=gb)


def reduce_mod_pk(S: QuotientAlgebra, p: int, K: int) -> QuotientAlgebra:
    """Same basis, constants reduced mod ``p^K``; ``BadPrime`` on a p-adic denominator."""
    if S.domain != QQ:
        raise BadPrime("reduction mod p^K needs an algebra over the rationals")
    modulus = p**K
    for g in S.gb.basis:
        for c in g.terms.values():
            if c.denominator % p == 0:
                raise BadPrime(f"{p} divides a denominator of the Groebner basis ({c})")
    table = []
    for row in S.table:
        new_row = []
        for entry in row:
            new_row.append(tuple((k, rational_to_mod(c, modulus, p)) for k, c in entry if rational_to_mod(c, modulus, p)))
        table.append(new_row)
    return QuotientAlgebra(S.ring, S.basis, table, S.domain, modulus=modulus, p=p, K=K, ideal=S.ideal, gb=S.gb)


def canonical_point(S: QuotientAlgebra):
    return S.generators()


def cycle_length(sigma, S: QuotientAlgebra, s, limit=1_000_000) -> int:
    """Least ``a >= 1`` with ``f_sigma^a(s) = s`` in ``S`` (reduced mod p)."""
    one = S.one()
    start = tuple(s)
    current = start
    for a in range(1, limit + 1):
        current = dyn_eval(sigma, current, one=one)
        if current == start:
            return a
    raise InternalDefect(f"orbit did not close within {limit} steps")


def cycle_points(sigma, S, s, a):
    one = S.one()
    pts = [tuple(s)]
    for _ in range(a - 1):
        pts.append(dyn_eval(sigma, pts[-1], one=one))
    return pts


def _fp_rank(rows, p):
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] % p), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] % p:
                f = rows[r][col]
                rows[r] = [(x - f * y) % p for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def is_invertible_mod_p(M: Matrix, S: QuotientAlgebra) -> bool:
    """Whether ``v -> M v`` is bijective on ``(S/pS)^d``, by F_p-rank."""
    d = M.size
    r = S.dim
    p = S.p
    cols = []
    for j in range(d):
        for b in range(r):
            e = S.basis_element(b)
            image = []
            for i in range(d):
                image.extend(c % p for c in (M[i, j] * e).coords)
            cols.append(image)
    return _fp_rank(cols, p) == r * d


def matrix_order(M: Matrix, limit=1_000_000) -> int:
    """Multiplicative order of an invertible matrix (entries already mod p)."""
    power = M
    for k in range(1, limit + 1):
        if power.is_identity():
            return k
        power = power @ M
    raise InternalDefect(f"Jacobian order exceeds {limit}")


def jacobian_along_cycle(sigma, S, s, a) -> Matrix:
    """``J(sigma^a; s)`` as the product of one-step Jacobians along the orbit."""
    one = S.one()
    sym = jacobian(sigma)
    current = tuple(s)
    total = None
    for _ in range(a):
        M = sym.map(lambda f: evaluate(f, current, one=one))
        total = M if total is None else M @ total
        current = dyn_eval(sigma, current, one=one)
    return total


def identity_jacobian_exponent(sigma, S: QuotientAlgebra, points, a) -> int:
    """Least common multiple of the orders of ``J(sigma^a; s_k)`` mod p.

    Afterwards ``J(sigma^(a*m); s_k)`` is the identity mod p at every cycle
    point, which is all the arc construction needs.
    """
    m = 1
    for s in points:
        M = jacobian_along_cycle(sigma, S, s, a)
        if not is_invertible_mod_p(M, S):
            raise SingularJacobian("Jacobian is singular mod p; the map is not an automorphism there")
        order = matrix_order(M)
        m = m * order // gcd(m, order)
    return m
