"""Polynomial endomorphisms and automorphisms of a polynomial ring.

A map ``tau`` is stored as its images ``F_i = tau(x_i)``.  Composition is
composition of ring homomorphisms::

    compose(t2, t1)(x_i) = t1.images[i] with x_j replaced by t2.images[j]

so ``compose(t2, t1)(P) = t2(t1(P))``.  On points this reverses the order:
``dyn_eval(compose(t2, t1), s) == dyn_eval(t1, dyn_eval(t2, s))``, and the
chain rule reads ``J(t2∘t1; x) = J(t1; t2(x)) · J(t2; x)``.  For powers of a
single map the two orders coincide.

Inverses are supplied by the caller and verified, never computed.  When a
``modulo`` ideal ``Q`` is attached the map is treated as a map of ``R/Q``:
the inverse only has to hold modulo ``Q``, ``Q`` must be invariant in both
directions, and images of iterates are kept in normal form modulo ``Q``.
"""
from __future__ import annotations

import threading

from .errors import (
    ArityMismatch,
    NoInverse,
    NotAnAutomorphism,
    PreconditionFailed,
    RingMismatch,
    ValidationError,
)
from .groebner import Ideal, groebner_basis, normal_form
from .polynomial import PolyRing, Polynomial, evaluate, substitute


def _as_poly(ring, p, field):
    if isinstance(p, Polynomial):
        return p.with_ring(ring)
    if isinstance(p, str):
        from .parser import parse_poly

        return parse_poly(p, ring, field=field)
    return ring.const(p)


class PolyMap:
    """Ring map ``x_i -> images[i]`` with an optional verified inverse."""

    def __init__(self, ring: PolyRing, images, inverse_images=None, modulo=None, verify=True, degree_cap=None):
        images = [_as_poly(ring, f, "sigma") for f in images]
        if len(images) != ring.nvars:
            raise ArityMismatch(f"{len(images)} images for {ring.nvars} variables", field="sigma")
        self.ring = ring
        self.images = tuple(images)
        self.modulo = modulo if modulo is None or not modulo.is_zero() else None
        self.degree_cap = degree_cap
        self._inverse = None
        self._powers = {1: self}
        self._lock = threading.Lock()
        if inverse_images is not None:
            inverse_images = [_as_poly(ring, g, "sigma_inv") for g in inverse_images]
            if len(inverse_images) != ring.nvars:
                raise ArityMismatch(
                    f"{len(inverse_images)} inverse images for {ring.nvars} variables", field="sigma_inv"
                )
            inv = PolyMap.__new__(PolyMap)
            inv.ring = ring
            inv.images = tuple(inverse_images)
            inv.modulo = self.modulo
            inv.degree_cap = degree_cap
            inv._inverse = self
            inv._powers = {1: inv}
            inv._lock = threading.Lock()
            self._inverse = inv
            if verify:
                witness = automorphism_witness(self)
                if witness is not None:
                    raise NotAnAutomorphism(
                        f"{witness[0]} does not fix {witness[1]}", witness=witness[1]
                    )
        if verify and self.modulo is not None:
            check_invariant(self, self.modulo)

    @property
    def nvars(self):
        return self.ring.nvars

    @property
    def inverse_images(self):
        return None if self._inverse is None else self._inverse.images

    def has_inverse(self):
        return self._inverse is not None

    def inverse(self) -> "PolyMap":
        if self._inverse is None:
            raise NoInverse("this map has no verified inverse")
        return self._inverse

    def __call__(self, p):
        """Apply the ring map to a polynomial: ``P(F_1, ..., F_d)``."""
        p = _as_poly(self.ring, p, None)
        return self._reduce(substitute(p, self.images, degree_cap=self.degree_cap))

    def apply_ideal(self, ideal: Ideal) -> Ideal:
        return Ideal(self.ring, [self(g) for g in ideal.generators])

    def _reduce(self, p):
        if self.modulo is None:
            return p
        return normal_form(p, groebner_basis(self.modulo))

    def __eq__(self, other):
        return isinstance(other, PolyMap) and self.ring == other.ring and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        body = ", ".join(f"{v} -> {f}" for v, f in zip(self.ring.variables, self.images))
        return f"PolyMap({body})"

    def total_degree(self):
        return max((f.total_degree() for f in self.images), default=0)


def identity(ring: PolyRing, modulo=None) -> PolyMap:
    gens = ring.gens()
    return PolyMap(ring, gens, gens, modulo=modulo, verify=False)


def _compose_images(outer_images, inner_images, degree_cap=None):
    return [substitute(f, outer_images, degree_cap=degree_cap) for f in inner_images]


def compose(t2: PolyMap, t1: PolyMap) -> PolyMap:
    """The ring map ``t2∘t1``: first ``t1``, then ``t2`` on the result."""
    if t1.ring.variables != t2.ring.variables or t1.ring.domain != t2.ring.domain:
        raise RingMismatch("composition needs maps of one ring")
    modulo = t2.modulo if t2.modulo is not None else t1.modulo
    cap = t2.degree_cap if t2.degree_cap is not None else t1.degree_cap
    images = _compose_images(t2.images, t1.images, cap)
    inverse = None
    if t1.has_inverse() and t2.has_inverse():
        inverse = _compose_images(t1.inverse_images, t2.inverse_images, cap)
    if modulo is not None:
        gb = groebner_basis(modulo)
        images = [normal_form(f, gb) for f in images]
        if inverse is not None:
            inverse = [normal_form(g, gb) for g in inverse]
    return PolyMap(t2.ring, images, inverse, modulo=modulo, verify=False, degree_cap=cap)


def iterate(sigma: PolyMap, n: int) -> PolyMap:
    """``sigma^n`` by repeated squaring over a cache of ``sigma^(2^k)``."""
    if n == 0:
        return identity(sigma.ring, sigma.modulo)
    if n < 0:
        if not sigma.has_inverse():
            raise NoInverse(f"sigma^{n} needs a verified inverse")
        return iterate(sigma.inverse(), -n)
    result = None
    bit = 1
    while bit <= n:
        if n & bit:
            piece = _power_of_two(sigma, bit)
            result = piece if result is None else compose(result, piece)
        bit <<= 1
    return result


def _power_of_two(sigma, k):
    cached = sigma._powers.get(k)
    if cached is not None:
        return cached
    half = _power_of_two(sigma, k // 2)
    value = compose(half, half)
    with sigma._lock:
        sigma._powers.setdefault(k, value)
    return sigma._powers[k]


def automorphism_witness(sigma: PolyMap):
    """First failure of ``sigma∘sigma_inv = id`` or ``sigma_inv∘sigma = id``.

    Returns ``None`` when both compositions are the identity (modulo the
    attached ideal, if any), otherwise ``(composition, variable)``.
    """
    if not sigma.has_inverse():
        raise NoInverse("no inverse images to verify")
    ring = sigma.ring
    gb = groebner_basis(sigma.modulo) if sigma.modulo is not None else None
    F, G = sigma.images, sigma.inverse_images
    for label, outer, inner in (("sigma_inv∘sigma", G, F), ("sigma∘sigma_inv", F, G)):
        for i, h in enumerate(_compose_images(outer, inner)):
            diff = h - ring.var(i)
            if gb is not None:
                diff = normal_form(diff, gb)
            if diff:
                return (label, ring.variables[i])
    return None


def verify_automorphism(sigma: PolyMap) -> bool:
    return automorphism_witness(sigma) is None


def check_invariant(sigma: PolyMap, Q: Ideal):
    """Raise unless ``sigma(Q) ⊆ Q`` and, if invertible, ``sigma^{-1}(Q) ⊆ Q``."""
    gb = groebner_basis(Q)
    maps = [sigma.images]
    if sigma.has_inverse():
        maps.append(sigma.inverse_images)
    for images in maps:
        for g in Q.generators:
            if normal_form(substitute(g, images), gb):
                raise PreconditionFailed(
                    f"defining ideal is not invariant: image of {g} leaves it", field="defining_ideal"
                )


# ---------------------------------------------------------------------------
# Jacobians and the dynamical evaluation map
# ---------------------------------------------------------------------------


class Matrix:
    """Small dense matrix over any ring-like element type."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows = tuple(tuple(r) for r in rows)

    @property
    def size(self):
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other):
        n, m = len(self.rows), len(other.rows[0]) if other.rows else 0
        inner = len(other.rows)
        out = []
        for i in range(n):
            row = []
            for j in range(m):
                acc = self.rows[i][0] * other.rows[0][j]
                for k in range(1, inner):
                    acc = acc + self.rows[i][k] * other.rows[k][j]
                row.append(acc)
            out.append(row)
        return Matrix(out)

    def map(self, fn):
        return Matrix([[fn(x) for x in r] for r in self.rows])

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return "Matrix(" + "; ".join(", ".join(str(x) for x in r) for r in self.rows) + ")"

    def is_identity(self):
        for i, r in enumerate(self.rows):
            for j, x in enumerate(r):
                if x != (1 if i == j else 0):
                    return False
        return True

    def substitute(self, images):
        return self.map(lambda f: substitute(f, images))


def jacobian(tau: PolyMap) -> Matrix:
    """Symbolic Jacobian: entry ``(i, j)`` is ``dF_i/dx_j``."""
    d = tau.nvars
    return Matrix([[tau.images[i].diff(j) for j in range(d)] for i in range(d)])


def jacobian_at(tau: PolyMap, point, one=None) -> Matrix:
    return jacobian(tau).map(lambda f: evaluate(f, point, one=one))


def dyn_eval(tau: PolyMap, point, one=None):
    """``f_tau(s) = (F_1(s), ..., F_d(s))`` over any target supporting ``+``, ``*``."""
    point = tuple(point)
    if len(point) != tau.nvars:
        raise ArityMismatch(f"point has {len(point)} entries for {tau.nvars} variables")
    return tuple(evaluate(f, point, one=one) for f in tau.images)


def dyn_orbit(tau: PolyMap, point, steps, one=None):
    """``[s, f(s), f(f(s)), ...]`` with ``steps + 1`` entries."""
    out = [tuple(point)]
    for _ in range(steps):
        out.append(dyn_eval(tau, out[-1], one=one))
    return out


def orbit_jacobian(tau: PolyMap, point, steps, one=None) -> Matrix:
    """``J(tau^steps; s)`` as the product of Jacobians along the orbit of ``s``."""
    d = tau.nvars
    sym = jacobian(tau)
    current = tuple(point)
    total = None
    for _ in range(steps):
        M = sym.map(lambda f: evaluate(f, current, one=one))
        total = M if total is None else M @ total
        current = dyn_eval(tau, current, one=one)
    if total is None:
        if one is None:
            one = tau.ring.domain.one()
        zero = one * 0
        total = Matrix([[one if i == j else zero for j in range(d)] for i in range(d)])
    return total


# ---------------------------------------------------------------------------
# elementary automorphisms with their inverses
# ---------------------------------------------------------------------------


def translation(ring: PolyRing, var, shift) -> PolyMap:
    """``x_var -> x_var + shift`` where ``shift`` does not involve ``x_var``."""
    i = ring.index(var) if isinstance(var, str) else var
    shift = _as_poly(ring, shift, None)
    if i in shift.variables_used():
        raise ValidationError("a triangular shift may not involve its own variable")
    images = ring.gens()
    inverse = ring.gens()
    images[i] = images[i] + shift
    inverse[i] = inverse[i] - shift
    return PolyMap(ring, images, inverse, verify=False)


def scaling(ring: PolyRing, var, unit) -> PolyMap:
    i = ring.index(var) if isinstance(var, str) else var
    c = ring.domain.convert(unit)
    images = ring.gens()
    inverse = ring.gens()
    images[i] = images[i].scale(c)
    inverse[i] = inverse[i].scale(ring.domain.inv(c))
    return PolyMap(ring, images, inverse, verify=False)


def permutation(ring: PolyRing, perm) -> PolyMap:
    """``x_i -> x_{perm[i]}``."""
    gens = ring.gens()
    images = [gens[perm[i]] for i in range(ring.nvars)]
    inverse = [None] * ring.nvars
    for i, j in enumerate(perm):
        inverse[j] = gens[i]
    return PolyMap(ring, images, inverse, verify=False)


def linear_automorphism(ring: PolyRing, matrix, offset=None) -> PolyMap:
    """``x -> A x + b`` over a field; the inverse comes from Gauss-Jordan."""
    dom = ring.domain
    d = ring.nvars
    A = [[dom.convert(c) for c in row] for row in matrix]
    b = [dom.convert(c) for c in (offset or [0] * d)]
    inv = _invert(A, dom)
    gens = ring.gens()

    def affine(M, shift):
        out = []
        for i in range(d):
            f = ring.const(shift[i])
            for j in range(d):
                if M[i][j]:
                    f = f + gens[j].scale(M[i][j])
            out.append(f)
        return out

    b_inv = [-sum((inv[i][j] * b[j] for j in range(d)), dom.zero()) for i in range(d)]
    return PolyMap(ring, affine(A, b), affine(inv, b_inv), verify=False)


def _invert(A, dom):
    d = len(A)
    M = [list(row) + [dom.one() if i == j else dom.zero() for j in range(d)] for i, row in enumerate(A)]
    for col in range(d):
        pivot = next((r for r in range(col, d) if M[r][col]), None)
        if pivot is None:
            raise ValidationError("linear part is singular")
        M[col], M[pivot] = M[pivot], M[col]
        inv = dom.inv(M[col][col])
        M[col] = [x * inv for x in M[col]]
        for r in range(d):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [row[d:] for row in M]
